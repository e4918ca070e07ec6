import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from clifop.clifford import Multivector, Signature, blade_product
from clifop.dsl import check_identity_zero, parse
from clifop.opcalc import (
    DELTA,
    GAMMA,
    OSP_RELATIONS,
    D,
    E,
    Exp,
    I_s,
    Num,
    OperatorError,
    X,
    apply,
    d_,
    exp_truncated,
    hamiltonian,
    integral_operator_Is,
    ladder_pair,
    osp_relation_exprs,
    weyl_heisenberg_ladder,
    X_,
)
from clifop.polyfun import CliffordPolynomial, WeightedFunction
from clifop.scalars import LAMBDA
from conftest import random_poly

seeds = st.integers(0, 2**32)
x1 = CliffordPolynomial.variable(2, 1)
sig2 = Signature.euclidean(2)
e1 = Multivector.generator(sig2, 1)


def numeric_dirac(f, pt, h=1e-5):
    """sum_j e_j d_j f at pt by central differences."""
    nm = f.signature.neg_mask
    out: dict = {}
    for j in range(len(pt)):
        up = list(pt)
        dn = list(pt)
        up[j] += h
        dn[j] -= h
        fu, fd = f.evaluate(up), f.evaluate(dn)
        for m in set(fu) | set(fd):
            deriv = (fu.get(m, 0.0) - fd.get(m, 0.0)) / (2 * h)
            s, mm = blade_product(1 << j, m, nm)
            out[mm] = out.get(mm, 0.0) + s * deriv
    return out


def test_gamma_on_x1():
    assert apply(GAMMA, x1) == CliffordPolynomial(2, terms={(0, 1): Multivector.blade(sig2, [1, 2])})


def test_anticommutator_x_d_on_x1():
    assert apply(parse("{X, D}"), x1) == x1.scale(-4)


def test_euler_on_square():
    assert apply(E, x1 * x1) == (x1 * x1).scale(2)


def test_ground_state_energy():
    phi = WeightedFunction.gaussian(CliffordPolynomial.constant(2))
    assert apply(hamiltonian("H0", 2), phi) == phi


def test_weyl_heisenberg_ladders_on_ground_state():
    phi = WeightedFunction.gaussian(CliffordPolynomial.constant(2))
    assert apply(weyl_heisenberg_ladder(1, "-"), phi).poly.is_zero()
    assert apply(weyl_heisenberg_ladder(1, "+"), phi) == WeightedFunction.gaussian(x1.scale(2))


def test_terminating_exponentials():
    f = x1.mul_multivector(e1, "right")
    got = apply(Exp(LAMBDA_HALF_D, None), f)
    assert got == f + CliffordPolynomial.constant(2).scale(LAMBDA * mpq(-1, 2))
    assert apply(Exp(Num(mpq(-1, 4)) * DELTA, None), x1 * x1) == x1 * x1 - CliffordPolynomial.constant(2, mpq(1, 2))


LAMBDA_HALF_D = parse("lambda/2*D")


def test_exp_needs_lowering_operator_without_order():
    with pytest.raises(OperatorError):
        apply(Exp(X, None), x1)


def test_exp_truncated_exact_flag():
    p = x1 * x1
    _, exact = exp_truncated(D, 5, p)
    assert exact
    _, exact = exp_truncated(X, 3, p)
    assert not exact


def test_integral_operator_on_degree():
    p = x1 * x1 * x1
    assert integral_operator_Is(mpq(1, 2), p) == p.scale(mpq(2, 7))
    with pytest.raises(OperatorError):
        integral_operator_Is(0, p)
    assert apply(E + Num(mpq(1, 2)), apply(I_s(mpq(1, 2)), p)) == p


@settings(max_examples=30)
@given(seeds, st.integers(1, 3))
def test_dirac_squares_to_minus_laplacian(seed, n):
    p = random_poly(random.Random(seed), n, 4)
    assert apply(D * D, p) == apply(DELTA, p).scale(-1)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([mpq(-1, 2), mpq(-1, 4), mpq(0)]))
def test_dirac_on_weighted_matches_finite_differences(seed, g):
    rng = random.Random(seed)
    f = WeightedFunction(g, random_poly(rng, 2, 3))
    pt = [rng.uniform(-1, 1) for _ in range(2)]
    got = apply(D, f).evaluate(pt)
    want = numeric_dirac(f, pt)
    for m in set(got) | set(want):
        assert got.get(m, 0.0) == pytest.approx(want.get(m, 0.0), abs=1e-6)


@settings(max_examples=20)
@given(seeds)
def test_lambda_truncation_commutes_with_application(seed):
    p = random_poly(random.Random(seed), 2, 3)
    op = parse("exp(lambda/2*(D - X); 4)")
    full = apply(op, p)
    assert apply(op, p, lam_order=2) == full.truncate_lambda(2)


def test_coordinate_ladders_commute_across_axes():
    assert check_identity_zero(X_(1) * d_(2) - d_(2) * X_(1), 2, 4).is_zero
    assert check_identity_zero(d_(1) * X_(1) - X_(1) * d_(1) - Num(1), 2, 4).is_zero


def test_ladder_pair_normalization():
    pair = ladder_pair()
    assert pair.squared_norm_factor() == mpq(1, 2)


def test_listed_osp_relations_have_real_sign_plus_one():
    listed = [r for r in OSP_RELATIONS if r.listed]
    assert len(listed) == 9
    assert all(r.real_sign() == 1 for r in listed)
    assert [r.real_sign() for r in OSP_RELATIONS if not r.listed] == [-1, -1, -1]


@pytest.mark.parametrize("n", [2, 3])
def test_unshifted_osp_including_derived_anticommutators(n):
    for rel, expr in osp_relation_exprs(shifted=False, include_extra=True):
        assert check_identity_zero(expr, n, 4).is_zero, rel.label


def test_hamiltonian_needs_dimension():
    with pytest.raises(OperatorError):
        hamiltonian("H0")
