import itertools
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from clifop.clifford import Multivector, Signature, involution
from clifop.fock import (
    cauchy_riemann_residual,
    ck_extension,
    fischer_decompose,
    fischer_inner,
    fischer_pair,
    fischer_pair_integral,
    fischer_reconstruct,
    fischer_scalar,
    fischer_tower,
    gaussian_intertwining_residual,
    gaussian_moment,
    hermite_report,
    hermite_sequence,
    lowering_factor,
    moment_by_recurrence,
    weyl_norm_sq,
    weyl_states,
)
from clifop.opcalc import DELTA, D, X, X_, apply, d_, hamiltonian, ladder_pair
from clifop.polyfun import CliffordPolynomial, WeightedFunction, monomials_upto
from conftest import random_poly

seeds = st.integers(0, 2**32)
sig2 = Signature.euclidean(2)
x1 = CliffordPolynomial.variable(2, 1)


def blade(sig, idx):
    return Multivector.blade(sig, idx)


@given(st.lists(st.integers(0, 10), min_size=1, max_size=4))
def test_moments_closed_form_matches_recurrence(alpha):
    assert gaussian_moment(alpha) == moment_by_recurrence(alpha)


def test_moment_values():
    assert gaussian_moment((0, 0)) == 1
    assert gaussian_moment((2,)) == mpq(1, 2)
    assert gaussian_moment((4, 2)) == mpq(3, 4) * mpq(1, 2)
    assert gaussian_moment((1, 2)) == 0


def test_fischer_inner_basic():
    assert fischer_scalar(x1, x1) == mpq(1, 2)
    with pytest.raises(ValueError):
        fischer_inner(WeightedFunction(mpq(-1, 2), x1), WeightedFunction(0, x1))


@settings(max_examples=40)
@given(seeds)
def test_pairing_is_conjugate_symmetric(seed):
    rng = random.Random(seed)
    f, g = random_poly(rng, 2, 3), random_poly(rng, 2, 3)
    assert fischer_inner(g, f) == involution(fischer_inner(f, g), "conjugation")


# ---------------------------------------------------------------- Hermite


def seeds_for(n):
    return [CliffordPolynomial.constant(n), fischer_tower(CliffordPolynomial.variable(n, 1))[0]]


@pytest.mark.parametrize("n", [2, 3])
def test_hermite_rodrigues_form(n):
    for seed in seeds_for(n):
        cur = seed
        for st_ in hermite_sequence(seed, 4):
            assert st_.raw.envelope == mpq(-1, 2)
            assert st_.raw.poly == cur
            cur = apply(2 * X - D, cur)


@pytest.mark.parametrize("n", [2, 3])
def test_hermite_lowering_factor_exact(n):
    down = ladder_pair().lower
    for seed in seeds_for(n):
        m = seed.degree()
        states = hermite_sequence(seed, 5)
        for k in range(1, 6):
            got = apply(down, states[k].raw)
            assert got == states[k - 1].raw.scale(-lowering_factor(k, n, m))
        assert apply(down, states[0].raw).poly.is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_hermite_norm_ratio_equals_lowering_factor(n):
    for seed in seeds_for(n):
        for row in hermite_report(seed, 5)["rows"]:
            assert row["ratio"] == row["lowering_factor"]


def test_first_norm_ratio_by_hand():
    # raw_1 = exp(-|x|^2/2) 2x, so norm_sq = 4 * sum_j <x_j^2> = 2n and norm_sq(raw_0) = 1
    states = hermite_sequence(CliffordPolynomial.constant(2), 1)
    assert states[0].norm_sq == 1
    assert states[1].norm_sq == 4


@pytest.mark.parametrize("n", [2, 3])
def test_hermite_eigenvalues(n):
    h0 = hamiltonian("H0", n)
    for seed in seeds_for(n):
        m = seed.degree()
        for st_ in hermite_sequence(seed, 5):
            ev = st_.k + m + mpq(n, 2)
            assert apply(h0, st_.raw) == st_.raw.scale(ev)


@pytest.mark.parametrize("n", [2, 3])
def test_hermite_orthogonality(n):
    for seed in seeds_for(n):
        states = hermite_sequence(seed, 5)
        for a, b in itertools.combinations(states, 2):
            assert fischer_scalar(a.raw, b.raw) == 0


@settings(max_examples=15)
@given(seeds)
def test_gaussian_intertwines_h0_and_j0(seed):
    p = random_poly(random.Random(seed), 2, 3)
    assert gaussian_intertwining_residual(p).poly.is_zero()


def test_hermite_seed_must_be_monogenic():
    with pytest.raises(ValueError):
        hermite_sequence(x1, 2)


# ---------------------------------------------------------------- Weyl-Heisenberg


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weyl_states_norms_and_orthogonality(n):
    states = weyl_states(n, 3)
    keys = list(states)
    for a in keys:
        assert fischer_scalar(states[a], states[a]) == weyl_norm_sq(a)
    for a, b in itertools.combinations(keys, 2):
        assert fischer_inner(states[a], states[b]).is_zero()


def test_weyl_lowering_factor():
    states = weyl_states(2, 3)
    for alpha, f in states.items():
        for j in range(2):
            down = apply(X_(j + 1) + d_(j + 1), f)
            if alpha[j] == 0:
                assert down.poly.is_zero()
            else:
                lower = tuple(a - (i == j) for i, a in enumerate(alpha))
                assert down == states[lower].scale(2 * alpha[j])


# ---------------------------------------------------------------- Fischer


def test_pair_example_x1():
    m1, m0 = fischer_decompose(x1)
    assert m0 == CliffordPolynomial.constant(2).mul_multivector(Multivector.generator(sig2, 1).scale(mpq(-1, 2)))
    want = x1.scale(mpq(1, 2)) + CliffordPolynomial.variable(2, 2).mul_multivector(blade(sig2, [1, 2]).scale(mpq(-1, 2)))
    assert m1 == want


def test_pair_needs_harmonic_input():
    with pytest.raises(ValueError):
        fischer_decompose(x1 * x1)
    assert len(fischer_decompose(x1 * x1, full=True)) == 3


@pytest.mark.parametrize("n", [2, 3])
def test_tower_on_monomial_basis(n):
    for alpha in monomials_upto(n, 4):
        for mask in range(1 << n):
            p = CliffordPolynomial.monomial(alpha, 1, blade=mask)
            tower = fischer_tower(p)
            assert fischer_reconstruct(tower) == p
            assert all(apply(D, m).is_zero() for m in tower)
            assert fischer_pair(p) == fischer_pair_integral(p)


@settings(max_examples=25)
@given(seeds, st.integers(2, 3), st.integers(1, 4))
def test_harmonic_pair_matches_tower(seed, n, k):
    rng = random.Random(seed)
    # harmonic input: M_k + x M_{k-1} from random monogenic parts
    a = fischer_tower(random_poly(rng, n, k, homogeneous=True))[0]
    b = fischer_tower(random_poly(rng, n, k - 1, homogeneous=True))[0]
    p = a + apply(X, b)
    assert apply(DELTA, p).is_zero()
    assert fischer_pair(p) == (a, b)


# ---------------------------------------------------------------- Cauchy-Kowalevskaya


def test_ck_of_x1():
    F = ck_extension(x1)
    sig3 = Signature.euclidean(3)
    want = CliffordPolynomial.variable(3, 1) - CliffordPolynomial.variable(3, 3).mul_multivector(blade(sig3, [1, 3]))
    assert F == want


@settings(max_examples=25)
@given(seeds, st.integers(1, 3))
def test_ck_solves_cauchy_problem(seed, n):
    f = random_poly(random.Random(seed), n, 4)
    F = ck_extension(f)
    assert cauchy_riemann_residual(F).is_zero()
    assert F.set_zero(n + 1) == f.embed(n + 1)


def test_ck_requires_euclidean_signature():
    with pytest.raises(ValueError):
        ck_extension(CliffordPolynomial.variable(2, 1, Signature(2, 0)))
