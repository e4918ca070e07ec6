import math
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from clifop.clifford import Signature, blade_product
from clifop.polyfun import (
    CliffordPolynomial,
    WeightedFunction,
    monomials,
    monomials_upto,
    pack,
    radial_power,
    unpack,
)
from clifop.scalars import LAMBDA
from conftest import random_poly

seeds = st.integers(0, 2**32)


def float_product(a: dict, b: dict, neg_mask: int) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            s, m = blade_product(ma, mb, neg_mask)
            out[m] = out.get(m, 0.0) + s * ca * cb
    return out


@given(st.lists(st.integers(0, 255), min_size=1, max_size=6), st.integers(0, 63))
def test_pack_round_trip(alpha, mask):
    assert unpack(pack(alpha, mask), len(alpha)) == (tuple(alpha), mask)


def test_pack_rejects_overflow():
    with pytest.raises(OverflowError):
        pack((256,))


@pytest.mark.parametrize("n,d", [(1, 4), (2, 3), (3, 5), (4, 2)])
def test_monomial_count(n, d):
    assert len(monomials(n, d)) == math.comb(n + d - 1, d)
    assert len(monomials_upto(n, d)) == math.comb(n + d, d)


def test_monomials_grlex_descending():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_signature_must_cover_variables():
    with pytest.raises(ValueError):
        CliffordPolynomial(3, Signature(0, 2))


@settings(max_examples=40)
@given(seeds, st.integers(1, 3))
def test_product_associative(seed, n):
    rng = random.Random(seed)
    a, b, c = (random_poly(rng, n, 2) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40)
@given(seeds, st.integers(1, 3))
def test_leibniz_rule(seed, n):
    rng = random.Random(seed)
    a, b = random_poly(rng, n, 3), random_poly(rng, n, 3)
    for j in range(1, n + 1):
        assert (a * b).partial(j) == a.partial(j) * b + a * b.partial(j)


@settings(max_examples=40)
@given(seeds, st.integers(1, 3))
def test_heisenberg_relation(seed, n):
    p = random_poly(random.Random(seed), n, 3)
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            lhs = p.mul_x(k).partial(j) - p.partial(j).mul_x(k)
            assert lhs == (p if j == k else p.scale(0))
            assert p.partial(j).partial(k) == p.partial(k).partial(j)


@settings(max_examples=30)
@given(seeds, st.integers(1, 3))
def test_evaluation_is_multiplicative(seed, n):
    rng = random.Random(seed)
    a, b = random_poly(rng, n, 2), random_poly(rng, n, 2)
    pt = [rng.uniform(-1, 1) for _ in range(n)]
    want = float_product(a.evaluate(pt), b.evaluate(pt), a.signature.neg_mask)
    got = (a * b).evaluate(pt)
    for m in set(want) | set(got):
        assert got.get(m, 0.0) == pytest.approx(want.get(m, 0.0), abs=1e-9)


@given(seeds)
def test_homogeneous_parts_sum_back(seed):
    p = random_poly(random.Random(seed), 3, 4, terms=6)
    parts = p.homogeneous_parts()
    total = CliffordPolynomial(3)
    for d, q in parts:
        assert q.is_homogeneous() and (q.is_zero() or q.degree() == d)
        total = total + q
    assert total == p


def test_radial_power():
    r2 = radial_power(3, 1)
    want = sum((CliffordPolynomial.variable(3, j) * CliffordPolynomial.variable(3, j) for j in (1, 2, 3)),
               CliffordPolynomial(3))
    assert r2 == want
    assert radial_power(2, 2) == radial_power(2, 1) * radial_power(2, 1)


def test_vector_variable_squares_to_minus_radius():
    x = CliffordPolynomial.vector_variable(3)
    assert x * x == radial_power(3, 1).scale(-1)


def test_set_zero_and_embed():
    p = CliffordPolynomial.variable(2, 1) + CliffordPolynomial.variable(2, 2)
    assert p.set_zero(2) == CliffordPolynomial.variable(2, 1)
    q = p.embed(3)
    assert q.n == 3 and q.set_zero(3) == q


@given(seeds)
def test_json_round_trip(seed):
    p = random_poly(random.Random(seed), 3, 3)
    assert CliffordPolynomial.from_json(p.to_json()) == p


def test_json_round_trip_with_symbols_and_envelope():
    p = CliffordPolynomial.variable(2, 1).scale(1 + LAMBDA * mpq(1, 3))
    f = WeightedFunction(mpq(-1, 2), p)
    assert WeightedFunction.from_json(f.to_json()) == f


def test_weighted_evaluate_includes_envelope():
    f = WeightedFunction.gaussian(CliffordPolynomial.constant(2))
    assert f.evaluate([1.0, 1.0])[0] == pytest.approx(math.exp(-1.0))


def test_weighted_product_adds_envelopes():
    f = WeightedFunction(mpq(-1, 2), CliffordPolynomial.variable(2, 1))
    g = f * f
    assert g.envelope == -1
    assert g.poly == CliffordPolynomial.variable(2, 1) * CliffordPolynomial.variable(2, 1)
