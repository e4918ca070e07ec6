import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from clifop.clifford import (
    Multivector,
    Signature,
    blade_product,
    blade_product_bruteforce,
    clifford_inner,
    geometric_product,
    grade_project,
    involution,
    vector_inverse,
    wedge_dot,
)
from conftest import random_multivector

sigs = st.sampled_from([Signature(0, 2), Signature(0, 3), Signature(2, 1), Signature(1, 3), Signature(0, 5)])


@st.composite
def mv_triples(draw):
    sig = draw(sigs)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return sig, [random_multivector(rng, sig) for _ in range(3)]


@pytest.mark.parametrize("neg_mask", [0, 0b11111, 0b11000, 0b00101])
def test_blade_product_matches_word_reduction(neg_mask):
    for a in range(32):
        for b in range(32):
            assert blade_product(a, b, neg_mask) == blade_product_bruteforce(a, b, neg_mask)


@pytest.mark.parametrize("p,q", [(0, 3), (3, 0), (1, 2)])
def test_generator_squares_and_anticommute(p, q):
    sig = Signature(p, q)
    for j in range(1, sig.n + 1):
        ej = Multivector.generator(sig, j)
        assert ej * ej == sig.square(j)
        for k in range(j + 1, sig.n + 1):
            ek = Multivector.generator(sig, k)
            assert ej * ek + ek * ej == 0


def test_euclidean_signature_squares_to_minus_one():
    sig = Signature.euclidean(4)
    assert all(sig.square(j) == -1 for j in range(1, 5))


def test_product_examples():
    sig = Signature.euclidean(3)
    e1, e2, e3 = (Multivector.generator(sig, j) for j in (1, 2, 3))
    e12 = Multivector.blade(sig, [1, 2])
    assert e1 * e2 == e12
    assert e2 * e1 == -e12
    assert e12 * e12 == -1
    assert e1 * e2 * e3 * e1 == Multivector.blade(sig, [2, 3]).scale(-1)


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature(0, 0)
    with pytest.raises(ValueError):
        Signature(10, 7)
    with pytest.raises(ValueError):
        Multivector(Signature(0, 2), {0b100: 1})


def test_grade_project_range():
    a = Multivector.scalar(Signature(0, 2), 1)
    with pytest.raises(ValueError):
        grade_project(a, 3)


@settings(max_examples=80)
@given(mv_triples())
def test_associativity_and_distributivity(data):
    _, (a, b, c) = data
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@settings(max_examples=80)
@given(mv_triples())
def test_involution_laws(data):
    _, (a, b, _) = data
    ab = a * b
    assert involution(ab, "main") == involution(a, "main") * involution(b, "main")
    assert involution(ab, "reversion") == involution(b, "reversion") * involution(a, "reversion")
    assert involution(ab, "conjugation") == involution(b, "conjugation") * involution(a, "conjugation")
    for kind in ("main", "reversion", "conjugation"):
        assert involution(involution(a, kind), kind) == a


@settings(max_examples=80)
@given(mv_triples())
def test_grade_completeness(data):
    sig, (a, _, _) = data
    total = Multivector(sig)
    for r in range(sig.n + 1):
        total = total + grade_project(a, r)
    assert total == a


@settings(max_examples=50)
@given(st.integers(2, 5), st.integers(0, 2**32))
def test_inner_product_positive_definite_for_euclidean(n, seed):
    a = random_multivector(random.Random(seed), Signature.euclidean(n))
    val = clifford_inner(a, a)
    expected = sum(c * c for c in a.terms.values())
    assert val == expected


def test_wedge_dot_splits_vector_product():
    sig = Signature.euclidean(3)
    x = Multivector.vector(sig, [1, 2, 3])
    y = Multivector.vector(sig, [mpq(1, 2), -1, 4])
    dot, wedge = wedge_dot(x, y)
    assert dot + wedge == x * y
    assert dot == -(mpq(1, 2) - 2 + 12)
    assert wedge.grades() == {2}


def test_wedge_dot_requires_vector():
    sig = Signature.euclidean(2)
    with pytest.raises(ValueError):
        wedge_dot(Multivector.scalar(sig, 1), Multivector.scalar(sig, 1))


def test_vector_inverse():
    sig = Signature(1, 2)
    x = Multivector.vector(sig, [3, 1, 1])
    assert x * vector_inverse(x) == 1
    with pytest.raises(ZeroDivisionError):
        vector_inverse(Multivector.vector(sig, [1, 1, 0]))


@given(mv_triples())
def test_json_round_trip(data):
    _, (a, _, _) = data
    assert Multivector.from_json(a.to_json()) == a


def test_json_layout():
    sig = Signature.euclidean(2)
    a = Multivector(sig, {0: mpq(1, 2), 0b11: -3})
    assert a.to_json() == {
        "signature": [0, 2],
        "terms": [{"blade": [], "coeff": "1/2"}, {"blade": [1, 2], "coeff": "-3"}],
    }


def test_signature_mismatch_rejected():
    with pytest.raises(ValueError):
        geometric_product(Multivector.scalar(Signature(0, 2), 1), Multivector.scalar(Signature(2, 0), 1))
