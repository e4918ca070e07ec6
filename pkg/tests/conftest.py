import random

import pytest
from gmpy2 import mpq

from clifop.clifford import Multivector, Signature
from clifop.polyfun import CliffordPolynomial, monomials

ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return random.Random(1234)


def random_rational(rng, span=5):
    return mpq(rng.randint(-span, span), rng.randint(1, 3))


def random_multivector(rng, sig: Signature, density=0.6) -> Multivector:
    return Multivector(sig, {m: random_rational(rng) for m in range(1 << sig.n) if rng.random() < density})


def random_poly(rng, n: int, degree: int, homogeneous=False, terms=4) -> CliffordPolynomial:
    sig = Signature.euclidean(n)
    out = CliffordPolynomial(n, sig)
    for _ in range(terms):
        d = degree if homogeneous else rng.randint(0, degree)
        alpha = rng.choice(list(monomials(n, d)))
        out = out + CliffordPolynomial.monomial(alpha, random_rational(rng), sig, rng.randrange(1 << n))
    return out
