"""Gaussian pairings, Clifford-Hermite states, Weyl-Heisenberg states,
Fischer decomposition and the Cauchy-Kowalevskaya extension.

All pairings use the normalized moments
    pi^{-n/2} * integral x^(2m) exp(-|x|^2) dx = prod_j (2 m_j - 1)!! / 2^(m_j)
so every inner product is an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import factorial, prod

from gmpy2 import mpq

from .clifford import Multivector, Signature, blade_product, involution_sign
from .opcalc import (
    DELTA,
    DIM,
    D,
    E,
    Exp,
    Num,
    X,
    X_,
    apply,
    d_,
    hamiltonian,
    ladder_pair,
)
from .polyfun import (
    BLADE_MASK,
    CliffordPolynomial,
    WeightedFunction,
    k_iadd,
    k_left_blade,
    k_mul_x,
    k_partial,
    monomials,
    unpack,
)
from .scalars import double_factorial, simplify

GAUSSIAN = mpq(-1, 2)


# ---------------------------------------------------------------- moments


def gaussian_moment(alpha) -> mpq:
    """pi^{-n/2} * integral x^alpha exp(-|x|^2) dx."""
    out = mpq(1)
    for a in alpha:
        if a & 1:
            return mpq(0)
        out *= mpq(double_factorial(a - 1), 2 ** (a // 2))
    return out


def moment_by_recurrence(alpha) -> mpq:
    """Same moment from I_0 = 1, I_{2m} = (2m-1)/2 * I_{2m-2} on each axis."""
    out = mpq(1)
    for a in alpha:
        if a % 2:
            return mpq(0)
        i = mpq(1)
        for m in range(1, a // 2 + 1):
            i = i * mpq(2 * m - 1, 2)
        out *= i
    return out


def _pair_terms(f: CliffordPolynomial, g: CliffordPolynomial) -> Multivector:
    if f.n != g.n or f.signature != g.signature:
        raise ValueError("pairing needs matching dimension and signature")
    n, nm = f.n, f.signature.neg_mask
    out: dict = {}
    cache: dict = {}
    for kf, cf in f.raw_terms.items():
        af, mf = unpack(kf, n)
        sf = involution_sign(mf, "conjugation")
        for kg, cg in g.raw_terms.items():
            ag, mg = unpack(kg, n)
            alpha = tuple(a + b for a, b in zip(af, ag))
            mom = cache.get(alpha)
            if mom is None:
                mom = cache[alpha] = gaussian_moment(alpha)
            if not mom:
                continue
            s, m = blade_product(mf, mg, nm)
            v = cf * cg * mom
            out[m] = out.get(m, 0) + (v if s * sf > 0 else -v)
    return Multivector(f.signature, out)


def fischer_inner(f, g) -> Multivector:
    """<f, g> = pi^{-n/2} * integral f^dagger g (with envelopes)."""
    if isinstance(f, WeightedFunction) or isinstance(g, WeightedFunction):
        if not (isinstance(f, WeightedFunction) and isinstance(g, WeightedFunction)):
            raise ValueError("pair two weighted functions or two polynomials")
        if f.envelope + g.envelope != -1:
            raise ValueError(
                f"combined envelope must be -1 for a closed-form Gaussian pairing, got {f.envelope + g.envelope}"
            )
        return _pair_terms(f.poly, g.poly)
    return _pair_terms(f, g)


def fischer_scalar(f, g):
    return fischer_inner(f, g).scalar_part()


# ---------------------------------------------------------------- Clifford-Hermite


def _check_monogenic_homogeneous(seed: CliffordPolynomial) -> int:
    if seed.is_zero():
        raise ValueError("seed must be nonzero")
    if not seed.is_homogeneous():
        raise ValueError("seed must be homogeneous")
    if not apply(D, seed).is_zero():
        raise ValueError("seed must be monogenic (D seed = 0)")
    return seed.degree()


def u_factor(k: int, n: int, m: int) -> mpq:
    """u_k with U_k M = u_k M on a homogeneous monogenic M of degree m.

    T_{2j} = (n-1)/(4j) + 1 and T_{2j+1} = ((n-1)/4 + j + 1/2) I_{n/2+j},
    where I_s acts on degree m as 1/(m+s).
    """
    u = mpq(1)
    for i in range(1, k + 1):
        j, odd = divmod(i, 2)
        if not odd:
            u *= mpq(n - 1, 4 * j) + 1
        else:
            u *= (mpq(n - 1, 4) + j + mpq(1, 2)) / (m + mpq(n, 2) + j)
    return u


def lowering_factor(k: int, n: int, m: int) -> int:
    """kappa_k with L^- raw_k = -kappa_k raw_{k-1} for a degree-m monogenic seed."""
    if k % 2 == 0:
        return 2 * k
    return 2 * (k - 1 + 2 * m + n)


def c_k_product(k: int, n: int) -> mpq:
    """prod_{j=1..k} (j + (n-1)/2)."""
    return prod((j + mpq(n - 1, 2) for j in range(1, k + 1)), start=mpq(1))


def c_k_scaled(k: int, n: int) -> mpq:
    """The product with the extra trailing factor (n-1)/2."""
    return c_k_product(k, n) * mpq(n - 1, 2)


@dataclass
class HermiteState:
    """raw = (L^+)^k (exp(-|x|^2/2) M) for a homogeneous monogenic seed M.

    U_k acts on M as the scalar ``u``; ``raw`` is stored without it so the
    whole family stays in one normalization.
    """

    k: int
    raw: WeightedFunction
    norm_sq: mpq
    u: mpq
    seed_degree: int
    full_norm: Multivector | None = field(default=None, repr=False)

    @property
    def scaled(self) -> WeightedFunction:
        return self.raw.scale(self.u)

    def to_json(self) -> dict:
        from .scalars import rational_str

        return {
            "k": self.k,
            "seed_degree": self.seed_degree,
            "u_k": rational_str(self.u),
            "norm_sq": rational_str(self.norm_sq),
            "raw": self.raw.to_json(),
        }


def hermite_sequence(seed: CliffordPolynomial, k_max: int) -> list[HermiteState]:
    m = _check_monogenic_homogeneous(seed)
    n = seed.n
    up = ladder_pair().raise_
    f = WeightedFunction(GAUSSIAN, seed)
    out = []
    for k in range(k_max + 1):
        if k:
            f = apply(up, f)
        full = fischer_inner(f, f)
        out.append(HermiteState(k, f, full.scalar_part(), u_factor(k, n, m), m, full))
    return out


def hermite_polynomial(state: HermiteState) -> CliffordPolynomial:
    return state.raw.poly


def hermite_report(seed: CliffordPolynomial, k_max: int) -> dict:
    """Exact norm ratios against both closed forms, and c_k in all conventions."""
    states = hermite_sequence(seed, k_max)
    n, m = seed.n, states[0].seed_degree
    rows = []
    for st in states[1:]:
        ratio = st.norm_sq / states[st.k - 1].norm_sq
        rows.append({
            "k": st.k,
            "ratio": ratio,
            "lowering_factor": lowering_factor(st.k, n, m),
            "uniform_formula": 2 * (st.k + mpq(n - 1, 2)),
            "c_k_measured": st.norm_sq / (states[0].norm_sq * 2**st.k),
            "c_k_product": c_k_product(st.k, n),
            "c_k_scaled": c_k_scaled(st.k, n),
        })
    return {"n": n, "seed_degree": m, "rows": rows}


# ---------------------------------------------------------------- Weyl-Heisenberg


def weyl_states(n: int, alpha_max: int, signature: Signature | None = None) -> dict:
    """raw_alpha = prod_j (X_j - d_j)^alpha_j (exp(-|x|^2/2) * 1) for |alpha| <= alpha_max."""
    ground = WeightedFunction(GAUSSIAN, CliffordPolynomial.constant(n, 1, signature))
    out = {}
    for total in range(alpha_max + 1):
        for alpha in monomials(n, total):
            f = ground
            for j, a in enumerate(alpha):
                for _ in range(a):
                    f = apply(X_(j + 1) - d_(j + 1), f)
            out[alpha] = f
    return out


def weyl_norm_sq(alpha) -> int:
    """Squared norm of raw_alpha: 2^|alpha| * alpha!."""
    return prod(2**a * factorial(a) for a in alpha)


# ---------------------------------------------------------------- Fischer decomposition


def fischer_pair(p: CliffordPolynomial) -> tuple[CliffordPolynomial, CliffordPolynomial]:
    """(M_k, M_{k-1}) from the projections P = I + XD/(2k+n-2) and Q = -XD/(2k+n-2).

    Exact for harmonic p; for other p the first entry is only P p.
    """
    k = _homogeneous_degree(p)
    dp = apply(D, p)
    if dp.is_zero():
        return p, dp
    denom = 2 * k + p.n - 2
    if denom == 0:
        raise ValueError("degenerate denominator 2k+n-2 = 0")
    m_low = dp.scale(mpq(-1, denom))
    return p - apply(X, m_low), m_low


def fischer_pair_integral(p: CliffordPolynomial) -> tuple[CliffordPolynomial, CliffordPolynomial]:
    """Same split through I_{n/2}: M_{k-1} = -I_{n/2} D p / 2 and M_k = p - x M_{k-1}."""
    from .opcalc import I_s

    _homogeneous_degree(p)
    tail = apply(I_s(DIM / Num(2)), apply(D, p)).scale(mpq(-1, 2))
    return p - apply(X, tail), tail


def _homogeneous_degree(p: CliffordPolynomial) -> int:
    if p.is_zero():
        return 0
    if not p.is_homogeneous():
        raise ValueError("polynomial must be homogeneous")
    return p.degree()


def _tower_eigen(s: int, k: int, n: int) -> int:
    """XD acts on x^s M_{k-s} as multiplication by -B_s."""
    return s if s % 2 == 0 else 2 * k - s - 1 + n


def _tower_gain(s: int, m: int, n: int) -> int:
    """D^s (x^s M_m) = (-1)^s * prod_{t=1..s} B_{t,m} * M_m."""
    out = 1
    for t in range(1, s + 1):
        out *= t if t % 2 == 0 else t - 1 + 2 * m + n
    return out


def fischer_tower(p: CliffordPolynomial) -> list[CliffordPolynomial]:
    """[M_k, M_{k-1}, ..., M_0] with p = sum_s x^s M_{k-s} and every M monogenic."""
    k = _homogeneous_degree(p)
    if p.is_zero():
        return [p]
    n = p.n
    xd = X * D
    eig = [_tower_eigen(s, k, n) for s in range(k + 1)]
    out = []
    for s in range(k + 1):
        part = p
        for t in range(k + 1):
            if t == s:
                continue
            part = (apply(xd, part) + part.scale(eig[t])).scale(mpq(1, eig[t] - eig[s]))
            if part.is_zero():
                break
        m_deg = k - s
        if part.is_zero():
            out.append(part)
            continue
        dpart = part
        for _ in range(s):
            dpart = apply(D, dpart)
        sign = -1 if s % 2 else 1
        out.append(dpart.scale(mpq(sign, _tower_gain(s, m_deg, n))))
    return out


def fischer_reconstruct(tower: list[CliffordPolynomial]) -> CliffordPolynomial:
    total = None
    for s, m in enumerate(tower):
        term = m
        for _ in range(s):
            term = apply(X, term)
        total = term if total is None else total + term
    return total


def fischer_decompose(p: CliffordPolynomial, full: bool = False):
    """(M_k, M_{k-1}) with p = M_k + x M_{k-1} for harmonic p, or the full tower.

    The pair comes from the projections P and Q; ``full=True`` returns
    [M_k, ..., M_0] with p = sum_s x^s M_{k-s} for any homogeneous p.
    """
    if full:
        return fischer_tower(p)
    _homogeneous_degree(p)
    if not apply(DELTA, p).is_zero():
        raise ValueError("the two-term split needs a harmonic polynomial; use full=True")
    return fischer_pair(p)


def monogenic_part(p: CliffordPolynomial) -> CliffordPolynomial:
    return fischer_tower(p)[0]


# ---------------------------------------------------------------- Cauchy-Kowalevskaya


def _dirac_first(t: dict, n: int, nm: int) -> dict:
    out: dict = {}
    for j in range(n):
        k_iadd(out, k_left_blade(k_partial(t, j), 1 << j, nm))
    return out


def ck_extension(f: CliffordPolynomial) -> CliffordPolynomial:
    """F(x, x_{n+1}) = sum_k x_{n+1}^k / k! (e_{n+1} D)^k f in R_{0,n+1}."""
    n = f.n
    if f.signature != Signature.euclidean(n):
        raise ValueError("CK extension is defined for signature (0, n)")
    big = Signature.euclidean(n + 1)
    nm = big.neg_mask
    top = 1 << n
    cur = dict(f.raw_terms)
    total = dict(cur)
    k = 0
    while cur:
        k += 1
        cur = k_left_blade(_dirac_first(cur, n, nm), top, nm)
        cur = {key: v * mpq(1, k) for key, v in k_mul_x(cur, n).items()}
        k_iadd(total, cur)
    return CliffordPolynomial._raw(n + 1, big, total)


def cauchy_riemann_residual(F: CliffordPolynomial) -> CliffordPolynomial:
    """(d_{n+1} + conj(e_{n+1}) D_x) F, with D_x the Dirac operator in the first n variables."""
    n = F.n - 1
    top = Multivector.generator(F.signature, n + 1)
    from .clifford import involution

    ebar = involution(top, "conjugation")
    dx = CliffordPolynomial._raw(F.n, F.signature, _dirac_first(F.raw_terms, n, F.signature.neg_mask))
    return F.partial(n + 1) + dx.mul_multivector(ebar, "left")


# ---------------------------------------------------------------- generating function


def generating_function_coeffs(seed: CliffordPolynomial, k_max: int):
    """f_lambda = sum_{k<=k_max} lambda^k / (n^k k!) psi_k as a Q[lambda] polynomial.

    Returns (f_lambda, [psi_0, ..., psi_kmax]).
    """
    from .scalars import LAMBDA

    states = hermite_sequence(seed, k_max)
    n = seed.n
    psis = [hermite_polynomial(s) for s in states]
    total = psis[0]
    lam_k = 1
    for k in range(1, k_max + 1):
        lam_k = LAMBDA * lam_k
        total = total + psis[k].scale(lam_k * mpq(1, n**k * factorial(k)))
    return total, psis


def monogenic_projection_P(psi: CliffordPolynomial) -> CliffordPolynomial:
    """psi + x D psi / (2k + n - 2) for a degree-k polynomial psi (applied to its top degree k)."""
    k = psi.degree()
    denom = 2 * k + psi.n - 2
    if denom == 0:
        return psi
    return psi + apply(X * D, psi).scale(mpq(1, denom))


def gaussian_intertwining_residual(P: CliffordPolynomial) -> WeightedFunction:
    """H0(exp(-|x|^2/2) P) - exp(-|x|^2/2) J0 P."""
    f = WeightedFunction(GAUSSIAN, P)
    return apply(hamiltonian("H0", P.n), f) - WeightedFunction(GAUSSIAN, apply(hamiltonian("J0"), P))
