"""Closed-form solutions of (D - lambda + (2 lambda/n) Gamma) f = 0 and the
Landau-operator identity checks.

cosh(mu) and sinh(mu), mu = lambda*rho/n, are the formal symbols C and S;
rho is a formal square root with rho^2 = 2s+n.  A solution is certified when
the residual vanishes separately in the 1, C and S components.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from gmpy2 import mpq

from .dsl import IdentityReport, builtin_suite, check_identity_zero, displaced_items, parse
from .fock import fischer_tower, hermite_sequence
from .opcalc import DELTA, HALF, D, Exp, Num, X, apply, exp_truncated
from .polyfun import CliffordPolynomial
from .scalars import LAMBDA, Scalar, factorial, lambda_coeff, truncate_lambda

COMPONENTS = ("1", "C", "S")

PDE_OPERATOR = "D - lambda + 2*lambda/n*Gamma"
HEAT = Exp(Num(mpq(-1, 4)) * DELTA, None)


def _symbols(rho_sq):
    return (
        Scalar.symbol("C", rho_sq),
        Scalar.symbol("S", rho_sq),
        Scalar.symbol("rho", rho_sq),
    )


@dataclass
class MaxwellSolution:
    """P = C*cosh_part + S*sinh_part; sinh_part carries the 1/rho factor as rho/rho^2."""

    s: int
    n: int
    seed: CliffordPolynomial
    cosh_part: CliffordPolynomial
    sinh_part: CliffordPolynomial
    monogenic: bool

    @property
    def rho_sq(self) -> int:
        return 2 * self.s + self.n

    def field(self) -> CliffordPolynomial:
        c, s, _ = _symbols(self.rho_sq)
        return self.cosh_part.scale(c) + self.sinh_part.scale(s)

    def numeric_symbols(self, lam: float) -> dict:
        rho = math.sqrt(self.rho_sq)
        mu = lam * rho / self.n
        return {"lambda": lam, "rho": rho, "C": math.cosh(mu), "S": math.sinh(mu)}

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "rho_sq": self.rho_sq,
            "monogenic": self.monogenic,
            "seed": self.seed.to_json(),
            "cosh_part": self.cosh_part.to_json(),
            "sinh_part": self.sinh_part.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaxwellSolution":
        return cls(
            data["s"],
            data["n"],
            CliffordPolynomial.from_json(data["seed"]),
            CliffordPolynomial.from_json(data["cosh_part"]),
            CliffordPolynomial.from_json(data["sinh_part"]),
            data["monogenic"],
        )


def _inv_rho(rho_sq) -> Scalar:
    return Scalar.symbol("rho", rho_sq) * mpq(1, rho_sq)


def _check_seed(seed: CliffordPolynomial, s: int | None) -> int:
    if seed.is_zero():
        raise ValueError("seed must be nonzero")
    if not seed.is_homogeneous():
        raise ValueError("seed must be homogeneous")
    deg = seed.degree()
    if s is not None and s != deg:
        raise ValueError(f"seed has degree {deg}, not s={s}")
    return deg


def maxwell_solution(seed: CliffordPolynomial, s: int | None = None, monogenic: bool = True) -> MaxwellSolution:
    """Closed form for a homogeneous seed of degree s.

    monogenic: cosh(mu) P - (1/rho) sinh(mu) x P.
    otherwise: exp(-Delta/4) [cosh(mu) P + (1/rho) sinh(mu) (D/2 - X) P].
    """
    s = _check_seed(seed, s)
    rho_sq = 2 * s + seed.n
    inv = _inv_rho(rho_sq)
    if monogenic:
        if not apply(D, seed).is_zero():
            raise ValueError("monogenic flag set but D seed != 0")
        return MaxwellSolution(s, seed.n, seed, seed, apply(X, seed).scale(-inv), True)
    cosh_part = apply(HEAT, seed)
    sinh_part = apply(HEAT * (HALF * D - X), seed).scale(inv)
    return MaxwellSolution(s, seed.n, seed, cosh_part, sinh_part, False)


def inner_form(seed: CliffordPolynomial) -> MaxwellSolution:
    """[cosh(mu) + (1/rho) sinh(mu) (D - X)] applied to exp(-Delta/4) P."""
    s = _check_seed(seed, None)
    rho_sq = 2 * s + seed.n
    p_heat = apply(HEAT, seed)
    sinh_part = apply(D - X, p_heat).scale(_inv_rho(rho_sq))
    return MaxwellSolution(s, seed.n, seed, p_heat, sinh_part, False)


def components(p: CliffordPolynomial) -> dict:
    """Split a polynomial over Q[lambda, rho, C, S] into its 1, C and S parts."""
    out = {}
    for name in COMPONENTS:
        t = {}
        for key, v in p.raw_terms.items():
            c = v.component(name) if isinstance(v, Scalar) else (v if name == "1" else 0)
            if c:
                t[key] = c
        out[name] = CliffordPolynomial._raw(p.n, p.signature, t)
    return out


def pde_residual(sol: MaxwellSolution) -> dict:
    """(D - lambda + (2 lambda/n) Gamma) P by component."""
    return components(apply(parse(PDE_OPERATOR), sol.field()))


def eigen_residual(sol: MaxwellSolution, s: int | None = None) -> dict:
    """Delta P - (2 lambda/n) X P - 2 E P + 2 s P by component."""
    s = sol.s if s is None else s
    op = parse(f"Delta - 2*lambda/n*X - 2*E + {2 * s}")
    return components(apply(op, sol.field()))


def residual_is_zero(res: dict) -> bool:
    return all(p.is_zero() for p in res.values())


def harmonic_residual(sol: MaxwellSolution) -> tuple[CliffordPolynomial, CliffordPolynomial]:
    return apply(DELTA, sol.cosh_part), apply(DELTA, sol.sinh_part)


def two_form_difference(seed: CliffordPolynomial) -> MaxwellSolution:
    """Outer form minus inner form; both parts vanish when the forms agree."""
    a = maxwell_solution(seed, monogenic=False)
    b = inner_form(seed)
    return MaxwellSolution(a.s, a.n, seed, a.cosh_part - b.cosh_part, a.sinh_part - b.sinh_part, False)


def numeric_residual(sol: MaxwellSolution, lambdas=(0.5, 1.0, 2.0), points: int = 100, seed: int = 0,
                     which: str = "pde") -> float:
    """Largest |residual| over random points in [-1, 1]^n, with C, S, rho as floats."""
    op = parse(PDE_OPERATOR) if which == "pde" else parse(f"Delta - 2*lambda/n*X - 2*E + {2 * sol.s}")
    res = apply(op, sol.field())
    rng = random.Random(seed)
    pts = [[rng.uniform(-1, 1) for _ in range(sol.n)] for _ in range(points)]
    worst = 0.0
    for lam in lambdas:
        syms = sol.numeric_symbols(lam)
        for pt in pts:
            for v in res.evaluate(pt, **syms).values():
                worst = max(worst, abs(v))
    return worst


def sample_field(sol: MaxwellSolution, lam: float, points: int, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    syms = sol.numeric_symbols(lam)
    field = sol.field()
    out = []
    for _ in range(points):
        pt = [rng.uniform(-1, 1) for _ in range(sol.n)]
        vals = field.evaluate(pt, **syms)
        out.append({"point": pt, "value": {str(m): vals[m] for m in sorted(vals)}})
    return out


def monogenic_seeds(n: int, s_max: int) -> list[CliffordPolynomial]:
    """Monogenic part of x_1^s for s = 0..s_max."""
    out = []
    for s in range(s_max + 1):
        alpha = (s,) + (0,) * (n - 1)
        out.append(fischer_tower(CliffordPolynomial.monomial(alpha, 1))[0])
    return out


# ---------------------------------------------------------------- series comparisons


@dataclass
class SeriesComparison:
    order: int
    matches: bool
    first_mismatch: int | None
    difference: CliffordPolynomial

    def to_json(self) -> dict:
        out = {"order": self.order, "matches": self.matches}
        if not self.matches:
            out["first_mismatch_lambda_order"] = self.first_mismatch
            out["difference"] = str(self.difference)
        return out


def _compare(a: CliffordPolynomial, b: CliffordPolynomial, order: int) -> SeriesComparison:
    diff = a - b
    t = {k: truncate_lambda(v, order) for k, v in diff.raw_terms.items()}
    diff = CliffordPolynomial._raw(a.n, a.signature, {k: v for k, v in t.items() if v})
    first = None
    for k in range(order + 1):
        if any(lambda_coeff(v, k) for v in diff.raw_terms.values()):
            first = k
            break
    return SeriesComparison(order, diff.is_zero(), first, diff)


def displaced_series(seed: CliffordPolynomial, order: int) -> CliffordPolynomial:
    """sum_{k<=order} (lambda/n (D - X))^k / k! applied to exp(-Delta/4) P."""
    op = parse("lambda/n*(D - X)")
    res, _ = exp_truncated(op, order, apply(HEAT, seed), lam_order=order)
    return res


def exp_dminusx_closed_form(seed: CliffordPolynomial, order: int) -> SeriesComparison:
    """Truncated exponential versus
    sum_k lambda^{2k}/(n^{2k}(2k)!) (I + lambda/(n(2k+1)) (D - X)) (2 J0)^k
    on exp(-Delta/4) P, coefficientwise through lambda^order."""
    _check_seed(seed, None)
    n = seed.n
    base = apply(HEAT, seed)
    two_j0 = parse("-1*Delta + 2*E + n")
    direct = displaced_series(seed, order)
    closed = None
    cur = base
    for k in range(order // 2 + 1):
        if k:
            cur = apply(two_j0, cur)
        even = cur.scale(LAMBDA ** (2 * k) * mpq(1, n ** (2 * k) * factorial(2 * k)))
        closed = even if closed is None else closed + even
        if 2 * k + 1 <= order:
            odd = apply(D - X, cur).scale(LAMBDA ** (2 * k + 1) * mpq(1, n ** (2 * k + 1) * factorial(2 * k) * (2 * k + 1)))
            closed = closed + odd
    return _compare(direct, closed, order)


def displaced_intertwine_check(n: int, degree_bound: int = 4, order: int = 8) -> tuple[IdentityReport, IdentityReport]:
    items = displaced_items(order)[-2:]
    return tuple(check_identity_zero(it.expr, n, degree_bound, order, tag=it.tag) for it in items)


def landau_suite(n: int, degree_bound: int = 5) -> list[IdentityReport]:
    return builtin_suite("landau", n, degree_bound)


def landau_state(seed: CliffordPolynomial, k: int, order: int = 12):
    """exp(lambda/n D) applied to the k-th Clifford-Hermite function, truncated after order N.

    The exact series does not terminate; this rendering is for export only.
    """
    raw = hermite_sequence(seed, k)[k].raw
    res, _ = exp_truncated(parse("lambda/n*D"), order, raw, lam_order=order)
    return res


def generating_function_check(seed: CliffordPolynomial, k_max: int = 6) -> list[SeriesComparison]:
    """Per-k comparison of the lambda^k coefficient of the displaced exponential
    on exp(-Delta/4) P with psi_k / (n^k k!), psi_k the Clifford-Hermite polynomial."""
    n = seed.n
    series = displaced_series(seed, k_max)
    psis = [st.raw.poly for st in hermite_sequence(seed, k_max)]
    out = []
    for k in range(k_max + 1):
        coeff = series.lambda_coeff(k)
        target = psis[k].scale(mpq(1, n**k * factorial(k)))
        out.append(_compare(coeff, target, 0))
    return out


def monogenic_projection(psi: CliffordPolynomial) -> CliffordPolynomial:
    """psi + x D psi / (2k + n - 2) for psi of top degree k."""
    k = psi.degree()
    denom = 2 * k + psi.n - 2
    if denom == 0:
        return psi
    return psi + apply(X * D, psi).scale(mpq(1, denom))


def projected_coefficients_monogenic(seed: CliffordPolynomial, k_max: int = 6) -> list[bool]:
    """Whether P(psi_k) is monogenic for each k <= k_max."""
    psis = [st.raw.poly for st in hermite_sequence(seed, k_max)]
    return [apply(D, monogenic_projection(p)).is_zero() for p in psis]


def monogenic_series_check(seed: CliffordPolynomial, k_max: int = 6) -> list[SeriesComparison]:
    """sum_k lambda^k/(n^k k!) P(psi_k) against the monogenic-seed closed form
    cosh(mu) P - (1/rho) sinh(mu) x P expanded in lambda, per coefficient."""
    _check_seed(seed, None)
    n = seed.n
    s = seed.degree()
    rho_sq = 2 * s + n
    xp = apply(X, seed)
    psis = [st.raw.poly for st in hermite_sequence(seed, k_max)]
    out = []
    for k in range(k_max + 1):
        j, odd = divmod(k, 2)
        # mu^k / k! with mu = lambda rho / n; odd powers carry the 1/rho of the sinh term
        scale = mpq(rho_sq**j, n**k * factorial(k))
        target = xp.scale(-scale) if odd else seed.scale(scale)
        got = monogenic_projection(psis[k]).scale(mpq(1, n**k * factorial(k)))
        out.append(_compare(got, target, 0))
    return out


__all__ = [
    "COMPONENTS",
    "MaxwellSolution",
    "SeriesComparison",
    "components",
    "displaced_intertwine_check",
    "displaced_series",
    "eigen_residual",
    "exp_dminusx_closed_form",
    "generating_function_check",
    "harmonic_residual",
    "inner_form",
    "landau_state",
    "landau_suite",
    "maxwell_solution",
    "monogenic_projection",
    "monogenic_seeds",
    "monogenic_series_check",
    "numeric_residual",
    "pde_residual",
    "projected_coefficients_monogenic",
    "residual_is_zero",
    "sample_field",
    "two_form_difference",
]
