"""Clifford-valued polynomials and Gaussian-weighted functions.

Terms are stored in a flat dict keyed by a packed int: the low 16 bits hold
the blade mask and each exponent alpha_j occupies 8 bits above that.  All
kernels (``k_*``) work directly on those dicts and are shared with the
operator calculus.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement

from gmpy2 import mpq

from .clifford import Multivector, Signature, blade_product
from .scalars import Coeff, Scalar, coeff_from_json, coeff_to_json, evaluate as eval_coeff, rational, rational_str, simplify

MASK_BITS = 16
BLADE_MASK = (1 << MASK_BITS) - 1
EXP_BITS = 8
EXP_MAX = (1 << EXP_BITS) - 1


def exp_shift(j: int) -> int:
    """Bit offset of the exponent of x_{j+1} (0-based j)."""
    return MASK_BITS + EXP_BITS * j


def pack(alpha, mask: int = 0) -> int:
    key = mask
    for j, a in enumerate(alpha):
        if a < 0 or a > EXP_MAX:
            raise OverflowError(f"exponent {a} outside 0..{EXP_MAX}")
        key |= a << exp_shift(j)
    return key


def unpack(key: int, n: int) -> tuple[tuple[int, ...], int]:
    alpha = tuple((key >> exp_shift(j)) & EXP_MAX for j in range(n))
    return alpha, key & BLADE_MASK


def key_degree(key: int) -> int:
    e = key >> MASK_BITS
    d = 0
    while e:
        d += e & EXP_MAX
        e >>= EXP_BITS
    return d


def monomials(n: int, degree: int):
    """All exponent tuples of total degree ``degree`` in n variables, grlex order."""
    out = []
    for combo in combinations_with_replacement(range(n), degree):
        alpha = [0] * n
        for j in combo:
            alpha[j] += 1
        out.append(tuple(alpha))
    return sorted(out, reverse=True)


def monomials_upto(n: int, degree: int):
    out = []
    for d in range(degree + 1):
        out.extend(monomials(n, d))
    return out


# ---------------------------------------------------------------- kernels


def _acc(out: dict, key: int, c) -> None:
    v = out.get(key)
    if v is None:
        out[key] = c
    else:
        v = v + c
        if v:
            out[key] = v
        else:
            del out[key]


def k_add(a: dict, b: dict, c: Coeff = 1) -> dict:
    """a + c*b."""
    out = dict(a)
    if c == 1:
        for k, v in b.items():
            _acc(out, k, v)
    elif c:
        for k, v in b.items():
            w = v * c
            if w:
                _acc(out, k, w)
    return out


def k_iadd(out: dict, b: dict, c: Coeff = 1) -> dict:
    """In-place out += c*b (out must be private to the caller)."""
    if c == 1:
        for k, v in b.items():
            _acc(out, k, v)
    elif c:
        for k, v in b.items():
            w = v * c
            if w:
                _acc(out, k, w)
    return out


def k_scale(a: dict, c: Coeff) -> dict:
    if not c:
        return {}
    if c == 1:
        return dict(a)
    out = {}
    for k, v in a.items():
        w = simplify(v * c)
        if w:
            out[k] = w
    return out


def k_mul_x(a: dict, j: int) -> dict:
    """Multiply by x_{j+1} (0-based j)."""
    step = 1 << exp_shift(j)
    sh = exp_shift(j)
    out = {}
    for k, v in a.items():
        if ((k >> sh) & EXP_MAX) == EXP_MAX:
            raise OverflowError("exponent overflow")
        out[k + step] = v
    return out


def k_partial(a: dict, j: int) -> dict:
    """Partial derivative in x_{j+1} (0-based j)."""
    sh = exp_shift(j)
    step = 1 << sh
    out = {}
    for k, v in a.items():
        e = (k >> sh) & EXP_MAX
        if e:
            out[k - step] = v * e
    return out


def k_left_blade(a: dict, mask: int, neg_mask: int) -> dict:
    out = {}
    for k, v in a.items():
        s, m = blade_product(mask, k & BLADE_MASK, neg_mask)
        out[(k & ~BLADE_MASK) | m] = v if s > 0 else -v
    return out


def k_right_blade(a: dict, mask: int, neg_mask: int) -> dict:
    out = {}
    for k, v in a.items():
        s, m = blade_product(k & BLADE_MASK, mask, neg_mask)
        out[(k & ~BLADE_MASK) | m] = v if s > 0 else -v
    return out


def k_mul_mv(a: dict, mv_terms: dict, neg_mask: int, side: str) -> dict:
    out: dict = {}
    for bm, bc in mv_terms.items():
        part = k_left_blade(a, bm, neg_mask) if side == "left" else k_right_blade(a, bm, neg_mask)
        k_iadd(out, part, bc)
    return out


def k_poly_mul(a: dict, b: dict, neg_mask: int) -> dict:
    out: dict = {}
    for ka, va in a.items():
        ea, ma = ka & ~BLADE_MASK, ka & BLADE_MASK
        for kb, vb in b.items():
            s, m = blade_product(ma, kb & BLADE_MASK, neg_mask)
            v = va * vb
            _acc(out, (ea + (kb & ~BLADE_MASK)) | m, v if s > 0 else -v)
    return out


def k_by_degree(a: dict) -> dict:
    parts: dict = {}
    for k, v in a.items():
        parts.setdefault(key_degree(k), {})[k] = v
    return parts


# ---------------------------------------------------------------- values


def _check_dims(n: int, signature: Signature):
    if not 1 <= n <= 16:
        raise ValueError(f"variable count must lie in 1..16, got {n}")
    if signature.n < n:
        raise ValueError(f"signature dimension {signature.n} is smaller than the variable count {n}")


class CliffordPolynomial:
    """Polynomial in x_1..x_n with coefficients in R_{p,q}."""

    __slots__ = ("n", "signature", "_t")

    def __init__(self, n: int, signature: Signature | None = None, terms: dict | None = None):
        """``terms`` maps exponent tuples to Multivectors."""
        signature = signature or Signature.euclidean(n)
        _check_dims(n, signature)
        self.n = n
        self.signature = signature
        t: dict = {}
        for alpha, mv in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != n:
                raise ValueError(f"multi-index {alpha} has length != {n}")
            if not isinstance(mv, Multivector):
                mv = Multivector.scalar(signature, mv)
            if mv.signature != signature:
                raise ValueError("coefficient signature mismatch")
            base = pack(alpha)
            for m, c in mv.terms.items():
                _acc(t, base | m, c)
        self._t = t

    @classmethod
    def _raw(cls, n, signature, t):
        obj = cls.__new__(cls)
        obj.n = n
        obj.signature = signature
        obj._t = t
        return obj

    def _like(self, t: dict) -> "CliffordPolynomial":
        return CliffordPolynomial._raw(self.n, self.signature, t)

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, n: int, value=1, signature: Signature | None = None) -> "CliffordPolynomial":
        signature = signature or Signature.euclidean(n)
        return cls(n, signature, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, j: int, signature: Signature | None = None) -> "CliffordPolynomial":
        alpha = [0] * n
        alpha[j - 1] = 1
        return cls(n, signature, {tuple(alpha): 1})

    @classmethod
    def monomial(cls, alpha, coeff=1, signature: Signature | None = None, blade: int = 0) -> "CliffordPolynomial":
        n = len(alpha)
        signature = signature or Signature.euclidean(n)
        return cls._raw(n, signature, {pack(alpha, blade): coeff} if coeff else {})

    @classmethod
    def vector_variable(cls, n: int, signature: Signature | None = None) -> "CliffordPolynomial":
        """x = sum_j x_j e_j."""
        signature = signature or Signature.euclidean(n)
        t = {}
        for j in range(n):
            alpha = [0] * n
            alpha[j] = 1
            t[pack(alpha, 1 << j)] = 1
        return cls._raw(n, signature, t)

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        """MultiIndex tuple -> Multivector."""
        grouped: dict = {}
        for k, v in self._t.items():
            alpha, m = unpack(k, self.n)
            grouped.setdefault(alpha, {})[m] = v
        return {a: Multivector(self.signature, g) for a, g in grouped.items()}

    @property
    def raw_terms(self) -> dict:
        return dict(self._t)

    def coefficient(self, alpha) -> Multivector:
        base = pack(alpha)
        return Multivector(self.signature, {k & BLADE_MASK: v for k, v in self._t.items() if k & ~BLADE_MASK == base})

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def degree(self) -> int:
        return max((key_degree(k) for k in self._t), default=-1)

    def min_degree(self) -> int:
        return min((key_degree(k) for k in self._t), default=-1)

    def is_homogeneous(self) -> bool:
        return len({key_degree(k) for k in self._t}) <= 1

    def lambda_degree(self) -> int:
        from .scalars import lambda_degree

        return max((lambda_degree(v) for v in self._t.values()), default=-1)

    def map_coeffs(self, fn) -> "CliffordPolynomial":
        out = {}
        for k, v in self._t.items():
            w = simplify(fn(v))
            if w:
                out[k] = w
        return self._like(out)

    def _check(self, other: "CliffordPolynomial"):
        if self.n != other.n or self.signature != other.signature:
            raise ValueError(
                f"dimension/signature mismatch: ({self.n},{self.signature}) vs ({other.n},{other.signature})"
            )

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        return self._like(k_add(self._t, other._t))

    def __sub__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        return self._like(k_add(self._t, other._t, -1))

    def __neg__(self):
        return self._like({k: -v for k, v in self._t.items()})

    def scale(self, c: Coeff) -> "CliffordPolynomial":
        return self._like(k_scale(self._t, c))

    def mul_multivector(self, m: Multivector, side: str = "left") -> "CliffordPolynomial":
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if m.signature != self.signature:
            raise ValueError("signature mismatch")
        return self._like(k_mul_mv(self._t, m.terms, self.signature.neg_mask, side))

    def __mul__(self, other):
        if isinstance(other, CliffordPolynomial):
            self._check(other)
            return self._like(k_poly_mul(self._t, other._t, self.signature.neg_mask))
        if isinstance(other, Multivector):
            return self.mul_multivector(other, "right")
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return self.mul_multivector(other, "left")
        return self.scale(other)

    def partial(self, j: int) -> "CliffordPolynomial":
        """d/dx_j with 1-based j."""
        if not 1 <= j <= self.n:
            raise ValueError(f"axis {j} outside 1..{self.n}")
        return self._like(k_partial(self._t, j - 1))

    def mul_x(self, j: int) -> "CliffordPolynomial":
        if not 1 <= j <= self.n:
            raise ValueError(f"axis {j} outside 1..{self.n}")
        return self._like(k_mul_x(self._t, j - 1))

    def homogeneous_parts(self) -> list[tuple[int, "CliffordPolynomial"]]:
        return [(d, self._like(t)) for d, t in sorted(k_by_degree(self._t).items())]

    def homogeneous_part(self, d: int) -> "CliffordPolynomial":
        return self._like({k: v for k, v in self._t.items() if key_degree(k) == d})

    def truncate_lambda(self, order: int) -> "CliffordPolynomial":
        from .scalars import truncate_lambda

        return self.map_coeffs(lambda c: truncate_lambda(c, order))

    def lambda_coeff(self, k: int) -> "CliffordPolynomial":
        from .scalars import lambda_coeff

        return self.map_coeffs(lambda c: lambda_coeff(c, k))

    def embed(self, n_new: int, signature: Signature | None = None) -> "CliffordPolynomial":
        """Same polynomial viewed in more variables (and a larger algebra)."""
        if n_new < self.n:
            raise ValueError("cannot embed into fewer variables")
        signature = signature or Signature.euclidean(n_new)
        if signature.neg_mask & ((1 << self.n) - 1) != self.signature.neg_mask & ((1 << self.n) - 1):
            raise ValueError("target signature does not extend the source signature")
        return CliffordPolynomial._raw(n_new, signature, dict(self._t))

    def set_zero(self, j: int) -> "CliffordPolynomial":
        """Substitute x_j = 0 (1-based j), keeping the variable count."""
        sh = exp_shift(j - 1)
        return self._like({k: v for k, v in self._t.items() if not (k >> sh) & EXP_MAX})

    def evaluate(self, point, **symbols: float) -> dict:
        """Numeric value at ``point``: blade mask -> float.

        ``symbols`` gives values for lambda/rho/C/S in symbolic coefficients.
        """
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        pt = [float(v) for v in point]
        out: dict = {}
        for k, v in self._t.items():
            alpha, m = unpack(k, self.n)
            val = eval_coeff(v, **symbols)
            for x, a in zip(pt, alpha):
                if a:
                    val *= x**a
            out[m] = out.get(m, 0.0) + val
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, CliffordPolynomial):
            return self.n == other.n and self.signature == other.signature and self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # text / json --------------------------------------------------------

    def _sorted_keys(self):
        def order(k):
            alpha, m = unpack(k, self.n)
            return (sum(alpha), tuple(-a for a in alpha), m.bit_count(), m)

        return sorted(self._t, key=order)

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for alpha, mv in sorted(self.terms.items(), key=lambda am: (sum(am[0]), tuple(-a for a in am[0]))):
            mono = "*".join(f"x{j + 1}" if a == 1 else f"x{j + 1}^{a}" for j, a in enumerate(alpha) if a)
            body = str(mv)
            if not mono:
                parts.append(f"({body})" if len(mv.terms) > 1 else body)
            elif body == "1":
                parts.append(mono)
            else:
                parts.append(f"({body})*{mono}" if len(mv.terms) > 1 or body.startswith("(") else f"{body}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CliffordPolynomial(n={self.n}: {self})"

    def to_json(self, envelope=0) -> dict:
        grouped: list = []
        current = None
        for k in self._sorted_keys():
            alpha, m = unpack(k, self.n)
            if current is None or current[0] != alpha:
                current = (alpha, {})
                grouped.append(current)
            current[1][m] = self._t[k]
        return {
            "n": self.n,
            "signature": [self.signature.p, self.signature.q],
            "envelope": rational_str(envelope),
            "terms": [
                {"exponents": list(alpha), "multivector": Multivector(self.signature, mv).to_json()}
                for alpha, mv in grouped
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CliffordPolynomial":
        n = int(data["n"])
        sig = Signature(*data.get("signature", [0, n]))
        terms: dict = {}
        for item in data["terms"]:
            alpha = tuple(int(a) for a in item["exponents"])
            mv = Multivector.from_json(item["multivector"])
            terms[alpha] = terms[alpha] + mv if alpha in terms else mv
        return cls(n, sig, terms)


class WeightedFunction:
    """exp(g*|x|^2) * P(x) with a rational envelope exponent g."""

    __slots__ = ("envelope", "poly")

    def __init__(self, envelope, poly: CliffordPolynomial):
        self.envelope = rational(envelope)
        self.poly = poly

    @classmethod
    def gaussian(cls, poly: CliffordPolynomial) -> "WeightedFunction":
        return cls(mpq(-1, 2), poly)

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def signature(self) -> Signature:
        return self.poly.signature

    def _check(self, other: "WeightedFunction"):
        if self.envelope != other.envelope:
            raise ValueError("cannot add weighted functions with different envelopes")

    def __add__(self, other):
        if not isinstance(other, WeightedFunction):
            return NotImplemented
        self._check(other)
        return WeightedFunction(self.envelope, self.poly + other.poly)

    def __sub__(self, other):
        if not isinstance(other, WeightedFunction):
            return NotImplemented
        self._check(other)
        return WeightedFunction(self.envelope, self.poly - other.poly)

    def __neg__(self):
        return WeightedFunction(self.envelope, -self.poly)

    def scale(self, c) -> "WeightedFunction":
        return WeightedFunction(self.envelope, self.poly.scale(c))

    def __mul__(self, other):
        if isinstance(other, WeightedFunction):
            return WeightedFunction(self.envelope + other.envelope, self.poly * other.poly)
        return WeightedFunction(self.envelope, self.poly * other)

    def __rmul__(self, other):
        return WeightedFunction(self.envelope, other * self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self) -> bool:
        return bool(self.poly)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightedFunction):
            if self.poly.is_zero() and other.poly.is_zero():
                return self.poly.n == other.poly.n
            return self.envelope == other.envelope and self.poly == other.poly
        if other == 0:
            return self.poly.is_zero()
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, point, **symbols: float) -> dict:
        r2 = sum(float(v) ** 2 for v in point)
        w = math.exp(float(self.envelope) * r2)
        return {m: w * v for m, v in self.poly.evaluate(point, **symbols).items()}

    def __str__(self) -> str:
        if not self.envelope:
            return str(self.poly)
        return f"exp({rational_str(self.envelope)}*|x|^2)*[{self.poly}]"

    def __repr__(self) -> str:
        return f"WeightedFunction({self})"

    def to_json(self) -> dict:
        return self.poly.to_json(self.envelope)

    @classmethod
    def from_json(cls, data: dict) -> "WeightedFunction":
        return cls(coeff_from_json(data.get("envelope", "0")), CliffordPolynomial.from_json(data))


def homogeneous_decompose(p: CliffordPolynomial) -> list[tuple[int, CliffordPolynomial]]:
    return p.homogeneous_parts()


def partial_derivative(p: CliffordPolynomial, j: int) -> CliffordPolynomial:
    return p.partial(j)


def evaluate(f, point) -> dict:
    return f.evaluate(point)


def radial_power(n: int, m: int, signature: Signature | None = None) -> CliffordPolynomial:
    """|x|^(2m) as a scalar polynomial."""
    out = CliffordPolynomial.constant(n, 1, signature)
    r2 = CliffordPolynomial._raw(n, out.signature, {pack(tuple(2 if i == j else 0 for i in range(n))): 1 for j in range(n)})
    for _ in range(m):
        out = out * r2
    return out


def numeric_norm(values: dict) -> float:
    return math.sqrt(sum(v * v for v in values.values()))


def coeff_json(c: Coeff):
    return coeff_to_json(c)
