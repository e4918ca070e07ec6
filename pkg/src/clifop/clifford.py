"""Real Clifford algebras R_{p,q} with bitmask blades.

Generator e_j (1-based) is bit j-1 of a blade mask.  In ``Signature(p, q)``
the first p generators square to +1 and the remaining q square to -1, so
``Signature(0, n)`` is the algebra R_{0,n} with e_j^2 = -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .scalars import Coeff, Scalar, coeff_from_json, coeff_to_json, rational, simplify

MAX_DIM = 16


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be non-negative")
        if not 1 <= self.p + self.q <= MAX_DIM:
            raise ValueError(f"dimension must lie in 1..{MAX_DIM}, got {self.p + self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def neg_mask(self) -> int:
        """Bits of the generators that square to -1."""
        return ((1 << self.n) - 1) ^ ((1 << self.p) - 1)

    def square(self, j: int) -> int:
        """e_j^2 for the 1-based generator index j."""
        return -1 if (self.neg_mask >> (j - 1)) & 1 else 1

    @classmethod
    def euclidean(cls, n: int) -> "Signature":
        """R_{0,n}: every generator squares to -1."""
        return cls(0, n)


def grade(mask: int) -> int:
    return mask.bit_count()


def reorder_sign(a: int, b: int) -> int:
    """Sign (+1/-1) from moving the generators of b past those of a."""
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=1 << 18)
def blade_product(a: int, b: int, neg_mask: int) -> tuple[int, int]:
    """Product of basis blades: returns (sign, mask)."""
    sign = reorder_sign(a, b)
    if (a & b & neg_mask).bit_count() & 1:
        sign = -sign
    return sign, a ^ b


def blade_product_bruteforce(a: int, b: int, neg_mask: int) -> tuple[int, int]:
    """Reference product by explicit generator-word reduction (bubble sort)."""
    word = [j for j in range(MAX_DIM) if (a >> j) & 1] + [j for j in range(MAX_DIM) if (b >> j) & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(word) - 1:
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
            elif word[i] == word[i + 1]:
                if (neg_mask >> word[i]) & 1:
                    sign = -sign
                del word[i:i + 2]
                changed = True
                continue
            i += 1
    mask = 0
    for j in word:
        mask |= 1 << j
    return sign, mask


_INVOLUTIONS = ("main", "reversion", "conjugation")


def involution_sign(mask: int, kind: str) -> int:
    r = mask.bit_count()
    if kind == "main":
        e = r
    elif kind == "reversion":
        e = r * (r - 1) // 2
    elif kind == "conjugation":
        e = r * (r + 1) // 2
    else:
        raise ValueError(f"unknown involution {kind!r}; expected one of {_INVOLUTIONS}")
    return -1 if e & 1 else 1


def blade_from_indices(indices) -> int:
    """Mask for e_{j1} e_{j2} ... with strictly increasing 1-based indices."""
    mask = 0
    last = 0
    for j in indices:
        if j <= last:
            raise ValueError("blade indices must be strictly increasing and >= 1")
        mask |= 1 << (j - 1)
        last = j
    return mask


def blade_indices(mask: int) -> list[int]:
    return [j + 1 for j in range(MAX_DIM) if (mask >> j) & 1]


def blade_str(mask: int) -> str:
    if not mask:
        return "1"
    return "".join(f"e{j}" for j in blade_indices(mask))


class Multivector:
    """Element of R_{p,q}: map blade mask -> exact coefficient."""

    __slots__ = ("signature", "_t")

    def __init__(self, signature: Signature, terms: dict | None = None):
        self.signature = signature
        full = (1 << signature.n) - 1
        t = {}
        for mask, c in (terms or {}).items():
            if mask & ~full:
                raise ValueError(f"blade {blade_str(mask)} outside dimension {signature.n}")
            c = simplify(c)
            if c:
                t[mask] = c
        self._t = t

    @classmethod
    def _raw(cls, signature, t):
        obj = cls.__new__(cls)
        obj.signature = signature
        obj._t = t
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def scalar(cls, signature: Signature, value) -> "Multivector":
        return cls(signature, {0: value})

    @classmethod
    def generator(cls, signature: Signature, j: int, coeff=1) -> "Multivector":
        if not 1 <= j <= signature.n:
            raise ValueError(f"generator index {j} outside 1..{signature.n}")
        return cls(signature, {1 << (j - 1): coeff})

    @classmethod
    def blade(cls, signature: Signature, indices, coeff=1) -> "Multivector":
        return cls(signature, {blade_from_indices(indices): coeff})

    @classmethod
    def vector(cls, signature: Signature, coords) -> "Multivector":
        return cls(signature, {1 << j: c for j, c in enumerate(coords)})

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def coeff(self, mask: int) -> Coeff:
        return self._t.get(mask, 0)

    def grades(self) -> set[int]:
        return {m.bit_count() for m in self._t}

    def scalar_part(self) -> Coeff:
        return self._t.get(0, 0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def _check(self, other: "Multivector"):
        if self.signature != other.signature:
            raise ValueError(f"signature mismatch: {self.signature} vs {other.signature}")

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.signature, other)
        self._check(other)
        t = dict(self._t)
        for m, c in other._t.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Multivector._raw(self.signature, t)

    __radd__ = __add__

    def __neg__(self):
        return Multivector._raw(self.signature, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Multivector":
        if not c:
            return Multivector._raw(self.signature, {})
        out = {}
        for m, v in self._t.items():
            w = v * c
            if w:
                out[m] = w
        return Multivector._raw(self.signature, out)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / rational(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, Multivector):
            return self.signature == other.signature and self._t == other._t
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            if not other:
                return not self._t
            return self._t == {0: other}
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # text / json --------------------------------------------------------

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m in sorted(self._t, key=lambda m: (m.bit_count(), blade_indices(m))):
            c = self._t[m]
            cs = str(c) if not isinstance(c, Scalar) else f"({c})"
            if m == 0:
                parts.append(cs)
            elif c == 1:
                parts.append(blade_str(m))
            elif c == -1:
                parts.append("-" + blade_str(m))
            else:
                parts.append(f"{cs}*{blade_str(m)}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Multivector({self.signature.p},{self.signature.q}: {self})"

    def to_json(self) -> dict:
        terms = [
            {"blade": blade_indices(m), "coeff": coeff_to_json(self._t[m])}
            for m in sorted(self._t, key=lambda m: (m.bit_count(), blade_indices(m)))
        ]
        return {"signature": [self.signature.p, self.signature.q], "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "Multivector":
        sig = Signature(*data["signature"])
        t: dict = {}
        for item in data["terms"]:
            m = blade_from_indices(item["blade"])
            t[m] = t.get(m, 0) + coeff_from_json(item["coeff"])
        return cls(sig, t)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    nm = a.signature.neg_mask
    out: dict = {}
    for ma, ca in a._t.items():
        for mb, cb in b._t.items():
            s, m = blade_product(ma, mb, nm)
            v = ca * cb
            out[m] = out.get(m, 0) + (v if s > 0 else -v)
    return Multivector(a.signature, out)


def grade_project(a: Multivector, r: int) -> Multivector:
    if not 0 <= r <= a.signature.n:
        raise ValueError(f"grade {r} outside 0..{a.signature.n}")
    return Multivector._raw(a.signature, {m: c for m, c in a._t.items() if m.bit_count() == r})


def involution(a: Multivector, kind: str) -> Multivector:
    return Multivector._raw(
        a.signature,
        {m: (c if involution_sign(m, kind) > 0 else -c) for m, c in a._t.items()},
    )


def clifford_inner(a: Multivector, b: Multivector) -> Coeff:
    """(a, b) = [conjugation(a) * b]_0."""
    a._check(b)
    nm = a.signature.neg_mask
    total: Coeff = 0
    for m, ca in a._t.items():
        cb = b._t.get(m)
        if cb is None:
            continue
        s, _ = blade_product(m, m, nm)
        s *= involution_sign(m, "conjugation")
        total = total + (ca * cb if s > 0 else -(ca * cb))
    return simplify(total)


def wedge_dot(x: Multivector, a: Multivector) -> tuple[Multivector, Multivector]:
    """Split x*a into (x . a, x ^ a) for a grade-1 x."""
    if x.grades() - {1}:
        raise ValueError("wedge_dot needs a pure grade-1 left factor")
    x._check(a)
    dot = Multivector(a.signature)
    wedge = Multivector(a.signature)
    for r in sorted(a.grades()):
        ar = grade_project(a, r)
        xa = geometric_product(x, ar)
        ax = geometric_product(ar, x)
        sign = -1 if r & 1 else 1
        dot = dot + (xa - ax.scale(sign)).scale(rational("1/2"))
        wedge = wedge + (xa + ax.scale(sign)).scale(rational("1/2"))
    return dot, wedge


def vector_inverse(x: Multivector) -> Multivector:
    """x / x^2 for a grade-1 x with x^2 != 0."""
    if x.grades() - {1}:
        raise ValueError("vector_inverse needs a grade-1 argument")
    sq = geometric_product(x, x)
    if sq.grades() - {0} or not sq:
        raise ZeroDivisionError("vector has zero square")
    return x.scale(1 / rational(sq.scalar_part()))
