"""Exact scalar tower.

Level 0 is the rationals (``gmpy2.mpq``; plain ``int`` is accepted anywhere a
rational is).  Levels 1 and 2 are carried by :class:`Scalar`, a sparse
polynomial over the rationals in the formal symbols

    lambda   the spectral parameter
    rho      a square root, reduced by ``rho**2 -> rho_sq`` when ``rho_sq`` is set
    C, S     formal stand-ins for cosh(lambda*rho/n) and sinh(lambda*rho/n)

C and S are independent symbols: no relation such as C^2 - S^2 = 1 is used.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq

SYMBOLS = ("lambda", "rho", "C", "S")
_ZERO_EXP = (0, 0, 0, 0)

Rational = Union[int, mpq]
Coeff = Union[int, mpq, "Scalar"]


def rational(value) -> mpq:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings such as ``"-3/4"``.
    Floats are rejected on purpose.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, type(mpq(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            return mpq(text)
        except ValueError as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    if isinstance(value, Scalar) and value.is_constant():
        return value.constant()
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rational_str(q) -> str:
    """Canonical ``"a/b"`` (or ``"a"``) text for a rational."""
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Element of Q[lambda, rho, C, S] (modulo rho^2 - rho_sq when given).

    Instances are treated as immutable.
    """

    __slots__ = ("_t", "rho_sq")

    def __init__(self, terms: dict | None = None, rho_sq=None):
        self.rho_sq = None if rho_sq is None else rational(rho_sq)
        t: dict = {}
        for exp, c in (terms or {}).items():
            if not c:
                continue
            exp, c = self._reduce(tuple(exp), mpq(c))
            v = t.get(exp, 0) + c
            if v:
                t[exp] = v
            else:
                t.pop(exp, None)
        self._t = t

    def _reduce(self, exp, c):
        if self.rho_sq is not None and exp[1] >= 2:
            half, r = divmod(exp[1], 2)
            c = c * self.rho_sq**half
            exp = (exp[0], r, exp[2], exp[3])
        return exp, c

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, q) -> "Scalar":
        return cls({_ZERO_EXP: rational(q)})

    @classmethod
    def symbol(cls, name: str, rho_sq=None) -> "Scalar":
        exp = [0, 0, 0, 0]
        exp[SYMBOLS.index(name)] = 1
        return cls({tuple(exp): 1}, rho_sq=rho_sq)

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_constant(self) -> bool:
        return all(e == _ZERO_EXP for e in self._t)

    def constant(self) -> mpq:
        return mpq(self._t.get(_ZERO_EXP, 0))

    def lambda_degree(self) -> int:
        """Highest power of lambda present (-1 for zero)."""
        return max((e[0] for e in self._t), default=-1)

    def lambda_coeff(self, k: int) -> Coeff:
        """Coefficient of lambda**k, an element of Q[rho, C, S]."""
        sub = {(0,) + e[1:]: c for e, c in self._t.items() if e[0] == k}
        return simplify(Scalar(sub, self.rho_sq))

    def truncate_lambda(self, order: int) -> Coeff:
        """Drop every term of lambda-degree above ``order``."""
        sub = {e: c for e, c in self._t.items() if e[0] <= order}
        return simplify(Scalar(sub, self.rho_sq))

    def component(self, name: str) -> Coeff:
        """Part multiplying 1, C or S (``name`` in {"1", "C", "S"})."""
        idx = {"1": None, "C": 2, "S": 3}[name]
        sub = {}
        for e, c in self._t.items():
            if idx is None and e[2] == 0 and e[3] == 0:
                sub[e] = c
            elif idx is not None and e[idx] == 1 and e[5 - idx] == 0:
                sub[e[:idx] + (0,) + e[idx + 1:]] = c
        return simplify(Scalar(sub, self.rho_sq))

    def evaluate(self, **values: float) -> float:
        """Numeric value; missing symbols default to 0."""
        vals = [float(values.get(s, 0.0)) for s in SYMBOLS]
        total = 0.0
        for e, c in self._t.items():
            term = float(c)
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return total

    # arithmetic ---------------------------------------------------------

    def _merge_rho(self, other: "Scalar"):
        a, b = self.rho_sq, other.rho_sq
        if a is not None and b is not None and a != b:
            raise ValueError(f"incompatible rho^2 contexts: {a} vs {b}")
        return a if a is not None else b

    def __add__(self, other):
        if isinstance(other, Scalar):
            t = dict(self._t)
            for e, c in other._t.items():
                t[e] = t.get(e, 0) + c
            return simplify(Scalar(t, self._merge_rho(other)))
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            t = dict(self._t)
            t[_ZERO_EXP] = t.get(_ZERO_EXP, 0) + rational(other)
            return simplify(Scalar(t, self.rho_sq))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar({e: -c for e, c in self._t.items()}, self.rho_sq)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            t: dict = {}
            for e1, c1 in self._t.items():
                for e2, c2 in other._t.items():
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                    t[e] = t.get(e, 0) + c1 * c2
            return simplify(Scalar(t, self._merge_rho(other)))
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            q = rational(other)
            if not q:
                return 0
            return Scalar({e: c * q for e, c in self._t.items()}, self.rho_sq)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = rational(other)
        if not q:
            raise ZeroDivisionError("division of a Scalar by zero")
        return self * (1 / q)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("Scalar powers need a non-negative int exponent")
        out: Coeff = 1
        for _ in range(k):
            out = self * out
        return out

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._t == other._t
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            q = rational(other)
            if not q:
                return not self._t
            return self._t == {_ZERO_EXP: q}
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # text / json --------------------------------------------------------

    def _sorted(self) -> list:
        return sorted(self._t.items(), key=lambda ec: (sum(ec[0]), ec[0]))

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e, c in self._sorted():
            syms = [s if k == 1 else f"{s}^{k}" for s, k in zip(SYMBOLS, e) if k]
            if not syms:
                parts.append(rational_str(c))
            elif c == 1:
                parts.append("*".join(syms))
            elif c == -1:
                parts.append("-" + "*".join(syms))
            else:
                parts.append(rational_str(c) + "*" + "*".join(syms))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def to_json(self) -> dict:
        out = {"terms": [dict(zip(SYMBOLS, e), coeff=rational_str(c)) for e, c in self._sorted()]}
        if self.rho_sq is not None:
            out["rho_sq"] = rational_str(self.rho_sq)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Scalar":
        terms = {}
        for item in data["terms"]:
            terms[tuple(int(item.get(s, 0)) for s in SYMBOLS)] = rational(item["coeff"])
        return cls(terms, data.get("rho_sq"))


LAMBDA = Scalar.symbol("lambda")


def simplify(x) -> Coeff:
    """Collapse a constant :class:`Scalar` to a plain rational (or 0)."""
    if isinstance(x, Scalar):
        if not x._t:
            return 0
        if x.is_constant():
            return x.constant()
    return x


def coeff_to_json(c):
    if isinstance(c, Scalar):
        s = simplify(c)
        if not isinstance(s, Scalar):
            return rational_str(s)
        return s.to_json()
    return rational_str(c)


def coeff_from_json(data) -> Coeff:
    if isinstance(data, dict):
        return simplify(Scalar.from_json(data))
    return rational(data)


def lambda_degree(c: Coeff) -> int:
    if isinstance(c, Scalar):
        return c.lambda_degree()
    return 0 if c else -1


def lambda_coeff(c: Coeff, k: int) -> Coeff:
    if isinstance(c, Scalar):
        return c.lambda_coeff(k)
    return c if k == 0 else 0


def truncate_lambda(c: Coeff, order: int) -> Coeff:
    if isinstance(c, Scalar):
        return c.truncate_lambda(order)
    return c if order >= 0 else 0


def evaluate(c: Coeff, **values: float) -> float:
    if isinstance(c, Scalar):
        return c.evaluate(**values)
    return float(c)


def factorial(k: int) -> int:
    return math.factorial(k)


def double_factorial(k: int) -> int:
    """k!! with the convention (-1)!! = 0!! = 1."""
    if k <= 0:
        return 1
    return math.prod(range(k, 0, -2))


def as_coeffs(values: Iterable) -> list:
    return [c if isinstance(c, Scalar) else rational(c) for c in values]
