"""Operator calculus on Clifford polynomials and Gaussian-weighted functions.

Operators are immutable expression trees.  ``apply`` interprets a tree as a
left endomorphism.  On a weighted function exp(g|x|^2) P every derivative
acts through the envelope, d_j -> d_j + 2 g x_j, so D, E, Delta and Gamma
need no special casing for the Gaussian family.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .clifford import Signature
from .polyfun import (
    BLADE_MASK,
    CliffordPolynomial,
    WeightedFunction,
    k_add,
    k_by_degree,
    k_iadd,
    k_left_blade,
    k_mul_x,
    k_partial,
    k_scale,
    key_degree,
)
from .scalars import LAMBDA, Coeff, Scalar, lambda_degree, rational, simplify, truncate_lambda

ATOM_NAMES = ("D", "X", "E", "Gamma", "Delta", "Id", "Zero", "X_", "d_", "xi_", "I_s")


class OperatorError(ValueError):
    pass


# ---------------------------------------------------------------- AST


class Op:
    """Base class with operator-overloading sugar."""

    def __add__(self, other):
        return Add(self, as_op(other))

    def __radd__(self, other):
        return Add(as_op(other), self)

    def __sub__(self, other):
        return Sub(self, as_op(other))

    def __rsub__(self, other):
        return Sub(as_op(other), self)

    def __mul__(self, other):
        return Mul(self, as_op(other))

    def __rmul__(self, other):
        return Mul(as_op(other), self)

    def __neg__(self):
        return Mul(Num(mpq(-1)), self)

    def __pow__(self, k: int):
        return Pow(self, k)

    def __truediv__(self, other):
        return Div(self, as_op(other))

    def __str__(self) -> str:
        from .dsl import to_text

        return to_text(self)


@dataclass(frozen=True, eq=True)
class Atom(Op):
    name: str
    index: int | None = None
    arg: "Op | None" = None

    def __post_init__(self):
        if self.name not in ATOM_NAMES:
            raise OperatorError(f"unknown operator atom {self.name!r}")
        if self.name in ("X_", "d_", "xi_") and (self.index is None or self.index < 1):
            raise OperatorError(f"atom {self.name} needs a positive axis index")
        if self.name == "I_s" and self.arg is None:
            raise OperatorError("I_s needs an argument")


@dataclass(frozen=True, eq=True)
class Num(Op):
    value: object  # mpq

    def __post_init__(self):
        object.__setattr__(self, "value", rational(self.value))


@dataclass(frozen=True, eq=True)
class Lam(Op):
    pass


@dataclass(frozen=True, eq=True)
class Dim(Op):
    pass


@dataclass(frozen=True, eq=True)
class Add(Op):
    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Sub(Op):
    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Mul(Op):
    """Composition a∘b (b acts first); scalar factors commute out."""

    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Div(Op):
    """a divided by a nonzero, lambda-free scalar expression."""

    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Comm(Op):
    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Anti(Op):
    a: Op
    b: Op


@dataclass(frozen=True, eq=True)
class Pow(Op):
    a: Op
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise OperatorError("operator powers need a non-negative integer exponent")


@dataclass(frozen=True, eq=True)
class Exp(Op):
    """exp(a); ``order=None`` means a terminating (nilpotent) series."""

    a: Op
    order: int | None = None


def as_op(x) -> Op:
    if isinstance(x, Op):
        return x
    if isinstance(x, Scalar) and x == LAMBDA:
        return Lam()
    return Num(rational(x))


D = Atom("D")
X = Atom("X")
E = Atom("E")
GAMMA = Atom("Gamma")
DELTA = Atom("Delta")
ID = Atom("Id")
ZERO = Atom("Zero")
LAM = Lam()
DIM = Dim()


def X_(j: int) -> Atom:
    return Atom("X_", j)


def d_(j: int) -> Atom:
    return Atom("d_", j)


def xi_(j: int) -> Atom:
    return Atom("xi_", j)


def I_s(s) -> Atom:
    return Atom("I_s", arg=as_op(s))


def comm(a, b) -> Comm:
    return Comm(as_op(a), as_op(b))


def anti(a, b) -> Anti:
    return Anti(as_op(a), as_op(b))


def exp_op(a, order: int | None = None) -> Exp:
    return Exp(as_op(a), order)


def children(op: Op) -> tuple:
    if isinstance(op, (Add, Sub, Mul, Div, Comm, Anti)):
        return (op.a, op.b)
    if isinstance(op, (Pow, Exp)):
        return (op.a,)
    if isinstance(op, Atom) and op.arg is not None:
        return (op.arg,)
    return ()


def is_scalar(op: Op) -> bool:
    """True when the expression is a multiple of the identity built from numbers, n and lambda."""
    if isinstance(op, (Num, Lam, Dim)):
        return True
    if isinstance(op, Atom):
        return op.name in ("Id", "Zero")
    if isinstance(op, (Comm,)):
        return is_scalar(op.a) and is_scalar(op.b)
    if isinstance(op, Exp):
        return False
    return all(is_scalar(c) for c in children(op))


def scalar_value(op: Op, n: int) -> Coeff:
    """Evaluate a scalar expression in the ring Q[lambda]."""
    if isinstance(op, Num):
        return op.value
    if isinstance(op, Lam):
        return LAMBDA
    if isinstance(op, Dim):
        return mpq(n)
    if isinstance(op, Atom):
        if op.name == "Id":
            return mpq(1)
        if op.name == "Zero":
            return mpq(0)
        raise OperatorError(f"{op.name} is not a scalar")
    if isinstance(op, Add):
        return simplify(scalar_value(op.a, n) + scalar_value(op.b, n))
    if isinstance(op, Sub):
        return simplify(scalar_value(op.a, n) - scalar_value(op.b, n))
    if isinstance(op, Mul):
        return simplify(scalar_value(op.a, n) * scalar_value(op.b, n))
    if isinstance(op, Div):
        return simplify(scalar_value(op.a, n) * _inverse(op.b, n))
    if isinstance(op, Comm):
        return mpq(0)
    if isinstance(op, Anti):
        return simplify(2 * scalar_value(op.a, n) * scalar_value(op.b, n))
    if isinstance(op, Pow):
        return simplify(scalar_value(op.a, n) ** op.k)
    raise OperatorError(f"not a scalar expression: {op!r}")


def _inverse(op: Op, n: int) -> mpq:
    if not is_scalar(op):
        raise OperatorError("division is only defined by scalar expressions")
    v = scalar_value(op, n)
    if isinstance(v, Scalar):
        raise OperatorError("division by a lambda-dependent scalar is not supported")
    if not v:
        raise ZeroDivisionError("division by zero in operator expression")
    return 1 / mpq(v)


def degree_range(op: Op) -> tuple[int, int] | None:
    """Bounds on how an operator shifts polynomial degree (None if unbounded)."""
    if isinstance(op, (Num, Lam, Dim)):
        return (0, 0)
    if isinstance(op, Atom):
        return {
            "D": (-1, -1), "X": (1, 1), "E": (0, 0), "Gamma": (0, 0), "Delta": (-2, -2),
            "Id": (0, 0), "Zero": (0, 0), "X_": (1, 1), "d_": (-1, -1), "xi_": (0, 0), "I_s": (0, 0),
        }[op.name]
    if isinstance(op, (Add, Sub)):
        ra, rb = degree_range(op.a), degree_range(op.b)
        if ra is None or rb is None:
            return None
        if is_zero_literal(op.a):
            return rb
        if is_zero_literal(op.b):
            return ra
        return (min(ra[0], rb[0]), max(ra[1], rb[1]))
    if isinstance(op, (Mul, Comm, Anti)):
        ra, rb = degree_range(op.a), degree_range(op.b)
        if ra is None or rb is None:
            return None
        return (ra[0] + rb[0], ra[1] + rb[1])
    if isinstance(op, Div):
        return degree_range(op.a)
    if isinstance(op, Pow):
        r = degree_range(op.a)
        if r is None:
            return None
        return (r[0] * op.k, r[1] * op.k) if op.k else (0, 0)
    if isinstance(op, Exp):
        r = degree_range(op.a)
        if r is None:
            return None
        if r[1] < 0:
            return (-(1 << 30), 0)
        return None
    return None


def is_zero_literal(op: Op) -> bool:
    return (isinstance(op, Num) and not op.value) or (isinstance(op, Atom) and op.name == "Zero")


# ---------------------------------------------------------------- interpreter


@dataclass
class _Ctx:
    n: int
    neg_mask: int
    g: object  # envelope exponent (mpq)
    lam_order: int | None = None
    exact: bool = True
    track_exact: bool = False


def _dw(t: dict, j: int, ctx: _Ctx) -> dict:
    """d/dx_{j+1} acting through the envelope."""
    out = k_partial(t, j)
    if ctx.g:
        k_iadd(out, k_mul_x(t, j), 2 * ctx.g)
    return out


def _atom(op: Atom, t: dict, ctx: _Ctx) -> dict:
    name = op.name
    n, nm = ctx.n, ctx.neg_mask
    if name == "Id":
        return dict(t)
    if name == "Zero":
        return {}
    if name == "X":
        out: dict = {}
        for j in range(n):
            k_iadd(out, k_left_blade(k_mul_x(t, j), 1 << j, nm))
        return out
    if name == "D":
        out = {}
        for j in range(n):
            k_iadd(out, k_left_blade(_dw(t, j, ctx), 1 << j, nm))
        return out
    if name == "E":
        if not ctx.g:
            out = {}
            for k, v in t.items():
                d = key_degree(k)
                if d:
                    out[k] = v * d
            return out
        out = {}
        for j in range(n):
            k_iadd(out, k_mul_x(_dw(t, j, ctx), j))
        return out
    if name == "Delta":
        out = {}
        for j in range(n):
            k_iadd(out, _dw(_dw(t, j, ctx), j, ctx))
        return out
    if name == "Gamma":
        # -sum_{j<k} e_j e_k (x_j d_k - x_k d_j)
        out = {}
        dws = [_dw(t, j, ctx) for j in range(n)]
        for j in range(n):
            for k in range(j + 1, n):
                inner = k_add(k_mul_x(dws[k], j), k_mul_x(dws[j], k), -1)
                k_iadd(out, k_left_blade(inner, (1 << j) | (1 << k), nm), -1)
        return out
    if name in ("X_", "d_", "xi_"):
        j = op.index - 1
        if j >= n:
            raise OperatorError(f"axis {op.index} exceeds dimension {n}")
        if name == "X_":
            return k_mul_x(t, j)
        if name == "d_":
            return _dw(t, j, ctx)
        return k_left_blade(t, 1 << j, nm)
    if name == "I_s":
        if ctx.g:
            raise OperatorError("I_s acts on polynomials only (envelope must be 0)")
        s = scalar_value(op.arg, n)
        if isinstance(s, Scalar) or s <= 0:
            raise OperatorError(f"I_s needs a positive rational parameter, got {s}")
        out = {}
        for k, v in t.items():
            out[k] = v / (key_degree(k) + s) if not isinstance(v, Scalar) else v * (1 / (key_degree(k) + s))
        return out
    raise OperatorError(f"unhandled atom {name}")


def _trunc(t: dict, ctx: _Ctx) -> dict:
    if ctx.lam_order is None:
        return t
    out = {}
    for k, v in t.items():
        if isinstance(v, Scalar):
            v = truncate_lambda(v, ctx.lam_order)
        if v:
            out[k] = v
    return out


def _scale(t: dict, c: Coeff, ctx: _Ctx) -> dict:
    out = k_scale(t, c)
    if isinstance(c, Scalar):
        out = _trunc(out, ctx)
    return out


def _apply(op: Op, t: dict, ctx: _Ctx) -> dict:
    if not t:
        return {}
    if isinstance(op, Atom):
        return _atom(op, t, ctx)
    if isinstance(op, (Num, Lam, Dim)):
        return _scale(t, scalar_value(op, ctx.n), ctx)
    if isinstance(op, Add):
        out = _apply(op.a, t, ctx)
        return k_iadd(dict(out), _apply(op.b, t, ctx))
    if isinstance(op, Sub):
        out = _apply(op.a, t, ctx)
        return k_iadd(dict(out), _apply(op.b, t, ctx), -1)
    if isinstance(op, Mul):
        if is_scalar(op.a):
            return _scale(_apply(op.b, t, ctx), scalar_value(op.a, ctx.n), ctx)
        return _apply(op.a, _apply(op.b, t, ctx), ctx)
    if isinstance(op, Div):
        return _scale(_apply(op.a, t, ctx), _inverse(op.b, ctx.n), ctx)
    if isinstance(op, Comm):
        ab = _apply(op.a, _apply(op.b, t, ctx), ctx)
        ba = _apply(op.b, _apply(op.a, t, ctx), ctx)
        return k_iadd(dict(ab), ba, -1)
    if isinstance(op, Anti):
        ab = _apply(op.a, _apply(op.b, t, ctx), ctx)
        ba = _apply(op.b, _apply(op.a, t, ctx), ctx)
        return k_iadd(dict(ab), ba)
    if isinstance(op, Pow):
        out = t
        for _ in range(op.k):
            out = _apply(op.a, out, ctx)
            if not out:
                break
        return dict(out)
    if isinstance(op, Exp):
        return _exp(op, t, ctx)
    raise OperatorError(f"cannot apply {op!r}")


def _exp(op: Exp, t: dict, ctx: _Ctx) -> dict:
    if op.order is None:
        r = degree_range(op.a)
        if ctx.g or r is None or r[1] >= 0:
            raise OperatorError(
                "exp without a truncation order needs a strictly degree-lowering operator acting on polynomials"
            )
        limit = None
    else:
        limit = op.order
    total = dict(t)
    cur = t
    k = 0
    while True:
        k += 1
        if limit is not None and k > limit:
            if ctx.track_exact and _apply(op.a, cur, ctx):
                ctx.exact = False
            break
        cur = _scale(_apply(op.a, cur, ctx), mpq(1, k), ctx)
        if not cur:
            break
        k_iadd(total, cur)
    return total


def _unpack_input(f):
    if isinstance(f, WeightedFunction):
        return f.poly, f.envelope
    if isinstance(f, CliffordPolynomial):
        return f, mpq(0)
    raise TypeError(f"cannot apply an operator to {type(f).__name__}")


def apply(op: Op, f, lam_order: int | None = None):
    """Apply ``op`` to a CliffordPolynomial or WeightedFunction.

    ``lam_order`` drops lambda powers above that order as they appear; the
    coefficients of lambda^0..lambda^lam_order stay exact.
    """
    poly, g = _unpack_input(f)
    ctx = _Ctx(poly.n, poly.signature.neg_mask, g, lam_order)
    out = _apply(op, poly.raw_terms, ctx)
    res = CliffordPolynomial._raw(poly.n, poly.signature, out)
    return WeightedFunction(g, res) if isinstance(f, WeightedFunction) else res


def apply_raw(op: Op, t: dict, n: int, neg_mask: int, g=0, lam_order=None) -> dict:
    return _apply(op, t, _Ctx(n, neg_mask, rational(g), lam_order))


# ---------------------------------------------------------------- named operations


def commutator(a, b) -> Comm:
    return comm(a, b)


def anticommutator(a, b) -> Anti:
    return anti(a, b)


def integral_operator_Is(s, p: CliffordPolynomial) -> CliffordPolynomial:
    """I_s: multiplies the degree-k part by 1/(k+s)."""
    s = rational(s)
    if s <= 0:
        raise OperatorError("I_s needs s > 0")
    return apply(I_s(s), p)


def euler_shift(s) -> Op:
    """E_s = E + s."""
    return E + Num(rational(s))


def exp_nilpotent(op: Op, f):
    """Terminating exp(op) f for a strictly degree-lowering ``op``."""
    return apply(Exp(op, None), f)


def exp_truncated(op: Op, order: int, f, lam_order: int | None = None):
    """sum_{k<=order} op^k/k! applied to f; returns (result, exact).

    ``exact`` is True when the series terminated within ``order`` terms, so
    the result is the full exponential.
    """
    if order < 0:
        raise OperatorError("truncation order must be >= 0")
    poly, g = _unpack_input(f)
    ctx = _Ctx(poly.n, poly.signature.neg_mask, g, lam_order, track_exact=True)
    out = _exp(Exp(op, order), poly.raw_terms, ctx)
    res = CliffordPolynomial._raw(poly.n, poly.signature, out)
    res = WeightedFunction(g, res) if isinstance(f, WeightedFunction) else res
    return res, ctx.exact


def radial_square(n: int) -> Op:
    """|x|^2 = sum_j X_j^2 as an operator."""
    out: Op = Pow(X_(1), 2)
    for j in range(2, n + 1):
        out = Add(out, Pow(X_(j), 2))
    return out


HALF = Num(mpq(1, 2))


def hamiltonian(kind: str, n: int | None = None) -> Op:
    """H0, J0, H_lambda (magnetic form) or H_lambda_landau (gauge-term form)."""
    if kind == "H0":
        if n is None:
            raise OperatorError("H0 needs the dimension n (it contains |x|^2)")
        return HALF * (Num(-1) * DELTA + radial_square(n))
    if kind == "J0":
        return Num(mpq(-1, 2)) * DELTA + E + DIM / Num(2)
    if kind == "H_lambda":
        gauge = (Num(2) * LAM / DIM) * (X - Num(2) * LAM * (ID - GAMMA / DIM) * GAMMA)
        return HALF * ((D - LAM) * (D + LAM) - X**2 - gauge)
    if kind == "H_lambda_landau":
        if n is None:
            raise OperatorError("the gauge-term form needs n (it contains |x|^2)")
        helmholtz = Num(mpq(-1, 2)) * (DELTA + LAM**2) + HALF * radial_square(n)
        gauge = Num(-1) * (Num(2) * LAM / DIM) * (X - Num(2) * LAM * (ID - GAMMA / DIM) * GAMMA)
        return helmholtz + HALF * gauge
    raise OperatorError(f"unknown Hamiltonian {kind!r}")


def weyl_heisenberg_ladder(j: int, sign: str) -> Op:
    """sqrt(2)-free ladder X_j - d_j (sign '+') or X_j + d_j (sign '-')."""
    if sign == "+":
        return X_(j) - d_(j)
    if sign == "-":
        return X_(j) + d_(j)
    raise OperatorError("sign must be '+' or '-'")


@dataclass(frozen=True)
class LadderPair:
    """L^+ = X - D, L^- = X + D; the normalized ladders are 2^(sqrt2_power/2) L^+-."""

    raise_: Op
    lower: Op
    sqrt2_power: int = -1

    def squared_norm_factor(self) -> mpq:
        """Factor picked up by squared norms when passing to the normalized ladders."""
        return mpq(2) ** self.sqrt2_power


def ladder_pair() -> LadderPair:
    return LadderPair(X - D, X + D)


def shifted_vector_op() -> Op:
    """X - lambda + (2 lambda/n) Gamma."""
    return X - LAM + (Num(2) * LAM / DIM) * GAMMA


def shifted_ladder_pair() -> LadderPair:
    """X - (D + lambda) + (2 lambda/n) Gamma and X + (D - lambda) + (2 lambda/n) Gamma."""
    g = (Num(2) * LAM / DIM) * GAMMA
    return LadderPair(X - (D + LAM) + g, X + (D - LAM) + g)


# ---------------------------------------------------------------- osp(1|2)


@dataclass(frozen=True)
class OspGenerators:
    P_minus: Op
    P_plus: Op
    Q: Op
    R_plus: Op  # real part r with R^+ = i r
    R_minus: Op  # real part with R^- = i r


def osp_generators(shifted: bool = False) -> OspGenerators:
    if not shifted:
        return OspGenerators(Num(mpq(-1, 4)) * DELTA, HALF * X**2, HALF * (E + DIM / Num(2)), X, D)
    xl = shifted_vector_op()
    return OspGenerators(
        Num(mpq(-1, 4)) * DELTA,
        HALF * xl**2,
        HALF * (E + DIM / Num(2)) + (LAM / (Num(2) * DIM)) * D,
        xl,
        D,
    )


@dataclass(frozen=True)
class OspRelation:
    """[A, B]_{+/-} = c * C with A, B, C named generators.

    ``listed`` marks the nine defining relations; the three odd-odd
    anticommutators are consequences of the realization and are kept as
    extra checks.
    """

    label: str
    kind: str  # "comm" or "anti"
    a: str
    b: str
    coeff: mpq
    c: str | None
    listed: bool = True

    def i_power_shift(self) -> int:
        odd = {"R+", "R-"}
        lhs = (self.a in odd) + (self.b in odd)
        rhs = 1 if self.c in odd else 0
        return rhs - lhs

    def real_sign(self) -> int:
        """Sign absorbed when every R is replaced by i times its real part.

        i^lhs [A,B] = c i^rhs C gives [A',B'] = c i^(rhs-lhs) C'; the shift is
        always even, so i^shift is +1 or -1.
        """
        if self.c is None or not self.coeff:
            return 1
        shift = self.i_power_shift()
        if shift % 2:
            raise OperatorError("odd i-power shift: relation is not real")
        return 1 if shift % 4 == 0 else -1


OSP_RELATIONS = (
    OspRelation("[R+,P+]=0", "comm", "R+", "P+", mpq(0), None),
    OspRelation("[R+,P-]=1/2 R-", "comm", "R+", "P-", mpq(1, 2), "R-"),
    OspRelation("[Q,R+]=1/2 R+", "comm", "Q", "R+", mpq(1, 2), "R+"),
    OspRelation("[R-,P+]=-R+", "comm", "R-", "P+", mpq(-1), "R+"),
    OspRelation("[R-,P-]=0", "comm", "R-", "P-", mpq(0), None),
    OspRelation("[Q,R-]=-1/2 R-", "comm", "Q", "R-", mpq(-1, 2), "R-"),
    OspRelation("[P-,P+]=Q", "comm", "P-", "P+", mpq(1), "Q"),
    OspRelation("[Q,P+]=P+", "comm", "Q", "P+", mpq(1), "P+"),
    OspRelation("[Q,P-]=-P-", "comm", "Q", "P-", mpq(-1), "P-"),
    OspRelation("{R+,R-}=4Q", "anti", "R+", "R-", mpq(4), "Q", listed=False),
    OspRelation("{R+,R+}=-4P+", "anti", "R+", "R+", mpq(-4), "P+", listed=False),
    OspRelation("{R-,R-}=-8P-", "anti", "R-", "R-", mpq(-8), "P-", listed=False),
)


def osp_relation_exprs(shifted: bool = False, include_extra: bool = False) -> list[tuple[OspRelation, Op]]:
    """Each relation as a real operator expression that should vanish."""
    g = osp_generators(shifted)
    table = {"P-": g.P_minus, "P+": g.P_plus, "Q": g.Q, "R+": g.R_plus, "R-": g.R_minus}
    out = []
    for rel in OSP_RELATIONS:
        if not rel.listed and not include_extra:
            continue
        a, b = table[rel.a], table[rel.b]
        lhs = Comm(a, b) if rel.kind == "comm" else Anti(a, b)
        if rel.c is None or not rel.coeff:
            out.append((rel, lhs))
        else:
            out.append((rel, lhs - Num(rel.coeff * rel.real_sign()) * table[rel.c]))
    return out
