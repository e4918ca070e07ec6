"""Text surface for operator expressions and the identity-checking engine.

Grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' INT)*
    primary := atom | '(' expr ')' | '[' expr ',' expr ']' | '{' expr ',' expr '}'
             | 'exp' '(' expr [';' INT] ')'
    atom    := 'D' | 'X' | 'E' | 'Gamma' | 'Delta' | 'Id' | 'Zero'
             | 'X_' INT | 'd_' INT | 'xi_' INT | 'I_s' '(' expr ')'
             | 'lambda' | 'n' | INT | INT '/' INT   (no spaces inside a rational)

``'/'`` divides by a lambda-free scalar.  ``exp(A)`` is the terminating series
of a degree-lowering A; ``exp(A; N)`` is the series truncated after A^N/N!.
A unary minus in front of a number literal produces a negative literal;
anywhere else it is sugar for ``(-1)*``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .clifford import Signature, blade_indices, blade_str
from .opcalc import (
    Add,
    Anti,
    Atom,
    Comm,
    D,
    DELTA,
    DIM,
    Dim,
    Div,
    E,
    Exp,
    GAMMA,
    ID,
    LAM,
    Lam,
    Mul,
    Num,
    Op,
    Pow,
    Sub,
    X,
    apply_raw,
    hamiltonian,
    osp_relation_exprs,
    shifted_ladder_pair,
)
from .polyfun import BLADE_MASK, CliffordPolynomial, monomials_upto, pack, unpack
from .scalars import Scalar, lambda_coeff, lambda_degree, rational_str, truncate_lambda


class DSLError(ValueError):
    """Syntax or name error with a 1-based source position."""

    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rat>\d+/\d+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*(?:_(?:s\b|\d*))?)
  | (?P<sym>[-+*/^()\[\]{},;])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"D", "X", "E", "Gamma", "Delta", "Id", "Zero", "lambda", "n", "exp", "I_s"}
_INDEXED = {"X_": "X_", "d_": "d_", "xi_": "xi_"}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym: str) -> Token:
        t = self.next()
        if t.text != sym:
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise DSLError(f"expected {sym!r}, found {found}", self.text, t.pos)
        return t

    def parse(self) -> Op:
        node = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise DSLError(f"unexpected {t.text!r}", self.text, t.pos)
        return node

    def expr(self) -> Op:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Op:
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Op:
        if self.peek().text == "-":
            self.next()
            t = self.peek()
            if t.kind in ("int", "rat") and self.toks[self.i + 1].text != "^":
                self.next()
                return Num(-mpq(t.text))
            return Mul(Num(-1), self.unary())
        return self.power()

    def power(self) -> Op:
        node = self.primary()
        while self.peek().text == "^":
            self.next()
            t = self.next()
            if t.kind != "int":
                raise DSLError("exponent must be a non-negative integer", self.text, t.pos)
            node = Pow(node, int(t.text))
        return node

    def primary(self) -> Op:
        t = self.next()
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t.text == "[":
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("]")
            return Comm(a, b)
        if t.text == "{":
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("}")
            return Anti(a, b)
        if t.kind in ("int", "rat"):
            return Num(mpq(t.text))
        if t.kind == "name":
            return self.named(t)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise DSLError(f"unexpected {found}", self.text, t.pos)

    def named(self, t: Token) -> Op:
        name = t.text
        for prefix, atom in _INDEXED.items():
            if name.startswith(prefix) and name != "I_s":
                rest = name[len(prefix):]
                if not rest:
                    idx = self.next()
                    if idx.kind != "int":
                        raise DSLError(f"{prefix} needs an axis index", self.text, idx.pos)
                    rest = idx.text
                if not rest.isdigit() or int(rest) < 1:
                    raise DSLError(f"bad axis index in {name!r}", self.text, t.pos)
                return Atom(atom, int(rest))
        if name == "I_s":
            if self.peek().text != "(":
                raise DSLError("I_s takes exactly one argument: I_s(s)", self.text, t.pos)
            self.next()
            arg = self.expr()
            if self.peek().text != ")":
                raise DSLError("I_s takes exactly one argument: I_s(s)", self.text, self.peek().pos)
            self.next()
            return Atom("I_s", arg=arg)
        if name == "exp":
            self.expect("(")
            arg = self.expr()
            order = None
            if self.peek().text == ";":
                self.next()
                o = self.next()
                if o.kind != "int":
                    raise DSLError("truncation order must be a non-negative integer", self.text, o.pos)
                order = int(o.text)
            self.expect(")")
            return Exp(arg, order)
        if name == "lambda":
            return Lam()
        if name == "n":
            return Dim()
        if name in ("D", "X", "E", "Gamma", "Delta", "Id", "Zero"):
            return Atom(name)
        raise DSLError(f"unknown identifier {name!r}", self.text, t.pos)


def parse(text: str) -> Op:
    return _Parser(text).parse()


# ---------------------------------------------------------------- printer

_SUM, _PROD, _POW, _PRIM = 1, 2, 3, 4


def _prec(op: Op) -> int:
    if isinstance(op, (Add, Sub)):
        return _SUM
    if isinstance(op, (Mul, Div)):
        return _PROD
    if isinstance(op, Pow):
        return _POW
    if isinstance(op, Num) and op.value < 0:
        return _SUM
    return _PRIM


def _wrap(op: Op, level: int) -> str:
    s = to_text(op)
    if _prec(op) < level:
        return f"({s})"
    return s


def to_text(op: Op) -> str:
    if isinstance(op, Num):
        v = op.value
        if v < 0:
            return f"-{rational_str(-v)}"
        return rational_str(v)
    if isinstance(op, Lam):
        return "lambda"
    if isinstance(op, Dim):
        return "n"
    if isinstance(op, Atom):
        if op.name in ("X_", "d_", "xi_"):
            return f"{op.name}{op.index}"
        if op.name == "I_s":
            return f"I_s({to_text(op.arg)})"
        return op.name
    if isinstance(op, Add):
        return f"{_wrap(op.a, _SUM)} + {_wrap(op.b, _PROD)}"
    if isinstance(op, Sub):
        return f"{_wrap(op.a, _SUM)} - {_wrap(op.b, _PROD)}"
    if isinstance(op, Mul):
        return f"{_wrap(op.a, _PROD)} * {_wrap(op.b, _POW)}"
    if isinstance(op, Div):
        return f"{_wrap(op.a, _PROD)} / {_wrap(op.b, _POW)}"
    if isinstance(op, Pow):
        return f"{_wrap(op.a, _PRIM)}^{op.k}"
    if isinstance(op, Comm):
        return f"[{to_text(op.a)}, {to_text(op.b)}]"
    if isinstance(op, Anti):
        return f"{{{to_text(op.a)}, {to_text(op.b)}}}"
    if isinstance(op, Exp):
        if op.order is None:
            return f"exp({to_text(op.a)})"
        return f"exp({to_text(op.a)}; {op.order})"
    raise TypeError(f"cannot print {op!r}")


def random_ast(rng: random.Random, depth: int = 4) -> Op:
    """Random expression tree for round-trip testing."""
    if depth <= 0 or rng.random() < 0.25:
        r = rng.randrange(9)
        if r == 0:
            return Num(mpq(rng.randint(-9, 9), rng.randint(1, 5)))
        if r == 1:
            return Lam()
        if r == 2:
            return Dim()
        if r == 3:
            return Atom(rng.choice(["X_", "d_", "xi_"]), rng.randint(1, 4))
        if r == 4:
            return Atom("I_s", arg=Num(mpq(rng.randint(1, 9), rng.randint(1, 4))))
        return Atom(rng.choice(["D", "X", "E", "Gamma", "Delta", "Id", "Zero"]))
    kind = rng.randrange(8)
    a = random_ast(rng, depth - 1)
    if kind == 5:
        return Pow(a, rng.randint(0, 3))
    if kind == 6:
        return Exp(a, rng.choice([None, rng.randint(0, 6)]))
    b = random_ast(rng, depth - 1)
    return (Add, Sub, Mul, Div, Comm, Anti, Mul, Add)[kind](a, b)


# ---------------------------------------------------------------- identity checking


@dataclass
class IdentityReport:
    expression: str
    n: int
    bound: int
    verdict: str  # "zero" or "nonzero"
    witness: str | None = None
    image: str | None = None
    tag: str = ""
    lambda_order: int | None = None
    checked: int = 0
    max_lambda_order: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.verdict == "zero"

    def to_json(self) -> dict:
        out = {"expr": self.expression, "n": self.n, "bound": self.bound, "verdict": self.verdict}
        if self.tag:
            out["tag"] = self.tag
        if self.max_lambda_order is not None:
            out["lambda_order_checked"] = self.max_lambda_order
        if self.verdict != "zero":
            out["witness"] = self.witness
            out["image"] = self.image
            if self.lambda_order is not None:
                out["first_nonzero_lambda_order"] = self.lambda_order
        return out


def spanning_set(n: int, bound: int, signature: Signature | None = None):
    """(monomial exponent, blade mask) pairs in deterministic order."""
    signature = signature or Signature.euclidean(n)
    blades = sorted(range(1 << signature.n), key=lambda m: (m.bit_count(), blade_indices(m)))
    for alpha in monomials_upto(n, bound):
        for m in blades:
            yield alpha, m


def _lowest_lambda(t: dict) -> int | None:
    orders = []
    for v in t.values():
        if isinstance(v, Scalar):
            d = v.lambda_degree()
            orders.append(min(k for k in range(d + 1) if lambda_coeff(v, k)))
        else:
            orders.append(0)
    return min(orders) if orders else None


def _truncate_terms(t: dict, order: int | None) -> dict:
    if order is None:
        return t
    out = {}
    for k, v in t.items():
        w = truncate_lambda(v, order)
        if w:
            out[k] = w
    return out


def _function_text(alpha, mask: int) -> str:
    mono = "*".join(f"x{j + 1}" if a == 1 else f"x{j + 1}^{a}" for j, a in enumerate(alpha) if a)
    blade = blade_str(mask)
    if not mono:
        return blade
    return mono if blade == "1" else f"{mono}*{blade}"


def check_identity_zero(
    expr,
    n: int,
    degree_bound: int = 5,
    max_lambda_order: int | None = None,
    signature: Signature | None = None,
    tag: str = "",
    right_linear: bool = True,
) -> IdentityReport:
    """Decide whether ``expr`` vanishes on every x^alpha e_beta with |alpha| <= bound.

    Every atom acts on the left, so op(x^alpha e_beta) = op(x^alpha) e_beta
    and right multiplication by a blade is invertible.  With ``right_linear``
    only the scalar monomials are evaluated; the verdict and the first
    witness (blade 1 of the first failing monomial) are the same as for the
    full spanning set.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    signature = signature or Signature.euclidean(n)
    op = parse(expr) if isinstance(expr, str) else expr
    text = expr if isinstance(expr, str) else to_text(op)
    nm = signature.neg_mask
    checked = 0
    for alpha, mask in spanning_set(n, degree_bound, signature):
        if right_linear and mask:
            continue
        checked += 1
        image = apply_raw(op, {pack(alpha, mask): 1}, n, nm, 0, max_lambda_order)
        image = _truncate_terms(image, max_lambda_order)
        if image:
            poly = CliffordPolynomial._raw(n, signature, image)
            return IdentityReport(
                text, n, degree_bound, "nonzero", _function_text(alpha, mask), str(poly), tag,
                _lowest_lambda(image), checked, max_lambda_order,
            )
    if right_linear:
        checked *= 1 << signature.n
    return IdentityReport(text, n, degree_bound, "zero", tag=tag, checked=checked, max_lambda_order=max_lambda_order)


# ---------------------------------------------------------------- builtin suites

CORE_RELATIONS = (
    ("{X,D}=-2E-nI", "{X, D} + 2*E + n"),
    ("[E,D]=-D", "[E, D] + D"),
    ("[E,X]=X", "[E, X] - X"),
    ("[Delta,X]=2D", "[Delta, X] - 2*D"),
    ("XD=-E-Gamma", "X*D + E + Gamma"),
    ("[D,X^2]=-2X", "[D, X^2] + 2*X"),
    ("[E,X^2]=2X^2", "[E, X^2] - 2*X^2"),
    ("[E,Delta]=-2Delta", "[E, Delta] + 2*Delta"),
    ("[Delta,X^2]=-4E-2nI", "[Delta, X^2] + 4*E + 2*n"),
    ("Gamma=E+nI+DX", "Gamma - E - n - D*X"),
    ("{Gamma,X}=(n-1)X", "{Gamma, X} - (n - 1)*X"),
    ("{Gamma,D}=(n-1)D", "{Gamma, D} - (n - 1)*D"),
    ("[Gamma,X^2]=0", "[Gamma, X^2]"),
    ("[Gamma,Delta]=0", "[Gamma, Delta]"),
    ("[E,Gamma]=0", "[E, Gamma]"),
)

SUITES = ("core_relations", "osp12", "powers_dpm", "displaced", "landau")

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class SuiteItem:
    tag: str
    expr: str
    max_lambda_order: int | None = None
    bound: int | None = None


def powers_dpm_items(k_max: int = 6) -> list[SuiteItem]:
    items = [SuiteItem("[L-,L+]=2(2Gamma-nI)", "[X + D, X - D] - 2*(2*Gamma - n)")]
    items.append(SuiteItem("{L+,L-}=-4H0", "{X - D, X + D} - 2*Delta - 2*X^2"))
    for k in range(1, k_max + 1):
        j, odd = divmod(k, 2)
        if not odd:
            rhs = f"{4 * j}*(X - D)^{2 * j - 1}"
            items.append(SuiteItem(f"[L-,L+^{k}]=-{4 * j}L+^{2 * j - 1}", f"[X + D, (X - D)^{k}] + {rhs}"))
        else:
            items.append(SuiteItem(
                f"[L-,L+^{k}]=4L+^{2 * j}(Gamma-(n/2+{j}))",
                f"[X + D, (X - D)^{k}] - 4*(X - D)^{2 * j}*(Gamma - (n/2 + {j}))",
            ))
    return items


def osp_items(shifted: bool, include_extra: bool = False) -> list[SuiteItem]:
    prefix = "shifted " if shifted else ""
    return [
        SuiteItem(prefix + rel.label + ("" if rel.listed else " (derived)"), to_text(e))
        for rel, e in osp_relation_exprs(shifted, include_extra)
    ]


def displaced_items(order: int = DEFAULT_ORDER) -> list[SuiteItem]:
    ex = f"exp(lambda/n*(D - X); {order})"
    shift = "2*lambda/n*Gamma - lambda"
    return [
        SuiteItem("[D,lambda/n(D-X)]=lambda-(2lambda/n)Gamma", "[D, lambda/n*(D - X)] + 2*lambda/n*Gamma - lambda"),
        SuiteItem("[X,lambda/n(D-X)]=lambda-(2lambda/n)Gamma", "[X, lambda/n*(D - X)] + 2*lambda/n*Gamma - lambda"),
        SuiteItem("[J0,D-X]=-X", "[-1/2*Delta + E + n/2, D - X] + X"),
        SuiteItem("[D,(D-X)^2]=2(n-2Gamma)(D-X)", "[D, (D - X)^2] - 2*(n - 2*Gamma)*(D - X)"),
        SuiteItem("[D,(D-X)^2]=2(D-X)", "[D, (D - X)^2] - 2*(D - X)"),
        SuiteItem("exp(lambda/n(D-X))D=(D+(2lambda/n)Gamma-lambda)exp(lambda/n(D-X))",
                  f"{ex}*D - (D + {shift})*{ex}", order),
        SuiteItem("exp(lambda/n(D-X))X=(X+(2lambda/n)Gamma-lambda)exp(lambda/n(D-X))",
                  f"{ex}*X - (X + {shift})*{ex}", order),
    ]


def landau_items(n: int) -> list[SuiteItem]:
    pair = shifted_ladder_pair()
    h_mag = hamiltonian("H_lambda")
    h_gauge = hamiltonian("H_lambda_landau", n)
    h0 = hamiltonian("H0", n)
    up, down = "exp(lambda/n*D)", "exp(-1*lambda/n*D)"
    items = [
        SuiteItem("exp(lambda/n D)L+exp(-lambda/n D)=X-(D+lambda)+(2lambda/n)Gamma",
                  f"{up}*(X - D)*{down} - ({to_text(pair.raise_)})"),
        SuiteItem("exp(lambda/n D)L-exp(-lambda/n D)=X+(D-lambda)+(2lambda/n)Gamma",
                  f"{up}*(X + D)*{down} - ({to_text(pair.lower)})"),
        SuiteItem("{L+_lambda,L-_lambda}=-4H_lambda",
                  f"{{{to_text(pair.raise_)}, {to_text(pair.lower)}}} + 4*({to_text(h_mag)})"),
        SuiteItem("H_lambda=exp(lambda/n D)H0exp(-lambda/n D)", f"{to_text(h_mag)} - {up}*({to_text(h0)})*{down}"),
        SuiteItem("H_lambda(gauge form)=H_lambda(ladder form)", f"{to_text(h_gauge)} - ({to_text(h_mag)})"),
    ]
    return items + osp_items(shifted=True)


def suite_items(name: str, n: int) -> list[SuiteItem]:
    if name == "core_relations":
        return [SuiteItem(t, e) for t, e in CORE_RELATIONS]
    if name == "osp12":
        return osp_items(shifted=False)
    if name == "powers_dpm":
        return powers_dpm_items()
    if name == "displaced":
        return displaced_items()
    if name == "landau":
        return landau_items(n)
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")


def builtin_suite(name: str, n: int = 3, degree_bound: int = 5) -> list[IdentityReport]:
    out = []
    for item in suite_items(name, n):
        bound = degree_bound if item.bound is None else item.bound
        out.append(check_identity_zero(item.expr, n, bound, item.max_lambda_order, tag=item.tag))
    return out
