"""Exact rational functions over QQ in the coordinates of a patch.

A :class:`ScalarExpr` is a numerator/denominator pair of sparse
polynomials (sympy's ``PolyElement`` over QQ, graded lexicographic order).
Polynomials carry no denominator at all, so the common case never pays for
a gcd. When a denominator is present it is coprime to the numerator and
monic, which makes the representation canonical: two expressions are equal
iff their components are identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

__all__ = [
    "CoordinatePatch",
    "ScalarExpr",
    "ExprError",
    "ParseError",
    "parse_expr",
    "partial",
    "is_zero",
]

Number = Union[int, Fraction]


class ExprError(ValueError):
    """Raised on invalid expression operations (patch mismatch, bad index)."""


class ParseError(ExprError):
    """Syntax or resolution error in an expression, with a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


@lru_cache(maxsize=None)
def _poly_ring(names: tuple[str, ...]):
    R, *_ = ring(",".join(names), QQ, grlex)
    return R


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class CoordinatePatch:
    """An open set of R^n with named coordinates."""

    names: tuple[str, ...]
    ring: object = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ExprError("a patch needs at least one coordinate")
        for n in names:
            if not isinstance(n, str) or not _IDENT.match(n):
                raise ExprError(f"invalid coordinate name {n!r}")
        if len(set(names)) != len(names):
            raise ExprError(f"coordinate names must be distinct: {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "ring", _poly_ring(names))

    @property
    def dimension(self) -> int:
        return len(self.names)

    def index(self, coord: Union[int, str]) -> int:
        if isinstance(coord, str):
            try:
                return self.names.index(coord)
            except ValueError:
                raise ExprError(f"unknown coordinate {coord!r}") from None
        if not 0 <= coord < self.dimension:
            raise IndexError(
                f"coordinate index {coord} out of range for dimension {self.dimension}"
            )
        return coord

    def coord(self, coord: Union[int, str]) -> "ScalarExpr":
        i = self.index(coord)
        return ScalarExpr(self, self.ring.gens[i])

    def coords(self) -> tuple["ScalarExpr", ...]:
        return tuple(self.coord(i) for i in range(self.dimension))

    def const(self, value: Number) -> "ScalarExpr":
        return ScalarExpr(self, self.ring.ground_new(_to_qq(value)))

    def zero(self) -> "ScalarExpr":
        return ScalarExpr(self, self.ring.zero)

    def one(self) -> "ScalarExpr":
        return ScalarExpr(self, self.ring.one)

    def parse(self, text: str) -> "ScalarExpr":
        return parse_expr(text, self)

    def extends(self, other: "CoordinatePatch") -> bool:
        """True if ``other``'s coordinates are a prefix of ours."""
        return self.names[: other.dimension] == other.names

    def __str__(self) -> str:
        return "R^%d(%s)" % (self.dimension, ", ".join(self.names))


def _to_qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


class ScalarExpr:
    """Immutable canonical rational function on a :class:`CoordinatePatch`."""

    __slots__ = ("patch", "num", "den")

    def __init__(self, patch: CoordinatePatch, num: PolyElement, den: PolyElement | None = None):
        self.patch = patch
        if den is None or den.is_ground:
            if den is not None:
                if not den:
                    raise ZeroDivisionError("zero denominator")
                num = num.quo_ground(den.LC)
            self.num, self.den = num, None
            return
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = num, None
            return
        num, den = num.cancel(den)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        self.num = num
        self.den = None if den.is_ground else den

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "ScalarExpr":
        if isinstance(other, ScalarExpr):
            if other.patch != self.patch:
                raise ExprError(f"patch mismatch: {self.patch} vs {other.patch}")
            return other
        if isinstance(other, (int, Fraction)):
            return ScalarExpr(self.patch, self.patch.ring.ground_new(_to_qq(other)))
        return NotImplemented

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den is None and o.den is None:
            return ScalarExpr(self.patch, self.num + o.num)
        a_den = self.den if self.den is not None else self.patch.ring.one
        b_den = o.den if o.den is not None else self.patch.ring.one
        if a_den == b_den:
            return ScalarExpr(self.patch, self.num + o.num, a_den)
        return ScalarExpr(self.patch, self.num * b_den + o.num * a_den, a_den * b_den)

    __radd__ = __add__

    def __neg__(self):
        r = ScalarExpr.__new__(ScalarExpr)
        r.patch, r.num, r.den = self.patch, -self.num, self.den
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den is None and o.den is None:
            return ScalarExpr(self.patch, self.num * o.num)
        one = self.patch.ring.one
        return ScalarExpr(
            self.patch,
            self.num * o.num,
            (self.den if self.den is not None else one) * (o.den if o.den is not None else one),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        one = self.patch.ring.one
        return ScalarExpr(
            self.patch,
            self.num * (o.den if o.den is not None else one),
            (self.den if self.den is not None else one) * o.num,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ExprError("only natural exponents are supported")
        if self.den is None:
            return ScalarExpr(self.patch, self.num**n)
        return ScalarExpr(self.patch, self.num**n, self.den**n)

    # -- predicates ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_polynomial(self) -> bool:
        return self.den is None

    @property
    def is_constant(self) -> bool:
        return self.den is None and self.num.is_ground

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self.patch == other.patch and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.patch.names, tuple(sorted(self.num.items())),
                     None if self.den is None else tuple(sorted(self.den.items()))))

    # -- calculus ------------------------------------------------------
    def diff(self, coord: Union[int, str]) -> "ScalarExpr":
        i = self.patch.index(coord)
        x = self.patch.ring.gens[i]
        if self.den is None:
            return ScalarExpr(self.patch, self.num.diff(x))
        # quotient rule; canonicalisation cancels the common factor
        return ScalarExpr(
            self.patch,
            self.num.diff(x) * self.den - self.num * self.den.diff(x),
            self.den * self.den,
        )

    def degree(self) -> int:
        """Total degree of the numerator (-1 for zero)."""
        if not self.num:
            return -1
        return max(sum(m) for m in self.num.keys())

    def evaluate(self, point: Union[Sequence[Number], Mapping[str, Number]]) -> Fraction:
        """Exact value at a rational point."""
        if isinstance(point, Mapping):
            point = [point[n] for n in self.patch.names]
        if len(point) != self.patch.dimension:
            raise ExprError("point has the wrong dimension")
        vals = [Fraction(v) for v in point]

        def ev(p: PolyElement) -> Fraction:
            total = Fraction(0)
            for monom, c in p.items():
                t = Fraction(int(c.numerator), int(c.denominator))
                for v, e in zip(vals, monom):
                    if e:
                        t *= v**e
                total += t
            return total

        num = ev(self.num)
        if self.den is None:
            return num
        den = ev(self.den)
        if den == 0:
            raise ZeroDivisionError("point lies on the pole set")
        return num / den

    def lift(self, patch: CoordinatePatch) -> "ScalarExpr":
        """Pull back along the projection ``patch -> self.patch``."""
        if patch == self.patch:
            return self
        if not patch.extends(self.patch):
            raise ExprError(f"{patch} does not project onto {self.patch}")
        pad = (0,) * (patch.dimension - self.patch.dimension)

        def up(p: PolyElement) -> PolyElement:
            return patch.ring.from_dict({m + pad: c for m, c in p.items()})

        if self.den is None:
            return ScalarExpr(patch, up(self.num))
        return ScalarExpr(patch, up(self.num), up(self.den))

    # -- printing ------------------------------------------------------
    def __str__(self) -> str:
        num = _format_poly(self.num, self.patch.names)
        if self.den is None:
            return num
        if len(self.num) > 1 or num.startswith("-"):
            num = f"({num})"
        return "%s/(%s)" % (num, _format_poly(self.den, self.patch.names))

    def __repr__(self) -> str:
        return f"ScalarExpr({str(self)!r})"

    @property
    def is_atomic(self) -> bool:
        """True if printing needs no parentheses as a product factor."""
        return self.den is None and len(self.num) <= 1 and not str(self).startswith("-")


def _format_coeff(c) -> str:
    n, d = int(c.numerator), int(c.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _format_poly(p: PolyElement, names: Sequence[str]) -> str:
    if not p:
        return "0"
    parts: list[str] = []
    for monom, c in p.terms():  # grlex, leading term first
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e]
        neg = c < 0
        a = -c if neg else c
        if not factors:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(a) + "*" + "*".join(factors)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("id", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, patch: CoordinatePatch):
        self.text = text
        self.patch = patch
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> ScalarExpr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> ScalarExpr:
        e = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> ScalarExpr:
        e = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op_tok = self.take()
            f = self.factor()
            if op_tok[1] == "*":
                e = e * f
            else:
                if f.is_zero:
                    self.error("division by zero polynomial", op_tok)
                e = e / f
        return e

    def factor(self) -> ScalarExpr:
        b = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.error("exponent must be a natural number")
            self.take()
            b = b ** int(tok[1])
        return b

    def base(self) -> ScalarExpr:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return self.patch.const(int(val))
        if kind == "id":
            if self.peek()[:2] == ("op", "("):
                raise ParseError(f"non-rational function {val!r} is not supported", pos, self.text)
            if val not in self.patch.names:
                raise ParseError(f"unknown identifier {val!r}", pos, self.text)
            return self.patch.coord(val)
        if (kind, val) == ("op", "("):
            e = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return e
        if (kind, val) == ("op", "-"):
            return -self.factor()
        if kind == "end":
            raise ParseError("unexpected end of expression", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)


def parse_expr(text: str, patch: CoordinatePatch) -> ScalarExpr:
    """Parse ``text`` (``+ - * / ^``, integers, coordinate names) on ``patch``."""
    return _Parser(text, patch).parse()


def partial(e: ScalarExpr, coord: Union[int, str]) -> ScalarExpr:
    """Partial derivative along a coordinate (0-based index or name)."""
    return e.diff(coord)


def is_zero(e: ScalarExpr) -> bool:
    return e.is_zero
