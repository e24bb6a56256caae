"""Sparse multivariate polynomials with exact coefficients.

Monomials are exponent tuples aligned with a VariableSet; a Polynomial
stores its nonzero terms sorted descending under the context's monomial
order, so equal polynomials compare equal structurally and printing is
canonical.  Variables are ordered x1 > x2 > ... > xd as given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .coeffring import RingSpec
from .errors import ParseError, ResourceLimitError, UsageError

DEFAULT_MAX_DEGREE = 64
DEFAULT_MAX_TERMS = 100_000

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class VariableSet:
    """Ordered, duplicate-free variable names."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise UsageError("need at least one variable")
        seen = set()
        for name in self.names:
            if not name or not name[0].isalpha():
                raise UsageError(f"bad variable name {name!r}")
            if not all(c.isalnum() or c == "_" for c in name):
                raise UsageError(f"bad variable name {name!r}")
            if name in seen:
                raise UsageError(f"duplicate variable name {name!r}")
            seen.add(name)

    @staticmethod
    def of(*names: str) -> "VariableSet":
        return VariableSet(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"unknown variable {name!r}") from None


DEGREVLEX = "degrevlex"
DEGLEX = "deglex"
LEX = "lex"
_ORDER_KINDS = (DEGREVLEX, DEGLEX, LEX)


@dataclass(frozen=True)
class MonomialOrder:
    """Term order on exponent tuples, largest variable first."""

    kind: str = DEGREVLEX

    def __post_init__(self) -> None:
        if self.kind not in _ORDER_KINDS:
            raise UsageError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial):
        if self.kind == LEX:
            return m
        if self.kind == DEGLEX:
            return (sum(m), m)
        return (sum(m), tuple(-e for e in reversed(m)))

    def __str__(self) -> str:
        return self.kind


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))

def monomial_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)

def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))

def monomial_degree(m: Monomial) -> int:
    return sum(m)


@dataclass(frozen=True)
class PolyRing:
    """A polynomial context: coefficient ring, variables, monomial order."""

    ring: RingSpec
    vars: VariableSet
    order: MonomialOrder = MonomialOrder()
    max_degree: int = field(default=DEFAULT_MAX_DEGREE, compare=False)
    max_terms: int = field(default=DEFAULT_MAX_TERMS, compare=False)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def from_terms(self, terms: dict[Monomial, object] | Iterable) -> "Polynomial":
        return Polynomial(self, terms)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(self.ring.one)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, r) -> "Polynomial":
        """The variable with index r (or name r) as a Polynomial."""
        if isinstance(r, str):
            r = self.vars.index(r)
        if not 0 <= r < self.nvars:
            raise UsageError(f"variable index {r} out of range")
        mon = tuple(1 if i == r else 0 for i in range(self.nvars))
        return Polynomial(self, {mon: self.ring.one})

    def monomial(self, mon: Monomial, coeff=None) -> "Polynomial":
        return Polynomial(self, {tuple(mon): self.ring.one if coeff is None else coeff})


class Polynomial:
    """Immutable sparse polynomial over a PolyRing."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: PolyRing, terms):
        object.__setattr__(self, "ctx", ctx)
        ring = ctx.ring
        acc: dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for mon, coeff in items:
            mon = tuple(mon)
            if len(mon) != ctx.nvars or any(e < 0 for e in mon):
                raise UsageError(f"bad exponent tuple {mon}")
            coeff = ring.normalize(coeff)
            if mon in acc:
                coeff = ring.add(acc[mon], coeff)
            acc[mon] = coeff
        clean = {m: c for m, c in acc.items() if c != 0}
        if len(clean) > ctx.max_terms:
            raise ResourceLimitError(
                f"polynomial exceeds {ctx.max_terms} terms")
        for m in clean:
            if monomial_degree(m) > ctx.max_degree:
                raise ResourceLimitError(
                    f"total degree {monomial_degree(m)} exceeds cap {ctx.max_degree}")
        key = ctx.order.key
        object.__setattr__(self, "terms",
                           tuple(sorted(clean.items(), key=lambda t: key(t[0]), reverse=True)))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1
                                  and monomial_degree(self.terms[0][0]) == 0)

    def constant_coeff(self):
        zero_mon = (0,) * self.ctx.nvars
        for mon, c in self.terms:
            if mon == zero_mon:
                return c
        return self.ctx.ring.zero

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m, _ in self.terms)

    def leading_term(self) -> tuple[Monomial, object]:
        if not self.terms:
            raise UsageError("zero polynomial has no leading term")
        return self.terms[0]

    def coeff_of(self, mon: Monomial):
        for m, c in self.terms:
            if m == tuple(mon):
                return c
        return self.ctx.ring.zero

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ctx.ring, self.ctx.vars, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ---------------------------------------------------------

    def _check_ctx(self, other: "Polynomial") -> None:
        if self.ctx != other.ctx:
            raise UsageError("mixed polynomial contexts")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ctx(other)
        ring = self.ctx.ring
        acc = dict(self.terms)
        for mon, c in other.terms:
            prev = acc.get(mon)
            acc[mon] = c if prev is None else ring.add(prev, c)
        return Polynomial(self.ctx, acc)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ctx(other)
        ring = self.ctx.ring
        acc = dict(self.terms)
        for mon, c in other.terms:
            prev = acc.get(mon)
            acc[mon] = ring.neg(c) if prev is None else ring.sub(prev, c)
        return Polynomial(self.ctx, acc)

    def __neg__(self) -> "Polynomial":
        ring = self.ctx.ring
        return Polynomial(self.ctx, {m: ring.neg(c) for m, c in self.terms})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ctx(other)
        ring = self.ctx.ring
        acc: dict[Monomial, object] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                mon = monomial_mul(m1, m2)
                c = ring.mul(c1, c2)
                prev = acc.get(mon)
                acc[mon] = c if prev is None else ring.add(prev, c)
        return Polynomial(self.ctx, acc)

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise UsageError("polynomial powers need a nonnegative int")
        out = self.ctx.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n > 1
            n >>= 1
            if base_needed:
                base = base * base
        return out

    def scale(self, c) -> "Polynomial":
        ring = self.ctx.ring
        c = ring.normalize(c)
        return Polynomial(self.ctx, {m: ring.mul(v, c) for m, v in self.terms})

    def mul_term(self, mon: Monomial, coeff) -> "Polynomial":
        """self * coeff * x^mon."""
        ring = self.ctx.ring
        coeff = ring.normalize(coeff)
        return Polynomial(self.ctx, {monomial_mul(m, mon): ring.mul(c, coeff)
                                     for m, c in self.terms})

    def sub_scaled(self, other: "Polynomial", coeff, mon: Monomial) -> "Polynomial":
        """self - coeff * x^mon * other, in one pass."""
        ring = self.ctx.ring
        acc = dict(self.terms)
        for m, c in other.terms:
            key_mon = monomial_mul(m, mon)
            delta = ring.mul(c, coeff)
            prev = acc.get(key_mon)
            acc[key_mon] = ring.neg(delta) if prev is None else ring.sub(prev, delta)
        return Polynomial(self.ctx, acc)

    # -- calculus -------------------------------------------------------------

    def partial_derivative(self, r: int) -> "Polynomial":
        """Formal partial derivative with respect to variable index r."""
        ctx = self.ctx
        if not 0 <= r < ctx.nvars:
            raise UsageError(f"variable index {r} out of range")
        ring = ctx.ring
        acc: dict[Monomial, object] = {}
        for mon, c in self.terms:
            e = mon[r]
            if e == 0:
                continue
            new = list(mon)
            new[r] = e - 1
            acc[tuple(new)] = ring.mul(c, ring.from_int(e))
        return Polynomial(ctx, acc)

    def taylor_coefficient(self, alpha: Monomial) -> "Polynomial":
        """Divided-power derivative: coefficient of T^alpha in f(x + T).

        On a monomial x^beta this is prod_r C(beta_r, alpha_r) x^(beta-alpha),
        with the binomials reduced into the coefficient ring, so it stays
        meaningful in positive characteristic.
        """
        ctx = self.ctx
        alpha = tuple(alpha)
        if len(alpha) != ctx.nvars or any(e < 0 for e in alpha):
            raise UsageError(f"bad derivative multi-index {alpha}")
        ring = ctx.ring
        acc: dict[Monomial, object] = {}
        for mon, c in self.terms:
            rest = monomial_div(mon, alpha)
            if rest is None:
                continue
            k = c
            for b, a in zip(mon, alpha):
                if a:
                    k = ring.mul(k, ring.from_int(math.comb(b, a)))
            if k == 0:
                continue
            prev = acc.get(rest)
            acc[rest] = k if prev is None else ring.add(prev, k)
        return Polynomial(ctx, acc)

    # -- printing ----------------------------------------------------------------

    def _format_monomial(self, mon: Monomial) -> str:
        parts = []
        for name, e in zip(self.ctx.vars, mon):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ctx.ring
        chunks: list[str] = []
        for mon, c in self.terms:
            mono = self._format_monomial(mon)
            negative = c < 0
            mag = -c if negative else c
            if not mono:
                body = ring.format_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{ring.format_coeff(mag)}*{mono}"
            if not chunks:
                chunks.append(f"-{body}" if negative else body)
            else:
                chunks.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


# -- parsing ---------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser for the expression grammar used everywhere:

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := (coefficient | variable | '(' expr ')') ('^' nat)?
        coefficient := integer | integer '/' integer   (the latter over Q only)
    """

    def __init__(self, text: str, ctx: PolyRing):
        self.text = text
        self.ctx = ctx
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _take(self, ch: str) -> None:
        if self._peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def _integer(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def _name(self) -> str:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self) -> Polynomial:
        out = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return out

    def _expr(self) -> Polynomial:
        sign = 1
        c = self._peek()
        if c in "+-":
            self.pos += 1
            sign = -1 if c == "-" else 1
        out = self._term()
        if sign < 0:
            out = -out
        while True:
            c = self._peek()
            if c == "+":
                self.pos += 1
                out = out + self._term()
            elif c == "-":
                self.pos += 1
                out = out - self._term()
            else:
                return out

    def _term(self) -> Polynomial:
        out = self._factor()
        while self._peek() == "*":
            self.pos += 1
            out = out * self._factor()
        return out

    def _factor(self) -> Polynomial:
        c = self._peek()
        if not c:
            raise ParseError("unexpected end of input", self.pos)
        if c == "(":
            self.pos += 1
            base = self._expr()
            self._take(")")
        elif c.isdigit():
            where = self.pos
            num = self._integer()
            den = None
            if self._peek() == "/":
                self.pos += 1
                try:
                    den = self._integer()
                except ParseError:
                    raise ParseError("expected a denominator", self.pos)
            try:
                base = self.ctx.constant(self.ctx.ring.parse_coeff(num, den))
            except UsageError as exc:
                raise ParseError(str(exc), where)
        elif c.isalpha():
            where = self.pos
            name = self._name()
            try:
                base = self.ctx.variable(name)
            except UsageError:
                raise ParseError(f"unknown variable {name!r}", where)
        else:
            raise ParseError(f"unexpected {c!r}", self.pos)
        if self._peek() == "^":
            self.pos += 1
            base = base ** self._integer()
        return base


def parse_polynomial(text: str, ctx: PolyRing) -> Polynomial:
    """Parse text into a Polynomial over ctx; raises ParseError on bad input."""
    return _Parser(text, ctx).parse()
