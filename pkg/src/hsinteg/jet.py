"""Truncated polynomial series: R[[t]] / (t^(n+1)) with R a PolyRing.

A TruncatedSeries at level n stores n+1 polynomial coefficients.  These
series are where finite higher-derivation data lives: a derivation of
length n is a substitution sending each variable to such a series.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ResourceLimitError, UsageError
from .poly import Polynomial, PolyRing

MAX_LEVEL = 64


class TruncatedSeries:
    """Polynomial coefficients c_0 + c_1 t + ... + c_n t^n, fixed level n."""

    __slots__ = ("ctx", "level", "coeffs")

    def __init__(self, ctx: PolyRing, coeffs: Sequence[Polynomial], level: int | None = None):
        if level is None:
            level = len(coeffs) - 1
        if level < 0:
            raise UsageError("series level must be nonnegative")
        if level > MAX_LEVEL:
            raise ResourceLimitError(f"series level {level} exceeds cap {MAX_LEVEL}")
        coeffs = list(coeffs)
        if len(coeffs) > level + 1:
            raise UsageError("more coefficients than the level allows")
        for c in coeffs:
            if not isinstance(c, Polynomial) or c.ctx != ctx:
                raise UsageError("series coefficients must share one context")
        while len(coeffs) < level + 1:
            coeffs.append(ctx.zero)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @staticmethod
    def constant(ctx: PolyRing, value: Polynomial, level: int) -> "TruncatedSeries":
        return TruncatedSeries(ctx, [value], level)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedSeries) and self.ctx == other.ctx
                and self.level == other.level and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def _check(self, other: "TruncatedSeries") -> None:
        if self.ctx != other.ctx:
            raise UsageError("mixed series contexts")
        if self.level != other.level:
            raise UsageError(f"series level mismatch: {self.level} vs {other.level}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ctx, [-a for a in self.coeffs])

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = self.level
        out = [self.ctx.zero] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(self.ctx, out)

    def __pow__(self, k: int) -> "TruncatedSeries":
        if not isinstance(k, int) or k < 0:
            raise UsageError("series powers need a nonnegative int")
        out = TruncatedSeries.constant(self.ctx, self.ctx.one, self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    def scale_poly(self, g: Polynomial) -> "TruncatedSeries":
        return TruncatedSeries(self.ctx, [g * c for c in self.coeffs])

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k, same level (top coefficients fall off)."""
        if k < 0:
            raise UsageError("shift must be nonnegative")
        zeros = [self.ctx.zero] * min(k, self.level + 1)
        return TruncatedSeries(self.ctx, zeros + list(self.coeffs[: max(0, self.level + 1 - k)]))

    def truncate(self, m: int) -> "TruncatedSeries":
        """Drop to level m <= current level."""
        if m > self.level:
            raise UsageError(f"cannot truncate level {self.level} up to {m}")
        return TruncatedSeries(self.ctx, self.coeffs[: m + 1])

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = str(c)
            if " " in body and i > 0:
                body = f"({body})"
            parts.append(body if i == 0 else
                         (f"{body}*t" if i == 1 else f"{body}*t^{i}"))
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"


def unit_inverse(u: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series whose constant term is a unit.

    Triangular back-substitution: v_0 = a_0^(-1) and
    v_k = -v_0 * sum_{i=1..k} a_i v_{k-i}.
    """
    ctx = u.ctx
    a0 = u.coeffs[0]
    if not a0.is_constant():
        raise UsageError("series is not invertible: non-constant lowest coefficient")
    c0 = a0.constant_coeff()
    if not ctx.ring.is_unit(c0):
        raise UsageError(f"series is not invertible: {c0!r} is not a unit")
    v0 = ctx.constant(ctx.ring.invert(c0))
    inv = [v0]
    for k in range(1, u.level + 1):
        s = ctx.zero
        for i in range(1, k + 1):
            if not u.coeffs[i].is_zero():
                s = s + u.coeffs[i] * inv[k - i]
        inv.append(-(v0 * s))
    return TruncatedSeries(ctx, inv)


def substitute(f: Polynomial, images: Sequence[TruncatedSeries], level: int) -> TruncatedSeries:
    """Evaluate f at the given per-variable series, truncated to the level.

    Horner-style recursion over the variables; the result is the image of f
    under the ring map determined by the images.
    """
    ctx = f.ctx
    if len(images) != ctx.nvars:
        raise UsageError(f"need {ctx.nvars} images, got {len(images)}")
    for s in images:
        if not isinstance(s, TruncatedSeries) or s.ctx != ctx:
            raise UsageError("substitution images must share the polynomial context")
        if s.level != level:
            raise UsageError(f"image level {s.level} does not match {level}")

    def recurse(terms: list[tuple[tuple[int, ...], object]], r: int) -> TruncatedSeries:
        if r == ctx.nvars:
            c = terms[0][1] if terms else ctx.ring.zero
            return TruncatedSeries.constant(ctx, ctx.constant(c), level)
        groups: dict[int, list] = {}
        for mon, c in terms:
            groups.setdefault(mon[r], []).append((mon, c))
        exps = sorted(groups, reverse=True)
        acc = None
        prev = 0
        for e in exps:
            part = recurse(groups[e], r + 1)
            if acc is None:
                acc = part
            else:
                acc = acc * images[r] ** (prev - e) + part
            prev = e
        if acc is None:
            return TruncatedSeries.constant(ctx, ctx.zero, level)
        if prev:
            acc = acc * images[r] ** prev
        return acc

    return recurse(list(f.terms), 0)
