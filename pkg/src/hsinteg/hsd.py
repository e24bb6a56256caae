"""Finite-length higher derivations on a polynomial ring.

A derivation of length n is encoded by its substitution images: each
variable x_r goes to x_r + c_{r,1} t + ... + c_{r,n} t^n, a TruncatedSeries
at level n.  Applying it to f means substituting; component i extracts the
t^i coefficient.  Composition, inverse, truncation, the scalar dot action
and ramification make these a group with extra structure; taylor_coeffs
rewrites a single component as a combination of divided-power operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Sequence

from .errors import UsageError
from .gbase import GroebnerBasis
from .jet import TruncatedSeries, substitute
from .poly import Monomial, Polynomial, PolyRing, monomial_degree


class HSDerivation:
    """Length-n higher derivation, stored through its variable images."""

    __slots__ = ("ctx", "length", "images")

    def __init__(self, ctx: PolyRing, images: Sequence[TruncatedSeries]):
        if len(images) != ctx.nvars:
            raise UsageError(f"need {ctx.nvars} images, got {len(images)}")
        level = images[0].level
        for r, s in enumerate(images):
            if not isinstance(s, TruncatedSeries) or s.ctx != ctx:
                raise UsageError("images must be series over the same context")
            if s.level != level:
                raise UsageError("images must share one level")
            if s.coeffs[0] != ctx.variable(r):
                raise UsageError(f"image of {ctx.vars.names[r]} must have constant term "
                                 f"{ctx.vars.names[r]}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "length", level)
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, name, value):
        raise AttributeError("HSDerivation is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(ctx: PolyRing, n: int) -> "HSDerivation":
        return HSDerivation(ctx, [TruncatedSeries.constant(ctx, ctx.variable(r), n)
                                  for r in range(ctx.nvars)])

    @staticmethod
    def from_images(images: Sequence[TruncatedSeries]) -> "HSDerivation":
        if not images:
            raise UsageError("need at least one image")
        return HSDerivation(images[0].ctx, images)

    @staticmethod
    def from_coefficients(ctx: PolyRing, table: Sequence[Sequence[Polynomial]],
                          n: int) -> "HSDerivation":
        """Images from coefficients c[r][i], i = 1..n (row r may be shorter)."""
        images = []
        for r in range(ctx.nvars):
            row = list(table[r]) if r < len(table) else []
            coeffs = [ctx.variable(r)] + row
            images.append(TruncatedSeries(ctx, coeffs, n))
        return HSDerivation(ctx, images)

    @staticmethod
    def from_derivation(ctx: PolyRing, coeffs: Sequence[Polynomial]) -> "HSDerivation":
        """Length-1 derivation x_r -> x_r + a_r t."""
        return HSDerivation.from_coefficients(ctx, [[a] for a in coeffs], 1)

    # -- basic structure ---------------------------------------------------

    def coefficient(self, r: int, i: int) -> Polynomial:
        """c_{r,i} = component i applied to variable r."""
        return self.images[r].coeffs[i]

    def coefficient_table(self) -> list[list[Polynomial]]:
        return [list(s.coeffs[1:]) for s in self.images]

    def __eq__(self, other) -> bool:
        return (isinstance(other, HSDerivation) and self.ctx == other.ctx
                and self.images == other.images)

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(all(c.is_zero() for c in s.coeffs[1:]) for s in self.images)

    def __repr__(self) -> str:
        body = ", ".join(f"{name} -> {s}" for name, s in zip(self.ctx.vars, self.images))
        return f"HSDerivation({body})"

    # -- action on the ring --------------------------------------------------

    def apply(self, f: Polynomial) -> TruncatedSeries:
        return substitute(f, self.images, self.length)

    def component(self, i: int, f: Polynomial) -> Polynomial:
        """D_i(f): the t^i coefficient of the image of f."""
        if not 0 <= i <= self.length:
            raise UsageError(f"component {i} out of range 0..{self.length}")
        return self.apply(f).coeffs[i]

    # -- group structure -------------------------------------------------------

    def compose(self, other: "HSDerivation") -> "HSDerivation":
        """The derivation with components sum_{i+j=l} D_i D'_j (self = D)."""
        if self.ctx != other.ctx:
            raise UsageError("mixed contexts in compose")
        if self.length != other.length:
            raise UsageError("compose needs equal lengths")
        n = self.length
        images = []
        for r in range(self.ctx.nvars):
            acc = TruncatedSeries.constant(self.ctx, self.ctx.zero, n)
            for j, q in enumerate(other.images[r].coeffs):
                if not q.is_zero():
                    acc = acc + self.apply(q).shift(j)
            images.append(acc)
        return HSDerivation(self.ctx, images)

    def invert(self) -> "HSDerivation":
        """Group inverse, found by triangular back-substitution on images."""
        ctx, n = self.ctx, self.length
        images = []
        for r in range(ctx.nvars):
            coeffs = [ctx.variable(r)]
            for l in range(1, n + 1):
                s = ctx.zero
                for j in range(l):
                    s = s + self.apply(coeffs[j]).coeffs[l - j]
                coeffs.append(-s)
            images.append(TruncatedSeries(ctx, coeffs, n))
        return HSDerivation(ctx, images)

    def truncate(self, m: int) -> "HSDerivation":
        if not 0 <= m <= self.length:
            raise UsageError(f"cannot truncate length {self.length} to {m}")
        return HSDerivation(self.ctx, [s.truncate(m) for s in self.images])

    def dot_action(self, a) -> "HSDerivation":
        """a . D = (a^i D_i): substitute t -> a t, for a polynomial or scalar a."""
        ctx = self.ctx
        if not isinstance(a, Polynomial):
            a = ctx.constant(ctx.ring.normalize(a))
        images = []
        for s in self.images:
            pw = ctx.one
            coeffs = [s.coeffs[0]]
            for i in range(1, self.length + 1):
                pw = pw * a
                coeffs.append(s.coeffs[i] * pw)
            images.append(TruncatedSeries(self.ctx, coeffs))
        return HSDerivation(self.ctx, images)

    def ramify(self, m: int) -> "HSDerivation":
        """Substitute t -> t^m: component D_i moves to slot i*m, length n*m."""
        if m < 1:
            raise UsageError("ramification index must be >= 1")
        n = self.length
        images = []
        for s in self.images:
            coeffs = [self.ctx.zero] * (n * m + 1)
            for i, c in enumerate(s.coeffs):
                coeffs[i * m] = c
            images.append(TruncatedSeries(self.ctx, coeffs, n * m))
        return HSDerivation(self.ctx, images)

    def ell(self) -> int:
        """Largest r with D_1 = ... = D_r = 0 (length n for the identity)."""
        for i in range(1, self.length + 1):
            if any(not s.coeffs[i].is_zero() for s in self.images):
                return i - 1
        return self.length

    def taylor_extend(self, new_length: int) -> "HSDerivation":
        """Zero-padded extension to a larger length."""
        if new_length < self.length:
            raise UsageError("taylor_extend cannot shorten; use truncate")
        return HSDerivation(self.ctx, [TruncatedSeries(self.ctx, s.coeffs, new_length)
                                       for s in self.images])

    # -- divided-power decomposition ------------------------------------------

    def taylor_coeffs(self, i: int) -> "TaylorForm":
        """Write D_i as sum_alpha C_alpha Delta^alpha, 0 < |alpha| <= i."""
        if not 1 <= i <= self.length:
            raise UsageError(f"component {i} out of range 1..{self.length}")
        ctx = self.ctx
        d = ctx.nvars

        comp_cache: dict[tuple[int, int, int], Polynomial] = {}

        def comp_sum(r: int, parts: int, total: int) -> Polynomial:
            # sum over compositions of `total` into `parts` positive parts of
            # the products of image coefficients of x_r
            if parts == 0:
                return ctx.one if total == 0 else ctx.zero
            if total < parts:
                return ctx.zero
            key = (r, parts, total)
            hit = comp_cache.get(key)
            if hit is not None:
                return hit
            out = ctx.zero
            for b in range(1, total - parts + 2):
                c = self.images[r].coeffs[b] if b <= self.length else ctx.zero
                if c.is_zero():
                    continue
                rest = comp_sum(r, parts - 1, total - b)
                if not rest.is_zero():
                    out = out + c * rest
            comp_cache[key] = out
            return out

        coeffs: dict[Monomial, Polynomial] = {}
        for alpha in iter_product(range(i + 1), repeat=d):
            if not 0 < sum(alpha) <= i:
                continue
            supp = [r for r in range(d) if alpha[r] > 0]
            total_extra = i - sum(alpha)
            value = ctx.zero

            def assign(k: int, remaining: int, acc: Polynomial) -> None:
                nonlocal value
                if acc.is_zero():
                    return
                if k == len(supp) - 1:
                    r = supp[k]
                    part = comp_sum(r, alpha[r], alpha[r] + remaining)
                    if not part.is_zero():
                        value = value + acc * part
                    return
                r = supp[k]
                for extra in range(remaining + 1):
                    part = comp_sum(r, alpha[r], alpha[r] + extra)
                    if not part.is_zero():
                        assign(k + 1, remaining - extra, acc * part)

            assign(0, total_extra, ctx.one)
            if not value.is_zero():
                coeffs[alpha] = value
        return TaylorForm(ctx, i, coeffs)


@dataclass(frozen=True)
class TaylorForm:
    """A component expressed over divided-power operators: sum C_alpha Delta^alpha."""

    ctx: PolyRing
    index: int
    coeffs: dict[Monomial, Polynomial]

    def apply(self, f: Polynomial) -> Polynomial:
        out = self.ctx.zero
        for alpha, c in sorted(self.coeffs.items()):
            part = f.taylor_coefficient(alpha)
            if not part.is_zero():
                out = out + c * part
        return out


def verify_leibniz(D: HSDerivation, f: Polynomial, g: Polynomial) -> bool:
    """Check the convolution rule on a pair: image of fg = image f * image g."""
    return D.apply(f * g) == D.apply(f) * D.apply(g)


def is_logarithmic(D: HSDerivation, ideal_gens: Sequence[Polynomial],
                   gb: GroebnerBasis) -> bool:
    """True when every component maps every ideal generator back into the ideal."""
    for f in ideal_gens:
        image = D.apply(f)
        for i in range(1, D.length + 1):
            if not gb.reduce_poly(image.coeffs[i]).is_zero():
                return False
    return True


def sparse_assemble(D: HSDerivation, deltas: Sequence[Sequence[Polynomial]],
                    m: int, n: int) -> HSDerivation:
    """Spread D out by t -> t^m and drop extra derivations in the top slots.

    With q = floor(n/m), component D_i of D lands in slot i*m for i <= q and
    deltas[j-1] lands in slot q*m + j for j = 1..n - q*m.  Requires
    n >= m > 1; the slots never collide.
    """
    if not (isinstance(m, int) and isinstance(n, int) and n >= m > 1):
        raise UsageError("sparse_assemble needs n >= m > 1")
    ctx = D.ctx
    q, r = divmod(n, m)
    if q > D.length:
        raise UsageError(f"base derivation too short: need length >= {q}")
    if len(deltas) != r:
        raise UsageError(f"need exactly {r} extra derivations, got {len(deltas)}")
    for delta in deltas:
        if len(delta) != ctx.nvars:
            raise UsageError("each extra derivation needs one coefficient per variable")
    images = []
    for var in range(ctx.nvars):
        coeffs = [ctx.zero] * (n + 1)
        for i in range(q + 1):
            coeffs[i * m] = D.images[var].coeffs[i]
        for j in range(1, r + 1):
            coeffs[q * m + j] = deltas[j - 1][var]
        images.append(TruncatedSeries(ctx, coeffs, n))
    return HSDerivation(ctx, images)
