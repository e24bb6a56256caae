"""Groebner machinery for ideals and submodules of R^p, over fields and Z.

Over a field the completion is Buchberger's algorithm (Gebauer-Moller pair
trimming in the ideal case); over Z it computes strong bases by closing
under S-polynomials and gcd (G-) polynomials, with Euclidean reduction that
leaves every remainder coefficient in [0, lc) for the applicable divisors.
Final bases are fully interreduced and sorted, hence canonical for the
module they generate.  Every basis element carries its expression in terms
of the original generators, so divisions can be lifted back to them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InternalCheckError, ResourceLimitError, UsageError
from .poly import (Monomial, MonomialOrder, Polynomial, PolyRing,
                   monomial_div, monomial_lcm, monomial_mul)


@dataclass(frozen=True)
class Guards:
    """Resource limits shared by the heavier computations."""

    max_pairs: int = 200_000
    deadline: float | None = None  # absolute time.monotonic() value

    def check_time(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("timeout exceeded")


@dataclass(frozen=True)
class ModuleOrder:
    """Term-over-position order on R^p; ties broken toward lower positions.

    With elim_block = k > 0, any term in positions < k beats any term in
    positions >= k; that block structure is what syzygy elimination uses.
    """

    base: MonomialOrder
    elim_block: int = 0

    def key(self, pos: int, mon: Monomial):
        block = 1 if self.elim_block and pos < self.elim_block else 0
        return (block, self.base.key(mon), -pos)


class ModuleVector:
    """Element of R^p: a fixed-length tuple of polynomials over one context."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx: PolyRing, entries: Sequence[Polynomial]):
        entries = tuple(entries)
        if not entries:
            raise UsageError("module vectors need at least one component")
        for e in entries:
            if not isinstance(e, Polynomial) or e.ctx != ctx:
                raise UsageError("module vector components must share one context")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    @staticmethod
    def zero(ctx: PolyRing, p: int) -> "ModuleVector":
        return ModuleVector(ctx, (ctx.zero,) * p)

    @staticmethod
    def unit_term(ctx: PolyRing, p: int, pos: int, mon: Monomial, coeff) -> "ModuleVector":
        entries = [ctx.zero] * p
        entries[pos] = ctx.monomial(mon, coeff)
        return ModuleVector(ctx, entries)

    @property
    def p(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleVector) and self.ctx == other.ctx
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash(self.entries)

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector(self.ctx, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector(self.ctx, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ModuleVector":
        return ModuleVector(self.ctx, [-a for a in self.entries])

    def scale_poly(self, g: Polynomial) -> "ModuleVector":
        return ModuleVector(self.ctx, [g * a for a in self.entries])

    def mul_term(self, mon: Monomial, coeff) -> "ModuleVector":
        return ModuleVector(self.ctx, [a.mul_term(mon, coeff) for a in self.entries])

    def sub_scaled(self, other: "ModuleVector", coeff, mon: Monomial) -> "ModuleVector":
        return ModuleVector(self.ctx, [a.sub_scaled(b, coeff, mon)
                                       for a, b in zip(self.entries, other.entries)])

    def leading_term(self, morder: ModuleOrder) -> tuple[int, Monomial, object]:
        """(position, monomial, coefficient) of the largest term."""
        best = None
        best_key = None
        for pos, entry in enumerate(self.entries):
            if entry.is_zero():
                continue
            mon, c = entry.leading_term()
            k = morder.key(pos, mon)
            if best_key is None or k > best_key:
                best_key = k
                best = (pos, mon, c)
        if best is None:
            raise UsageError("zero vector has no leading term")
        return best

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    def __repr__(self) -> str:
        return f"ModuleVector{self}"


def wrap_poly(f: Polynomial) -> ModuleVector:
    return ModuleVector(f.ctx, (f,))


@dataclass(frozen=True)
class LiftedReduction:
    """Outcome of dividing `vector` by a basis: vector = sum q_i b_i + remainder."""

    vector: ModuleVector
    remainder: ModuleVector
    quotients: tuple[Polynomial, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with g = gcd(a,b) > 0 and u*a + v*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _Divider:
    """Shared strong-division routine against a fixed list of vectors."""

    def __init__(self, ctx: PolyRing, morder: ModuleOrder, basis: Sequence[ModuleVector]):
        self.ctx = ctx
        self.ring = ctx.ring
        self.morder = morder
        self.basis = list(basis)
        self.lts = [b.leading_term(morder) for b in self.basis]

    def divide(self, v: ModuleVector) -> tuple[ModuleVector, list[Polynomial]]:
        ctx, ring = self.ctx, self.ring
        is_field = ring.is_field
        quots = [ctx.zero] * len(self.basis)
        rem = ModuleVector.zero(ctx, v.p)
        h = v
        while not h.is_zero():
            pos, mon, c = h.leading_term(self.morder)
            progressed = False
            for idx, (gpos, gmon, gc) in enumerate(self.lts):
                if gpos != pos:
                    continue
                delta = monomial_div(mon, gmon)
                if delta is None:
                    continue
                if is_field:
                    q = ring.try_exact_divide(c, gc)
                else:
                    q = c // gc  # gc > 0, leaves c mod gc in [0, gc)
                    if q == 0:
                        continue
                h = h.sub_scaled(self.basis[idx], q, delta)
                quots[idx] = quots[idx] + ctx.monomial(delta, q)
                progressed = True
                break
            if not progressed:
                term = ModuleVector.unit_term(ctx, v.p, pos, mon, c)
                rem = rem + term
                h = h - term
        return rem, quots


def _normalize(ring, vec: ModuleVector, rep: list[Polynomial], morder: ModuleOrder):
    """Monic over a field; positive leading coefficient over Z."""
    _, _, c = vec.leading_term(morder)
    if ring.is_field:
        if c != ring.one:
            inv = ring.invert(c)
            vec = ModuleVector(vec.ctx, [e.scale(inv) for e in vec.entries])
            rep = [r.scale(inv) for r in rep]
    elif c < 0:
        vec = -vec
        rep = [-r for r in rep]
    return vec, rep


class GroebnerBasis:
    """Canonical Groebner basis of a submodule of R^p with lift tracking."""

    def __init__(self, ctx: PolyRing, morder: ModuleOrder, p: int,
                 originals: Sequence[ModuleVector],
                 basis: Sequence[ModuleVector],
                 reps: Sequence[Sequence[Polynomial]]):
        self.ctx = ctx
        self.morder = morder
        self.p = p
        self.originals = tuple(originals)
        self.basis = tuple(basis)
        self.reps = tuple(tuple(r) for r in reps)
        self._divider = _Divider(ctx, morder, self.basis)

    # -- queries ---------------------------------------------------------

    def normal_form(self, v: ModuleVector) -> LiftedReduction:
        """Divide v by the basis; the returned identity is re-verified."""
        if v.ctx != self.ctx or v.p != self.p:
            raise UsageError("vector does not match the basis module")
        rem, quots = self._divider.divide(v)
        check = rem
        for q, b in zip(quots, self.basis):
            if not q.is_zero():
                check = check + b.scale_poly(q)
        if check != v:
            raise InternalCheckError("lift identity violated in normal form")
        return LiftedReduction(v, rem, tuple(quots))

    def contains(self, v: ModuleVector) -> bool:
        return self.normal_form(v).remainder.is_zero()

    def lift_to_originals(self, v: ModuleVector):
        """Coefficients u with v = sum u_j originals_j, or None if v is outside."""
        red = self.normal_form(v)
        if not red.remainder.is_zero():
            return None
        out = [self.ctx.zero] * len(self.originals)
        for q, rep in zip(red.quotients, self.reps):
            if q.is_zero():
                continue
            for j, r in enumerate(rep):
                if not r.is_zero():
                    out[j] = out[j] + q * r
        check = ModuleVector.zero(self.ctx, self.p)
        for u, g in zip(out, self.originals):
            if not u.is_zero():
                check = check + g.scale_poly(u)
        if check != v:
            raise InternalCheckError("lift to original generators failed verification")
        return tuple(out)

    # -- ideal (p == 1) conveniences --------------------------------------

    def poly_basis(self) -> list[Polynomial]:
        if self.p != 1:
            raise UsageError("not an ideal basis")
        return [b.entries[0] for b in self.basis]

    def reduce_poly(self, f: Polynomial) -> Polynomial:
        if self.p != 1:
            raise UsageError("not an ideal basis")
        return self.normal_form(wrap_poly(f)).remainder.entries[0]

    def is_unit_ideal(self) -> bool:
        if self.p != 1:
            raise UsageError("not an ideal basis")
        polys = self.poly_basis()
        return (len(polys) == 1 and polys[0].is_constant()
                and self.ctx.ring.is_unit(polys[0].constant_coeff()))

    def __len__(self) -> int:
        return len(self.basis)


def empty_basis(ctx: PolyRing, p: int = 1, morder: ModuleOrder | None = None) -> GroebnerBasis:
    """Basis of the zero ideal / zero submodule: everything is its own normal form."""
    return GroebnerBasis(ctx, morder or ModuleOrder(ctx.order), p, (), (), ())


def groebner(gens: Iterable, morder: ModuleOrder | None = None,
             guards: Guards | None = None) -> GroebnerBasis:
    """Canonical Groebner basis (with lifts) of the module the gens generate.

    gens may be Polynomials (ideal case) or ModuleVectors of equal length.
    """
    gens = [wrap_poly(g) if isinstance(g, Polynomial) else g for g in gens]
    if not gens:
        raise UsageError("groebner needs at least one generator (possibly zero)")
    ctx = gens[0].ctx
    p = gens[0].p
    for g in gens:
        if g.ctx != ctx or g.p != p:
            raise UsageError("generators must share context and module rank")
    if morder is None:
        morder = ModuleOrder(ctx.order)
    if morder.base != ctx.order:
        raise UsageError("module order must extend the polynomial context order")
    guards = guards or Guards()
    ring = ctx.ring
    is_z = not ring.is_field
    # Pair-trimming criteria beyond position matching are only used for
    # ideals over fields; the product criterion is unsound for p > 1 and
    # over Z, and nothing here is large enough to need it elsewhere.
    is_ideal_field = (p == 1 and not is_z and not morder.elim_block)

    originals = list(gens)
    basis: list[ModuleVector] = []
    reps: list[list[Polynomial]] = []
    lts: list[tuple[int, Monomial, object]] = []
    tasks: list[tuple[int, int, str]] = []  # pending S/G candidates

    def add_tasks_for(t: int) -> None:
        nonlocal tasks
        pos_t, lm_t, c_t = lts[t]
        if is_ideal_field:
            kept = []
            for (i, j, kind) in tasks:
                lcm_ij = monomial_lcm(lts[i][1], lts[j][1])
                if (monomial_div(lcm_ij, lm_t) is None
                        or lcm_ij == monomial_lcm(lts[i][1], lm_t)
                        or lcm_ij == monomial_lcm(lts[j][1], lm_t)):
                    kept.append((i, j, kind))
            tasks = kept
            lcms = {i: monomial_lcm(lts[i][1], lm_t) for i in range(t)}
            min_lcms: list[Monomial] = []
            for i in sorted(range(t), key=lambda i: (ctx.order.key(lcms[i]), i)):
                li = lcms[i]
                if any(monomial_div(li, seen) is not None for seen in min_lcms):
                    continue
                min_lcms.append(li)
                if li != monomial_mul(lts[i][1], lm_t):  # product criterion
                    tasks.append((i, t, "S"))
            return
        for i in range(t):
            if lts[i][0] != pos_t:
                continue
            tasks.append((i, t, "S"))
            if is_z:
                ci = lts[i][2]
                if ci % c_t != 0 and c_t % ci != 0:
                    tasks.append((i, t, "G"))

    def append(vec: ModuleVector, rep: list[Polynomial]) -> None:
        vec, rep = _normalize(ring, vec, rep, morder)
        basis.append(vec)
        reps.append(rep)
        lts.append(vec.leading_term(morder))
        add_tasks_for(len(basis) - 1)

    def unit_rep(i: int) -> list[Polynomial]:
        return [ctx.one if j == i else ctx.zero for j in range(len(originals))]

    for i, g in enumerate(originals):
        if not g.is_zero():
            append(g, unit_rep(i))

    def reduce_tracked(vec: ModuleVector, rep: list[Polynomial]):
        rem, quots = _Divider(ctx, morder, basis).divide(vec)
        for q, brep in zip(quots, reps):
            if q.is_zero():
                continue
            for j in range(len(originals)):
                if not brep[j].is_zero():
                    rep[j] = rep[j] - q * brep[j]
        return rem, rep

    def task_key(entry):
        i, j, kind = entry
        lcm = monomial_lcm(lts[i][1], lts[j][1])
        return (morder.key(lts[i][0], lcm), i, j, 0 if kind == "S" else 1)

    processed = 0
    while tasks:
        guards.check_time()
        processed += 1
        if processed > guards.max_pairs:
            raise ResourceLimitError(f"pair limit {guards.max_pairs} exceeded")
        entry = min(tasks, key=task_key)
        tasks.remove(entry)
        i, j, kind = entry
        _, mi, ci = lts[i]
        _, mj, cj = lts[j]
        lcm = monomial_lcm(mi, mj)
        di, dj = monomial_div(lcm, mi), monomial_div(lcm, mj)
        if kind == "S":
            if is_z:
                c_lcm = ci * cj // _xgcd(ci, cj)[0]
                ai, aj = c_lcm // ci, c_lcm // cj
            else:
                ai = aj = ring.one  # basis kept monic over fields
            cand = basis[i].mul_term(di, ai) - basis[j].mul_term(dj, aj)
            rep = [reps[i][k].mul_term(di, ai) - reps[j][k].mul_term(dj, aj)
                   for k in range(len(originals))]
        else:
            _, u, v = _xgcd(ci, cj)
            cand = basis[i].mul_term(di, u) + basis[j].mul_term(dj, v)
            rep = [reps[i][k].mul_term(di, u) + reps[j][k].mul_term(dj, v)
                   for k in range(len(originals))]
        rem, rep = reduce_tracked(cand, rep)
        if not rem.is_zero():
            append(rem, rep)

    # interreduce to the canonical basis
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1:]
            other_reps = reps[:i] + reps[i + 1:]
            rem, quots = _Divider(ctx, morder, others).divide(basis[i])
            if rem == basis[i]:
                continue
            rep = list(reps[i])
            for q, brep in zip(quots, other_reps):
                if q.is_zero():
                    continue
                for j in range(len(originals)):
                    if not brep[j].is_zero():
                        rep[j] = rep[j] - q * brep[j]
            if rem.is_zero():
                del basis[i], reps[i], lts[i]
            else:
                vec, rep = _normalize(ring, rem, rep, morder)
                basis[i], reps[i], lts[i] = vec, rep, vec.leading_term(morder)
            changed = True
            break

    order_idx = sorted(range(len(basis)),
                       key=lambda i: morder.key(lts[i][0], lts[i][1]), reverse=True)
    basis = [basis[i] for i in order_idx]
    reps = [reps[i] for i in order_idx]

    gb = GroebnerBasis(ctx, morder, p, originals, basis, reps)
    _self_check(gb, is_z)
    return gb


def _self_check(gb: GroebnerBasis, is_z: bool) -> None:
    """Buchberger criterion on the final basis, plus rep verification.

    Every same-position S-polynomial (and over Z every G-polynomial) must
    reduce to zero, every original generator must reduce to zero, and every
    stored rep must reproduce its basis element exactly.
    """
    ctx = gb.ctx
    divider = _Divider(ctx, gb.morder, gb.basis)
    lts = divider.lts
    for g in gb.originals:
        if not g.is_zero() and not divider.divide(g)[0].is_zero():
            raise InternalCheckError("original generator does not reduce to zero")
    for vec, rep in zip(gb.basis, gb.reps):
        check = ModuleVector.zero(ctx, gb.p)
        for u, g in zip(rep, gb.originals):
            if not u.is_zero():
                check = check + g.scale_poly(u)
        if check != vec:
            raise InternalCheckError("basis element rep does not reproduce it")
    for a, b in combinations(range(len(gb.basis)), 2):
        if lts[a][0] != lts[b][0]:
            continue
        _, ma, ca = lts[a]
        _, mb, cb = lts[b]
        lcm = monomial_lcm(ma, mb)
        da, db = monomial_div(lcm, ma), monomial_div(lcm, mb)
        if is_z:
            g = ca * cb // _xgcd(ca, cb)[0]
            s = gb.basis[a].mul_term(da, g // ca) - gb.basis[b].mul_term(db, g // cb)
        else:
            s = gb.basis[a].mul_term(da, ctx.ring.one) - gb.basis[b].mul_term(db, ctx.ring.one)
        if not divider.divide(s)[0].is_zero():
            raise InternalCheckError("S-polynomial does not reduce to zero")
        if is_z and ca % cb != 0 and cb % ca != 0:
            g, u, v = _xgcd(ca, cb)
            gp = gb.basis[a].mul_term(da, u) + gb.basis[b].mul_term(db, v)
            if not divider.divide(gp)[0].is_zero():
                raise InternalCheckError("G-polynomial does not reduce to zero")


# -- membership -------------------------------------------------------------


@dataclass(frozen=True)
class Membership:
    """Module membership outcome; coefficients refer to the ORIGINAL generators."""

    contained: bool
    coefficients: tuple[Polynomial, ...] | None
    reduction: LiftedReduction


def module_membership_with_lift(v: ModuleVector, gb: GroebnerBasis) -> Membership:
    red = gb.normal_form(v)
    if not red.remainder.is_zero():
        return Membership(False, None, red)
    return Membership(True, gb.lift_to_originals(v), red)


def ideal_membership(f: Polynomial, gb: GroebnerBasis) -> bool:
    return gb.reduce_poly(f).is_zero()


# -- syzygies and derived operations ----------------------------------------


def syzygies(gens: Sequence[ModuleVector | Polynomial],
             guards: Guards | None = None) -> list[ModuleVector]:
    """Generators of the syzygy module of gens (vectors in R^k, k = len(gens)).

    Computed by tagging each generator with a unit vector in k extra
    components and eliminating: basis elements whose original block vanishes
    are exactly the syzygies.
    """
    gens = [wrap_poly(g) if isinstance(g, Polynomial) else g for g in gens]
    if not gens:
        return []
    ctx = gens[0].ctx
    p = gens[0].p
    k = len(gens)
    augmented = []
    for i, g in enumerate(gens):
        if g.ctx != ctx or g.p != p:
            raise UsageError("syzygy generators must share context and rank")
        tags = [ctx.one if j == i else ctx.zero for j in range(k)]
        augmented.append(ModuleVector(ctx, list(g.entries) + tags))
    morder = ModuleOrder(ctx.order, elim_block=p)
    gb = groebner(augmented, morder, guards)
    kept: list[ModuleVector] = []
    for vec in gb.basis:
        if any(not e.is_zero() for e in vec.entries[:p]):
            continue
        syz = ModuleVector(ctx, vec.entries[p:])
        check = ModuleVector.zero(ctx, p)
        for u, g in zip(syz.entries, gens):
            if not u.is_zero():
                check = check + g.scale_poly(u)
        if not check.is_zero():
            raise InternalCheckError("harvested syzygy does not annihilate the generators")
        kept.append(syz)
    if not kept:
        return []
    reduced = groebner(kept, ModuleOrder(ctx.order), guards)
    return list(reduced.basis)


def ideal_quotient(ideal_gens: Sequence[Polynomial], g: Polynomial,
                   guards: Guards | None = None) -> list[Polynomial]:
    """Generators of (I : g) = {h : h*g in I}, interreduced."""
    ctx = g.ctx
    if g.is_zero():
        return [ctx.one]
    gens = [f for f in ideal_gens if not f.is_zero()]
    syz = syzygies(gens + [g], guards)
    harvested = [s.entries[len(gens)] for s in syz]
    harvested = [h for h in harvested if not h.is_zero()]
    if not harvested:
        return []
    gb = groebner(harvested, ModuleOrder(ctx.order), guards)
    return gb.poly_basis()


# -- Jacobian data -----------------------------------------------------------


@dataclass(frozen=True)
class JacobianData:
    """Largest minor size with a minor outside I, plus the witnessing minors."""

    rank: int
    minors: tuple[Polynomial, ...]        # size-`rank` minors, deduplicated
    combined: tuple[Polynomial, ...]      # minors + ideal generators


def _det(matrix: list[list[Polynomial]], ctx: PolyRing) -> Polynomial:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    out = ctx.zero
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in matrix[1:]]
        term = entry * _det(minor, ctx)
        out = out + term if j % 2 == 0 else out - term
    return out


def jacobian_ideal(ideal_gens: Sequence[Polynomial], gb_of_ideal: GroebnerBasis,
                   guards: Guards | None = None) -> JacobianData:
    """Critical minor size c and generators of (c-minors of the Jacobian) + I.

    c is the largest e such that some e x e minor of (df_j/dx_i) lies outside
    I; c = 0 when even the first-order partials are all in I.
    """
    gens = [f for f in ideal_gens if not f.is_zero()]
    if not gens:
        return JacobianData(0, (), ())
    ctx = gens[0].ctx
    d = ctx.nvars
    jac = [[f.partial_derivative(r) for f in gens] for r in range(d)]
    for e in range(min(d, len(gens)), 0, -1):
        if guards:
            guards.check_time()
        minors: list[Polynomial] = []
        seen = set()
        found_outside = False
        for rows in combinations(range(d), e):
            for cols in combinations(range(len(gens)), e):
                m = _det([[jac[r][c] for c in cols] for r in rows], ctx)
                if m.is_zero() or m in seen:
                    continue
                seen.add(m)
                minors.append(m)
                if not gb_of_ideal.reduce_poly(m).is_zero():
                    found_outside = True
        if found_outside:
            return JacobianData(e, tuple(minors), tuple(minors) + tuple(gens))
    return JacobianData(0, (), tuple(gens))
