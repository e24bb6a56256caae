"""Level-by-level integrability decisions with explicit certificates.

A Problem fixes a presented quotient: polynomial context plus ideal
generators.  Derivations of the quotient are represented by coefficient
vectors of ambient derivations mapping the ideal into itself.  The driver
check_equality climbs one level at a time, extending a stored integral of
every module generator; a failed free extension at level N+1 after
successes below is a refutation, because once equality holds at the
fractional threshold level, some extension exists iff every one does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import hsd
from .errors import InternalCheckError, UsageError
from .gbase import (GroebnerBasis, Guards, JacobianData, LiftedReduction,
                    Membership, ModuleOrder, ModuleVector, empty_basis,
                    groebner, jacobian_ideal, module_membership_with_lift,
                    syzygies)
from .hsd import HSDerivation
from .jet import TruncatedSeries, unit_inverse
from .poly import Polynomial, PolyRing

FREE = "free"
JACOBIAN = "jacobian"
_MODES = (FREE, JACOBIAN)


def rho(n: int) -> int:
    """Threshold level: (n+1)/2 for odd n, floor((n+1)/3) for even n."""
    if not isinstance(n, int) or n < 1:
        raise UsageError("rho is defined for integers n >= 1")
    return (n + 1) // 2 if n % 2 else (n + 1) // 3


@dataclass(frozen=True)
class LogDerivation:
    """Coefficient vector (a_1..a_d) of a derivation mapping the ideal to itself."""

    coeffs: tuple[Polynomial, ...]

    def apply(self, f: Polynomial) -> Polynomial:
        out = f.ctx.zero
        for r, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + a * f.partial_derivative(r)
        return out

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coeffs) + ")"


class Problem:
    """A presented quotient ring with cached bases for all membership tests."""

    def __init__(self, ctx: PolyRing, ideal_gens: Sequence[Polynomial],
                 guards: Guards | None = None,
                 weights: Sequence[int] | None = None):
        for f in ideal_gens:
            if not isinstance(f, Polynomial) or f.ctx != ctx:
                raise UsageError("ideal generators must live in the problem context")
            if f.is_zero():
                raise UsageError("ideal generators must be nonzero (omit them instead)")
        self.ctx = ctx
        self.gens = tuple(ideal_gens)
        self.guards = guards or Guards()
        self.weights = tuple(weights) if weights is not None else None
        self._gb: GroebnerBasis | None = None
        self._jacobian: JacobianData | None = None
        self._jacobian_gb: GroebnerBasis | None = None
        self._module_gb: dict[str, GroebnerBasis] = {}
        self._module_cols: dict[str, list[ModuleVector]] = {}
        self._eq_cache: dict[int, "IntegrabilityReport"] = {}

    @property
    def gb(self) -> GroebnerBasis:
        """Groebner basis of the ideal itself."""
        if self._gb is None:
            if self.gens:
                self._gb = groebner(list(self.gens), guards=self.guards)
            else:
                self._gb = empty_basis(self.ctx)
        return self._gb

    @property
    def trivial_ring(self) -> bool:
        """True when 1 lies in the ideal, so the quotient is the zero ring."""
        return bool(self.gens) and self.gb.is_unit_ideal()

    @property
    def jacobian(self) -> JacobianData:
        if self._jacobian is None:
            self._jacobian = jacobian_ideal(self.gens, self.gb, self.guards)
        return self._jacobian

    @property
    def jacobian_gb(self) -> GroebnerBasis:
        """Basis of (critical minors) + I, used for constrained-mode eligibility."""
        if self._jacobian_gb is None:
            gens = list(self.jacobian.combined)
            self._jacobian_gb = groebner(gens, guards=self.guards) if gens \
                else empty_basis(self.ctx)
        return self._jacobian_gb

    def gradient_column(self, r: int) -> ModuleVector:
        return ModuleVector(self.ctx, [f.partial_derivative(r) for f in self.gens])

    def module_columns(self, mode: str) -> list[ModuleVector]:
        """Original generators of the extension-membership module in R^p."""
        if mode not in _MODES:
            raise UsageError(f"unknown mode {mode!r}")
        if mode not in self._module_cols:
            if not self.gens:
                raise UsageError("no membership module for an empty ideal")
            p = len(self.gens)
            cols: list[ModuleVector] = []
            if mode == FREE:
                cols.extend(self.gradient_column(r) for r in range(self.ctx.nvars))
            else:
                if self.jacobian.rank < 1:
                    raise UsageError("constrained mode needs a nonzero Jacobian minor")
                for r in range(self.ctx.nvars):
                    grad = self.gradient_column(r)
                    cols.extend(grad.scale_poly(m) for m in self.jacobian.minors)
                if not cols:
                    raise UsageError("constrained mode has no usable columns")
            for s in range(p):
                for t in range(p):
                    entries = [self.ctx.zero] * p
                    entries[s] = self.gens[t]
                    cols.append(ModuleVector(self.ctx, entries))
            self._module_cols[mode] = cols
        return self._module_cols[mode]

    def module_gb(self, mode: str) -> GroebnerBasis:
        if mode not in self._module_gb:
            self._module_gb[mode] = groebner(self.module_columns(mode),
                                             ModuleOrder(self.ctx.order),
                                             self.guards)
        return self._module_gb[mode]

    def alphas_from_lift(self, mode: str, coefficients: Sequence[Polynomial]
                         ) -> tuple[Polynomial, ...]:
        """Recover per-variable multipliers from membership coefficients."""
        d = self.ctx.nvars
        if mode == FREE:
            return tuple(coefficients[:d])
        minors = self.jacobian.minors
        alphas = []
        for r in range(d):
            acc = self.ctx.zero
            for k, m in enumerate(minors):
                q = coefficients[r * len(minors) + k]
                if not q.is_zero():
                    acc = acc + q * m
            alphas.append(acc)
        return tuple(alphas)

    def log_derivation(self, coeffs: Sequence[Polynomial]) -> LogDerivation:
        """Validated construction: the coefficients must map the ideal into itself."""
        coeffs = tuple(coeffs)
        if len(coeffs) != self.ctx.nvars:
            raise UsageError(f"a derivation needs one coefficient per variable "
                             f"(got {len(coeffs)}, need {self.ctx.nvars})")
        for a in coeffs:
            if not isinstance(a, Polynomial) or a.ctx != self.ctx:
                raise UsageError("derivation coefficients must live in the problem context")
        delta = LogDerivation(coeffs)
        for f in self.gens:
            if not self.gb.reduce_poly(delta.apply(f)).is_zero():
                raise UsageError(f"derivation {delta} does not preserve the ideal")
        return delta

    def jacobian_eligible(self, delta: LogDerivation) -> bool:
        """All coefficients inside (critical minors) + I, enabling constrained mode."""
        if self.jacobian.rank < 1:
            return False
        return all(self.jacobian_gb.reduce_poly(a).is_zero() for a in delta.coeffs)


def log_derivations(problem: Problem) -> list[LogDerivation]:
    """Canonical generators of the module of ideal-preserving derivations.

    Syzygies of the Jacobian columns together with the vectors carrying each
    ideal generator into each slot; the first d coordinates of the syzygies
    are the derivation coefficients, returned interreduced.
    """
    ctx = problem.ctx
    d = ctx.nvars
    if not problem.gens:
        units = []
        for r in range(d):
            coeffs = [ctx.zero] * d
            coeffs[r] = ctx.one
            units.append(LogDerivation(tuple(coeffs)))
        return units
    syz = syzygies(problem.module_columns(FREE), problem.guards)
    avecs = []
    for s in syz:
        head = ModuleVector(ctx, s.entries[:d])
        if not head.is_zero():
            avecs.append(head)
    if not avecs:
        return []
    gbm = groebner(avecs, ModuleOrder(ctx.order), problem.guards)
    return [problem.log_derivation(vec.entries) for vec in gbm.basis]


@dataclass(frozen=True)
class ExtensionStep:
    """One attempt to extend a length-n integral to length n+1."""

    ok: bool
    mode: str
    level: int
    vector: ModuleVector | None
    derivation: HSDerivation | None
    alphas: tuple[Polynomial, ...] | None
    reduction: LiftedReduction | None


def extend_one_step(D: HSDerivation, problem: Problem, mode: str = FREE) -> ExtensionStep:
    """Extend an ideal-preserving derivation by one level if possible.

    The obstruction vector collects the level-(n+1) coefficients of the
    zero-padded extension on the ideal generators; the derivation extends
    iff that vector lies in the module spanned by the gradient columns
    (constrained mode: minor multiples of them) and the generator-times-slot
    vectors.  On success the new top coefficients are minus the recovered
    multipliers, and the extension is re-checked to preserve the ideal.
    """
    if mode not in _MODES:
        raise UsageError(f"unknown mode {mode!r}")
    ctx = problem.ctx
    if D.ctx != ctx:
        raise UsageError("derivation does not live in the problem context")
    if not hsd.is_logarithmic(D, problem.gens, problem.gb):
        raise UsageError("derivation does not preserve the ideal; cannot extend")
    n = D.length
    E = D.taylor_extend(n + 1)
    if not problem.gens:
        return ExtensionStep(True, mode, n + 1, None, E,
                             (ctx.zero,) * ctx.nvars, None)
    v = ModuleVector(ctx, [E.apply(f).coeffs[n + 1] for f in problem.gens])
    mem: Membership = module_membership_with_lift(v, problem.module_gb(mode))
    if not mem.contained:
        return ExtensionStep(False, mode, n + 1, v, None, None, mem.reduction)
    alphas = problem.alphas_from_lift(mode, mem.coefficients)
    images = []
    for r in range(ctx.nvars):
        coeffs = list(D.images[r].coeffs) + [-alphas[r]]
        images.append(TruncatedSeries(ctx, coeffs, n + 1))
    extended = HSDerivation(ctx, images)
    if not hsd.is_logarithmic(extended, problem.gens, problem.gb):
        raise InternalCheckError("extension stopped preserving the ideal")
    return ExtensionStep(True, mode, n + 1, v, extended, alphas, mem.reduction)


@dataclass(frozen=True)
class Witness:
    """Evidence for a FALSE level: which generator got stuck, and why."""

    generator: int
    level: int
    coefficients: tuple[Polynomial, ...]
    vector: ModuleVector
    remainder: ModuleVector


@dataclass(frozen=True)
class Certificate:
    generator: int
    mode: str
    derivation: HSDerivation


@dataclass(frozen=True)
class LevelEntry:
    level: int
    verdict: str  # "TRUE" | "FALSE"
    witness: Witness | None
    certificates: tuple[Certificate, ...]


@dataclass(frozen=True)
class IntegrabilityReport:
    max_level: int
    trivial_ring: bool
    generators: tuple[LogDerivation, ...]
    levels: tuple[LevelEntry, ...]
    ledger: tuple[int, ...]  # levels at which full integrability is established

    def entry(self, level: int) -> LevelEntry | None:
        for e in self.levels:
            if e.level == level:
                return e
        return None

    @property
    def final_verdict(self) -> str:
        return self.levels[-1].verdict if self.levels else "TRUE"


def _verify_certificate(problem: Problem, delta: LogDerivation,
                        D: HSDerivation) -> None:
    """A certificate must preserve the ideal and start at the claimed derivation."""
    if not hsd.is_logarithmic(D, problem.gens, problem.gb):
        raise InternalCheckError("certificate does not preserve the ideal")
    for r in range(problem.ctx.nvars):
        if D.coefficient(r, 1) != delta.coeffs[r]:
            raise InternalCheckError("certificate does not extend the claimed derivation")


def _rebuild_constrained(problem: Problem, delta: LogDerivation,
                         target: int) -> HSDerivation | None:
    """Restart the whole chain in constrained mode, up to the target level."""
    D = HSDerivation.from_derivation(problem.ctx, delta.coeffs)
    while D.length < target:
        step = extend_one_step(D, problem, JACOBIAN)
        if not step.ok:
            return None
        D = step.derivation
    return D


def check_equality(problem: Problem, max_level: int) -> IntegrabilityReport:
    """Decide, level by level, whether every ideal-preserving derivation
    extends; stops at the first FALSE.

    TRUE at level N means every stored generator certificate was extended to
    length N (certificates re-verified).  FALSE carries the first failing
    generator in canonical order together with its obstruction vector and
    nonzero normal form.
    """
    if not isinstance(max_level, int) or max_level < 2:
        raise UsageError("max_level must be an integer >= 2")
    cached = problem._eq_cache.get(max_level)
    if cached is not None:
        return cached
    if problem.trivial_ring:
        entries = tuple(LevelEntry(n, "TRUE", None, ()) for n in range(2, max_level + 1))
        report = IntegrabilityReport(max_level, True, (), entries,
                                     tuple(range(1, max_level + 1)))
        problem._eq_cache[max_level] = report
        return report
    gens = log_derivations(problem)
    certs = [HSDerivation.from_derivation(problem.ctx, g.coeffs) for g in gens]
    modes = [FREE] * len(gens)
    levels: list[LevelEntry] = []
    ledger: list[int] = [1]
    for target in range(2, max_level + 1):
        problem.guards.check_time()
        witness = None
        for j, delta in enumerate(gens):
            step = extend_one_step(certs[j], problem, modes[j])
            if step.ok:
                certs[j] = step.derivation
                continue
            if modes[j] == FREE:
                free_fail = step
                if problem.jacobian_eligible(delta):
                    rebuilt = _rebuild_constrained(problem, delta, target)
                    if rebuilt is not None:
                        certs[j] = rebuilt
                        modes[j] = JACOBIAN
                        continue
            else:
                retry = extend_one_step(certs[j], problem, FREE)
                if retry.ok:
                    certs[j] = retry.derivation
                    modes[j] = FREE
                    continue
                free_fail = retry
            witness = Witness(j, target, delta.coeffs, free_fail.vector,
                              free_fail.reduction.remainder)
            break
        if witness is not None:
            levels.append(LevelEntry(target, "FALSE", witness, ()))
            break
        certificates = []
        for j, delta in enumerate(gens):
            _verify_certificate(problem, delta, certs[j])
            certificates.append(Certificate(j, modes[j], certs[j]))
        levels.append(LevelEntry(target, "TRUE", None, tuple(certificates)))
        ledger.append(target)
    report = IntegrabilityReport(max_level, False, tuple(gens), tuple(levels),
                                 tuple(ledger))
    problem._eq_cache[max_level] = report
    return report


def hypothesis_established(problem: Problem, level: int) -> bool:
    """Has full extendability been verified at every level up to `level`?"""
    if level <= 1:
        return True
    report = check_equality(problem, level)
    return level in report.ledger


@dataclass(frozen=True)
class IntegrationOutcome:
    """Result of trying to integrate one derivation up to a target length."""

    status: str  # "YES" | "NO" | "INCONCLUSIVE"
    target_level: int
    mode: str
    derivation: tuple[Polynomial, ...]
    certificate: HSDerivation | None
    failed_level: int | None
    vector: ModuleVector | None
    remainder: ModuleVector | None
    hypothesis_level: int | None
    hypothesis_established: bool | None


def integrate_derivation(problem: Problem, coeffs: Sequence[Polynomial],
                         level: int, mode: str = FREE) -> IntegrationOutcome:
    """Try to integrate the derivation with the given coefficients up to `level`.

    Greedy chain of one-step extensions.  A failure at the very first step
    refutes outright; a later failure refutes only when full extendability
    has been established up to the threshold level rho(n), since then some
    extension exists iff every one does.  Otherwise the outcome is
    INCONCLUSIVE.  Constrained-mode failures are always INCONCLUSIVE: the
    constrained module is smaller, so getting stuck there proves nothing.
    """
    if mode not in _MODES:
        raise UsageError(f"unknown mode {mode!r}")
    if not isinstance(level, int) or level < 1:
        raise UsageError("target level must be an integer >= 1")
    delta = problem.log_derivation(coeffs)
    D = HSDerivation.from_derivation(problem.ctx, delta.coeffs)
    while D.length < level:
        problem.guards.check_time()
        n = D.length
        step = extend_one_step(D, problem, mode)
        if step.ok:
            D = step.derivation
            continue
        if mode == JACOBIAN:
            return IntegrationOutcome("INCONCLUSIVE", level, mode, delta.coeffs,
                                      None, n + 1, step.vector,
                                      step.reduction.remainder, None, None)
        if n == 1:
            return IntegrationOutcome("NO", level, mode, delta.coeffs, None,
                                      n + 1, step.vector,
                                      step.reduction.remainder, None, None)
        threshold = rho(n)
        established = hypothesis_established(problem, threshold)
        status = "NO" if established else "INCONCLUSIVE"
        return IntegrationOutcome(status, level, mode, delta.coeffs, None,
                                  n + 1, step.vector, step.reduction.remainder,
                                  threshold, established)
    _verify_certificate(problem, delta, D)
    return IntegrationOutcome("YES", level, mode, delta.coeffs, D, None, None,
                              None, None, None)


def euler_integral(problem: Problem, weights: Sequence[int], level: int) -> HSDerivation:
    """Closed-form integral of the weighted Euler derivation.

    Requires every ideal generator to be quasi-homogeneous for the weights;
    the certificate sends x_r to x_r (1 - t)^(-w_r), whose level-1 component
    is sum_r w_r x_r d/dx_r (weights reduced into the coefficient ring).
    """
    ctx = problem.ctx
    if len(weights) != ctx.nvars:
        raise UsageError(f"need {ctx.nvars} weights")
    weights = [int(w) for w in weights]
    if any(w < 1 for w in weights):
        raise UsageError("weights must be positive integers")
    if not isinstance(level, int) or level < 1:
        raise UsageError("target level must be an integer >= 1")
    for idx, f in enumerate(problem.gens):
        degs = {}
        for mon, _ in f.terms:
            wd = sum(w * e for w, e in zip(weights, mon))
            degs.setdefault(wd, mon)
            if len(degs) > 1:
                (d1, m1), (d2, m2) = list(degs.items())[:2]
                raise UsageError(
                    f"generator {idx} is not quasi-homogeneous for weights "
                    f"{tuple(weights)}: monomial {Polynomial(ctx, {m1: 1})} has weighted "
                    f"degree {d1} but {Polynomial(ctx, {m2: 1})} has {d2}")
    one_minus_t = TruncatedSeries(ctx, [ctx.one, -ctx.one], level)
    inv = unit_inverse(one_minus_t)
    images = []
    for r in range(ctx.nvars):
        images.append((inv ** weights[r]).scale_poly(ctx.variable(r)))
    D = HSDerivation(ctx, images)
    if not hsd.is_logarithmic(D, problem.gens, problem.gb):
        raise InternalCheckError("Euler certificate failed the ideal-preservation check")
    return D
