"""Command-line driver.

Subcommands operate on a problem (coefficient ring, variables, ideal) given
either as a JSON file via --problem or inline via --ring/--vars/--ideal.
All machine output is deterministic JSON (sorted keys, exact strings);
exit codes: 0 = computation finished (whatever the verdict), 1 = usage or
parse error, 2 = a resource guard tripped (no verdict).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import __version__
from .coeffring import RingSpec
from .errors import ParseError, ResourceLimitError, UsageError
from .gbase import Guards, ModuleVector, ideal_quotient, wrap_poly
from .hsd import HSDerivation, is_logarithmic
from .integ import (FREE, IntegrabilityReport, Problem, check_equality,
                    euler_integral, integrate_derivation, log_derivations)
from .jet import TruncatedSeries
from .poly import (MonomialOrder, Polynomial, PolyRing, VariableSet,
                   parse_polynomial)

_TOOL = f"hsinteg {__version__}"


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; we need 1, so raise instead."""

    def error(self, message):
        raise UsageError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--problem", help="path to a problem JSON file")
    sub.add_argument("--ring", help="coefficient ring: F2, F3, Fp:<p>, Q, Z")
    sub.add_argument("--vars", help="comma-separated variable names")
    sub.add_argument("--order", default=None,
                     help="monomial order: degrevlex (default), deglex, lex")
    sub.add_argument("--ideal", nargs="*", default=None,
                     help="ideal generators (inline problems)")
    sub.add_argument("--json", action="store_true", help="print the JSON document")
    sub.add_argument("--output", help="also write the JSON document to this file")
    sub.add_argument("--max-pairs", type=int, default=200_000,
                     help="pair limit for basis completion")
    sub.add_argument("--max-degree", type=int, default=64,
                     help="total degree cap for any polynomial")
    sub.add_argument("--timeout-seconds", type=float, default=None,
                     help="wall-clock budget for the whole command")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="hsinteg",
                             description="integrability of derivations on "
                                         "polynomial quotient rings, with certificates")
    parser.add_argument("--version", action="version", version=_TOOL)
    subs = parser.add_subparsers(dest="command")

    p = subs.add_parser("check", parents=[], help="decide level-by-level extendability")
    _add_common(p)
    p.add_argument("--max-level", type=int, default=2)
    p.set_defaults(func=cmd_check)

    p = subs.add_parser("derlog", help="generators of the ideal-preserving derivations")
    _add_common(p)
    p.set_defaults(func=cmd_derlog)

    p = subs.add_parser("integrate", help="integrate one derivation to a target length")
    _add_common(p)
    p.add_argument("--derivation", required=True,
                   help="comma-separated coefficients, one per variable")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--mode", choices=["free", "jacobian"], default="free")
    p.set_defaults(func=cmd_integrate)

    p = subs.add_parser("euler", help="closed-form integral of the weighted Euler derivation")
    _add_common(p)
    p.add_argument("--weights", help="comma-separated positive integer weights")
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_euler)

    p = subs.add_parser("gb", help="reduced basis of the ideal")
    _add_common(p)
    p.set_defaults(func=cmd_gb)

    p = subs.add_parser("nf", help="normal form of a polynomial modulo the ideal")
    _add_common(p)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_nf)

    p = subs.add_parser("quotient", help="ideal quotient (I : g)")
    _add_common(p)
    p.add_argument("--by", required=True, help="the polynomial g")
    p.set_defaults(func=cmd_quotient)

    p = subs.add_parser("jacobian-ideal", help="critical minor size and minor ideal")
    _add_common(p)
    p.set_defaults(func=cmd_jacobian)

    p = subs.add_parser("verify", help="re-verify the certificates in a report")
    _add_common(p)
    p.add_argument("--report", required=True, help="path to a report JSON file")
    p.set_defaults(func=cmd_verify)
    return parser


# -- problem plumbing ---------------------------------------------------------


def _guards(args) -> Guards:
    deadline = None
    if args.timeout_seconds is not None:
        deadline = time.monotonic() + args.timeout_seconds
    return Guards(max_pairs=args.max_pairs, deadline=deadline)


def _context(ring: str, variables: Sequence[str], order: str, max_degree: int) -> PolyRing:
    return PolyRing(RingSpec.from_string(ring),
                    VariableSet(tuple(variables)),
                    MonomialOrder(order),
                    max_degree=max_degree)


def load_problem(args) -> Problem:
    if args.problem:
        try:
            with open(args.problem, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read problem file: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"problem file is not valid JSON: {exc}")
        return problem_from_doc(doc, args)
    if not args.ring or not args.vars:
        raise UsageError("give --problem FILE, or --ring and --vars (and --ideal)")
    doc = {
        "coefficients": args.ring,
        "variables": [v.strip() for v in args.vars.split(",") if v.strip()],
        "order": args.order or "degrevlex",
        "ideal": args.ideal or [],
    }
    return problem_from_doc(doc, args)


def problem_from_doc(doc: dict, args) -> Problem:
    for key in ("coefficients", "variables"):
        if key not in doc:
            raise UsageError(f"problem is missing the {key!r} field")
    order = args.order or doc.get("order") or "degrevlex"
    ctx = _context(doc["coefficients"], doc["variables"], order, args.max_degree)
    gens = [parse_polynomial(s, ctx) for s in doc.get("ideal", [])]
    return Problem(ctx, gens, _guards(args), doc.get("weights"))


def problem_doc(problem: Problem) -> dict:
    doc = {
        "coefficients": str(problem.ctx.ring),
        "variables": list(problem.ctx.vars.names),
        "order": str(problem.ctx.order),
        "ideal": [str(f) for f in problem.gens],
    }
    if problem.weights is not None:
        doc["weights"] = list(problem.weights)
    return doc


# -- serialization helpers ----------------------------------------------------


def images_doc(D: HSDerivation) -> dict:
    return {name: [str(c) for c in series.coeffs]
            for name, series in zip(D.ctx.vars.names, D.images)}


def images_from_doc(doc: dict, ctx: PolyRing) -> HSDerivation:
    images = []
    level = None
    for name in ctx.vars.names:
        if name not in doc:
            raise UsageError(f"certificate is missing images for {name!r}")
        coeffs = [parse_polynomial(s, ctx) for s in doc[name]]
        if level is None:
            level = len(coeffs) - 1
        images.append(TruncatedSeries(ctx, coeffs, level))
    return HSDerivation(ctx, images)


def vector_strings(v: ModuleVector) -> list[str]:
    return [str(e) for e in v.entries]


def report_doc(problem: Problem, report: IntegrabilityReport) -> dict:
    levels = []
    for entry in report.levels:
        witness = None
        if entry.witness is not None:
            witness = {
                "generator": entry.witness.generator,
                "level": entry.witness.level,
                "coefficients": [str(a) for a in entry.witness.coefficients],
                "vector": vector_strings(entry.witness.vector),
                "remainder": vector_strings(entry.witness.remainder),
            }
        levels.append({
            "level": entry.level,
            "verdict": entry.verdict,
            "witness": witness,
            "certificates": [{
                "generator": cert.generator,
                "mode": cert.mode,
                "images": images_doc(cert.derivation),
            } for cert in entry.certificates],
        })
    return {
        "tool": _TOOL,
        "command": "check",
        "problem": problem_doc(problem),
        "max_level": report.max_level,
        "trivial_ring": report.trivial_ring,
        "generators": [[str(a) for a in g.coeffs] for g in report.generators],
        "levels": levels,
        "ledger": list(report.ledger),
    }


def emit(args, doc: dict, lines: list[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for line in lines:
            print(line)


# -- subcommands ---------------------------------------------------------------


def cmd_check(args) -> int:
    problem = load_problem(args)
    report = check_equality(problem, args.max_level)
    doc = report_doc(problem, report)
    lines = [f"problem: {_describe(problem)}"]
    if report.trivial_ring:
        lines.append("the ideal contains 1: the quotient is the zero ring and every "
                     "level is vacuously TRUE")
    else:
        lines.append(f"derivation module generators ({len(report.generators)}):")
        for j, g in enumerate(report.generators):
            lines.append(f"  [{j}] {g}")
    for entry in report.levels:
        lines.append(f"level {entry.level}: {entry.verdict}")
        if entry.witness is not None:
            w = entry.witness
            lines.append(f"  witness generator [{w.generator}] "
                         f"({', '.join(str(a) for a in w.coefficients)})")
            lines.append(f"  obstruction vector: {w.vector}")
            lines.append(f"  nonzero normal form: {w.remainder}")
    lines.append(f"ledger (levels with full extendability): {list(report.ledger)}")
    emit(args, doc, lines)
    return 0


def cmd_derlog(args) -> int:
    problem = load_problem(args)
    gens = log_derivations(problem)
    doc = {
        "tool": _TOOL,
        "command": "derlog",
        "problem": problem_doc(problem),
        "generators": [[str(a) for a in g.coeffs] for g in gens],
    }
    lines = [f"problem: {_describe(problem)}",
             f"derivation module generators ({len(gens)}):"]
    lines += [f"  [{j}] {g}" for j, g in enumerate(gens)]
    emit(args, doc, lines)
    return 0


def cmd_integrate(args) -> int:
    problem = load_problem(args)
    coeffs = _split_polys(args.derivation, problem.ctx)
    outcome = integrate_derivation(problem, coeffs, args.level, args.mode)
    doc = {
        "tool": _TOOL,
        "command": "integrate",
        "problem": problem_doc(problem),
        "derivation": [str(a) for a in outcome.derivation],
        "target_level": outcome.target_level,
        "mode": outcome.mode,
        "status": outcome.status,
        "failed_level": outcome.failed_level,
        "certificate": images_doc(outcome.certificate) if outcome.certificate else None,
        "vector": vector_strings(outcome.vector) if outcome.vector else None,
        "remainder": vector_strings(outcome.remainder) if outcome.remainder else None,
        "hypothesis_level": outcome.hypothesis_level,
        "hypothesis_established": outcome.hypothesis_established,
    }
    lines = [f"problem: {_describe(problem)}",
             f"derivation ({args.derivation}) to length {args.level}, mode {args.mode}: "
             f"{outcome.status}"]
    if outcome.status == "YES":
        lines += _certificate_lines(outcome.certificate)
    else:
        lines.append(f"  stuck extending length {outcome.failed_level - 1} to "
                     f"{outcome.failed_level}")
        lines.append(f"  obstruction vector: ({', '.join(doc['vector'])})")
        lines.append(f"  nonzero normal form: ({', '.join(doc['remainder'])})")
        if outcome.hypothesis_level is not None:
            state = "established" if outcome.hypothesis_established else "not established"
            lines.append(f"  full extendability through level {outcome.hypothesis_level}: "
                         f"{state}")
    emit(args, doc, lines)
    return 0


def cmd_euler(args) -> int:
    problem = load_problem(args)
    if args.weights:
        weights = [int(w) for w in args.weights.split(",")]
    elif problem.weights is not None:
        weights = list(problem.weights)
    else:
        raise UsageError("give --weights or put a weights field in the problem file")
    D = euler_integral(problem, weights, args.level)
    doc = {
        "tool": _TOOL,
        "command": "euler",
        "problem": problem_doc(problem),
        "weights": weights,
        "level": args.level,
        "certificate": images_doc(D),
        "first_component": [str(D.coefficient(r, 1)) for r in range(problem.ctx.nvars)],
    }
    lines = [f"problem: {_describe(problem)}",
             f"Euler derivation for weights {tuple(weights)} integrates to length "
             f"{args.level}"]
    lines += _certificate_lines(D)
    emit(args, doc, lines)
    return 0


def cmd_gb(args) -> int:
    problem = load_problem(args)
    basis = problem.gb.poly_basis()
    doc = {
        "tool": _TOOL,
        "command": "gb",
        "problem": problem_doc(problem),
        "basis": [str(f) for f in basis],
    }
    lines = [f"problem: {_describe(problem)}", f"reduced basis ({len(basis)}):"]
    lines += [f"  {f}" for f in basis]
    emit(args, doc, lines)
    return 0


def cmd_nf(args) -> int:
    problem = load_problem(args)
    f = parse_polynomial(args.poly, problem.ctx)
    red = problem.gb.normal_form(wrap_poly(f))
    basis = problem.gb.poly_basis()
    doc = {
        "tool": _TOOL,
        "command": "nf",
        "problem": problem_doc(problem),
        "poly": str(f),
        "remainder": str(red.remainder.entries[0]),
        "member": red.remainder.is_zero(),
        "quotients": [{"basis": str(b), "quotient": str(q)}
                      for b, q in zip(basis, red.quotients)],
    }
    lines = [f"problem: {_describe(problem)}",
             f"normal form of {f}: {doc['remainder']}",
             f"ideal member: {'yes' if doc['member'] else 'no'}"]
    for pair in doc["quotients"]:
        if pair["quotient"] != "0":
            lines.append(f"  quotient {pair['quotient']}  on basis element {pair['basis']}")
    emit(args, doc, lines)
    return 0


def cmd_quotient(args) -> int:
    problem = load_problem(args)
    g = parse_polynomial(args.by, problem.ctx)
    gens = ideal_quotient(list(problem.gens), g, problem.guards)
    ordered = list(reversed(gens))  # smallest leading term first, for readability
    doc = {
        "tool": _TOOL,
        "command": "quotient",
        "problem": problem_doc(problem),
        "by": str(g),
        "generators": [str(f) for f in ordered],
    }
    lines = [f"problem: {_describe(problem)}",
             f"(I : {g}) = ({', '.join(doc['generators']) if ordered else '0'})"]
    emit(args, doc, lines)
    return 0


def cmd_jacobian(args) -> int:
    problem = load_problem(args)
    data = problem.jacobian
    basis = problem.jacobian_gb.poly_basis()
    doc = {
        "tool": _TOOL,
        "command": "jacobian-ideal",
        "problem": problem_doc(problem),
        "rank": data.rank,
        "minors": [str(m) for m in data.minors],
        "basis": [str(f) for f in basis],
    }
    lines = [f"problem: {_describe(problem)}",
             f"largest minor size with a minor outside the ideal: {data.rank}",
             f"minors: ({', '.join(doc['minors']) if data.minors else ''})",
             f"minor ideal + I, reduced basis: ({', '.join(reversed(doc['basis']))})"]
    emit(args, doc, lines)
    return 0


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read report file: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"report file is not valid JSON: {exc}")
    command = doc.get("command")
    if command not in ("check", "integrate", "euler"):
        raise UsageError(f"cannot verify reports for command {command!r}")
    problem = problem_from_doc(doc["problem"], args)
    failures: list[str] = []
    checked = 0
    if command == "check":
        checked += _verify_check(doc, problem, failures)
    elif command == "integrate":
        checked += _verify_integrate(doc, problem, failures)
    else:
        checked += _verify_euler(doc, problem, failures)
    out = {
        "tool": _TOOL,
        "command": "verify",
        "report": args.report,
        "checked": checked,
        "verified": not failures,
        "failures": failures,
    }
    lines = [f"checked {checked} item(s) from {args.report}"]
    lines += [f"  FAILED: {f}" for f in failures]
    lines.append("verified: " + ("yes" if not failures else "NO"))
    emit(args, out, lines)
    return 0 if not failures else 1


def _verify_images(problem: Problem, images: dict, first: list[str] | None,
                   label: str, failures: list[str]) -> None:
    try:
        D = images_from_doc(images, problem.ctx)
    except UsageError as exc:
        failures.append(f"{label}: cannot reconstruct ({exc})")
        return
    if not is_logarithmic(D, problem.gens, problem.gb):
        failures.append(f"{label}: does not preserve the ideal")
        return
    if first is not None:
        want = [parse_polynomial(s, problem.ctx) for s in first]
        got = [D.coefficient(r, 1) for r in range(problem.ctx.nvars)]
        if want != got:
            failures.append(f"{label}: level-1 component does not match the derivation")


def _verify_evidence(problem: Problem, mode: str, vector: list[str],
                     remainder: list[str], label: str, failures: list[str]) -> None:
    ctx = problem.ctx
    v = ModuleVector(ctx, [parse_polynomial(s, ctx) for s in vector])
    fresh = problem.module_gb(mode).normal_form(v).remainder
    want = ModuleVector(ctx, [parse_polynomial(s, ctx) for s in remainder])
    if fresh != want:
        failures.append(f"{label}: stored normal form is not reproducible")
    elif fresh.is_zero():
        failures.append(f"{label}: evidence normal form is zero, not an obstruction")


def _verify_check(doc: dict, problem: Problem, failures: list[str]) -> int:
    checked = 0
    generators = doc.get("generators", [])
    for entry in doc.get("levels", []):
        if entry["verdict"] == "TRUE":
            for cert in entry.get("certificates", []):
                label = f"level {entry['level']} certificate for generator {cert['generator']}"
                first = generators[cert["generator"]]
                _verify_images(problem, cert["images"], first, label, failures)
                checked += 1
        elif entry.get("witness"):
            w = entry["witness"]
            label = f"level {entry['level']} witness evidence"
            _verify_evidence(problem, FREE, w["vector"], w["remainder"], label, failures)
            checked += 1
    return checked


def _verify_integrate(doc: dict, problem: Problem, failures: list[str]) -> int:
    checked = 0
    if doc.get("certificate"):
        _verify_images(problem, doc["certificate"], doc["derivation"],
                       "integration certificate", failures)
        checked += 1
    if doc.get("vector") and doc.get("remainder"):
        _verify_evidence(problem, doc.get("mode", FREE), doc["vector"],
                         doc["remainder"], "integration evidence", failures)
        checked += 1
    return checked


def _verify_euler(doc: dict, problem: Problem, failures: list[str]) -> int:
    ring = problem.ctx.ring
    first = []
    for r, w in enumerate(doc["weights"]):
        first.append(str(problem.ctx.variable(r).scale(ring.from_int(w))))
    _verify_images(problem, doc["certificate"], first, "Euler certificate", failures)
    return 1


# -- shared helpers ---------------------------------------------------------------


def _describe(problem: Problem) -> str:
    ideal = ", ".join(str(f) for f in problem.gens) if problem.gens else "0"
    return (f"{problem.ctx.ring}[{', '.join(problem.ctx.vars.names)}] / ({ideal}), "
            f"order {problem.ctx.order}")


def _certificate_lines(D: HSDerivation) -> list[str]:
    lines = ["  certificate images:"]
    for name, series in zip(D.ctx.vars.names, D.images):
        lines.append(f"    {name} -> {series}")
    return lines


def _split_polys(text: str, ctx: PolyRing) -> list[Polynomial]:
    parts = text.split(",")
    return [parse_polynomial(part, ctx) for part in parts]


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print(f"aborted (resource limit): {exc}; partial output is not a verdict",
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
