"""Command-line front end: ``surfhom <verify|refl|surface|reduce|gns> ...``.

Reports are JSON on standard output with sorted keys and floats rounded to 12
significant digits, so identical invocations produce identical bytes. Exit
status is 0 on success, 1 when a check fails or required data is missing,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import category_core as cc
from . import fusion_data as fd
from . import gluing_patterns as gp
from . import internal_algebra as ia
from . import reflection_algebra as ra
from . import states_gns as sg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _clean(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real)), _clean(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        r = float(f"{x:.12g}")
        return 0.0 if r == 0 else r
    return x


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


def load_category(args) -> fd.FusionData:
    try:
        if args.category:
            path = Path(args.category)
            if not path.is_file():
                raise UsageError(f"category file {args.category!r} not found")
            return fd.load(path)
        return fd.builtin(args.builtin or "trivial")
    except fd.CategoryError as exc:
        raise UsageError(f"invalid category: {exc}") from None


def load_patterns(text: str | None) -> list[gp.GluingPattern]:
    if not text:
        raise UsageError("--pattern is required")
    path = Path(text)
    lines = [text]
    if path.is_file():
        lines = [ln.split("#", 1)[0].strip() for ln in path.read_text(encoding="utf-8").splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise UsageError(f"pattern file {text!r} has no patterns")
    out = []
    for k, ln in enumerate(lines, start=1):
        try:
            out.append(gp.parse_pattern(ln))
        except gp.PatternError as exc:
            where = f" (line {k})" if len(lines) > 1 else ""
            raise UsageError(f"invalid pattern{where}: {exc}") from None
    return out


def parse_state(spec: str) -> str | list[complex]:
    if spec in ("counit", "coefficient", "trace"):
        return spec
    try:
        return [complex(tok.strip().replace(" ", "")) for tok in spec.split(",")]
    except ValueError:
        raise UsageError(f"state must be counit, coefficient, trace or comma-separated values, got {spec!r}") from None


def header(args, data: fd.FusionData, command: str) -> dict:
    return {
        "tool": "surfhom",
        "version": __version__,
        "command": command,
        "category": {"name": data.name, "content_hash": data.content_hash(), "simples": list(data.labels)},
        "tolerance_policy": {
            "check_tol": args.tol,
            "rank_threshold": cc.ATOL,
            "positivity_floor": sg.POSITIVITY_FLOOR,
        },
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> tuple[int, str]:
    data = load_category(args)
    rep = fd.verify(data, args.tol)
    out = header(args, data, "verify")
    out["verify"] = rep.to_dict()
    if args.format == "csv":
        return _status(rep.passed), _csv(["check", "residual"], sorted(rep.residuals.items()))
    return _status(rep.passed), dumps(out)


def refl_report(F: ra.ReflectionAlgebra, tol: float, candidate: str) -> tuple[dict, bool]:
    d = F.data
    T = ra.ground_multiplication_table(F)
    basis = [d.labels[X] for X in F.ground_basis]
    table = [
        [basis[x], basis[y], basis[z], complex(T[x, y, z])]
        for x in range(len(basis))
        for y in range(len(basis))
        for z in range(len(basis))
        if abs(T[x, y, z]) > 1e-14
    ]
    checks = ra.check_reflection_algebra(F, tol)
    counit = ra.counit_state_check(F, tol=tol)
    battery = ra.mcg_battery(F, tol)
    norms = ra.r_norms(F)
    report = {
        "fiber_dims": {d.labels[U]: len(F.fiber_labels[U]) for U in d.simples},
        "ground_basis": basis,
        "ground_table": table,
        "counit": {d.labels[X]: complex(ra.counit(F, F.r_vector(X))) for X in F.ground_basis},
        "norms": {
            d.labels[X]: {"norm": norms[X], "norm_squared": norms[X] ** 2, "qdim": d.qdim[X]} for X in F.ground_basis
        },
        "ground_operator_norms": {d.labels[X]: v for X, v in ra.ground_operator_norms(F).items()},
        "checks": checks.to_dict(),
        "counit_battery": counit.to_dict(),
        "mcg": {
            "candidate": candidate,
            "selected": battery[candidate].to_dict(),
            "battery": {c: r.to_dict() for c, r in battery.items()},
            "flags": {c: r.failures() for c, r in battery.items()},
        },
    }
    return report, checks.passed and counit.passed


def cmd_refl(args) -> tuple[int, str]:
    data = load_category(args)
    F = ra.build_reflection_algebra(data)
    report, ok = refl_report(F, args.tol, args.candidate)
    if args.format == "csv":
        return _status(ok), _csv(["label", "fiber_dim"], sorted(report["fiber_dims"].items()))
    out = header(args, data, "refl")
    out["refl"] = report
    return _status(ok), dumps(out)


def cmd_surface(args) -> tuple[int, str]:
    data = load_category(args)
    patterns = load_patterns(args.pattern)
    reports = gp.survey(patterns, data, cap=args.cap, check=args.check, tol=args.tol)
    ok = all(r.get("checks", {}).get(k, {}).get("passed", True) for r in reports for k in ("cstar", "yetter_drinfeld"))
    if args.format == "csv":
        rows = [[r["pattern"], r["genus"], r["boundary"], lbl, dim] for r in reports for lbl, dim in r["fiber_dims"].items()]
        return _status(ok), _csv(["pattern", "genus", "boundary", "label", "fiber_dim"], rows)
    out = header(args, data, "surface")
    out["surfaces"] = reports
    return _status(ok), dumps(out)


def cmd_reduce(args) -> tuple[int, str]:
    data = load_category(args)
    patterns = load_patterns(args.pattern)
    out = header(args, data, "reduce")
    results = []
    status = EXIT_OK
    for P in patterns:
        genus, boundary = P.topology
        entry = {
            "pattern": P.text,
            "classification": {f"{i},{j}": c for (i, j), c in sorted(P.classification.items())},
            "genus": genus,
            "boundary": boundary,
        }
        try:
            red = gp.closed_surface_reduction(P, data, cap=args.cap)
            entry.update(reduction_dim=red.dimension, boundary_data=red.source, module_residual=red.module_residual)
            if "a_P_dims" in red.notes:
                entry["fiber_dims"] = dict(zip(data.labels, red.notes["a_P_dims"]))
        except gp.ReductionDataRequired as exc:
            entry["error"] = str(exc)
            status = EXIT_FAIL
        results.append(entry)
    if args.format == "csv":
        rows = [[e["pattern"], e["genus"], e["boundary"], e.get("reduction_dim", "")] for e in results]
        return status, _csv(["pattern", "genus", "boundary", "reduction_dim"], rows)
    out["reductions"] = results
    return status, dumps(out)


def cmd_gns(args) -> tuple[int, str]:
    if args.format == "csv":
        raise UsageError("the gns report is nested; use --format json")
    data = load_category(args)
    F = ra.build_reflection_algebra(data)
    if args.pattern:
        patterns = load_patterns(args.pattern)
        if len(patterns) != 1:
            raise UsageError("gns takes exactly one pattern")
        A = gp.build_a_p(patterns[0], data, cap=args.cap, F=F)
        B = sg.ground_algebra(A)
        selector = {"algebra": "pattern", "pattern": patterns[0].text}
        Fsel = None
    else:
        A = F.algebra
        B = sg.ground_algebra(F)
        selector = {"algebra": "refl"}
        Fsel = F
    try:
        omega = sg.state_from_spec(B, parse_state(args.state), Fsel)
    except sg.StateError as exc:
        raise UsageError(str(exc)) from None
    state_rep = sg.state_report(omega)
    try:
        res = sg.gns(omega)
    except sg.StateError as exc:
        out = header(args, data, "gns")
        out["gns"] = {**selector, "state": omega.name, "error": str(exc), "state_checks": state_rep.to_dict()}
        return EXIT_FAIL, dumps(out)
    gns_rep = sg.gns_report(omega, res)
    identity = {"cyclic": gns_rep.to_dict(), "state": state_rep.to_dict()}
    ok = gns_rep.passed and state_rep.passed
    realization = args.realization
    if realization == "auto":
        realization = "regular" if data.is_pointed else "none"
    if realization == "regular":
        try:
            Phi = sg.regular_realization(data, args.tol)
        except sg.RealizationError as exc:
            if args.realization == "regular":
                raise UsageError(str(exc)) from None
            realization = "none"
            identity["realization_skipped"] = str(exc)
        else:
            real_rep = sg.realization_report(Phi)
            inner = sg.weighted_inner_identity_check(A, omega, Phi)
            inc = sg.realize_inclusion(A, omega, Phi)
            identity.update(realization=real_rep.to_dict(), weighted_inner=inner.to_dict(), inclusion=inc.report.to_dict())
            ok = ok and real_rep.passed and inner.passed and inc.report.passed
    out = header(args, data, "gns")
    out["gns"] = {
        **selector,
        "state": omega.name,
        "state_values": omega.values,
        "realization": realization,
        "gram_rank": res.rank,
        "kernel_dim": res.kernel_dim,
        "faithful": res.faithful_state,
        "representation_injective": res.injective,
        "iff_holds": res.iff_holds,
        "identity_residuals": identity,
    }
    return _status(ok), dumps(out)


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--category", help="category description file (JSON)")
    src.add_argument("--builtin", help="trivial | fib | ising | pointed:<orders>:<bichar>")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_positive_float, default=1e-8, help="pass threshold for residuals")
    common.add_argument("--cap", type=_positive_int, default=gp.DEFAULT_CAP, help="enumeration cap")

    parser = _Parser(prog="surfhom", description="Surface observables for unitary braided fusion categories.")
    parser.add_argument("--version", action="version", version=f"surfhom {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("verify", parents=[common], help="pentagon, hexagon and unitarity residuals")
    p = sub.add_parser("refl", parents=[common], help="reflection algebra report with the mapping-class battery")
    p.add_argument("--candidate", choices=ra.CANDIDATES, default="component-twist")
    for name, text in (("surface", "a_P invariants for gluing patterns"), ("reduce", "closed-surface reduction")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("pattern_pos", nargs="?", metavar="PATTERN")
        p.add_argument("--pattern", help="inline pattern or file with one pattern per line")
        if name == "surface":
            p.add_argument("--check", action="store_true", help="also run the C* and half-braiding batteries")
    p = sub.add_parser("gns", parents=[common], help="GNS and realization report for a state")
    p.add_argument("--pattern", help="use a_P of this pattern instead of the reflection algebra")
    p.add_argument("--state", default="counit", help="counit | coefficient | trace | comma-separated values")
    p.add_argument("--realization", choices=("auto", "regular", "none"), default="auto")
    return parser


COMMANDS = {"verify": cmd_verify, "refl": cmd_refl, "surface": cmd_surface, "reduce": cmd_reduce, "gns": cmd_gns}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "pattern_pos", None):
            if args.pattern:
                raise UsageError("give the pattern either positionally or with --pattern")
            args.pattern = args.pattern_pos
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(f"surfhom: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except gp.CapExceeded as exc:
        stderr.write(f"surfhom: error: {exc}\n")
        return EXIT_USAGE
    except (ia.AlgebraError, ra.ReflectionError, fd.UnsupportedMultiplicity, ValueError) as exc:
        stderr.write(f"surfhom: failure: {exc}\n")
        return EXIT_FAIL
    stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
