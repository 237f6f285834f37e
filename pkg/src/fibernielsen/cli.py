"""Command line front end.

Exit codes: 0 success, 2 bad input, 3 mathematically incompatible input,
4 internal mismatch between an engine and a closed form.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .abgroup import cokernel, mod_inf
from .errors import (
    CensusMismatchError,
    IncompatibleInputError,
    NielsenError,
)
from .intlin import IntMatrix
from .nielsen import (
    Factor,
    ResultReport,
    compute,
    product_census,
    product_closed_form,
    product_problem,
    switch_closed_form,
    switch_problem,
)
from .problemfile import ProblemFileError, load_problem

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCOMPATIBLE = 3
EXIT_MISMATCH = 4


class Mismatch(Exception):
    pass


def format_report(r: ResultReport) -> str:
    lines = [f"G = {r.group_structure}"]
    c = r.census
    if c is None:
        lines.append(f"census: not needed (rank {r.group_structure.free_rank} exceeds the base rank)")
    else:
        nu_inf = "undetermined" if c.nu_inf is None else c.nu_inf
        lines.append(f"census: nu_odd = {c.nu_odd}, nu_even = {c.nu_even}, nu_inf = {nu_inf}")
        if c.orbits is not None:
            for rep, size in c.orbits:
                lines.append(f"  orbit of {rep}: size {size}")
    lines += [f"N_B = {r.nielsen}", f"MCC_B = {r.mcc}", f"MC_B = {r.mc}"]
    return "\n".join(lines)


def cmd_compute(args) -> int:
    report = compute(load_problem(args.path))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(format_report(report))
    return EXIT_OK


def check_switch(a: int, b: int, c: int) -> dict:
    """Engine-vs-closed-form comparison for one triple. Raises Mismatch."""
    closed = switch_closed_form(a, b, c)
    report = compute(switch_problem(a, b, c))
    if report.nielsen != closed or report.mcc != closed:
        raise Mismatch(f"switch {a} {b} {c}: engine N_B = {report.nielsen}, closed form {closed}")
    out = {"triple": [a, b, c], "N_B": closed, "products": {}}
    for factor in Factor:
        expected = product_closed_form(a, b, c, factor)
        got = compute(product_problem(switch_problem(a, b, c), factor))
        if (got.mcc, got.mc) != expected:
            raise Mismatch(f"switch {a} {b} {c} x {factor.value}: engine {(got.mcc, got.mc)}, closed form {expected}")
        if abs(a) != abs(b):
            pc = product_census(a, b, c, factor)
            total = mod_inf(pc.nu_odd) + mod_inf(pc.nu_even) + mod_inf(pc.nu_inf)
            if total != expected[0]:
                raise Mismatch(f"switch {a} {b} {c} x {factor.value}: product census {total}, closed form {expected[0]}")
        out["products"][factor.value] = expected[0]
    return out


def cmd_switch(args) -> int:
    a, b, c = args.a, args.b, args.c
    if args.factor is None:
        closed = switch_closed_form(a, b, c)
        report = compute(switch_problem(a, b, c))
        if report.nielsen != closed:
            print(f"mismatch: engine N_B = {report.nielsen}, closed form {closed}", file=sys.stderr)
            return EXIT_MISMATCH
        if args.json:
            out = report.to_dict()
            out["closed_form"] = closed
            print(json.dumps(out, indent=2))
        else:
            print(format_report(report))
            print(f"closed form N_B = {closed} (agrees)")
        return EXIT_OK
    factor = Factor(args.factor)
    mcc, mc = product_closed_form(a, b, c, factor)
    report = compute(product_problem(switch_problem(a, b, c), factor))
    if (report.mcc, report.mc) != (mcc, mc):
        print(f"mismatch: engine MCC_B, MC_B = {report.mcc}, {report.mc}; closed form {mcc}, {mc}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.json:
        out = report.to_dict()
        out["closed_form"] = {"MCC_B": mcc, "MC_B": mc}
        print(json.dumps(out, indent=2))
    else:
        print(format_report(report))
        print(f"closed form MCC_B = {mcc}, MC_B = {mc} (agrees)")
    return EXIT_OK


def _check_chunk(triples):
    out = []
    for t in triples:
        try:
            check_switch(*t)
            out.append(None)
        except Mismatch as exc:
            out.append(str(exc))
    return out


def run_verify(r: int, jobs: int = 1) -> dict:
    triples = [(a, b, c) for a in range(-r, r + 1) for b in range(-r, r + 1) for c in range(-r, r + 1)]
    chunks = [triples[i:i + 64] for i in range(0, len(triples), 64)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [x for chunk in pool.map(_check_chunk, chunks) for x in chunk]
    else:
        results = [x for chunk in chunks for x in _check_chunk(chunk)]
    mismatches = [msg for msg in results if msg is not None]
    return {"range": r, "checked": len(triples), "mismatches": mismatches}


def cmd_verify(args) -> int:
    if args.range < 0:
        print("error: --range must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    summary = run_verify(args.range, args.jobs)
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(f"{summary['checked']} cases checked, {len(summary['mismatches'])} mismatches")
    if summary["mismatches"]:
        for msg in summary["mismatches"]:
            print(msg, file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_matrix_arg(text: str) -> IntMatrix:
    src = text
    if not text.lstrip().startswith("["):
        try:
            src = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise ProblemFileError(text, f"cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(src, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise ProblemFileError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ProblemFileError("$", "expected a nonempty array of rows")
    for i, row in enumerate(data):
        if len(row) != len(data[0]):
            raise ProblemFileError(f"$[{i}]", "rows must have equal length")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ProblemFileError(f"$[{i}][{j}]", f"expected an integer, got {json.dumps(x)}")
    return IntMatrix.from_rows(data, len(data[0]))


def _no_float(s):
    raise ProblemFileError("$", f"floating point value {s} is not allowed")


def cmd_snf(args) -> int:
    g, _ = cokernel(_parse_matrix_arg(args.matrix))
    if args.json:
        print(json.dumps({"torsion": list(g.torsion), "free_rank": g.free_rank, "text": str(g)}))
    else:
        print(g)
    return EXIT_OK


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("NIELSEN_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fibernielsen",
        description="Nielsen and minimum coincidence numbers of fiberwise maps between torus bundles.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="evaluate a JSON problem file")
    c.add_argument("path")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("switch", help="maps of the coordinate-switch 2-torus bundle, given (a, b, c)")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--factor", choices=[f.value for f in Factor])
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_switch)

    v = sub.add_parser("verify", help="sweep all triples with |a|, |b|, |c| <= R")
    v.add_argument("--range", type=int, required=True)
    v.add_argument("--jobs", type=int, default=_default_jobs())
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("snf", help="invariant factors of the cokernel of an integer matrix")
    n.add_argument("matrix", help="inline JSON like '[[3,1],[1,3]]' or a path to a JSON file")
    n.add_argument("--json", action="store_true")
    n.set_defaults(func=cmd_snf)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IncompatibleInputError as exc:
        print(f"error: incompatible input: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except CensusMismatchError as exc:
        print(f"error: internal mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (NielsenError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
