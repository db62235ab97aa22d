"""Command-line front end.

Every command prints either a short text summary or, with ``--json``, a
report ``{command, inputs, result, timing, version}``. Exit codes: 0 on
success, 2 on parse or validation errors, 3 when an exact search runs out
of budget.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .contributions import count_contributions, report as contribution_report
from .errors import BudgetExhausted, ConvergenceError, DomainError, NotSimpleError, ParseError
from .exponents import ITERATION_TOL, MODES, iterate_to_limit
from .extremal import DEFAULT_BUDGET, fs_exact
from .matrix import Matrix, Pattern, associated_family, require_simple
from .setfamily import (
    SetFamily,
    compress_family,
    down_close,
    sauer_shelah_threshold,
    shattered_sets,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID, result: dict | None = None):
        super().__init__(message)
        self.code = code
        self.result = result


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from None


def _load_family(path: str) -> SetFamily:
    try:
        return SetFamily.from_text(_read(path))
    except ParseError as exc:
        raise CommandError(f"{path}: {exc}") from None


def _load_matrix(path: str) -> Matrix:
    try:
        return Matrix.from_text(_read(path))
    except ParseError as exc:
        raise CommandError(f"{path}: {exc}") from None


def _load_pattern(path: str) -> Pattern:
    try:
        return Pattern.from_text(_read(path))
    except ParseError as exc:
        raise CommandError(f"{path}: {exc}") from None


def _sets(family: SetFamily) -> list[list[int]]:
    return family.as_lists()


# -- commands: each returns (inputs, result, text lines) ------------------


def cmd_compress(args) -> tuple[dict, dict, list[str]]:
    family = _load_family(args.family)
    inputs = {"family": args.family, "index": args.index}
    if args.index == "all":
        out = down_close(family)
    else:
        try:
            out = compress_family(family, int(args.index))
        except ValueError as exc:
            raise CommandError(f"bad index {args.index!r}: {exc}") from None
    result = {
        "m": family.ground_size,
        "sets": _sets(out),
        "measure_before": family.size_sum,
        "measure_after": out.size_sum,
        "down_family": out.is_down_family(),
    }
    lines = [out.to_text().rstrip("\n"), f"# measure {family.size_sum} -> {out.size_sum}"]
    return inputs, result, lines


def cmd_shatter(args) -> tuple[dict, dict, list[str]]:
    family = _load_family(args.family)
    m, k = family.ground_size, args.k
    inputs = {"family": args.family, "k": k}
    if not 0 <= k <= m:
        raise CommandError(f"k={k} must lie in [0, {m}]")
    found = shattered_sets(family, k)
    threshold = sauer_shelah_threshold(m, k)
    result = {
        "m": m,
        "k": k,
        "family_size": len(family),
        "shattered": [list(s.members) for s in found],
        "count": len(found),
        "threshold": threshold,
        "threshold_met": len(family) >= threshold,
    }
    lines = [str(s) for s in found]
    lines.append(
        f"# {len(found)} shattered {k}-sets; |family| = {len(family)}, "
        f"threshold {threshold} {'met' if result['threshold_met'] else 'not met'}"
    )
    return inputs, result, lines


def cmd_pipeline(args) -> tuple[dict, dict, list[str]]:
    matrix = _load_matrix(args.matrix)
    k = args.k
    inputs = {"matrix": args.matrix, "k": k}
    try:
        simple = require_simple(matrix)
    except NotSimpleError as exc:
        raise CommandError(f"{args.matrix}: {exc}; a simple matrix is required") from None
    if not 1 <= k <= matrix.rows:
        raise CommandError(f"k={k} must lie in [1, {matrix.rows}]")
    family = associated_family(simple)
    down = down_close(family)
    shattered = shattered_sets(family, k)
    shattered_down = shattered_sets(down, k)
    transfer = set(shattered_down) <= set(shattered)
    if not transfer:
        raise AssertionError("a set shattered by the down-closure is not shattered by the family")
    total, _ = count_contributions(simple, k, threads=args.threads)
    result = {
        "m": matrix.rows,
        "n": matrix.n,
        "k": k,
        "family_size": len(family),
        "down_family": _sets(down),
        "measure_before": family.size_sum,
        "measure_after": down.size_sum,
        "shattered": [list(s.members) for s in shattered],
        "shattered_by_down_family": [list(s.members) for s in shattered_down],
        "shattering_transfer": transfer,
        "contributions": total,
    }
    lines = [
        f"family: {len(family)} sets on m={matrix.rows}",
        f"down-closure measure {family.size_sum} -> {down.size_sum}",
        f"shattered {k}-sets: {len(shattered)} (down family: {len(shattered_down)})",
        f"contributions: {total}",
    ]
    return inputs, result, lines


def cmd_contributions(args) -> tuple[dict, dict, list[str]]:
    matrix = _load_matrix(args.matrix)
    k = args.k
    inputs = {"matrix": args.matrix, "k": k}
    if not 1 <= k <= matrix.rows:
        raise CommandError(f"k={k} must lie in [1, {matrix.rows}]")
    total, witness = count_contributions(matrix, k, threads=args.threads)
    result = contribution_report(total, witness)
    lines = [
        f"rows {entry['rows']}: {entry['count']} windows {entry['windows']}"
        for entry in result["per_row_set"]
    ]
    lines.append(f"# total {total}")
    return inputs, result, lines


def cmd_fs_search(args) -> tuple[dict, dict, list[str]]:
    pattern = _load_pattern(args.pattern)
    inputs = {
        "m": args.m,
        "pattern": args.pattern,
        "budget": args.budget,
        "threads": args.threads,
        "canonicalize": args.canonicalize,
        "seed": args.seed,
    }
    try:
        res = fs_exact(args.m, pattern, budget=args.budget, threads=args.threads,
                       canonicalize=args.canonicalize, seed=args.seed)
    except BudgetExhausted as exc:
        raise CommandError(str(exc), EXIT_BUDGET, {
            "m": args.m,
            "pattern": pattern.to_rows(),
            "lower": exc.lower,
            "upper": exc.upper,
            "nodes_explored": exc.nodes,
            "witness": exc.witness.to_rows() if exc.witness is not None else None,
        }) from None
    except DomainError as exc:
        raise CommandError(str(exc)) from None
    result = res.to_dict()
    lines = [f"fs({args.m}, {pattern}) = {res.value}", *res.witness.to_rows(),
             f"# {res.nodes_explored} nodes, {res.wall_time:.3f}s"]
    return inputs, result, lines


def _parse_table(spec: str) -> tuple[int, int]:
    lo, sep, hi = spec.partition("..")
    if not sep:
        raise CommandError(f"--table expects kmin..kmax, got {spec!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise CommandError(f"--table expects integers, got {spec!r}") from None


def cmd_exponents(args) -> tuple[dict, dict, list[str]]:
    inputs = {"k": args.k, "mode": args.mode, "tol": args.tol, "table": args.table}
    if args.table:
        kmin, kmax = _parse_table(args.table)
    elif args.k is not None:
        kmin = kmax = args.k
    else:
        raise CommandError("give --k or --table")
    rows = []
    try:
        for k in range(kmin, kmax + 1):
            st = iterate_to_limit(k, args.mode, tol=args.tol)
            rows.append(st.to_dict(sequence_terms=args.sequence))
    except (DomainError, ConvergenceError) as exc:
        raise CommandError(str(exc)) from None
    result = {"mode": args.mode, "tol": args.tol, "rows": rows}
    lines = [f"{'k':>3} {'gamma_limit':>16} {'fs_exponent':>16} {'iterations':>10}"]
    for r in rows:
        lines.append(f"{r['k']:>3} {r['limit']:>16.10f} {r['fs_exponent']:>16.10f} {r['iterations']:>10}")
        if args.sequence:
            lines.append("    gamma: " + " ".join(f"{g:.12g}" for g in r["gamma_sequence"]))
    return inputs, result, lines


COMMANDS = {
    "compress": cmd_compress,
    "shatter": cmd_shatter,
    "pipeline": cmd_pipeline,
    "contributions": cmd_contributions,
    "fs-search": cmd_fs_search,
    "exponents": cmd_exponents,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--threads", type=int, default=1, help="worker threads")

    parser = argparse.ArgumentParser(prog="fsmat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", parents=[common], help="compress a family at i, or down-close it")
    p.add_argument("family")
    p.add_argument("index", nargs="?", default="all", help="element index or 'all'")

    p = sub.add_parser("shatter", parents=[common], help="list shattered k-sets")
    p.add_argument("family")
    p.add_argument("k", type=int)

    p = sub.add_parser("pipeline", parents=[common],
                       help="matrix -> family -> down-closure -> shattered sets -> contributions")
    p.add_argument("matrix")
    p.add_argument("k", type=int)

    p = sub.add_parser("contributions", parents=[common], help="count contributions")
    p.add_argument("matrix")
    p.add_argument("k", type=int)

    p = sub.add_parser("fs-search", parents=[common], help="exact fs(m, F)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--canonicalize", action="store_true")

    p = sub.add_parser("exponents", parents=[common], help="exponent recurrences")
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=MODES, default="quadratic")
    p.add_argument("--tol", type=float, default=ITERATION_TOL)
    p.add_argument("--table", help="range kmin..kmax")
    p.add_argument("--sequence", type=int, default=0, metavar="N",
                   help="also print the first N terms of each gamma sequence")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        inputs, result, lines = COMMANDS[args.command](args)
        inputs = {**inputs, "seed": args.seed, "threads": args.threads}
        code = EXIT_OK
        message = None
    except CommandError as exc:
        inputs = {k: v for k, v in vars(args).items() if k not in ("command", "json")}
        result, lines = exc.result, []
        code, message = exc.code, str(exc)
    timing = time.perf_counter() - t0
    if args.json:
        payload = {
            "command": args.command,
            "inputs": inputs,
            "result": result,
            "timing": timing,
            "version": __version__,
            "backend": kernels.BACKEND,
        }
        if message is not None:
            payload["error"] = message
            payload["exit_code"] = code
        json.dump(payload, out, indent=2)
        out.write("\n")
    else:
        for line in lines:
            print(line, file=out)
    if message is not None:
        print(f"error: {message}", file=err)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
