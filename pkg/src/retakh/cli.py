"""Command-line front end.

Every command builds one output record ``{"command", "params", "payload"}``
and renders it as JSON (default), CSV (tabular payloads) or plain text.
Exact numbers are always strings (``"p/q"`` or integers); reals are
rounded to 12 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import gf, paths
from .config import BUDGET_ENV, ORDER_ENV, Config
from .series import Series

SERIES_CHOICES = ("M", "v", "F", "G", "S", "R")


class CommandError(Exception):
    """Reported on stderr with exit status 1."""


def exact(x: Fraction | int) -> str:
    return str(Fraction(x))


def real(x: float) -> float | str:
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


class Record:
    def __init__(self, command: str, params: dict[str, Any]):
        self.command = command
        self.params = params
        self.payload: dict[str, Any] = {}
        self.header: list[str] | None = None
        self.rows: list[list[Any]] = []
        self.ok = True

    def table(self, header: list[str], rows: list[list[Any]]) -> None:
        self.header = header
        self.rows = rows

    def as_dict(self, meta: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "params": self.params, "payload": self.payload}
        if meta:
            out["meta"] = {"python": platform.python_version(), "platform": platform.platform()}
        return out


def render(record: Record, fmt: str, meta: bool = False) -> str:
    if fmt == "json":
        return json.dumps(record.as_dict(meta), indent=2) + "\n"
    if fmt == "csv":
        if record.header is None:
            raise CommandError(f"{record.command} has no tabular payload; use --format json")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(record.header)
        writer.writerows(record.rows)
        return buf.getvalue()
    lines = [f"{record.command} " + " ".join(f"{k}={v}" for k, v in record.params.items())]
    if record.header is not None:
        lines.append("  ".join(record.header))
        lines.extend("  ".join(str(c) for c in row) for row in record.rows)
    else:
        lines.extend(f"{k}: {v}" for k, v in record.payload.items())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_count(args: argparse.Namespace, cfg: Config) -> Record:
    n = args.semilength
    method = args.method
    if method == "auto":
        method = "both" if n <= cfg.budget else "gf"
    rec = Record("count", {"semilength": n, "method": method})
    counts: dict[str, int] = {}
    if method in ("brute", "both"):
        if n > cfg.budget:
            raise CommandError(f"semilength {n} exceeds exhaustive budget {cfg.budget}")
        counts["brute"] = sum(1 for _ in paths.enumerate_with_stats(n))
    if method in ("gf", "both"):
        counts["gf"] = int(gf.motzkin_series(n).coeff(n))
    if len(set(counts.values())) != 1:
        raise CommandError(f"methods disagree: {counts}")
    value = next(iter(counts.values()))
    rec.payload = {"count": exact(value), "methods": sorted(counts)}
    rec.table(["semilength", "count"], [[n, exact(value)]])
    return rec


def cmd_enumerate(args: argparse.Namespace, cfg: Config) -> Record:
    n = args.semilength
    if n > cfg.budget:
        raise CommandError(f"semilength {n} exceeds exhaustive budget {cfg.budget}")
    rec = Record("enumerate", {"semilength": n, "stats": bool(args.stats)})
    # plain string order of the U/D words (D sorts before U)
    found = sorted(paths.enumerate_restricted(n), key=lambda p: p.steps)
    if not args.stats:
        rec.payload = {"count": exact(len(found)), "paths": [p.steps for p in found]}
        rec.table(["path"], [[p.steps] for p in found])
        return rec
    rows = []
    for p in found:
        st = paths.stats(p)
        rows.append({
            "path": p.steps,
            "tree": paths.path_to_tree(p).to_parens(),
            "height": st.height,
            "peaks": [list(pk) for pk in st.peaks],
            "leaves": st.leaf_count,
        })
    rec.payload = {"count": exact(len(found)), "rows": rows}
    rec.table(
        ["path", "tree", "height", "peak_levels", "leaves"],
        [[r["path"], r["tree"], r["height"], " ".join(str(l) for _, l in r["peaks"]), r["leaves"]] for r in rows],
    )
    return rec


def cmd_height(args: argparse.Namespace, cfg: Config) -> Record:
    n = args.semilength
    rep = gf.avg_height_exact(n, method=args.method, order=cfg.order, budget=cfg.budget)
    rec = Record("height", {"semilength": n, "method": rep.method})
    rec.payload = {
        "n": n,
        "normalizer": rep.normalizer,
        "paths": exact(gf.motzkin_number(n)),
        "exact_total_even_height": exact(rep.exact_total_even_height),
        "exact_average": exact(rep.exact_average),
        "asymptotic_average": real(rep.asymptotic_average),
        "ratio": real(rep.ratio),
    }
    rec.table(list(rec.payload), [list(rec.payload.values())])
    return rec


def cmd_leaves(args: argparse.Namespace, cfg: Config) -> Record:
    n = args.semilength
    rep = gf.avg_leaves_exact(n, method=args.method, order=cfg.order, budget=cfg.budget)
    rec = Record("leaves", {"semilength": n, "method": rep.method})
    rec.payload = {
        "n": n,
        "node_count": rep.node_count,
        "trees": exact(gf.motzkin_number(n)),
        "exact_total_leaves": exact(rep.exact_total_leaves),
        "exact_average": exact(rep.exact_average),
        "asymptotic_average": real(rep.asymptotic_average),
        "ratio": real(rep.ratio),
    }
    rec.table(list(rec.payload), [list(rec.payload.values())])
    return rec


def series_by_name(which: str, order: int) -> Series:
    if which == "M":
        return gf.motzkin_series(order)
    if which == "v":
        return gf.v_series(order)
    if which == "F":
        return gf.solve_fg(order)[0]
    if which == "G":
        return gf.solve_fg(order)[1]
    if which == "S":
        return gf.height_numerator_series(max(order, 1))
    if which == "R":
        return gf.leaves_numerator(order)
    raise CommandError(f"unknown series {which!r}")


def cmd_series(args: argparse.Namespace, cfg: Config) -> Record:
    s = series_by_name(args.which, cfg.order)
    coeffs = [exact(c) for c in s.coeffs]
    rec = Record("series", {"which": args.which, "order": s.order})
    rec.payload = {"coefficients": coeffs}
    rec.table(["n", "coefficient"], [[i, c] for i, c in enumerate(coeffs)])
    return rec


def cmd_verify(args: argparse.Namespace, cfg: Config) -> Record:
    from .verify import run_checks

    results = run_checks(args.level)
    rec = Record("verify", {"level": args.level})
    rec.ok = all(r.passed for r in results)
    rec.payload = {
        "passed": rec.ok,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    rec.table(["name", "passed", "detail"], [[r.name, r.passed, r.detail] for r in results])
    return rec


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--budget", type=int, default=None,
                        help=f"largest semilength for brute force (env {BUDGET_ENV}, default 14)")
    common.add_argument("--order", type=int, default=None,
                        help=f"series truncation order (env {ORDER_ENV}, default 200)")
    common.add_argument("--meta", action="store_true", help="add environment info outside the payload")

    parser = argparse.ArgumentParser(
        prog="retakh",
        description="Exact enumeration and generating functions for Retakh-restricted Dyck paths.",
        epilog=f"Flags override the environment variables {BUDGET_ENV} and {ORDER_ENV}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="number of restricted paths (Motzkin number)")
    p.add_argument("--semilength", type=int, required=True)
    p.add_argument("--method", choices=("auto", "brute", "gf", "both"), default="auto")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", parents=[common], help="list restricted paths as U/D strings, sorted")
    p.add_argument("--semilength", type=int, required=True)
    p.add_argument("--stats", action="store_true", help="add tree, height, peaks and leaves per path")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("height", parents=[common], help="exact and asymptotic average height")
    p.add_argument("--semilength", type=int, required=True)
    p.add_argument("--method", choices=("auto", "series", "formula", "brute"), default="auto")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("leaves", parents=[common], help="exact and asymptotic average leaf count")
    p.add_argument("--semilength", type=int, required=True)
    p.add_argument("--method", choices=("auto", "derivative", "r-series", "formula", "brute"), default="auto")
    p.set_defaults(func=cmd_leaves)

    p = sub.add_parser("series", parents=[common], help="dump exact series coefficients")
    p.add_argument("--which", choices=SERIES_CHOICES, required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.from_env(budget=args.budget, order=args.order)
        if getattr(args, "semilength", 0) < 0:
            raise CommandError("semilength must be non-negative")
        record = args.func(args, cfg)
        sys.stdout.write(render(record, args.format, args.meta))
    except (CommandError, ValueError, paths.BudgetExceeded, gf.ConsistencyError) as exc:
        print(f"retakh {args.command}: {exc}", file=sys.stderr)
        return 1
    if not record.ok:
        failed = [c["name"] for c in record.payload.get("checks", []) if not c["passed"]]
        print(f"retakh {args.command}: failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
