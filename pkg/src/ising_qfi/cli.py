"""Command-line entry point: ``ising-qfi {gfunction,maxvar,product-scan,verify}``.

Tables are written as CSV (17 significant digits, header row, LF endings) or
JSON.  Grid points are farmed out to ``--workers`` processes and written back
in grid order, so output does not depend on the worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .asymptotics import f_ghz, g_optimal
from .exact_oracle import ModelKind, n_max
from .fermion_core import DomainError, ModelParams, Target, max_variance
from .product_opt import DEFAULT_RESTARTS, fit_power_law, optimize
from .verification import LEVELS, run_all

log = logging.getLogger("ising_qfi")

EXIT_FAILURE = 1
EXIT_BAD_GRID = 2
EXIT_TOO_LARGE = 3


class GridError(ValueError):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def parse_float_grid(text: str) -> list[float]:
    """``"0,0.5,1"`` or ``"start:stop:num"`` (inclusive, evenly spaced)."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            num = int(num)
            if num < 1:
                raise GridError("grid needs at least one point")
            if num == 1:
                return [float(start)]
            a, b = float(start), float(stop)
            return [a + (b - a) * i / (num - 1) for i in range(num)]
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise GridError(f"cannot parse grid {text!r}") from exc
    if not values:
        raise GridError("empty grid")
    return values


def parse_n_grid(n: int | None, n_range: str | None) -> list[int]:
    if n_range:
        try:
            lo, hi = (int(v) for v in n_range.split(":"))
        except ValueError as exc:
            raise GridError(f"--N-range must look like A:B, got {n_range!r}") from exc
        values = list(range(lo, hi + 1))
    elif n is not None:
        values = [n]
    else:
        raise GridError("give --N or --N-range")
    if not values or min(values) < 2:
        raise GridError("chain sizes must be >= 2 and the range non-empty")
    return values


def write_table(rows: list[dict], fmt: str, out, extra: dict | None = None) -> None:
    if fmt == "json":
        doc = {"rows": rows}
        if extra is not None:
            doc.update(extra)
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(_fmt(v) for v in row.values())
    out.write(buf.getvalue())
    if extra is not None:
        out.write("\n" + json.dumps(extra, indent=2) + "\n")


def _map(func, items, workers: int) -> list:
    if workers <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# -- commands ----------------------------------------------------------------


def _prefactors(g: float) -> dict:
    return {"g": g, "G": g_optimal(g), "F": f_ghz(g)}


def cmd_gfunction(args) -> tuple[list[dict], dict | None]:
    grid = sorted(parse_float_grid(args.g))
    if any(g < 0 for g in grid):
        raise GridError("g values must be >= 0")
    return _map(_prefactors, grid, args.workers), None


def _maxvar_row(task) -> dict:
    N, J, B, t, which = task
    var = max_variance(ModelParams(N, J, B, t), which).variance
    return {"N": N, "variance_over_t2": var / t**2 if t > 0 else 0.0}


def cmd_maxvar(args) -> tuple[list[dict], dict | None]:
    ns = parse_n_grid(args.N, args.N_range)
    tasks = [(N, args.J, args.B, args.t, args.which) for N in ns]
    return _map(_maxvar_row, tasks, args.workers), None


def cmd_product_scan(args) -> tuple[list[dict], dict | None]:
    ns = parse_n_grid(args.N, args.N_range)
    limit = n_max()
    if max(ns) > limit:
        raise OverflowError(f"N={max(ns)} exceeds the dense-simulation limit {limit}")
    rows = []
    for N in ns:
        params = ModelParams(N, args.J, args.B, args.t)
        run = optimize(
            params, args.which, args.model, restarts=args.restarts, seed=args.seed, workers=args.workers
        )
        log.info("N=%d best=%.10g converged=%d/%d", N, run.best_variance, run.restarts_converged, run.restarts)
        norm = run.best_variance / args.t**2 if args.t > 0 else 0.0
        rows.append({"N": N, "best_variance_over_t2": norm, "restarts_converged": run.restarts_converged})
    fit = None
    if len(rows) >= 4 and args.t > 0:
        fit = fit_power_law([(r["N"], r["best_variance_over_t2"]) for r in rows]).as_dict()
    return rows, {"fit": fit}


def cmd_verify(args) -> int:
    results = run_all(args.level, eps_omega=args.eps_omega)
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    print("ALL PASS" if ok else "FAILURES")
    return 0 if ok else EXIT_FAILURE


# -- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, with_model: bool = False) -> None:
    p.add_argument("--J", type=float, default=1.0, help="coupling J")
    p.add_argument("--B", type=float, default=1.0, help="transverse field B")
    p.add_argument("--t", type=float, default=20.0, help="evolution time")
    p.add_argument("--N", type=int, help="single chain size")
    p.add_argument("--N-range", dest="N_range", metavar="A:B", help="inclusive range of chain sizes")
    p.add_argument("--which", type=Target.parse, choices=list(Target), default=Target.J)
    if with_model:
        p.add_argument(
            "--model", type=ModelKind, choices=list(ModelKind), default=ModelKind.SPIN_OPEN,
            metavar="{spin-open,spin-periodic,fermion-cyclic}",
        )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ising-qfi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gfunction", help="asymptotic prefactors G(g) and F(g)")
    p.add_argument("--g", default="0:4:41", help="grid: comma list or start:stop:num")
    _output(p)

    p = sub.add_parser("maxvar", help="optimal-state variance / t^2 over N")
    _common(p)
    _output(p)

    p = sub.add_parser("product-scan", help="best product-state variance / t^2 over N, with power-law fit")
    _common(p, with_model=True)
    _output(p)

    p = sub.add_parser("verify", help="closed form vs matrix oracle suites")
    p.add_argument("--level", choices=sorted(LEVELS), default="fast")
    p.add_argument("--eps-omega", type=float, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    if args.command == "verify":
        return cmd_verify(args)
    if args.workers < 1:
        parser.error("--workers must be >= 1")

    commands = {"gfunction": cmd_gfunction, "maxvar": cmd_maxvar, "product-scan": cmd_product_scan}
    try:
        rows, extra = commands[args.command](args)
    except (GridError, DomainError) as exc:
        print(f"ising-qfi: error: {exc}", file=sys.stderr)
        return EXIT_BAD_GRID
    except OverflowError as exc:
        print(f"ising-qfi: error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE

    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_table(rows, args.format, fh, extra)
    else:
        write_table(rows, args.format, sys.stdout, extra)
    return 0


if __name__ == "__main__":
    sys.exit(main())
