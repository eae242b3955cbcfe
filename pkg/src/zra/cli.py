"""Command-line entry point: ``zra {zeros,critical,verify,sums,report}``.

Exit codes: 0 success, 1 usage error, 2 data error (coverage, parse,
schema), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import root_atlas as ra
from . import spectral_sums as ss
from . import tables
from .errors import IncompleteTable, ZraError
from .theorem_verifier import asymmetry_rhs, verify_all
from .zeta_core import EvalConfig, hardy_Z

log = logging.getLogger("zra")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scan_window(args) -> list[tuple[float, float]]:
    grid, cfg = args
    values = hardy_Z(grid, cfg)
    positive = values >= 0
    idx = np.nonzero(positive[:-1] != positive[1:])[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def compute_zeros(t_lo: float, t_hi: float, tol: float, step: Optional[float], jobs: int, cfg: EvalConfig):
    """Scan and refine zeros, optionally across ``jobs`` processes.

    The grid is global and windows share their end points, so the result
    does not depend on ``jobs``.
    """
    if jobs <= 1:
        return ra.find_zeros(t_lo, t_hi, tol, step, cfg)
    step = step or ra.default_step(t_hi)
    grid = ra.scan_grid(t_lo, t_hi, step)
    cuts = np.linspace(0, len(grid) - 1, jobs + 1).astype(int)
    windows = [(grid[a : b + 1], cfg) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        brackets = [br for chunk in pool.map(_scan_window, windows) for br in chunk]
    first = 1
    if t_lo > 14:
        first += len(ra.scan_sign_changes(10.0, t_lo, min(step, ra.default_step(t_lo)), cfg=cfg))
    return ra.refine_zeros(brackets, tol, cfg, first)


def _load(path: Path) -> tables.CacheData:
    if not path.exists():
        raise FileNotFoundError(path)
    data = tables.read_cache(path)
    if data.zeros and data.zeros[0].index != 1:
        raise IncompleteTable(f"{path} starts at zero #{data.zeros[0].index}; sums need every zero from the first")
    return data


def _cache_path(arg: Optional[str]) -> Path:
    return Path(arg) if arg else tables.default_cache_path()


def cmd_zeros(args, cfg: EvalConfig) -> int:
    if not 0 < args.t_from < args.t_to:
        raise UsageError("need 0 < --from < --to")
    zeros = compute_zeros(args.t_from, args.t_to, args.tol, args.step, args.jobs, cfg)
    out = _cache_path(args.out)
    tables.write_cache(zeros, [], out, height=args.t_to)
    print(f"{len(zeros)} zeros in ({args.t_from:g}, {args.t_to:g}] written to {out}")
    return EXIT_OK


def cmd_critical(args, cfg: EvalConfig) -> int:
    path = _cache_path(args.cache)
    data = _load(path)
    cps = ra.critical_points(data.zeros, args.to, args.tol, cfg)
    out = Path(args.out) if args.out else path
    tables.write_cache(data.zeros, cps, out, height=data.height)
    print(f"{len(cps)} critical points up to {args.to:g} written to {out}")
    return EXIT_OK


def _report_payload(report) -> dict:
    return {
        "passed": report.passed,
        "checks": report.checks,
        "globals": report.globals,
        "empirical_constants": report.empirical_constants,
        "points": [
            {
                "t0": p.t0,
                "K": p.K,
                "rhs_bound": p.rhs_bound,
                "bound_holds": p.bound_holds,
                "margin": p.margin,
                "residuals": p.residuals,
                "decomposition": asdict(p.decomposition) if p.decomposition else None,
            }
            for p in report.points
        ],
    }


def cmd_verify(args, cfg: EvalConfig) -> int:
    path = _cache_path(args.cache)
    if args.table:
        source = tables.ZeroTableFile(Path(args.table), declared_height=args.table_height)
        zeros = tables.ingest_zero_table(source)
        height = tables.table_height(source, zeros)
        cps = ra.critical_points(zeros, args.critical_to, cfg=cfg)
    else:
        data = _load(path)
        zeros, cps, height = data.zeros, data.critical_points, data.height
    if len(zeros) < 2:
        print("no zero data", file=sys.stderr)
        return EXIT_DATA
    report = verify_all(zeros, cps, height=height)
    text = json.dumps(_report_payload(report), indent=2, sort_keys=True, default=str)
    if args.json:
        tables.atomic_write_text(args.json, text + "\n")
    else:
        print(text)
    for name, ok in report.checks.items():
        print(f"{'PASS' if ok else 'SKIP' if ok is None else 'FAIL'} {name}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sums(args, cfg: EvalConfig) -> int:
    data = _load(_cache_path(args.cache))
    cutoff = args.cutoff if args.cutoff else ss.cutoff_T(args.t0)
    s = ss.truncated_inverse_square_sum(args.t0, data.zeros, cutoff, height=data.height)
    payload = asdict(s)
    payload["pi_over_8t0"] = math.pi / (8 * args.t0) if args.t0 > 0 else None
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def report_rows(zeros, cps, height: float):
    for cp in cps:
        gap = ra.gap_metrics(cp)
        rhs = asymmetry_rhs(cp.t0) if cp.t0 > math.exp(math.e) else None
        residual = scaled = None
        if cp.t0 + ss.cutoff_T(cp.t0) <= height:
            e8 = ss.verify_eighth_pi(cp.t0, zeros, t0_tol=cp.tol, height=height)
            residual, scaled = e8.residual, e8.scaled_residual
        yield (cp.t0, cp.gamma_lo, cp.gamma_hi, gap.Q, gap.m, gap.K, rhs, residual, scaled)


def cmd_report(args, cfg: EvalConfig) -> int:
    data = _load(_cache_path(args.cache))
    if not data.critical_points:
        print("cache holds no critical points; run `zra critical` first", file=sys.stderr)
        return EXIT_DATA
    text = tables.render_report_csv(report_rows(data.zeros, data.critical_points, data.height))
    if args.out:
        tables.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zra", description=__doc__.splitlines()[0])
    p.add_argument("--rs-terms", type=int, default=EvalConfig.rs_correction_terms)
    p.add_argument("--em-cutoff", type=float, default=EvalConfig.euler_maclaurin_cutoff)
    p.add_argument("--abs-tol", type=float, default=EvalConfig.target_abs_tol)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeros", help="scan and refine zeros of Z on a height range")
    z.add_argument("--from", dest="t_from", type=float, default=10.0)
    z.add_argument("--to", dest="t_to", type=float, required=True)
    z.add_argument("--tol", type=float, default=ra.DEFAULT_ZERO_TOL)
    z.add_argument("--step", type=float, default=None)
    z.add_argument("--jobs", type=int, default=1)
    z.add_argument("--out", default=None)
    z.set_defaults(func=cmd_zeros)

    c = sub.add_parser("critical", help="locate the stationary point in each zero gap")
    c.add_argument("--cache", default=None)
    c.add_argument("--to", type=float, default=500.0)
    c.add_argument("--tol", type=float, default=ra.DEFAULT_T0_TOL)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_critical)

    v = sub.add_parser("verify", help="run every formula check and emit the report")
    v.add_argument("--cache", default=None)
    v.add_argument("--table", default=None, help="plain-text zero table instead of the cache")
    v.add_argument("--table-height", type=float, default=None)
    v.add_argument("--critical-to", type=float, default=500.0)
    v.add_argument("--json", default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sums", help="one truncated sum over zeros")
    s.add_argument("--t0", type=float, required=True)
    s.add_argument("--cutoff", type=float, default=None)
    s.add_argument("--cache", default=None)
    s.set_defaults(func=cmd_sums)

    r = sub.add_parser("report", help="per-t0 CSV for plotting")
    r.add_argument("--format", choices=["csv"], default="csv")
    r.add_argument("--cache", default=None)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_report)
    return p


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = EvalConfig(args.rs_terms, args.em_cutoff, EvalConfig.derivative_step_scale, args.abs_tol)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        return args.func(args, cfg)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, ZraError):
            print(f"zra: data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"zra: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZraError, FileNotFoundError) as exc:
        print(f"zra: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
