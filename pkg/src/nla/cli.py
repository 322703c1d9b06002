"""Command-line front end: deterministic CSV/JSON sweeps and validation.

Exit codes: 0 success, 1 validation failure, 2 bad flags or parameter
values, 3 numerical failure.  Data written to stdout or --out is byte
identical across runs with the same flags; the run manifest's timestamp
only ever goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .coherent_analysis import fidelity_coherent, min_cutoff_for_fidelity, prob_coherent
from .epr_analysis import amplified_epr, epr_criterion, LossyEprParams
from .errors import NlaError
from .fock_core import AmplifierSpec
from .optimizer import DEFAULT_GAIN_CAP, DEFAULT_GAIN_TOL, optimize_point
from .validation import run_checks

__all__ = ["RunManifest", "main", "run"]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunManifest:
    """Provenance record emitted with every run."""

    command: str
    params: dict
    tolerances: dict
    version: str
    timestamp: Optional[str]

    def payload(self) -> dict:
        # deterministic variant: everything but the wall-clock stamp
        return {
            "command": self.command,
            "params": self.params,
            "tolerances": self.tolerances,
            "version": self.version,
            "timestamp": None,
        }

    def log_line(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "params": self.params,
                "tolerances": self.tolerances,
                "version": self.version,
                "timestamp": self.timestamp,
            },
            separators=(",", ":"),
        )


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def _render(columns: Sequence[str], rows: list[list], manifest: RunManifest, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])
        return buf.getvalue()
    payload = {
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest.payload(),
        "columns": list(columns),
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _deliver(text: str, manifest: RunManifest, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sidecar = out + ".manifest.json"
        with open(sidecar, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(manifest.payload(), indent=2) + "\n")
    else:
        sys.stdout.write(text)
    print(manifest.log_line(), file=sys.stderr)


def _jobs(args: argparse.Namespace) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    return max(1, int(os.environ.get("NLA_JOBS", "1")))


def _pmap(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _parse_cutoffs(text: str) -> list[int]:
    """Accept '3', '1,2,4' or '1..5'."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        elif "," in text:
            values = [int(part) for part in text.split(",")]
        else:
            values = [int(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad cutoff list {text!r}") from exc
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"bad cutoff list {text!r}")
    return values


def _parse_floats(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}")
    return values


def _parse_eta_grid(text: str) -> list[float]:
    """Accept 'start:stop:points' or a comma list."""
    if ":" in text:
        try:
            lo_s, hi_s, n_s = text.split(":")
            lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad eta grid {text!r}") from exc
        if n < 1 or not 0.0 < lo <= hi <= 1.0:
            raise argparse.ArgumentTypeError(f"bad eta grid {text!r}")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return _parse_floats(text)


def _gain_grid(args: argparse.Namespace) -> list[float]:
    if getattr(args, "g", None) is not None:
        if args.g < 1.0:
            raise ValueError("gain must be >= 1")
        return [args.g]
    if args.g_min < 1.0 or args.g_max < args.g_min or args.g_steps < 1:
        raise ValueError("need 1 <= g-min <= g-max and g-steps >= 1")
    if args.g_steps == 1:
        return [args.g_min]
    if getattr(args, "log", False):
        grid = np.geomspace(args.g_min, args.g_max, args.g_steps)
    else:
        grid = np.linspace(args.g_min, args.g_max, args.g_steps)
    return [float(v) for v in grid]


def cmd_coherent(args: argparse.Namespace) -> int:
    if args.alpha < 0:
        raise ValueError("alpha must be nonnegative")
    gains = _gain_grid(args)
    auto = args.n is None
    f_min = args.fmin if args.fmin is not None else 0.99

    def fixed_row(task: tuple[int, float]) -> list:
        cutoff, g = task
        spec = AmplifierSpec(g, cutoff)
        return [g, cutoff, prob_coherent(args.alpha, spec), fidelity_coherent(args.alpha, spec)]

    def auto_row(g: float) -> list:
        cutoff = min_cutoff_for_fidelity(args.alpha, g, f_min)
        spec = AmplifierSpec(g, cutoff)
        return [g, cutoff, prob_coherent(args.alpha, spec), fidelity_coherent(args.alpha, spec)]

    jobs = _jobs(args)
    if auto:
        rows = _pmap(auto_row, gains, jobs)
    else:
        tasks = [(cutoff, g) for cutoff in args.n for g in gains]
        rows = _pmap(fixed_row, tasks, jobs)

    manifest = RunManifest(
        command="coherent",
        params={
            "alpha": args.alpha,
            "gains": [gains[0], gains[-1], len(gains)],
            "log": bool(getattr(args, "log", False)),
            "n": args.n,
            "fmin": None if not auto else f_min,
        },
        tolerances={},
        version=__version__,
        timestamp=_now(),
    )
    _deliver(_render(["g", "N", "P", "F"], rows, manifest, args.format), manifest, args.out)
    return 0


def cmd_epr(args: argparse.Namespace) -> int:
    if not 0.0 < args.chi_prime < 1.0:
        raise ValueError("chi-prime must lie in (0, 1)")
    if not 0.0 <= args.eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    gains = _gain_grid(args)
    columns = ["g", "N", "chi_in", "P", "F_lower", "epsilon"]
    if args.with_baselines:
        columns += ["epsilon_no_amp", "epsilon_unit_chi"]
        no_amp = epr_criterion(LossyEprParams(args.chi_prime, args.eta))
        unit_chi = (1.0 - args.eta) ** 2

    def row(task: tuple[int, float]) -> list:
        cutoff, g = task
        res = amplified_epr(args.chi_prime, args.eta, AmplifierSpec(g, cutoff))
        data = [
            g,
            cutoff,
            res.chi_in,
            res.p_success,
            res.fidelity_lower_bound,
            res.epsilon_epr,
        ]
        if args.with_baselines:
            data += [no_amp, unit_chi]
        return data

    tasks = [(cutoff, g) for cutoff in args.n for g in gains]
    rows = _pmap(row, tasks, _jobs(args))
    manifest = RunManifest(
        command="epr",
        params={
            "chi_prime": args.chi_prime,
            "eta": args.eta,
            "gains": [gains[0], gains[-1], len(gains)],
            "n": args.n,
            "with_baselines": bool(args.with_baselines),
        },
        tolerances={},
        version=__version__,
        timestamp=_now(),
    )
    _deliver(_render(columns, rows, manifest, args.format), manifest, args.out)
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    if not 0.0 < args.chi_prime < 1.0:
        raise ValueError("chi-prime must lie in (0, 1)")
    if not 0.0 < args.fmin < 1.0:
        raise ValueError("fmin must lie in (0, 1)")
    etas = args.eta_grid
    columns = [
        "p_min",
        "eta",
        "N_star",
        "g_star",
        "epsilon",
        "F",
        "P",
        "binding",
        "epsilon_no_amp",
        "epsilon_unit_chi",
        "error",
    ]

    def row(task: tuple[float, float]) -> list:
        p_min, eta = task
        point = optimize_point(
            args.chi_prime, args.fmin, p_min, eta, gain_cap=args.gain_cap
        )
        if point.result is None:
            return [p_min, eta, None, None, None, None, None, None,
                    point.epsilon_no_amp, point.epsilon_unit_chi, point.error]
        res = point.result
        return [
            p_min,
            eta,
            res.cutoff,
            res.gain,
            res.epsilon,
            res.fidelity,
            res.probability,
            res.binding.value,
            point.epsilon_no_amp,
            point.epsilon_unit_chi,
            None,
        ]

    tasks = [(p_min, eta) for p_min in args.pmin for eta in etas]
    rows = _pmap(row, tasks, _jobs(args))
    manifest = RunManifest(
        command="optimize",
        params={
            "chi_prime": args.chi_prime,
            "fmin": args.fmin,
            "pmin": args.pmin,
            "eta_grid": [etas[0], etas[-1], len(etas)],
            "gain_cap": args.gain_cap,
        },
        tolerances={"gain_tol": DEFAULT_GAIN_TOL},
        version=__version__,
        timestamp=_now(),
    )
    _deliver(_render(columns, rows, manifest, args.format), manifest, args.out)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    results = run_checks(grid=args.grid, tol=args.tol)
    manifest = RunManifest(
        command="validate",
        params={"grid": args.grid},
        tolerances={"tol_override": args.tol},
        version=__version__,
        timestamp=_now(),
    )
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "manifest": manifest.payload(),
            "passed": all(r.passed for r in results),
            "checks": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "max_err": r.max_err,
                    "tol": r.tol,
                    "detail": r.detail,
                }
                for r in results
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            extra = f"  [{r.detail}]" if r.detail else ""
            lines.append(f"{status}  {r.name}: max_err={r.max_err:.3e} tol={r.tol:.3e}{extra}")
        failed = sum(1 for r in results if not r.passed)
        lines.append(
            f"{len(results) - failed}/{len(results)} checks passed"
            + (f", {failed} FAILED" if failed else "")
        )
        text = "\n".join(lines) + "\n"
    _deliver(text, manifest, args.out)
    return 0 if all(r.passed for r in results) else 1


def _add_common(parser: argparse.ArgumentParser, default_format: str = "csv") -> None:
    parser.add_argument(
        "--format", choices=("csv", "json") if default_format == "csv" else ("text", "json"),
        default=default_format, help=f"output format (default {default_format})"
    )
    parser.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    parser.add_argument(
        "--jobs", type=int, metavar="J",
        help="worker threads for sweep points (default: NLA_JOBS or 1)",
    )


def _add_gain_grid(parser: argparse.ArgumentParser, single_point: bool = False) -> None:
    parser.add_argument("--g-min", type=float, default=1.0, help="first gain (default 1)")
    parser.add_argument("--g-max", type=float, default=4.0, help="last gain (default 4)")
    parser.add_argument("--g-steps", type=int, default=61, help="grid size (default 61)")
    parser.add_argument("--log", action="store_true", help="logarithmic gain spacing")
    if single_point:
        parser.add_argument("--g", type=float, help="single gain, overriding the grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nla",
        description="Heralded-amplifier sweeps: coherent and lossy-squeezing "
        "performance data, constrained optimization, and validation suites.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_coh = sub.add_parser("coherent", help="coherent-input probability/fidelity sweep")
    p_coh.add_argument("--alpha", type=float, required=True, help="input amplitude magnitude")
    mode = p_coh.add_mutually_exclusive_group()
    mode.add_argument("--n", type=_parse_cutoffs, help="fixed cutoff list: '2', '1,3' or '1..4'")
    mode.add_argument("--fmin", type=float, help="fidelity floor for automatic cutoffs (default 0.99)")
    _add_gain_grid(p_coh)
    _add_common(p_coh)
    p_coh.set_defaults(func=cmd_coherent)

    p_epr = sub.add_parser("epr", help="lossy-squeezing sweep at a fixed target chi'")
    p_epr.add_argument("--chi-prime", type=float, required=True, help="target output squeezing")
    p_epr.add_argument("--eta", type=float, required=True, help="channel transmission")
    p_epr.add_argument("--n", type=_parse_cutoffs, default=[1, 2, 3, 4, 5],
                       help="cutoff list (default 1..5)")
    p_epr.add_argument("--with-baselines", action="store_true",
                       help="append the no-amplification and saturated-squeezing columns")
    _add_gain_grid(p_epr, single_point=True)
    _add_common(p_epr)
    p_epr.set_defaults(func=cmd_epr)

    p_opt = sub.add_parser("optimize", help="constrained criterion minimization over (N, g)")
    p_opt.add_argument("--chi-prime", type=float, required=True, help="target output squeezing")
    p_opt.add_argument("--fmin", type=float, default=0.99, help="fidelity floor (default 0.99)")
    p_opt.add_argument("--pmin", type=_parse_floats, default=[0.1, 0.01, 0.001],
                       help="probability floors, comma separated (default 0.1,0.01,0.001)")
    p_opt.add_argument("--eta-grid", type=_parse_eta_grid,
                       default=_parse_eta_grid("0.01:1:100"),
                       help="transmission grid 'start:stop:points' or comma list (default 0.01:1:100)")
    p_opt.add_argument("--gain-cap", type=float, default=DEFAULT_GAIN_CAP,
                       help=f"bisection upper bracket (default {DEFAULT_GAIN_CAP:g})")
    _add_common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_val = sub.add_parser("validate", help="run the identity and oracle-equivalence suites")
    p_val.add_argument("--grid", choices=("small", "full"), default="small",
                       help="check grid size (default small)")
    p_val.add_argument("--tol", type=float, help="override every check tolerance")
    _add_common(p_val, default_format="text")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NlaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
