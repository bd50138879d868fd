"""
Command Line Interface

Usage:
    python -m ffdrive run expansion --out out/expansion
    python -m ffdrive run my_scenario.ini --grid-n 2048 --dt 5e-4
    python -m ffdrive sweep ground-to-excited --c 0.5,1,2,4,8,16 --workers 4
    python -m ffdrive builtins --write scenarios/

Exit codes: 0 success, 2 config error, 3 numeric error. On failure a JSON error
object (category, code, message, details, run_id) is printed to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ffdrive.constants.constants import EXIT_OK
from ffdrive.core.errors import AppError, error_payload
from ffdrive.core.logging import get_run_id, setup_logging
from ffdrive.runner.catalog import get_builtin, list_builtin_scenarios
from ffdrive.runner.config_file import write_scenario_file
from ffdrive.runner.scenario_runner import run_scenario
from ffdrive.runner.sweep import sweep_truncation

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffdrive",
        description="Design and verify fast-forward trap protocols (hbar = m = 1).",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("scenario", help="INI config path or builtin scenario name")
        p.add_argument("--out", default=None, help="Output directory (default FFDRIVE_OUTPUT_DIR)")
        p.add_argument("--grid-n", type=int, default=None, help="Override grid point count")
        p.add_argument("--dt", type=float, default=None, help="Override propagator step")
        p.add_argument("--workers", type=int, default=None, help="Worker count")

    run = sub.add_parser("run", help="Design, propagate and write one scenario")
    add_common(run)

    sweep = sub.add_parser("sweep", help="Fidelity versus truncation level")
    add_common(sweep)
    sweep.add_argument("--c", required=True, help="Comma-separated ascending truncation levels")

    builtins = sub.add_parser("builtins", help="List builtin scenarios")
    builtins.add_argument("--write", default=None, metavar="DIR", help="Write each builtin as an INI file")

    return parser


# ============================================================================
# Commands
# ============================================================================

def _cmd_run(args: argparse.Namespace) -> int:
    summary = run_scenario(
        args.scenario,
        out_dir=args.out,
        grid_n=args.grid_n,
        dt=args.dt,
        design_workers=args.workers,
    )
    print(json.dumps({
        "run_id": summary.run_id,
        "scenario": summary.scenario,
        "fidelity": summary.fidelity,
        "norm_drift": summary.norm_drift,
        "summary": summary.outputs.get("summary"),
    }))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    result = sweep_truncation(
        args.scenario,
        args.c,
        out_dir=args.out,
        workers=args.workers,
        grid_n=args.grid_n,
        dt=args.dt,
    )
    for row in result.rows:
        fidelity = f"{row.fidelity:.6f}" if row.fidelity is not None else f"failed ({row.error})"
        print(f"c={row.c:g}\tF={fidelity}")
    return EXIT_OK


def _cmd_builtins(args: argparse.Namespace) -> int:
    infos = list_builtin_scenarios()
    for info in infos:
        c = f"c={info.truncation:g}" if info.truncation is not None else "untruncated"
        print(f"{info.name:<20} t_f={info.t_f:.6f} {info.interpolation:<8} {c}  {info.description}")

    if args.write:
        directory = Path(args.write)
        directory.mkdir(parents=True, exist_ok=True)
        for info in infos:
            path = write_scenario_file(get_builtin(info.name), directory / f"{info.name}.ini")
            logger.info(f"Wrote {path}")
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "builtins": _cmd_builtins,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except AppError as exc:
        run_id = get_run_id()
        payload = error_payload(
            exc.code,
            exc.message,
            details=exc.details,
            run_id=None if run_id == "-" else run_id,
            category=exc.category,
        )
        print(json.dumps(payload, default=str), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
