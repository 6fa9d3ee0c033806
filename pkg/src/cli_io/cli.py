"""
Chemotaxis Consumption Verifier - Command Line Interface

Subcommands:
    run     simulate one configuration, write the run directory and reports
    sweep   epsilon sweep
    relax   relaxation from point masses on refining grids
    refine  grid/time refinement study
    check   re-audit a stored run directory without re-simulating

Exit codes: 0 success, 1 validation failure, 2 numerical failure,
3 audit failure (a dissipation bound or invariant violated beyond slack).
Messages go to stderr through logging; data only to files.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from ..config import settings
from ..diagnostics import (
    Trajectory,
    cumulative_bounds,
    decay_metrics,
    default_test,
    dual_rate_bound,
    fit_supersolution,
    inequality_scan,
    weak_residual,
    write_report,
    write_summary,
)
from ..experiments import refinement_study, relaxation_experiment
from ..experiments.sweep import REPORT_HEADER, epsilon_sweep
from ..stepper import NumericalError, run
from .run_config import ConfigError, RunConfig, load_config
from .series import SeriesFormatError, read_series, write_series

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_AUDIT = 3


def _output_dir(args: argparse.Namespace, config: RunConfig, default: str) -> Path:
    if args.out:
        return Path(args.out)
    if config.output.directory:
        return Path(config.output.directory)
    return settings.runs_path / default


def audit(traj: Trajectory, directory: Path, config: Optional[RunConfig] = None) -> int:
    """
    Recompute every report from the stored records and write them.

    Returns:
        Exit code: 2 for an incomplete trajectory, 3 if the bound audit
        fails, 0 otherwise
    """
    config = config or traj.config
    diag = config.diagnostics if config is not None else None
    sections: Dict[str, object] = {}

    if len(traj) < 2:
        logger.warning(f"Only {len(traj)} record(s): nothing to audit")
        return EXIT_OK if traj.complete else EXIT_NUMERICAL

    bounds = cumulative_bounds(traj)
    write_report(directory, "bounds", bounds)
    sections["bounds"] = bounds

    if len(traj) >= 3:
        scan = inequality_scan(traj, diag.min_records_per_unit_time if diag else 10.0)
        write_report(directory, "inequalities", scan)
        sections["inequalities"] = scan
        if diag is not None and traj.times()[-1] > diag.tau:
            fit = fit_supersolution(traj, diag.tau, diag.kappa)
            write_report(directory, "supersolution", fit)
            sections["supersolution"] = fit

    decay = decay_metrics(
        traj,
        t_ref=diag.t_ref if diag else 1.0,
        settle_horizon=diag.settle_horizon if diag else None,
        thresholds=diag.thresholds.model_dump() if diag else None,
    )
    write_report(directory, "decay", decay)
    sections["decay"] = decay

    if len(traj.states) >= 2 and traj.motility is not None and traj.meta.horizon > 0:
        test = default_test(traj)
        r_u, r_v = weak_residual(traj, test)
        weak = {"test": test.label, "r_u": r_u, "r_v": r_v, "dual": dual_rate_bound(traj, test).to_dict()}
        write_report(directory, "weak", weak)
        sections["weak"] = weak

    write_summary(directory, "Run audit", sections)
    if not traj.complete:
        logger.error(f"Trajectory incomplete: {traj.error}")
        return EXIT_NUMERICAL
    if not bounds.passed:
        logger.error("Audit failed: a dissipation bound or invariant is violated")
        return EXIT_AUDIT
    logger.info("Audit passed")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    directory = _output_dir(args, config, "run")
    traj = run(config)
    write_series(traj, directory)
    return audit(traj, directory, config)


def cmd_check(args: argparse.Namespace) -> int:
    target = args.run_dir or args.out
    if not target:
        raise ConfigError(["--run-dir: a run directory is required"])
    directory = Path(target)
    traj = read_series(directory)
    return audit(traj, directory)


def _experiment_result(directory: Path, name: str, report, header: Optional[str] = None) -> int:
    write_report(directory, name, report, header)
    write_summary(directory, f"{name} experiment", {name: report})
    if not getattr(report, "complete", True):
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    directory = _output_dir(args, config, "sweep")
    report = epsilon_sweep(config, out_dir=directory)
    return _experiment_result(directory, "sweep", report, REPORT_HEADER)


def cmd_relax(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    directory = _output_dir(args, config, "relax")
    return _experiment_result(directory, "relaxation", relaxation_experiment(config, out_dir=directory))


def cmd_refine(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    directory = _output_dir(args, config, "refine")
    return _experiment_result(directory, "refinement", refinement_study(config, out_dir=directory))


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "relax": cmd_relax,
    "refine": cmd_refine,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksm",
        description=f"{settings.app_name} - simulate and audit chemotaxis-consumption runs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "simulate one configuration"),
        ("sweep", "epsilon sweep"),
        ("relax", "relaxation from point masses"),
        ("refine", "refinement study"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--out", help="Output directory (overrides output.directory)")
    p = sub.add_parser("check", help="re-audit a stored run directory")
    p.add_argument("--run-dir", help="Run directory to audit")
    p.add_argument("--out", help="Alias for --run-dir")
    p.add_argument("--config", help="Ignored; the stored config echo is used")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_VALIDATION if e.code else EXIT_OK

    try:
        return COMMANDS[args.command](args)
    except (ConfigError, SeriesFormatError) as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        logger.error(f"Validation failure: {e}")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
