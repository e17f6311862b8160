"""proxyscat command line.

Usage:
    # Scattering matrix of the first obstacle in the manifest
    proxyscat scatmat build --config fixtures/unit_circle_scatmat.yaml --out-dir out/

    # Multi-particle solve with field CSV, solution bundle and report
    proxyscat solve --config fixtures/photonic_5x5.yaml --out-dir out/ --threads 4

    # Error against a reference for a parameter sweep
    proxyscat convergence --config fixtures/two_ellipse_sweep_k.yaml --out-dir out/

    # Re-evaluate a finished solve on a new grid
    proxyscat fieldgrid --config fixtures/photonic_5x5.yaml --out-dir out/

Every command writes a JSON run report into the output directory, also on
failure. The exit code is 0 exactly when the report status is "ok".
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import uuid
from collections.abc import Sequence
from datetime import UTC, datetime
from pathlib import Path

from pydantic import ValidationError

from proxyscat.core.config import get_settings
from proxyscat.core.exceptions import ConfigError, ProxyScatError, log_error
from proxyscat.core.logging import configure_logging, get_logger, run_context
from proxyscat.features.cli.reports import write_report
from proxyscat.features.cli.schemas import CommandName, RunConfig, RunReport, load_run_config
from proxyscat.features.cli.service import (
    CommandResult,
    cmd_convergence,
    cmd_fieldgrid,
    cmd_scatmat_build,
    cmd_solve,
)

logger = get_logger(__name__)

DEFAULT_REPORT_FILE = "report.json"


def positive_int(value: str) -> int:
    """Parse a strictly positive integer.

    Raises:
        argparse.ArgumentTypeError: If the value is not an integer >= 1.
    """
    try:
        parsed = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Expected an integer, got {value!r}") from e
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"Expected an integer >= 1, got {parsed}")
    return parsed


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, required=True, help="YAML run manifest")
    parser.add_argument(
        "--out-dir",
        type=Path,
        default=None,
        help="Output directory (default: PROXYSCAT_ARTIFACTS_DIR)",
    )
    parser.add_argument(
        "--threads",
        type=positive_int,
        default=None,
        help="Worker threads for transfer applications (default: PROXYSCAT_THREADS)",
    )


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser for the CLI."""
    parser = argparse.ArgumentParser(
        prog="proxyscat",
        description="Proxy-surface scattering matrices and multi-particle Helmholtz solves",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  proxyscat scatmat build --config fixtures/unit_circle_scatmat.yaml --out-dir out/
  proxyscat solve --config fixtures/disk.yaml --out-dir out/
  proxyscat convergence --config fixtures/two_ellipse_sweep_k.yaml --out-dir out/
  proxyscat fieldgrid --config fixtures/disk.yaml --out-dir out/
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    scatmat = commands.add_parser("scatmat", help="Build and store a scattering matrix")
    scatmat.add_argument("action", nargs="?", choices=["build"], default="build")
    _add_common(scatmat)

    for name, description in (
        ("solve", "Solve a free-space or layered multi-particle problem"),
        ("convergence", "Run an n_p convergence sweep against a reference"),
        ("fieldgrid", "Evaluate a finished solve on a grid"),
    ):
        _add_common(commands.add_parser(name, help=description))
    return parser


def run_command(command: CommandName, config: RunConfig, out_dir: Path, threads: int) -> CommandResult:
    """Dispatch to the command driver."""
    if command == "scatmat":
        return cmd_scatmat_build(config, out_dir)
    if command == "solve":
        return cmd_solve(config, out_dir, threads)
    if command == "convergence":
        return cmd_convergence(config, out_dir, threads)
    return cmd_fieldgrid(config, out_dir)


def _validation_error(exc: ValidationError) -> ConfigError:
    errors = json.loads(exc.json(include_url=False))
    return ConfigError(
        f"Manifest failed validation with {exc.error_count()} error(s)",
        details={"errors": errors},
    )


def _execute(
    args: argparse.Namespace, out_dir: Path, threads: int, report: RunReport
) -> tuple[RunReport, Path, int]:
    """Run one command; failures become an error report instead of propagating."""
    report_path = out_dir / DEFAULT_REPORT_FILE
    try:
        try:
            config = load_run_config(args.config)
        except ValidationError as e:
            raise _validation_error(e) from e
        report_path = out_dir / config.output.report_file
        report = report.model_copy(
            update={"config_hash": config.config_hash(), "config": config.model_dump(mode="json")}
        )
        result = run_command(args.command, config, out_dir, threads)
    except ProxyScatError as e:
        log_error(e, config=str(args.config))
        return report.model_copy(update={"status": "error", "error": e.to_dict()}), report_path, e.exit_code
    except ValidationError as e:
        error = _validation_error(e)
        log_error(error, config=str(args.config))
        return (
            report.model_copy(update={"status": "error", "error": error.to_dict()}),
            report_path,
            error.exit_code,
        )
    except Exception as e:
        logger.error(
            "cli.unhandled_error", error=str(e), error_type=type(e).__name__, exc_info=True
        )
        error = ProxyScatError(str(e), details={"error_type": type(e).__name__})
        return (
            report.model_copy(update={"status": "error", "error": error.to_dict()}),
            report_path,
            error.exit_code,
        )
    report = report.model_copy(
        update={"metrics": result.metrics, "outputs": result.outputs, "timings": result.timings}
    )
    return report, report_path, 0


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the proxyscat console script.

    Returns:
        Process exit code: 0 on success, the error's exit code otherwise.
    """
    args = create_parser().parse_args(argv)
    configure_logging()
    settings = get_settings()

    run_id = uuid.uuid4().hex[:16]
    out_dir: Path = args.out_dir if args.out_dir is not None else Path(settings.artifacts_dir)
    threads: int = args.threads if args.threads is not None else settings.threads
    command: CommandName = args.command

    with run_context(run_id, command):
        logger.info(
            "cli.command_started", config=str(args.config), out_dir=str(out_dir), threads=threads
        )
        start = time.perf_counter()
        report = RunReport(
            command=command, run_id=run_id, threads=threads, started_at=datetime.now(UTC)
        )
        report, report_path, exit_code = _execute(args, out_dir, threads, report)
        report = report.model_copy(
            update={"duration_ms": round((time.perf_counter() - start) * 1000, 3)}
        )
        write_report(report, report_path)
        logger.info(
            "cli.command_completed", status=report.status, duration_ms=report.duration_ms
        )

    print(report_path)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
