"""Configuration-driven command drivers and the proxyscat console script.

Exports:
    - RunConfig, load_run_config: YAML run manifests
    - RunReport: JSON report written by every command
    - cmd_scatmat_build, cmd_solve, cmd_convergence, cmd_fieldgrid: command drivers
    - main: console-script entry point
"""

from proxyscat.features.cli.main import main
from proxyscat.features.cli.schemas import RunConfig, RunReport, load_run_config
from proxyscat.features.cli.service import (
    CommandResult,
    cmd_convergence,
    cmd_fieldgrid,
    cmd_scatmat_build,
    cmd_solve,
)

__all__ = [
    "CommandResult",
    "RunConfig",
    "RunReport",
    "cmd_convergence",
    "cmd_fieldgrid",
    "cmd_scatmat_build",
    "cmd_solve",
    "load_run_config",
    "main",
]
