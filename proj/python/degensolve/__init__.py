"""Python interface to the degensolve solver core.

The heavy lifting lives in the compiled ``_core`` module; this wrapper adds
dict-in / dict-out convenience around the JSON run interface.
"""

import json as _json

from ._core import (
    DslError,
    SolveError,
    ValidationError,
    default_depth,
    eval_expr,
    interp_norm,
    run_json,
    sigma_trace,
    theta_from_exponent,
)

__all__ = [
    "DslError",
    "SolveError",
    "ValidationError",
    "default_depth",
    "eval_expr",
    "interp_norm",
    "run",
    "run_json",
    "sigma_trace",
    "theta_from_exponent",
]

__version__ = "1.0.0"


def run(subcommand, config, out_dir="", threads=1):
    """Run one subcommand from a config dict.

    Returns ``(exit_code, report)`` where ``report`` is the parsed report.json.
    Artifacts are written to ``out_dir`` (or the config's own ``out`` key).
    Exit codes follow the command-line tool: 0 ok, 2 bad config, 3 solver
    failure, 4 failed verification, 5 sweep with failed points.
    """
    code, report = run_json(subcommand, _json.dumps(config), str(out_dir), threads)
    return code, _json.loads(report)
