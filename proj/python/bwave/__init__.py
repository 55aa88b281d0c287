"""Traveling waves of the b = d = 0 Boussinesq system."""

import json
import os
import tempfile

from ._bwave import (
    BlowupDetected,
    ConfigError,
    ParseError,
    abcd_from_model,
    bounds,
    evolve,
    regime,
    run_command,
    solve,
    symmetric_decreasing,
    tau,
)

__all__ = [
    "BlowupDetected",
    "ConfigError",
    "ParseError",
    "abcd_from_model",
    "bounds",
    "evolve",
    "regime",
    "run_command",
    "solve",
    "symmetric_decreasing",
    "tau",
    "verify",
]

__version__ = "0.1.0"


def verify(config_text, jobs=1):
    """Run the verification suite; returns (exit code, report dict)."""
    with tempfile.TemporaryDirectory() as out:
        rc = run_command("verify", config_text, out, jobs)
        with open(os.path.join(out, "report.json")) as fh:
            return rc, json.load(fh)
