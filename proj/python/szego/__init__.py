"""Bergman-Szego kernels on weighted CR spheres."""

import json as _json

from ._szego import (
    ConfigError,
    NumericalError,
    SzegoError,
    UnsupportedError,
    calibrate,
    commands,
    dim_fourier,
    dim_table,
    fit_diagonal,
    invariant_dim,
    kernel,
    levi,
    monomials,
    reduced_weights,
    stratification,
)
from ._szego import run as _run

__all__ = [
    "ConfigError",
    "NumericalError",
    "SzegoError",
    "UnsupportedError",
    "calibrate",
    "commands",
    "dim_fourier",
    "dim_table",
    "fit_diagonal",
    "invariant_dim",
    "kernel",
    "levi",
    "monomials",
    "reduced_weights",
    "run",
    "stratification",
]


def run(command, *args):
    """Runs a lab command with CLI-style flags; returns (report dict, exit code)."""
    text, code = _run(command, [str(a) for a in args])
    return _json.loads(text), code
