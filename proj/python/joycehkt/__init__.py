"""Invariant HKT structures on compact Lie groups and homogeneous spaces."""

import json

from ._core import (
    InternalError,
    InvalidInput,
    __version__,
    presets,
)
from . import _core


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def verify(config):
    """Run a job given as a dict or JSON text. Returns (report dict, exit code)."""
    report, code = _core.verify(_text(config))
    return json.loads(report), code


def decompose(config):
    return json.loads(_core.decompose(_text(config)))


def einstein_coefficients(config):
    return _core.einstein_coefficients(_text(config))


def residuals(config, coeffs=()):
    return _core.residuals(_text(config), list(coeffs))


__all__ = [
    "InternalError",
    "InvalidInput",
    "__version__",
    "decompose",
    "einstein_coefficients",
    "presets",
    "residuals",
    "verify",
]
