"""Coefficient-spec JSON files.

Either explicit literals::

    {"diffusion": {"pieces": [[0, 1, 1.0]], "period": 1, "default": 1.0},
     "weight": {"pieces": [[0, 1, 1.0]], "atoms": [], "period": 1},
     "potential": {"pieces": [], "atoms": [[0, 1.0]], "period": 1}}

or a preset::

    {"preset": "classical", "r": 1, "a": 1, "q": 0}
    {"preset": "schroedinger", "potential": {...}}
    {"preset": "jacobi", "a": [1, 2], "b": [0, 3], "periodic": true, "offset": 0}
    {"preset": "quasiperiodic", "B": 1, "m_max": 4, "h": 0.001,
     "amplitude": 0.1, "weight": 1.0}

A step-function literal may also be a bare positive number (constant
with period 1).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .coefficients import Coefficients, StepFunction, classical, jacobi, schroedinger
from .errors import InvalidParameter
from .measure import LocalMeasure
from .quasiperiodic import QuasiperiodicCoefficients, example_triple

Loaded = Union[Coefficients, QuasiperiodicCoefficients]


def _step(lit) -> StepFunction:
    if isinstance(lit, (int, float)):
        return StepFunction.constant(float(lit))
    return StepFunction.from_dict(lit)


def _measure(lit) -> LocalMeasure:
    if lit is None:
        return LocalMeasure()
    if not isinstance(lit, dict):
        raise InvalidParameter("measure literal must be an object")
    return LocalMeasure.from_dict(lit)


def _scalar_or_step(lit):
    return lit if isinstance(lit, (int, float)) else StepFunction.from_dict(lit)


def coefficients_from_dict(data: dict) -> Loaded:
    """Build coefficients from a parsed spec."""
    try:
        preset = data.get("preset")
        if preset is None:
            return Coefficients(_step(data["diffusion"]), _measure(data["weight"]),
                                _measure(data.get("potential")))
        if preset == "classical":
            q = data.get("q", 0.0)
            q = q if isinstance(q, (int, float)) else (
                _measure(q) if "atoms" in q else StepFunction.from_dict(q))
            return classical(_scalar_or_step(data.get("r", 1.0)),
                             _scalar_or_step(data.get("a", 1.0)), q)
        if preset == "schroedinger":
            return schroedinger(_measure(data.get("potential")))
        if preset == "jacobi":
            return jacobi(data["a"], data.get("b", [0.0]), offset=int(data.get("offset", 0)),
                          periodic=bool(data.get("periodic", True)))
        if preset == "quasiperiodic":
            return example_triple(float(data.get("B", 1.0)), int(data.get("m_max", 4)),
                                  float(data.get("h", 1e-3)), float(data.get("amplitude", 0.1)),
                                  float(data.get("weight", 1.0)))
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed coefficient spec: {exc}") from exc
    raise InvalidParameter(f"unknown preset {preset!r}")


def load_coefficients(path: Union[str, Path]) -> Loaded:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParameter("coefficient spec must be a JSON object")
    return coefficients_from_dict(data)


def coefficients_to_dict(c: Coefficients) -> dict:
    return c.to_dict()
