"""Run-wide configuration: the value of hbar and named numerical tolerances.

Both can be overridden from the environment:

    PTBRACH_HBAR         default reduced Planck constant (float, > 0)
    PTBRACH_TOLERANCES   path to a JSON object of tolerance overrides
"""

from __future__ import annotations

import contextlib
import json
import os
from pathlib import Path
from typing import Iterator

HBAR_ENV = "PTBRACH_HBAR"
TOLERANCE_ENV = "PTBRACH_TOLERANCES"

DEFAULT_TOLERANCES: dict[str, float] = {
    "degenerate": 1e-12,
    "phase_equivalence": 1e-10,
    "hermitian": 1e-13,
    "pt_boundary": 1e-12,
    "positivity": 1e-12,
    "frame_clip": 1e-12,
    "frame_tight": 1e-10,
    "closure": 1e-8,
    "energy_drift": 1e-10,
    "ratio": 1e-9,
    "zero_overlap": 1e-8,
}


def hbar_from_env() -> float:
    raw = os.environ.get(HBAR_ENV)
    if raw is None:
        return 1.0
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{HBAR_ENV} must be positive, got {raw!r}")
    return value


_hbar = hbar_from_env()


def get_hbar() -> float:
    return _hbar


def set_hbar(value: float) -> None:
    global _hbar
    value = float(value)
    if not value > 0:
        raise ValueError(f"hbar must be positive, got {value}")
    _hbar = value


@contextlib.contextmanager
def hbar_context(value: float) -> Iterator[float]:
    """Temporarily change hbar, restoring the previous value on exit."""
    previous = _hbar
    set_hbar(value)
    try:
        yield value
    finally:
        set_hbar(previous)


def resolve_hbar(hbar: float | None) -> float:
    if hbar is None:
        return _hbar
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    return float(hbar)


def load_tolerances(path: str | os.PathLike | None = None) -> dict[str, float]:
    """Default tolerances updated from a JSON file (argument, then env var)."""
    tolerances = dict(DEFAULT_TOLERANCES)
    if path is None:
        path = os.environ.get(TOLERANCE_ENV)
    if path:
        overrides = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(overrides, dict):
            raise ValueError("tolerance file must contain a JSON object")
        for name, value in overrides.items():
            value = float(value)
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value}")
            tolerances[name] = value
    return tolerances
