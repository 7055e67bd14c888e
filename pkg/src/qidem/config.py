"""Global numerical tolerance."""

from __future__ import annotations

import contextlib

DEFAULT_TOL = 1e-9
SEARCH_DEDUP_TOL = 1e-6

_tol = DEFAULT_TOL


def get_tol() -> float:
    return _tol


def set_tol(value: float) -> None:
    global _tol
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value!r}")
    _tol = float(value)


def resolve(tol: float | None) -> float:
    return _tol if tol is None else float(tol)


@contextlib.contextmanager
def tolerance(value: float):
    """Temporarily override the global tolerance."""
    old = _tol
    set_tol(value)
    try:
        yield
    finally:
        set_tol(old)
