"""Numeric-kernel backend selection.

The hot inner loops in :mod:`hlito._kernels` exist twice: a numba
``@njit`` version and a pure-numpy fallback.  Which one runs is decided
here, once per call, so tests and benchmarks can flip back and forth.

Selection order:

* ``HLITO_BACKEND=numpy``  -- force the numpy fallback
* ``HLITO_BACKEND=numba``  -- force the jitted kernels (error if numba
  is not importable)
* unset or ``auto``        -- numba when importable, else numpy
"""
from __future__ import annotations

import os

_VALID = ("auto", "numba", "numpy")

try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False


def _resolve(requested: str) -> str:
    if requested not in _VALID:
        raise ValueError(
            f"unknown backend {requested!r}; expected one of {_VALID}"
        )
    if requested == "auto":
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if requested == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("HLITO_BACKEND=numba requested but numba is not importable")
    return requested


_ACTIVE = _resolve(os.environ.get("HLITO_BACKEND", "auto").lower())


def active_backend() -> str:
    """Name of the backend currently in use: ``"numba"`` or ``"numpy"``."""
    return _ACTIVE


def set_backend(name: str) -> str:
    """Switch the kernel backend at runtime; returns the previous one."""
    global _ACTIVE
    previous = _ACTIVE
    _ACTIVE = _resolve(name.lower())
    return previous
