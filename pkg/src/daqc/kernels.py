"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` takes over. :func:`use_backend`
switches explicitly (tests and the benchmark run both).
"""
from __future__ import annotations

import logging

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _core
except ImportError:  # extension not built
    _core = None
    log.debug("compiled kernels unavailable; using numpy fallback")

BACKENDS = {"python": _pykernels}
if _core is not None:
    BACKENDS["compiled"] = _core

_active = "compiled" if _core is not None else "python"


def available() -> list[str]:
    return sorted(BACKENDS)


def backend() -> str:
    return _active


def use_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous backend."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available()}")
    previous, _active = _active, name
    return previous


def simplex_min_sum(A, b, **kwargs):
    return BACKENDS[_active].simplex_min_sum(A, b, **kwargs)


def dd_adjacent_pairs(Z, plus, minus, min_common):
    return BACKENDS[_active].dd_adjacent_pairs(Z, plus, minus, min_common)
