"""Kernel backend selection.

The hot kernels exist twice: numba-jitted scalar loops and a pure-numpy
fallback.  The env var MATHIEU_KIT_BACKEND picks one:

    auto   use numba if importable, else numpy (default)
    numba  require numba, raise if unavailable
    numpy  force the fallback

``set_backend`` overrides the env var at runtime (used by the benchmark
and the backend-parity tests).
"""

from __future__ import annotations

import os

_ENV_VAR = "MATHIEU_KIT_BACKEND"
_VALID = ("auto", "numba", "numpy")
_forced: str | None = None
_cache: dict[str, object] = {}


def _load(name: str):
    if name in _cache:
        return _cache[name]
    if name == "numpy":
        from . import _kernels_numpy as mod
    else:
        from . import _kernels_numba as mod
    _cache[name] = mod
    return mod


def backend_name() -> str:
    """Resolved backend name ('numba' or 'numpy')."""
    req = _forced if _forced is not None else os.environ.get(_ENV_VAR, "auto").lower()
    if req not in _VALID:
        raise ValueError(f"{_ENV_VAR} must be one of {_VALID}, got {req!r}")
    if req == "numpy":
        return "numpy"
    if req == "numba":
        _load("numba")  # raises ImportError if numba is missing
        return "numba"
    try:
        _load("numba")
        return "numba"
    except ImportError:
        return "numpy"


def kernels():
    """Kernel module for the resolved backend."""
    return _load(backend_name())


def set_backend(name: str | None) -> None:
    """Force a backend programmatically; None restores env-var control."""
    global _forced
    if name is not None and name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    _forced = name
