"""Stepping-kernel backend selection.

Two interchangeable kernels exist: forgetsim._kernel (Cython, built by
setup.py) and forgetsim._kernel_py (pure Python). They are bit-identical by
construction; the compiled one is just fast. Selection order:

    1. explicit name passed to get_kernel / engine.run
    2. the FORGETSIM_BACKEND environment variable ("compiled" or "python")
    3. compiled if importable, else python
"""
from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel  # type: ignore[attr-defined]
except ImportError:
    _kernel = None

_BY_NAME = {"python": _kernel_py}
if _kernel is not None:
    _BY_NAME["compiled"] = _kernel

__all__ = ["available_backends", "default_backend", "get_kernel"]


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BY_NAME))


def default_backend() -> str:
    env = os.environ.get("FORGETSIM_BACKEND")
    if env:
        if env not in ("compiled", "python"):
            raise ValueError(
                f"FORGETSIM_BACKEND must be 'compiled' or 'python', got {env!r}"
            )
        if env not in _BY_NAME:
            raise RuntimeError(
                "FORGETSIM_BACKEND=compiled but the extension is not built; "
                "run pip install -e . --no-build-isolation"
            )
        return env
    return "compiled" if "compiled" in _BY_NAME else "python"


def get_kernel(name: str | None = None):
    """Resolve a kernel module by name, or by the default policy."""
    if name is None:
        name = default_backend()
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}"
        ) from None
