"""Pick the model-checking kernel.

The compiled extension ``setmatrix._kernel`` is used when it imports;
otherwise the pure-Python ``setmatrix._pykernel`` runs the same programs,
only slower.  Set ``SETMATRIX_KERNEL=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernel

__all__ = ["Kernel", "COMPILED", "BACKEND", "available_backends", "kernel_class"]


def _load_compiled():
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _kernel


_compiled = None if os.environ.get("SETMATRIX_KERNEL", "").lower() == "python" else _load_compiled()

if _compiled is not None:
    Kernel = _compiled.Kernel
    COMPILED = True
    BACKEND = "cython"
else:
    Kernel = _pykernel.Kernel
    COMPILED = False
    BACKEND = "python"


def available_backends() -> list[str]:
    out = ["python"]
    if _load_compiled() is not None:
        out.insert(0, "cython")
    return out


def kernel_class(backend: str | None = None):
    """Kernel class for ``backend`` (``"cython"``, ``"python"`` or the default)."""
    if backend in (None, "auto", "default"):
        return Kernel
    if backend == "python":
        return _pykernel.Kernel
    if backend == "cython":
        mod = _load_compiled()
        if mod is None:
            raise ImportError("the compiled kernel is not built; run pip install -e .")
        return mod.Kernel
    raise ValueError(f"unknown kernel backend {backend!r}")
