"""Kernel backend selection.

The compiled extension is preferred; the pure numpy fallback is used when
the extension failed to build or when GKLAB_BACKEND=pure is set.
"""

import os

from . import _kernels_py

_requested = os.environ.get("GKLAB_BACKEND", "auto").lower()

if _requested == "pure":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME
enumerate_products = _impl.enumerate_products
convolve_lattice = _impl.convolve_lattice


def get_backend(name: str):
    """Return a specific kernel module by name ('compiled' or 'pure')."""
    if name == "pure":
        return _kernels_py
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
