"""Backend selection for the hot kernels.

The compiled extension ``gonbound._ckernels`` is used when it imports;
otherwise the pure-Python module is used. Set ``GONBOUND_PURE=1`` to force
the fallback.
"""
import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if os.environ.get("GONBOUND_PURE") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]
dhar_burn = _impl.dhar_burn
reduce_divisor = _impl.reduce_divisor
jacobi_eigh = _impl.jacobi_eigh


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active one)."""
    return BACKENDS[name or BACKEND]
