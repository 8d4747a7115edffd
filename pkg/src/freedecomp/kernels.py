"""Backend selection for the table kernels.

The compiled module is used when it was built; setting ``FREEDECOMP_PURE=1``
forces the pure-Python implementation.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FREEDECOMP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

compose = _impl.compose
first_mismatch = _impl.first_mismatch
pullback_check = _impl.pullback_check
fiber_offsets = _impl.fiber_offsets


def backends():
    """Available implementations by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return found
