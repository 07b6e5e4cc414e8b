"""Select the compiled kernels when available, else the pure-Python ones.

Set TWISTKIT_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("TWISTKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

dense_mul = _impl.dense_mul
dense_divmod_monic = _impl.dense_divmod_monic
binary_necklaces = _impl.binary_necklaces
canonical_rotation = _impl.canonical_rotation
