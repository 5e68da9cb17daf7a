"""Integer kernels, compiled when the extension is built, numpy otherwise.

Set ``SCHEME_LAB_PURE=1`` to force the numpy versions.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SCHEME_LAB_PURE") == "1":
    _impl = _kernels_py
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "numpy"

zero_one_product = _impl.zero_one_product
relation_constants = _impl.relation_constants

__all__ = ["BACKEND", "zero_one_product", "relation_constants"]
