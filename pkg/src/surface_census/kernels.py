"""Backend selection for the search kernels.

The compiled extension is used when it imports; set
``SURFACE_CENSUS_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

python_backend = _pykernels

if os.environ.get("SURFACE_CENSUS_PURE_PYTHON"):
    compiled_backend = None
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

closure = backend.closure
enumerate_tuples = backend.enumerate_tuples
extend_hom = backend.extend_hom
element_orders = backend.element_orders
