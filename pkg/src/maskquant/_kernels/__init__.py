"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it was built and imports cleanly;
setting ``MASKQUANT_PURE_PYTHON=1`` forces the numpy fallback.  ``BACKEND``
names the active implementation.
"""

import os

from . import _pykernels

python_backend = _pykernels

try:
    if os.environ.get("MASKQUANT_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if _active is compiled_backend else "python"

laguerre = _active.laguerre
raise_apply = _active.raise_apply
ch_value = _active.ch_value

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "laguerre",
    "raise_apply",
    "ch_value",
]
