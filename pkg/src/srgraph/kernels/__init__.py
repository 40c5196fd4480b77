"""Search kernels for the order and the measure.

The compiled module is used when it was built and ``SRGRAPH_PURE_PYTHON``
is not set; otherwise the pure-Python module is used. ``BACKEND`` names
the active one.
"""

import os

from . import _pykernels
from ._pykernels import BudgetExceeded

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("SRGRAPH_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

ab_feasible = _impl.ab_feasible
longest_descent = _impl.longest_descent

__all__ = ["BACKEND", "BudgetExceeded", "ab_feasible", "longest_descent"]
