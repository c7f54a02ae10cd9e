"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it imports; otherwise the
pure-Python ``_pykernels``. Setting ``QCOMM_PURE_PYTHON=1`` forces the
fallback.
"""

import os

from qcomm import _pykernels

if os.environ.get("QCOMM_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from qcomm import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

index_class = _impl.index_class
index_sums = _impl.index_sums
square_sum = _impl.square_sum
lift_a = _impl.lift_a
lift_b = _impl.lift_b


def backends():
    """All importable backend modules, keyed by name."""
    out = {"python": _pykernels}
    try:
        from qcomm import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
