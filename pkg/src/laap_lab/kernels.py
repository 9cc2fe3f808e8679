"""Backend selection for the stepping kernels.

The compiled extension ``laap_lab._ckernels`` is used when it imports;
otherwise, or when ``LAAP_LAB_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python twin is used.
"""

import os

from laap_lab import _pykernels


def _load():
    if os.environ.get("LAAP_LAB_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels, "python"
    try:
        from laap_lab import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


impl, BACKEND = _load()

osc_rhs = impl.osc_rhs
integrate_switching = impl.integrate_switching
chi_euler = impl.chi_euler
chi_first_violation = impl.chi_first_violation

STATUS_OK = _pykernels.STATUS_OK
STATUS_LEFT_DOMAIN = _pykernels.STATUS_LEFT_DOMAIN
STATUS_SINGULAR_START = _pykernels.STATUS_SINGULAR_START
