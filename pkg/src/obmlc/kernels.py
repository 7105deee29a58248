"""Backend selection for the per-sample hot loops.

The compiled extension is used when importable. Setting the environment
variable ``OBMLC_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

__all__ = [
    "BACKEND",
    "llr_ob",
    "llr_cb",
    "ob_integrand",
    "bpsk_integrand",
    "lq_integrand",
    "backends",
]


def _load():
    if os.environ.get("OBMLC_PURE_PYTHON", "").strip() not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels_ext
    except ImportError:
        return _kernels_py, "python"
    return _kernels_ext, "cython"


_impl, BACKEND = _load()

llr_ob = _impl.llr_ob
llr_cb = _impl.llr_cb
ob_integrand = _impl.ob_integrand
bpsk_integrand = _impl.bpsk_integrand
lq_integrand = _impl.lq_integrand


def backends():
    """Return every importable kernel module keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels_ext
    except ImportError:
        pass
    else:
        found["cython"] = _kernels_ext
    return found
