"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
reference implementation is used. Set ``DIFFAM_BACKEND=python`` to force the
reference path.
"""

import logging
import os

from diffam import _pykernels

log = logging.getLogger(__name__)

_ck = None
if os.environ.get("DIFFAM_BACKEND", "").lower() != "python":
    try:
        from diffam import _ckernels as _ck
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable; using numpy fallback")

BACKEND = "cython" if _ck is not None else "python"
_impl = _ck if _ck is not None else _pykernels

diff_masks = _impl.diff_masks
symdiff_masks = _impl.symdiff_masks
diff_size = _impl.diff_size
all_intersect = _impl.all_intersect
cross_intersect = _impl.cross_intersect
count_disjoint = _impl.count_disjoint


def maximal_cliques(adj, cap):
    if _ck is not None and len(adj) <= 64:
        return _ck.maximal_cliques(adj, cap)
    return _pykernels.maximal_cliques(adj, cap)


def backends():
    """Map of available backend name -> kernel module (for tests/benchmarks)."""
    out = {"python": _pykernels}
    if _ck is not None:
        out["cython"] = _ck
    return out
