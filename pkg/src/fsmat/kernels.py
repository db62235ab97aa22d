"""Backend selection for the hot kernels.

The compiled module is used when it imports; setting ``FSMAT_PURE=1`` in the
environment forces the pure-Python implementation.
"""
import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("FSMAT_PURE"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # not built
        compiled = None

impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

trace_size = impl.trace_size
shattered_masks = impl.shattered_masks
compress_masks = impl.compress_masks
down_close_masks = impl.down_close_masks
contains_cols = impl.contains_cols
contribution_windows = impl.contribution_windows
alive_after = impl.alive_after
fs_subtree = impl.fs_subtree

__all__ = [
    "BACKEND", "pure", "compiled", "impl",
    "trace_size", "shattered_masks", "compress_masks", "down_close_masks",
    "contains_cols", "contribution_windows", "alive_after", "fs_subtree",
]
