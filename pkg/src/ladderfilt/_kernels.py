"""Kernel selection: the compiled core when importable, else pure Python.

Set ``LADDERFILT_PURE=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("LADDERFILT_PURE") != "1":
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

canon_graph = _impl.canon_graph
has_three_end_blob = _impl.has_three_end_blob
echelon_modp = _impl.echelon_modp
face_counts = _impl.face_counts
blob_masks = _impl.blob_masks
