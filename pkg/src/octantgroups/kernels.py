"""Hot-loop kernels: the compiled extension when built, else the Python reference.

Set ``OCTANTGROUPS_PURE=1`` to force the Python implementation.
"""
from __future__ import annotations

import os

from . import _pykernels as python

if os.environ.get("OCTANTGROUPS_PURE") == "1":
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

impl = compiled if compiled is not None else python
BACKEND = "compiled" if compiled is not None else "python"

VANISHED = python.VANISHED
EXCEEDED = python.EXCEEDED

apply_letter = impl.apply_letter
apply_axes = impl.apply_axes
closure = impl.closure
ball_classes = impl.ball_classes
word_order = impl.word_order
scan_masks = impl.scan_masks
is_canonical = impl.is_canonical
is_nondegenerate = impl.is_nondegenerate
key = python.key
tropical_scan = impl.tropical_scan
