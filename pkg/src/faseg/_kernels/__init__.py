"""Kernel backend selection.

The compiled Cython module is preferred when its build artifact is present;
otherwise the pure-numpy fallback is used. Set ``FASEG_KERNELS=pure`` or
``FASEG_KERNELS=cython`` to force a backend (the latter raises if the
extension is missing).
"""

from __future__ import annotations

import os

_forced = os.environ.get("FASEG_KERNELS", "").strip().lower()
if _forced not in ("", "pure", "cython"):
    raise ValueError(f"FASEG_KERNELS must be 'pure' or 'cython', got {_forced!r}")

if _forced == "pure":
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        from . import pure as _impl

        BACKEND = "pure"

forward_backward = _impl.forward_backward
viterbi = _impl.viterbi
emission_scores = _impl.emission_scores
emission_grad = _impl.emission_grad

__all__ = [
    "BACKEND",
    "forward_backward",
    "viterbi",
    "emission_scores",
    "emission_grad",
]
