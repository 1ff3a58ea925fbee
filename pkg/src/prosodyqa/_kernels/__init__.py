"""Speed kernels for the two hot inner loops.

``_native`` is a compiled Cython extension; ``_fallback`` is the
pure-Python reference with identical semantics.  The compiled module is
preferred when present; set PROSODYQA_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the cross-check tests).
"""

import os

from . import _fallback

if os.environ.get("PROSODYQA_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

gestalt_match_total = _impl.gestalt_match_total
signed_rank_tail_count = _impl.signed_rank_tail_count
BACKEND: str = _impl.BACKEND

__all__ = ["gestalt_match_total", "signed_rank_tail_count", "BACKEND"]
