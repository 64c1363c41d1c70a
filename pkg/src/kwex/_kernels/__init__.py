"""Hot-kernel backend selection.

Imports the compiled Cython extension when available, falling back to the
numpy implementation.  ``KWEX_PURE_PYTHON=1`` forces the fallback (used by
the benchmark to compare backends).
"""

from __future__ import annotations

import os

if os.environ.get("KWEX_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND
pagerank = _impl.pagerank
mmr_select = _impl.mmr_select

__all__ = ["BACKEND", "pagerank", "mmr_select"]
