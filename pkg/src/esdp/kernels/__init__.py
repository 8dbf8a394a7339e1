"""Mining kernel backend selection.

The compiled extension is used when built; the pure-Python twin otherwise.
Set ESDP_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
tests that compare the two backends).
"""

from __future__ import annotations

import os

if os.environ.get("ESDP_PURE_PYTHON"):
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

contains = _impl.contains
support_count = _impl.support_count
prefixspan = _impl.prefixspan

__all__ = ["BACKEND", "contains", "support_count", "prefixspan"]
