"""Pick the search backend once, at import.

The compiled kernel is used when it was built; ``BITILE_PURE_PYTHON=1``
forces the Python fallback.
"""

from __future__ import annotations

import os

from . import _search_py

BACKENDS = {"python": _search_py.search}

try:
    from . import _search as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["cython"] = _compiled.search

if os.environ.get("BITILE_PURE_PYTHON", "") in ("1", "true", "yes") or _compiled is None:
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "cython"


def get_search(backend: str | None = None):
    name = backend or DEFAULT_BACKEND
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    return BACKENDS[name]
