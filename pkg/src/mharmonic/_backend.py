"""Selects the compiled series core, falling back to pure Python.

Set ``MHARMONIC_BACKEND=python`` (or ``cython``) to force a choice; forcing
``cython`` when the extension is missing raises ImportError instead of
silently degrading.
"""

from __future__ import annotations

import os

_requested = os.environ.get("MHARMONIC_BACKEND", "").strip().lower()

if _requested == "python":
    from . import _series_py as series
elif _requested == "cython":
    from . import _series_cy as series  # type: ignore[no-redef]
else:
    try:
        from . import _series_cy as series  # type: ignore[no-redef]
    except ImportError:
        from . import _series_py as series  # type: ignore[no-redef]

BACKEND = series.BACKEND_NAME


def get_backend(name: str):
    """Return a specific backend module (used by the parity tests/benchmark)."""
    if name == "python":
        from . import _series_py

        return _series_py
    if name == "cython":
        from . import _series_cy

        return _series_cy
    raise ValueError(f"unknown backend {name!r}")
