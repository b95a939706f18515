"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python twin.  Setting ``DYNMSF_PURE=1`` forces the fallback.
"""
import os

if os.environ.get("DYNMSF_PURE", "") not in ("", "0"):
    from ._lct_py import LinkCutCore, TournamentCore, scatter_min
    BACKEND = "python"
else:
    try:
        from ._core import LinkCutCore, TournamentCore, scatter_min
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._lct_py import LinkCutCore, TournamentCore, scatter_min
        BACKEND = "python"

__all__ = ["BACKEND", "LinkCutCore", "TournamentCore", "scatter_min"]
