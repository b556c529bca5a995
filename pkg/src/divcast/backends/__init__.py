"""Kernel backend selection.

The compiled extension is preferred when importable; set
DIVCAST_BACKEND=pure (or =compiled) to force a choice. The two backends
are arithmetic-identical, so the selection never changes results, only
speed.
"""

import os

from . import pure as _pure

_choice = os.environ.get("DIVCAST_BACKEND", "auto")
if _choice not in ("auto", "compiled", "pure"):
    raise ValueError(f"DIVCAST_BACKEND must be auto|compiled|pure, got {_choice!r}")

if _choice == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "DIVCAST_BACKEND=compiled but the extension is not built; "
                "reinstall with a C compiler available"
            ) from None
        _impl = _pure
        BACKEND = "pure"

ets_filter = _impl.ets_filter
best_split = _impl.best_split

ERR_ADD = _pure.ERR_ADD
ERR_MUL = _pure.ERR_MUL
TREND_NONE = _pure.TREND_NONE
TREND_ADD = _pure.TREND_ADD
TREND_DAMPED = _pure.TREND_DAMPED
SEASON_NONE = _pure.SEASON_NONE
SEASON_ADD = _pure.SEASON_ADD
SEASON_MUL = _pure.SEASON_MUL
