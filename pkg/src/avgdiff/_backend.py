"""Kernel backend selection.

The default tries the compiled extension and silently falls back to the
NumPy implementations.  Set AVGDIFF_BACKEND=python or =compiled to force
a choice (the latter raises if the extension is not built).
"""

import os

from . import _kernels_py

_requested = os.environ.get("AVGDIFF_BACKEND", "auto").strip().lower() or "auto"

if _requested not in ("auto", "compiled", "python"):
    raise ValueError(
        f"unknown AVGDIFF_BACKEND value {_requested!r}; "
        "expected 'auto', 'compiled' or 'python'"
    )

kernels = _kernels_py
USING_COMPILED = False

if _requested in ("auto", "compiled"):
    try:
        from . import _kernels_cy as _compiled
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "AVGDIFF_BACKEND=compiled but avgdiff._kernels_cy is not "
                "built; reinstall with a C compiler or unset AVGDIFF_BACKEND"
            )
    else:
        kernels = _compiled
        USING_COMPILED = True


def backend_name():
    """Name of the active kernel backend, 'compiled' or 'python'."""
    return "compiled" if USING_COMPILED else "python"
