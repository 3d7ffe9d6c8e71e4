"""Numeric kernel backend selection.

The compiled extension is used when importable; set ``EXACTHARMONIC_PURE=1``
to force the pure-Python backend.  Both expose ``eval_program``, ``trace``
and ``slope_grid`` with identical signatures and bit-identical results.
"""

from __future__ import annotations

import os

from . import _kernel_py
from ._kernel_py import (  # noqa: F401
    ERR_DOMAIN,
    ERR_RANGE,
    MODE_GRADIENT,
    MODE_TANGENT,
    MODE_TANGENT_PROJECT,
    OK,
    STOP_CLOSED,
    STOP_DEGENERATE,
    STOP_DOMAIN,
    STOP_LEFT_BOX,
    STOP_MAX_POINTS,
    STOP_STALLED,
)

try:
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

STOP_NAMES = {
    STOP_MAX_POINTS: "max_points",
    STOP_LEFT_BOX: "left_box",
    STOP_DEGENERATE: "degenerate",
    STOP_CLOSED: "closed",
    STOP_DOMAIN: "domain",
    STOP_STALLED: "stalled",
}


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def get_backend(name: str | None = None):
    """Return the backend module named ``name`` ("compiled" or "python"), or the default."""
    if name is None:
        name = "python" if os.environ.get("EXACTHARMONIC_PURE") or _compiled is None else "compiled"
    if name == "python":
        return _kernel_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


BACKEND = "python" if os.environ.get("EXACTHARMONIC_PURE") or _compiled is None else "compiled"
