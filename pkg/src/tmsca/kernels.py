"""Kernel backend selection.

Imports the compiled kernels when available, otherwise the pure-Python
fallback. Set ``TMSCA_PURE=1`` to force the fallback (used by the parity
tests and the benchmark). The two backends are bit-identical by
construction; ``BACKEND`` names the one in use.
"""

from __future__ import annotations

import os

from tmsca import _kernels_py

_FORCE_PURE = os.environ.get("TMSCA_PURE", "") == "1"

try:
    from tmsca import _kernels_c
except ImportError:
    _kernels_c = None

_impl = _kernels_py if (_FORCE_PURE or _kernels_c is None) else _kernels_c

BACKEND: str = "python" if _impl is _kernels_py else "c"

rng_next = _impl.rng_next
rng_uniform = _impl.rng_uniform
governor_step_core = _impl.governor_step_core

GOV_CRUISE = _kernels_py.GOV_CRUISE
GOV_ALERTED = _kernels_py.GOV_ALERTED
GOV_AUTO_BRAKE = _kernels_py.GOV_AUTO_BRAKE

TR_NONE = _kernels_py.TR_NONE
TR_ALERT_RAISED = _kernels_py.TR_ALERT_RAISED
TR_ALERT_CLEARED = _kernels_py.TR_ALERT_CLEARED
TR_BRAKE_ENGAGED = _kernels_py.TR_BRAKE_ENGAGED
TR_BRAKE_RELEASED = _kernels_py.TR_BRAKE_RELEASED


def available_backends() -> dict[str, object]:
    """Backends importable in this environment, keyed by name."""
    found: dict[str, object] = {"python": _kernels_py}
    if _kernels_c is not None:
        found["c"] = _kernels_c
    return found
