"""Seeded generator for reproducible simulation runs.

Thin stateful wrapper around the xorshift64* kernel (recurrence documented
in ``tmsca._kernels_py``). The same seed always yields the same stream, in
Python or C backend alike, which is what makes event logs replayable.
"""

from __future__ import annotations

from tmsca import kernels

_MASK64 = (1 << 64) - 1

# xorshift64* cannot run from state 0; remap seed 0 to an arbitrary
# published constant (golden-ratio increment) so every seed is usable.
_ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15


class SimRng:
    """Deterministic 64-bit generator with a small surface."""

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._state = seed if seed != 0 else _ZERO_SEED_SUBSTITUTE

    def next_u64(self) -> int:
        self._state, out = kernels.rng_next(self._state)
        return out

    def uniform(self, lo: float, hi: float) -> float:
        self._state, value = kernels.rng_uniform(self._state, lo, hi)
        return value

    def jitter(self, half_width_ms: float) -> float:
        """Symmetric beacon-period jitter in [-half_width, +half_width)."""
        return self.uniform(-half_width_ms, half_width_ms)
