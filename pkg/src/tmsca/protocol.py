"""Pulse-width signaling codec.

Everything on the air is a pulse period in milliseconds. Sign boards
announce their type with one period window per sign mode; ambulances talk
back to boards with two windows of their own. The ambulance windows
numerically collide with the speed-limit and humps windows, so frames
carry a direction and the direction picks the classifier — the period
alone is never trusted to disambiguate.

All windows are open intervals: a period sitting exactly on a boundary,
or in a gap between windows, classifies as unknown and actuates nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class SignMode(str, Enum):
    SPEED_LIMIT = "speed_limit"
    HUMPS = "humps"
    SCHOOL_ZONE = "school_zone"
    FREEWAY = "freeway"
    UNKNOWN = "unknown"


class AmbulanceSignal(str, Enum):
    REQUEST_GREEN = "request_green"
    CLEARED_RED = "cleared_red"
    UNKNOWN = "unknown"


class Direction(str, Enum):
    SIGN_TO_VEHICLE = "signboard_to_vehicle"
    VEHICLE_TO_SIGN = "vehicle_to_signboard"


NAMED_MODES = (SignMode.SPEED_LIMIT, SignMode.HUMPS, SignMode.SCHOOL_ZONE, SignMode.FREEWAY)

_DEFAULT_SIGN_WINDOWS = {
    SignMode.SPEED_LIMIT: (45.0, 55.0),
    SignMode.HUMPS: (65.0, 75.0),
    SignMode.SCHOOL_ZONE: (85.0, 95.0),
    SignMode.FREEWAY: (105.0, 115.0),
}
_DEFAULT_AMBULANCE_WINDOWS = {
    AmbulanceSignal.REQUEST_GREEN: (45.0, 55.0),
    AmbulanceSignal.CLEARED_RED: (65.0, 75.0),
}
_DEFAULT_SPEED_FRACTIONS = {
    SignMode.SPEED_LIMIT: 0.80,
    SignMode.HUMPS: 0.30,
    SignMode.SCHOOL_ZONE: 0.50,
    SignMode.FREEWAY: 1.00,
}


@dataclass(frozen=True)
class PulseFrame:
    """One beacon transmission."""

    period_ms: float
    direction: Direction
    source_id: str
    emitted_at: float  # simulation seconds

    def is_wellformed(self) -> bool:
        return math.isfinite(self.period_ms) and self.period_ms > 0.0


@dataclass(frozen=True)
class WindowTable:
    """Period windows and per-mode speed fractions, configurable per scenario."""

    sign_windows: dict[SignMode, tuple[float, float]] = field(
        default_factory=lambda: dict(_DEFAULT_SIGN_WINDOWS))
    ambulance_windows: dict[AmbulanceSignal, tuple[float, float]] = field(
        default_factory=lambda: dict(_DEFAULT_AMBULANCE_WINDOWS))
    speed_fractions: dict[SignMode, float] = field(
        default_factory=lambda: dict(_DEFAULT_SPEED_FRACTIONS))

    def validate(self) -> None:
        """Raise ValueError on the first structural violation."""
        for name, windows in (("sign_windows", self.sign_windows),
                              ("ambulance_windows", self.ambulance_windows)):
            for key, (lo, hi) in windows.items():
                if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo < hi):
                    raise ValueError(f"{name}[{key.value}]: invalid interval ({lo}, {hi})")
            pairs = sorted(windows.items(), key=lambda kv: kv[1][0])
            for (ka, (_, hi_a)), (kb, (lo_b, _)) in zip(pairs, pairs[1:]):
                if lo_b < hi_a:
                    raise ValueError(
                        f"{name}: intervals for {ka.value} and {kb.value} overlap")
        for mode in NAMED_MODES:
            if mode not in self.sign_windows:
                raise ValueError(f"sign_windows: missing interval for {mode.value}")
            frac = self.speed_fractions.get(mode)
            if frac is None or not 0.0 < frac <= 1.0:
                raise ValueError(f"speed_fractions[{mode.value}]: {frac} not in (0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "sign_windows": {m.value: list(w) for m, w in self.sign_windows.items()},
            "ambulance_windows": {s.value: list(w) for s, w in self.ambulance_windows.items()},
            "speed_fractions": {m.value: f for m, f in self.speed_fractions.items()},
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "WindowTable":
        try:
            table = cls(
                sign_windows={SignMode(k): (float(v[0]), float(v[1]))
                              for k, v in doc["sign_windows"].items()},
                ambulance_windows={AmbulanceSignal(k): (float(v[0]), float(v[1]))
                                   for k, v in doc["ambulance_windows"].items()},
                speed_fractions={SignMode(k): float(v)
                                 for k, v in doc["speed_fractions"].items()},
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"windows: malformed table document ({exc})") from exc
        table.validate()
        return table


DEFAULT_TABLE = WindowTable()


def _check_period(period_ms: float) -> None:
    if not (math.isfinite(period_ms) and period_ms > 0.0):
        raise ValueError(f"pulse period must be finite and positive, got {period_ms}")


def classify_sign_pulse(period_ms: float, table: WindowTable = DEFAULT_TABLE) -> SignMode:
    """Map a board-to-vehicle pulse period onto a sign mode.

    Open-interval containment; boundary and gap periods come back unknown.
    """
    _check_period(period_ms)
    for mode, (lo, hi) in table.sign_windows.items():
        if lo < period_ms < hi:
            return mode
    return SignMode.UNKNOWN


def classify_ambulance_pulse(period_ms: float,
                             table: WindowTable = DEFAULT_TABLE) -> AmbulanceSignal:
    """Map a vehicle-to-board pulse period onto an ambulance signal."""
    _check_period(period_ms)
    for signal, (lo, hi) in table.ambulance_windows.items():
        if lo < period_ms < hi:
            return signal
    return AmbulanceSignal.UNKNOWN


def encode_sign_mode(mode: SignMode, table: WindowTable = DEFAULT_TABLE) -> float:
    """Nominal transmit period for a mode: the window midpoint (max jitter margin)."""
    if mode is SignMode.UNKNOWN:
        raise ValueError("cannot encode the unknown sign mode")
    lo, hi = table.sign_windows[mode]
    return (lo + hi) / 2.0


def encode_ambulance(signal: AmbulanceSignal, table: WindowTable = DEFAULT_TABLE) -> float:
    """Nominal transmit period for an ambulance signal: the window midpoint."""
    if signal is AmbulanceSignal.UNKNOWN:
        raise ValueError("cannot encode the unknown ambulance signal")
    lo, hi = table.ambulance_windows[signal]
    return (lo + hi) / 2.0


def target_speed_fraction(mode: SignMode, table: WindowTable = DEFAULT_TABLE) -> float:
    """Speed ceiling for a mode as a fraction of the vehicle's maximum."""
    if mode is SignMode.UNKNOWN:
        raise ValueError("no speed fraction for the unknown sign mode")
    return table.speed_fractions[mode]
