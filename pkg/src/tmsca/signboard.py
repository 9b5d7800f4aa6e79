"""Smart sign board: periodic beacon emission plus light preemption.

A board broadcasts its configured mode as a pulse-width beacon on a fixed
cadence, unconditionally — all speed judgment lives on the vehicle side.
Boards with an attached traffic light listen for vehicle-originated
pulses: a request-green pulse preempts the light to green, a cleared-red
pulse restores red once the requester has crossed. There is no timeout;
the light holds its color until told otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from tmsca.events import FRAME_REJECTED, LIGHT_CHANGED, PULSE_SENT, SimEvent
from tmsca.protocol import (
    AmbulanceSignal,
    Direction,
    PulseFrame,
    SignMode,
    WindowTable,
    classify_ambulance_pulse,
    encode_sign_mode,
)
from tmsca.rng import SimRng


class LightColor(str, Enum):
    GREEN = "green"
    RED = "red"
    NONE = "none"


@dataclass
class SignboardState:
    id: str
    position_m: float
    mode: SignMode
    beacon_range_m: float = 50.0
    beacon_interval_s: float = 0.5
    next_beacon_at: float = 0.0
    has_light: bool = False
    light: LightColor = LightColor.NONE

    def __post_init__(self):
        if self.mode is SignMode.UNKNOWN:
            raise ValueError(f"board {self.id}: mode must be a named sign mode")
        # A light-equipped board idles red; preemption turns it green.
        if self.has_light and self.light is LightColor.NONE:
            self.light = LightColor.RED


def set_mode(board: SignboardState, mode: SignMode) -> SignboardState:
    """Switch the board's broadcast mode; beacons from now on encode it."""
    if mode is SignMode.UNKNOWN:
        raise ValueError(f"board {board.id}: cannot select the unknown mode")
    board.mode = mode
    return board


def signboard_tick(
    board: SignboardState,
    inbound: list[PulseFrame],
    now: float,
    table: WindowTable,
    rng: SimRng | None = None,
    jitter_ms: float = 0.0,
) -> tuple[list[PulseFrame], list[SimEvent]]:
    """Advance the board to `now`: emit due beacons, absorb inbound pulses.

    Inbound frames that are malformed or classify to no ambulance window
    are dropped with a FrameRejected event; nothing a vehicle sends can
    fault the board.
    """
    emitted: list[PulseFrame] = []
    events: list[SimEvent] = []

    while now >= board.next_beacon_at:
        period = encode_sign_mode(board.mode, table)
        if rng is not None:
            # One draw per emission regardless of width; ±0.0 at width 0
            # keeps the stream position independent of the jitter setting.
            period += rng.jitter(jitter_ms)
        frame = PulseFrame(period_ms=period, direction=Direction.SIGN_TO_VEHICLE,
                           source_id=board.id, emitted_at=now)
        emitted.append(frame)
        events.append(SimEvent(PULSE_SENT, board.id, now,
                               {"period_ms": period, "mode": board.mode.value}))
        board.next_beacon_at += board.beacon_interval_s

    for frame in inbound:
        if not frame.is_wellformed():
            events.append(SimEvent(FRAME_REJECTED, board.id, now,
                                   {"period_ms": frame.period_ms, "reason": "malformed"}))
            continue
        signal = classify_ambulance_pulse(frame.period_ms, table)
        if signal is AmbulanceSignal.UNKNOWN:
            events.append(SimEvent(FRAME_REJECTED, board.id, now,
                                   {"period_ms": frame.period_ms, "reason": "no_window"}))
            continue
        if not board.has_light:
            # Nothing to preempt; drop silently rather than fault.
            continue
        color = (LightColor.GREEN if signal is AmbulanceSignal.REQUEST_GREEN
                 else LightColor.RED)
        if color is not board.light:
            board.light = color
            events.append(SimEvent(LIGHT_CHANGED, board.id, now,
                                   {"color": color.value, "source": frame.source_id}))

    return emitted, events
