"""Append-only simulation event records.

Every observable — pulses, alerts, brakes, light changes — lands here,
and the log is the single source of truth for telemetry and replay. On
disk a log is newline-delimited JSON, one event per line with fields
``seq``, ``t``, ``kind``, ``subject``, ``detail``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PULSE_SENT = "PulseSent"
PULSE_RECEIVED = "PulseReceived"
FRAME_REJECTED = "FrameRejected"
ALERT_RAISED = "AlertRaised"
ALERT_CLEARED = "AlertCleared"
AUTO_BRAKE_ENGAGED = "AutoBrakeEngaged"
AUTO_BRAKE_RELEASED = "AutoBrakeReleased"
SPEED_CLAMPED = "SpeedClamped"
LIGHT_CHANGED = "LightChanged"
VEHICLE_CROSSED_BOARD = "VehicleCrossedBoard"

EVENT_KINDS = frozenset({
    PULSE_SENT, PULSE_RECEIVED, FRAME_REJECTED, ALERT_RAISED, ALERT_CLEARED,
    AUTO_BRAKE_ENGAGED, AUTO_BRAKE_RELEASED, SPEED_CLAMPED, LIGHT_CHANGED,
    VEHICLE_CROSSED_BOARD,
})


@dataclass
class SimEvent:
    """One observable occurrence; seq is stamped when appended to a log."""

    kind: str
    subject: str
    t: float
    detail: dict = field(default_factory=dict)
    seq: int = -1

    def to_json_line(self) -> str:
        record = {"seq": self.seq, "t": self.t, "kind": self.kind,
                  "subject": self.subject, "detail": self.detail}
        return json.dumps(record, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "SimEvent":
        record = json.loads(line)
        return cls(kind=record["kind"], subject=record["subject"],
                   t=record["t"], detail=record["detail"], seq=record["seq"])


class EventLog:
    """Ordered event collector enforcing the seq/time invariants."""

    def __init__(self) -> None:
        self.events: list[SimEvent] = []
        self._next_seq = 0
        self._last_t = float("-inf")

    def append(self, event: SimEvent) -> SimEvent:
        if event.t < self._last_t:
            raise ValueError(f"event time {event.t} precedes log time {self._last_t}")
        event.seq = self._next_seq
        self._next_seq += 1
        self._last_t = event.t
        self.events.append(event)
        return event

    def extend(self, events: list[SimEvent]) -> None:
        for event in events:
            self.append(event)

    def __len__(self) -> int:
        return len(self.events)


def validate_log(events: list[SimEvent]) -> None:
    """Check the seq/time invariants of a finished log; raise on the first hole."""
    last_t = float("-inf")
    for i, event in enumerate(events):
        if event.seq != i:
            raise ValueError(f"event {i}: seq {event.seq} breaks the gap-free ordering")
        if event.t < last_t:
            raise ValueError(f"event {i}: time {event.t} decreases")
        if event.kind not in EVENT_KINDS:
            raise ValueError(f"event {i}: unknown kind {event.kind!r}")
        last_t = event.t
