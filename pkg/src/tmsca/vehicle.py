"""Per-vehicle on-board unit: beacon handling and the speed governor.

Receiving a named sign beacon immediately lowers the governor ceiling to
the mode's fraction of the vehicle's maximum speed; the motor model then
steers measured speed toward min(driver command, ceiling). A driver whose
measured speed stays above the ceiling past the alert grace window gets
the full treatment: forced deceleration to standstill, after which the
governor releases and normal (still clamped) driving resumes.

Ambulances additionally run a preemption emitter that asks boards ahead
for green and reports back once they have crossed.

The governor state machine proper lives in the kernel backend
(``tmsca.kernels``); this module owns event emission and bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from tmsca import kernels
from tmsca.events import (
    ALERT_CLEARED,
    ALERT_RAISED,
    AUTO_BRAKE_ENGAGED,
    AUTO_BRAKE_RELEASED,
    FRAME_REJECTED,
    PULSE_RECEIVED,
    SPEED_CLAMPED,
    SimEvent,
)
from tmsca.protocol import (
    AmbulanceSignal,
    Direction,
    PulseFrame,
    SignMode,
    WindowTable,
    classify_sign_pulse,
    encode_ambulance,
    target_speed_fraction,
)
from tmsca.signboard import SignboardState


class VehicleKind(str, Enum):
    CAR = "car"
    AMBULANCE = "ambulance"


GOVERNOR_NAMES = {
    kernels.GOV_CRUISE: "cruise",
    kernels.GOV_ALERTED: "alerted",
    kernels.GOV_AUTO_BRAKE: "auto_brake",
}

_TRANSITION_EVENTS = {
    kernels.TR_ALERT_RAISED: ALERT_RAISED,
    kernels.TR_ALERT_CLEARED: ALERT_CLEARED,
    kernels.TR_BRAKE_ENGAGED: AUTO_BRAKE_ENGAGED,
    kernels.TR_BRAKE_RELEASED: AUTO_BRAKE_RELEASED,
}


@dataclass
class GovernorConfig:
    alert_grace_s: float = 3.0      # buzzer time before auto-brake
    compliance_margin: float = 0.05  # tolerated fraction above the ceiling
    brake_decel_mps2: float = 4.0
    accel_mps2: float = 2.0

    def validate(self) -> None:
        if not self.alert_grace_s > 0:
            raise ValueError("governor: alert_grace_s must be > 0")
        if self.compliance_margin < 0:
            raise ValueError("governor: compliance_margin must be >= 0")
        if not self.brake_decel_mps2 > 0:
            raise ValueError("governor: brake_decel_mps2 must be > 0")
        if not self.accel_mps2 > 0:
            raise ValueError("governor: accel_mps2 must be > 0")


@dataclass
class VehicleState:
    id: str
    kind: VehicleKind = VehicleKind.CAR
    position_m: float = 0.0
    speed_mps: float = 0.0
    v_max_mps: float = 20.0
    throttle_cmd: float = 0.0
    beacon_range_m: float = 50.0
    drivable: bool = True
    emitter_on: bool = True        # ambulance preemption emitter
    active_mode: SignMode = SignMode.UNKNOWN
    clamp_mps: float = 0.0         # governor ceiling; v_max when out of zone
    governor: int = kernels.GOV_CRUISE
    buzzer_on: bool = False
    alert_deadline: float = 0.0    # meaningful only while alerted
    active_board_id: str | None = None
    last_pulse_at: float = 0.0
    cleared_boards: set[str] = field(default_factory=set)

    def __post_init__(self):
        if self.clamp_mps == 0.0:
            self.clamp_mps = self.v_max_mps

    @property
    def governor_name(self) -> str:
        return GOVERNOR_NAMES[self.governor]


def on_pulse(vehicle: VehicleState, frame: PulseFrame, now: float,
             table: WindowTable) -> list[SimEvent]:
    """Handle one board-to-vehicle beacon.

    A named mode re-aims the clamp; unknown or malformed frames are
    rejected as events and leave the vehicle untouched.
    """
    if not frame.is_wellformed():
        return [SimEvent(FRAME_REJECTED, vehicle.id, now,
                         {"period_ms": frame.period_ms, "reason": "malformed"})]
    mode = classify_sign_pulse(frame.period_ms, table)
    if mode is SignMode.UNKNOWN:
        return [SimEvent(FRAME_REJECTED, vehicle.id, now,
                         {"period_ms": frame.period_ms, "reason": "no_window"})]

    events = [SimEvent(PULSE_RECEIVED, vehicle.id, now,
                       {"period_ms": frame.period_ms, "mode": mode.value,
                        "board": frame.source_id})]
    new_clamp = target_speed_fraction(mode, table) * vehicle.v_max_mps
    if mode is not vehicle.active_mode or new_clamp != vehicle.clamp_mps:
        events.append(SimEvent(SPEED_CLAMPED, vehicle.id, now,
                               {"clamp_mps": new_clamp, "mode": mode.value}))
    vehicle.active_mode = mode
    vehicle.clamp_mps = new_clamp
    vehicle.active_board_id = frame.source_id
    vehicle.last_pulse_at = now
    return events


def clear_zone(vehicle: VehicleState, now: float) -> list[SimEvent]:
    """Drop the active zone: clamp returns to the vehicle's own maximum."""
    if vehicle.active_mode is SignMode.UNKNOWN:
        return []
    vehicle.active_mode = SignMode.UNKNOWN
    vehicle.active_board_id = None
    vehicle.clamp_mps = vehicle.v_max_mps
    return [SimEvent(SPEED_CLAMPED, vehicle.id, now,
                     {"clamp_mps": vehicle.clamp_mps, "mode": SignMode.UNKNOWN.value})]


def governor_step(vehicle: VehicleState, cfg: GovernorConfig, now: float,
                  dt: float) -> list[SimEvent]:
    """One governor transition plus kinematics step."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    gov, deadline, speed, pos, transition = kernels.governor_step_core(
        vehicle.governor, vehicle.alert_deadline, vehicle.speed_mps,
        vehicle.position_m, vehicle.clamp_mps, vehicle.throttle_cmd,
        vehicle.v_max_mps, cfg.compliance_margin, cfg.alert_grace_s,
        cfg.accel_mps2, cfg.brake_decel_mps2, now, dt)
    vehicle.governor = gov
    vehicle.alert_deadline = deadline
    vehicle.speed_mps = speed
    vehicle.position_m = pos
    vehicle.buzzer_on = gov != kernels.GOV_CRUISE

    if transition == kernels.TR_NONE:
        return []
    detail = {"speed_mps": speed, "clamp_mps": vehicle.clamp_mps}
    if transition == kernels.TR_ALERT_RAISED:
        detail["deadline"] = deadline
    return [SimEvent(_TRANSITION_EVENTS[transition], vehicle.id, now, detail)]


def apply_driver_command(vehicle: VehicleState, throttle: float) -> VehicleState:
    """Store the driver's requested fraction of v_max.

    Takes effect at the next governor step; while auto-braking the stored
    value sits idle until the governor releases.
    """
    if not 0.0 <= throttle <= 1.0:
        raise ValueError(f"throttle must be in [0, 1], got {throttle}")
    vehicle.throttle_cmd = throttle
    return vehicle


def ambulance_emit_pairs(
    vehicle: VehicleState, boards_in_range: list[SignboardState], now: float,
    table: WindowTable,
) -> list[tuple[str, PulseFrame]]:
    """Preemption pulses toward light-equipped boards in radio range.

    Request-green repeats every tick while the board is still ahead; the
    cleared-red report goes out exactly once, on the first tick after
    crossing. At most one frame per board per tick; each frame is paired
    with the id of the board it is aimed at.
    """
    if vehicle.kind is not VehicleKind.AMBULANCE:
        raise ValueError(f"vehicle {vehicle.id} is not an ambulance")
    pairs: list[tuple[str, PulseFrame]] = []
    if not vehicle.emitter_on:
        return pairs
    for board in boards_in_range:
        if not board.has_light:
            continue
        if vehicle.position_m < board.position_m:
            signal = AmbulanceSignal.REQUEST_GREEN
        elif vehicle.position_m > board.position_m and board.id not in vehicle.cleared_boards:
            vehicle.cleared_boards.add(board.id)
            signal = AmbulanceSignal.CLEARED_RED
        else:
            continue
        pairs.append((board.id, PulseFrame(
            period_ms=encode_ambulance(signal, table),
            direction=Direction.VEHICLE_TO_SIGN,
            source_id=vehicle.id, emitted_at=now)))
    return pairs


def ambulance_emit(vehicle: VehicleState, boards_in_range: list[SignboardState],
                   now: float, table: WindowTable) -> list[PulseFrame]:
    """Frames-only view of ambulance_emit_pairs."""
    return [frame for _, frame in ambulance_emit_pairs(vehicle, boards_in_range, now, table)]
