"""Deterministic fixed-timestep world.

One tick runs six sub-phases in a normative order: (1) drain queued
driver commands, (2) tick every sign board (beacon emission plus inbound
pulse handling), (3) range-gated same-tick delivery of board beacons to
vehicles, (4) ambulance preemption emission, (5) governor and kinematics
for every vehicle in id order, (6) events appended in the order phases
produced them. Reordering any of this changes the event log, so replay
tests pin it down.

Vehicle-to-board pulses emitted in phase 4 are processed by the target
board at the next tick's phase 2 (the board listens at the top of its
loop); board-to-vehicle beacons land the same tick.
"""

from __future__ import annotations

import copy
import json
import math
import queue
from dataclasses import dataclass, field

from tmsca.events import EventLog, PULSE_SENT, SimEvent, VEHICLE_CROSSED_BOARD
from tmsca.protocol import PulseFrame, SignMode, WindowTable
from tmsca.rng import SimRng
from tmsca.signboard import SignboardState, signboard_tick
from tmsca.vehicle import (
    GovernorConfig,
    VehicleKind,
    VehicleState,
    ambulance_emit_pairs,
    apply_driver_command,
    clear_zone,
    governor_step,
    on_pulse,
)

# A zone is exited when the active board has been silent this long,
# measured in multiples of its beacon interval.
ZONE_LOSS_INTERVALS = 3.0


class ScenarioError(ValueError):
    """Scenario document failed parsing or invariant validation."""


@dataclass
class Scenario:
    road_length_m: float
    dt_s: float
    duration_s: float
    seed: int
    jitter_ms: float
    signboards: list[SignboardState] = field(default_factory=list)
    vehicles: list[VehicleState] = field(default_factory=list)
    governor: GovernorConfig = field(default_factory=GovernorConfig)
    windows: WindowTable = field(default_factory=WindowTable)

    @property
    def n_steps(self) -> int:
        return math.ceil(self.duration_s / self.dt_s)


def _require(doc: dict, key: str, where: str = "scenario"):
    if key not in doc:
        raise ScenarioError(f"{where}: missing required field '{key}'")
    return doc[key]


def _number(value, key: str, where: str = "scenario") -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: field '{key}' must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"{where}: field '{key}' must be finite, got {value!r}")
    return float(value)


def load_scenario(document: str | dict) -> Scenario:
    """Parse and fully validate a scenario document (JSON text or dict).

    Raises ScenarioError naming the first violated invariant.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario: not valid JSON ({exc})") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise ScenarioError("scenario: top level must be a JSON object")

    road_length = _number(_require(doc, "road_length_m"), "road_length_m")
    dt_s = _number(_require(doc, "dt_s"), "dt_s")
    duration_s = _number(_require(doc, "duration_s"), "duration_s")
    jitter_ms = _number(_require(doc, "jitter_ms"), "jitter_ms")
    seed = _require(doc, "seed")
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioError(f"scenario: field 'seed' must be an integer, got {seed!r}")
    if not 0 <= seed < 2 ** 64:
        raise ScenarioError(f"scenario: seed {seed} outside unsigned 64-bit range")
    if road_length <= 0:
        raise ScenarioError("scenario: road_length_m must be > 0")
    if dt_s <= 0:
        raise ScenarioError("scenario: dt_s must be > 0")
    if duration_s <= 0:
        raise ScenarioError("scenario: duration_s must be > 0")
    if jitter_ms < 0:
        raise ScenarioError("scenario: jitter_ms must be >= 0")

    if "windows" in doc:
        try:
            windows = WindowTable.from_json_dict(doc["windows"])
        except ValueError as exc:
            raise ScenarioError(f"scenario: {exc}") from exc
    else:
        windows = WindowTable()

    gov_doc = doc.get("governor", {})
    if not isinstance(gov_doc, dict):
        raise ScenarioError("scenario: 'governor' must be an object")
    governor = GovernorConfig(
        alert_grace_s=_number(gov_doc.get("alert_grace_s", 3.0), "alert_grace_s", "governor"),
        compliance_margin=_number(gov_doc.get("compliance_margin", 0.05),
                                  "compliance_margin", "governor"),
        brake_decel_mps2=_number(gov_doc.get("brake_decel_mps2", 4.0),
                                 "brake_decel_mps2", "governor"),
        accel_mps2=_number(gov_doc.get("accel_mps2", 2.0), "accel_mps2", "governor"),
    )
    try:
        governor.validate()
    except ValueError as exc:
        raise ScenarioError(f"scenario: {exc}") from exc

    seen_ids: set[str] = set()

    def claim_id(raw, where: str) -> str:
        if not isinstance(raw, str) or not raw:
            raise ScenarioError(f"{where}: 'id' must be a non-empty string, got {raw!r}")
        if raw in seen_ids:
            raise ScenarioError(f"{where}: duplicate id '{raw}'")
        seen_ids.add(raw)
        return raw

    boards: list[SignboardState] = []
    for i, bdoc in enumerate(doc.get("signboards", [])):
        where = f"signboards[{i}]"
        bid = claim_id(_require(bdoc, "id", where), where)
        position = _number(_require(bdoc, "position_m", where), "position_m", where)
        if not 0 <= position <= road_length:
            raise ScenarioError(f"{where}: position_m {position} outside [0, {road_length}]")
        mode_raw = _require(bdoc, "mode", where)
        try:
            mode = SignMode(mode_raw)
        except ValueError:
            raise ScenarioError(f"{where}: unknown mode {mode_raw!r}") from None
        if mode is SignMode.UNKNOWN:
            raise ScenarioError(f"{where}: mode must be a named sign mode")
        range_m = _number(bdoc.get("range_m", 50.0), "range_m", where)
        if range_m <= 0:
            raise ScenarioError(f"{where}: range_m must be > 0")
        interval = _number(bdoc.get("beacon_interval_s", 0.5), "beacon_interval_s", where)
        if interval <= 0:
            raise ScenarioError(f"{where}: beacon_interval_s must be > 0")
        if dt_s > interval:
            raise ScenarioError(
                f"{where}: beacon_interval_s {interval} shorter than dt_s {dt_s}")
        boards.append(SignboardState(
            id=bid, position_m=position, mode=mode, beacon_range_m=range_m,
            beacon_interval_s=interval, has_light=bool(bdoc.get("has_light", False))))

    vehicles: list[VehicleState] = []
    for i, vdoc in enumerate(doc.get("vehicles", [])):
        where = f"vehicles[{i}]"
        vid = claim_id(_require(vdoc, "id", where), where)
        position = _number(_require(vdoc, "position_m", where), "position_m", where)
        if not 0 <= position <= road_length:
            raise ScenarioError(f"{where}: position_m {position} outside [0, {road_length}]")
        v_max = _number(_require(vdoc, "v_max_mps", where), "v_max_mps", where)
        if v_max <= 0:
            raise ScenarioError(f"{where}: v_max_mps must be > 0")
        kind_raw = vdoc.get("kind", "car")
        try:
            kind = VehicleKind(kind_raw)
        except ValueError:
            raise ScenarioError(f"{where}: unknown kind {kind_raw!r}") from None
        throttle = _number(vdoc.get("initial_throttle", 0.0), "initial_throttle", where)
        if not 0 <= throttle <= 1:
            raise ScenarioError(f"{where}: initial_throttle {throttle} outside [0, 1]")
        range_m = _number(vdoc.get("range_m", 50.0), "range_m", where)
        if range_m <= 0:
            raise ScenarioError(f"{where}: range_m must be > 0")
        vehicles.append(VehicleState(
            id=vid, kind=kind, position_m=position, v_max_mps=v_max,
            throttle_cmd=throttle, beacon_range_m=range_m,
            drivable=bool(vdoc.get("drivable", True)),
            emitter_on=bool(vdoc.get("emitter_on", True))))

    return Scenario(road_length_m=road_length, dt_s=dt_s, duration_s=duration_s,
                    seed=seed, jitter_ms=jitter_ms, signboards=boards,
                    vehicles=vehicles, governor=governor, windows=windows)


class World:
    """Live simulation state built from a Scenario (which stays untouched)."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.boards = sorted((copy.deepcopy(b) for b in scenario.signboards),
                             key=lambda b: b.id)
        self.vehicles = sorted((copy.deepcopy(v) for v in scenario.vehicles),
                               key=lambda v: v.id)
        self.board_by_id = {b.id: b for b in self.boards}
        self.vehicle_by_id = {v.id: v for v in self.vehicles}
        self.rng = SimRng(scenario.seed)
        self.log = EventLog()
        self.commands: queue.SimpleQueue = queue.SimpleQueue()
        self.tick_index = 0
        # vehicle->board frames awaiting the target board's next listen phase
        self._pending_board_frames: list[tuple[str, PulseFrame]] = []

    @property
    def now(self) -> float:
        return self.tick_index * self.scenario.dt_s

    def queue_throttle(self, vehicle_id: str, value: float) -> None:
        self.commands.put(("throttle", vehicle_id, value))

    def queue_ambulance_toggle(self, vehicle_id: str) -> None:
        self.commands.put(("ambulance_toggle", vehicle_id, None))

    def step(self) -> list[SimEvent]:
        """Advance one tick; returns the events appended by this tick."""
        scenario = self.scenario
        now = self.now
        dt = scenario.dt_s
        table = scenario.windows
        first_new = len(self.log.events)

        # Phase 1: queued driver commands. Bad input is dropped here so a
        # misbehaving client can never fault the tick loop.
        while True:
            try:
                op, vehicle_id, value = self.commands.get_nowait()
            except queue.Empty:
                break
            vehicle = self.vehicle_by_id.get(vehicle_id)
            if vehicle is None:
                continue
            if op == "throttle" and isinstance(value, (int, float)) and 0 <= value <= 1:
                apply_driver_command(vehicle, float(value))
            elif op == "ambulance_toggle" and vehicle.kind is VehicleKind.AMBULANCE:
                vehicle.emitter_on = not vehicle.emitter_on

        # Phase 2: boards emit due beacons and absorb last tick's vehicle pulses.
        inbound_by_board: dict[str, list[PulseFrame]] = {}
        for board_id, frame in self._pending_board_frames:
            inbound_by_board.setdefault(board_id, []).append(frame)
        self._pending_board_frames = []
        beacons: list[PulseFrame] = []
        for board in self.boards:
            emitted, events = signboard_tick(
                board, inbound_by_board.get(board.id, []), now, table,
                rng=self.rng, jitter_ms=scenario.jitter_ms)
            beacons.extend(emitted)
            self.log.extend(events)

        # Phase 3: same-tick delivery of beacons to vehicles in range.
        for frame in beacons:
            board = self.board_by_id[frame.source_id]
            for vehicle in self.vehicles:
                if abs(board.position_m - vehicle.position_m) <= board.beacon_range_m:
                    self.log.extend(on_pulse(vehicle, frame, now, table))

        # Phase 4: ambulance preemption pulses (heard by boards next tick).
        for vehicle in self.vehicles:
            if vehicle.kind is not VehicleKind.AMBULANCE:
                continue
            in_range = [b for b in self.boards
                        if abs(b.position_m - vehicle.position_m) <= vehicle.beacon_range_m]
            for board_id, frame in ambulance_emit_pairs(vehicle, in_range, now, table):
                self.log.append(SimEvent(PULSE_SENT, vehicle.id, now,
                                         {"period_ms": frame.period_ms,
                                          "board": board_id}))
                self._pending_board_frames.append((board_id, frame))

        # Phase 5: zone-loss timeout, governor, kinematics per vehicle.
        for vehicle in self.vehicles:
            if vehicle.active_board_id is not None:
                board = self.board_by_id.get(vehicle.active_board_id)
                interval = board.beacon_interval_s if board is not None else 0.5
                if now - vehicle.last_pulse_at > ZONE_LOSS_INTERVALS * interval:
                    self.log.extend(clear_zone(vehicle, now))
            prev_pos = vehicle.position_m
            self.log.extend(governor_step(vehicle, scenario.governor, now, dt))
            for board in self.boards:
                if prev_pos < board.position_m <= vehicle.position_m:
                    self.log.append(SimEvent(VEHICLE_CROSSED_BOARD, vehicle.id, now,
                                             {"board": board.id}))

        self.tick_index += 1
        return self.log.events[first_new:]


def run(scenario: Scenario) -> tuple[list[SimEvent], World]:
    """Execute a scenario to its full duration; returns (event log, final world)."""
    world = World(scenario)
    for _ in range(scenario.n_steps):
        world.step()
    return world.log.events, world
