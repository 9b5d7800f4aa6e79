"""Live driver link: JSON messages over a WebSocket at ``/ws``.

Stands in for the prototype's Bluetooth serial link. Clients send
DriverCommand objects (throttle or ambulance_toggle); the server answers
each connection with a hello frame, pushes one StateUpdate per drivable
vehicle per tick, and sends typed rejections for anything malformed.
Commands cross into the engine only through its tick-boundary queue, so
no client input can stall or corrupt a running simulation; a client too
slow to drain its updates is dropped rather than letting it back-pressure
the tick loop.
"""

from __future__ import annotations

import asyncio
import json
import logging
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from tmsca.engine import World
from tmsca.protocol import SignMode
from tmsca.signboard import LightColor
from tmsca.vehicle import VehicleKind, VehicleState

log = logging.getLogger("tmsca.control")

# Per-client buffered updates before the client is considered too slow.
CLIENT_QUEUE_LIMIT = 256


def state_update(vehicle: VehicleState, world: World, t: float) -> dict:
    """StateUpdate wire object for one vehicle at tick time t."""
    mode = vehicle.active_mode
    nearest = "none"
    best = None
    for board in world.boards:
        if not board.has_light:
            continue
        distance = abs(board.position_m - vehicle.position_m)
        if best is None or distance < best:
            best = distance
            nearest = board.light.value if board.light is not LightColor.NONE else "none"
    return {
        "t": t,
        "vehicle_id": vehicle.id,
        "speed_mps": vehicle.speed_mps,
        "clamp_mps": vehicle.clamp_mps,
        "governor": vehicle.governor_name,
        "buzzer": vehicle.buzzer_on,
        "active_mode": "none" if mode is SignMode.UNKNOWN else mode.value,
        "nearest_light": nearest,
        "position_m": vehicle.position_m,
    }


def _reject(reason: str, client_seq=None) -> dict:
    message = {"type": "rejected", "reason": reason}
    if client_seq is not None:
        message["client_seq"] = client_seq
    return message


@dataclass(eq=False)
class ClientHandle:
    updates: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(CLIENT_QUEUE_LIMIT))
    last_client_seq: int | None = None
    dropped: bool = False


class LiveSession:
    """Owns one World plus the wall-clock-paced tick task and its clients."""

    def __init__(self, world: World):
        self.world = world
        self.clients: set[ClientHandle] = set()
        self.finished = asyncio.Event()
        self._task: asyncio.Task | None = None

    # -- client lifecycle -------------------------------------------------

    def register(self) -> ClientHandle:
        client = ClientHandle()
        self.clients.add(client)
        return client

    def unregister(self, client: ClientHandle) -> None:
        self.clients.discard(client)

    def hello(self) -> dict:
        """Drivable vehicles plus the static scenario geometry a dashboard needs."""
        vehicles = [{"id": v.id, "kind": v.kind.value, "v_max_mps": v.v_max_mps}
                    for v in self.world.vehicles if v.drivable]
        boards = [{"id": b.id, "position_m": b.position_m, "mode": b.mode.value,
                   "has_light": b.has_light} for b in self.world.boards]
        return {"type": "hello", "vehicles": vehicles, "signboards": boards,
                "dt_s": self.world.scenario.dt_s,
                "road_length_m": self.world.scenario.road_length_m}

    # -- inbound ----------------------------------------------------------

    def handle_command(self, raw: str, client: ClientHandle) -> dict | None:
        """Validate one raw client message; queue its effect for the next tick.

        Returns a rejection message to send back, or None when accepted.
        Nothing invalid ever reaches the engine queue.
        """
        try:
            command = json.loads(raw)
        except json.JSONDecodeError:
            return _reject("not valid JSON")
        if not isinstance(command, dict):
            return _reject("command must be a JSON object")
        client_seq = command.get("client_seq")
        if not isinstance(client_seq, int) or isinstance(client_seq, bool):
            return _reject("missing integer client_seq", command.get("client_seq"))
        if client.last_client_seq is not None and client_seq <= client.last_client_seq:
            return _reject("client_seq must strictly increase", client_seq)
        kind = command.get("type")
        vehicle = self.world.vehicle_by_id.get(command.get("vehicle_id"))
        if vehicle is None or not vehicle.drivable:
            return _reject("unknown vehicle_id", client_seq)
        if kind == "throttle":
            value = command.get("value")
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not 0 <= value <= 1:
                return _reject("throttle value must be a number in [0, 1]", client_seq)
            client.last_client_seq = client_seq
            self.world.queue_throttle(vehicle.id, float(value))
            return None
        if kind == "ambulance_toggle":
            if vehicle.kind is not VehicleKind.AMBULANCE:
                return _reject("vehicle is not an ambulance", client_seq)
            client.last_client_seq = client_seq
            self.world.queue_ambulance_toggle(vehicle.id)
            return None
        return _reject(f"unknown command type {kind!r}", client_seq)

    # -- outbound ---------------------------------------------------------

    def broadcast(self, updates: list[dict]) -> None:
        for client in list(self.clients):
            for update in updates:
                try:
                    client.updates.put_nowait(update)
                except asyncio.QueueFull:
                    # Slow consumer: cut it loose, never stall the engine.
                    client.dropped = True
                    self.clients.discard(client)
                    break

    # -- paced loop -------------------------------------------------------

    async def run_paced(self) -> None:
        """Tick the world once per dt_s of wall clock until the scenario ends."""
        loop = asyncio.get_running_loop()
        dt = self.world.scenario.dt_s
        total = self.world.scenario.n_steps
        start = loop.time()
        try:
            while self.world.tick_index < total:
                target = start + (self.world.tick_index + 1) * dt
                delay = target - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                t_tick = self.world.now
                self.world.step()
                self.broadcast([state_update(v, self.world, t_tick)
                                for v in self.world.vehicles if v.drivable])
        finally:
            self.finished.set()

    def start(self) -> None:
        self._task = asyncio.get_running_loop().create_task(self.run_paced())

    async def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass


def create_app(session: LiveSession, ui_dir: str | Path | None = None) -> FastAPI:
    """FastAPI app exposing /ws plus, optionally, the static console UI."""

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        session.start()
        yield
        await session.stop()

    app = FastAPI(lifespan=lifespan)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        client = session.register()
        await ws.send_text(json.dumps(session.hello()))

        async def pump() -> None:
            while True:
                update = await client.updates.get()
                await ws.send_text(json.dumps(update))

        sender = asyncio.create_task(pump())
        try:
            while True:
                raw = await ws.receive_text()
                response = session.handle_command(raw, client)
                if response is not None:
                    await ws.send_text(json.dumps(response))
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            session.unregister(client)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="console")

    return app
