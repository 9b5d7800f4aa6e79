"""Pulse-width beacon signaling between smart sign boards and vehicles.

Deterministic discrete-time simulator of the TMSCA scheme: sign boards
broadcast their type as a pulse period, vehicles clamp their speed to the
advertised fraction of maximum, a buzzer-then-auto-brake governor handles
drivers who stay over the ceiling, and ambulances preempt traffic lights.
Everything observable lands in a replayable event log.
"""

__version__ = "0.1.0"

from tmsca.protocol import (  # noqa: F401
    AmbulanceSignal,
    Direction,
    PulseFrame,
    SignMode,
    WindowTable,
    classify_ambulance_pulse,
    classify_sign_pulse,
    encode_ambulance,
    encode_sign_mode,
    target_speed_fraction,
)
from tmsca.engine import Scenario, ScenarioError, World, load_scenario, run  # noqa: F401
