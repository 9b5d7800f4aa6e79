"""Telemetry tests: persistence round trip and report correctness.

The oracle is an independent recount written here as a plain
state-machine walk over the log, kept deliberately separate from the
implementation's counting style.
"""

import json

import pytest

from tmsca.events import SimEvent
from tmsca.telemetry import (
    LogFormatError,
    compliance_report,
    load,
    persist,
    preemption_report,
    render_report_table,
)


def ev(kind, subject, t, detail=None, seq=0):
    return SimEvent(kind=kind, subject=subject, t=t, detail=detail or {}, seq=seq)


def stamped(events):
    for i, e in enumerate(events):
        e.seq = i
    return events


# --- independent recount oracle -------------------------------------------

def oracle_compliance(events):
    alerts = {}
    cleared = 0
    brakes = {}
    for e in events:
        if e.kind == "AlertRaised":
            alerts[e.subject] = alerts.get(e.subject, 0) + 1
        elif e.kind == "AlertCleared":
            cleared += 1
        elif e.kind == "AutoBrakeEngaged":
            brakes[e.subject] = brakes.get(e.subject, 0) + 1
    per_vehicle = {}
    for vid in set(alerts) | set(brakes):
        per_vehicle[vid] = {"alerts": alerts.get(vid, 0),
                            "auto_brakes": brakes.get(vid, 0)}
    return {
        "total_alerts": sum(alerts.values()),
        "alerts_cleared_by_driver": cleared,
        "auto_brake_events": sum(brakes.values()),
        "non_compliant_vehicles": len(brakes),
        "per_vehicle": per_vehicle,
    }


def oracle_preemption(events):
    requests = 0
    completions = 0
    served = set()
    pending = {}
    for e in events:
        if e.kind != "LightChanged":
            continue
        if e.detail.get("color") == "green":
            requests += 1
            pending[e.subject] = True
            if "source" in e.detail:
                served.add(e.detail["source"])
        elif e.detail.get("color") == "red" and pending.get(e.subject):
            completions += 1
            pending[e.subject] = False
    return {"preemption_requests": requests, "completions": completions,
            "ambulances_served": len(served)}


# --- persistence -----------------------------------------------------------

class TestPersistence:
    def test_empty_round_trip(self, tmp_path):
        path = tmp_path / "log.ndjson"
        persist([], path)
        assert path.read_text() == ""
        assert load(path) == []

    def test_three_event_round_trip(self, tmp_path):
        events = stamped([
            ev("PulseSent", "b1", 0.0, {"period_ms": 70.0, "mode": "humps"}),
            ev("PulseReceived", "v1", 0.0, {"period_ms": 70.0, "mode": "humps",
                                            "board": "b1"}),
            ev("AlertRaised", "v1", 0.05, {"speed_mps": 20.0, "clamp_mps": 6.0}),
        ])
        path = tmp_path / "log.ndjson"
        persist(events, path)
        assert len(path.read_text().splitlines()) == 3
        assert load(path) == events

    def test_seq_gap_rejected_before_writing(self, tmp_path):
        events = stamped([ev("PulseSent", "b1", 0.0), ev("PulseSent", "b1", 0.5)])
        events[1].seq = 5
        path = tmp_path / "log.ndjson"
        with pytest.raises(ValueError, match="seq"):
            persist(events, path)
        assert not path.exists()

    def test_truncated_final_line_detected(self, tmp_path):
        events = stamped([ev("PulseSent", "b1", 0.0), ev("PulseSent", "b1", 0.5)])
        path = tmp_path / "log.ndjson"
        persist(events, path)
        clipped = path.read_text()[:-10]
        path.write_text(clipped)
        with pytest.raises(LogFormatError, match="line 2"):
            load(path)

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "log.ndjson"
        good = ev("PulseSent", "b1", 0.0).to_json_line()
        path.write_text(good + "\nnot json\n")
        with pytest.raises(LogFormatError, match="line 2"):
            load(path)

    def test_float_values_survive_exactly(self, tmp_path):
        events = stamped([ev("SpeedClamped", "v1", 0.1 + 0.2,
                             {"clamp_mps": 1.0 / 3.0, "mode": "humps"})])
        path = tmp_path / "log.ndjson"
        persist(events, path)
        again = load(path)
        assert again[0].t == events[0].t
        assert again[0].detail["clamp_mps"] == events[0].detail["clamp_mps"]


# --- reports ----------------------------------------------------------------

class TestComplianceReport:
    def test_spec_example_two_vehicles(self):
        log = stamped([
            ev("AlertRaised", "A", 1.0),
            ev("AlertCleared", "A", 2.0),
            ev("AlertRaised", "B", 3.0),
            ev("AutoBrakeEngaged", "B", 6.0),
        ])
        report = compliance_report(log)
        assert report.total_alerts == 2
        assert report.alerts_cleared_by_driver == 1
        assert report.auto_brake_events == 1
        assert report.non_compliant_vehicles == 1
        assert report.per_vehicle == {"A": {"alerts": 1, "auto_brakes": 0},
                                      "B": {"alerts": 1, "auto_brakes": 1}}

    def test_empty_log_all_zero(self):
        report = compliance_report([])
        assert report.to_json_dict() == {
            "total_alerts": 0, "alerts_cleared_by_driver": 0,
            "auto_brake_events": 0, "non_compliant_vehicles": 0,
            "per_vehicle": {}}

    def test_repeat_offender_counts_once(self):
        log = stamped([
            ev("AlertRaised", "B", 1.0),
            ev("AutoBrakeEngaged", "B", 4.0),
            ev("AutoBrakeReleased", "B", 8.0),
            ev("AlertRaised", "B", 20.0),
            ev("AutoBrakeEngaged", "B", 23.0),
        ])
        report = compliance_report(log)
        assert report.auto_brake_events == 2
        assert report.non_compliant_vehicles == 1


class TestPreemptionReport:
    def test_green_then_red_completes(self):
        log = stamped([
            ev("LightChanged", "board1", 1.0, {"color": "green", "source": "amb1"}),
            ev("LightChanged", "board1", 5.0, {"color": "red", "source": "amb1"}),
        ])
        report = preemption_report(log)
        assert report.preemption_requests == 1
        assert report.completions == 1
        assert report.ambulances_served == 1

    def test_green_without_red_is_incomplete(self):
        log = stamped([
            ev("LightChanged", "board1", 1.0, {"color": "green", "source": "amb1"}),
        ])
        report = preemption_report(log)
        assert report.preemption_requests == 1
        assert report.completions == 0

    def test_no_lights_all_zero(self):
        log = stamped([ev("PulseSent", "b1", 0.0)])
        report = preemption_report(log)
        assert report.to_json_dict() == {"preemption_requests": 0,
                                         "completions": 0,
                                         "ambulances_served": 0}

    def test_two_boards_pair_independently(self):
        log = stamped([
            ev("LightChanged", "bA", 1.0, {"color": "green", "source": "amb1"}),
            ev("LightChanged", "bB", 2.0, {"color": "green", "source": "amb2"}),
            ev("LightChanged", "bA", 3.0, {"color": "red", "source": "amb1"}),
        ])
        report = preemption_report(log)
        assert report.preemption_requests == 2
        assert report.completions == 1
        assert report.ambulances_served == 2


def test_reports_match_oracle_on_synthetic_logs():
    import random
    rnd = random.Random(1234)
    vehicles = ["v1", "v2", "v3"]
    boards = ["bA", "bB"]
    for _ in range(50):
        log = []
        t = 0.0
        for _ in range(rnd.randint(0, 60)):
            t += rnd.random()
            roll = rnd.random()
            if roll < 0.3:
                log.append(ev("AlertRaised", rnd.choice(vehicles), t))
            elif roll < 0.5:
                log.append(ev("AlertCleared", rnd.choice(vehicles), t))
            elif roll < 0.65:
                log.append(ev("AutoBrakeEngaged", rnd.choice(vehicles), t))
            elif roll < 0.8:
                log.append(ev("LightChanged", rnd.choice(boards), t,
                              {"color": "green", "source": rnd.choice(vehicles)}))
            else:
                log.append(ev("LightChanged", rnd.choice(boards), t,
                              {"color": "red", "source": rnd.choice(vehicles)}))
        stamped(log)
        assert compliance_report(log).to_json_dict() == oracle_compliance(log)
        assert preemption_report(log).to_json_dict() == oracle_preemption(log)


def test_report_purity_is_path_independent(tmp_path):
    log = stamped([
        ev("AlertRaised", "A", 1.0),
        ev("AutoBrakeEngaged", "A", 4.0),
        ev("LightChanged", "bA", 5.0, {"color": "green", "source": "amb1"}),
    ])
    direct = compliance_report(log).to_json_dict()
    path = tmp_path / "log.ndjson"
    persist(log, path)
    assert compliance_report(load(path)).to_json_dict() == direct


def test_table_rendering_lists_everything():
    log = stamped([
        ev("AlertRaised", "A", 1.0),
        ev("AutoBrakeEngaged", "A", 4.0),
        ev("LightChanged", "bA", 5.0, {"color": "green", "source": "amb1"}),
    ])
    text = render_report_table(compliance_report(log), preemption_report(log))
    for fragment in ("total_alerts", "non_compliant_vehicles",
                     "preemption_requests", "ambulances_served", "A"):
        assert fragment in text


def test_json_field_names_are_contractual():
    doc = json.loads(json.dumps(compliance_report([]).to_json_dict()))
    assert list(doc) == ["total_alerts", "alerts_cleared_by_driver",
                         "auto_brake_events", "non_compliant_vehicles", "per_vehicle"]
    doc = json.loads(json.dumps(preemption_report([]).to_json_dict()))
    assert list(doc) == ["preemption_requests", "completions", "ambulances_served"]
