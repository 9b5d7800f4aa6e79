"""Event-log persistence and the reporting metrics.

Non-compliance is operationalized as reaching auto-brake: the alert was
raised, the grace window expired, the vehicle still had not slowed. The
preemption report pairs green/red light changes per board and counts the
distinct ambulances that earned a green.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from tmsca.events import (
    ALERT_CLEARED,
    ALERT_RAISED,
    AUTO_BRAKE_ENGAGED,
    LIGHT_CHANGED,
    SimEvent,
    validate_log,
)


@dataclass
class ComplianceReport:
    total_alerts: int = 0
    alerts_cleared_by_driver: int = 0
    auto_brake_events: int = 0
    non_compliant_vehicles: int = 0
    per_vehicle: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "total_alerts": self.total_alerts,
            "alerts_cleared_by_driver": self.alerts_cleared_by_driver,
            "auto_brake_events": self.auto_brake_events,
            "non_compliant_vehicles": self.non_compliant_vehicles,
            "per_vehicle": self.per_vehicle,
        }


@dataclass
class PreemptionReport:
    preemption_requests: int = 0
    completions: int = 0
    ambulances_served: int = 0

    def to_json_dict(self) -> dict:
        return {
            "preemption_requests": self.preemption_requests,
            "completions": self.completions,
            "ambulances_served": self.ambulances_served,
        }


class LogFormatError(ValueError):
    """A persisted log line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


def persist(log: list[SimEvent], path: str | Path) -> None:
    """Write the log as newline-delimited JSON, one event per line.

    The log's seq/time invariants are checked before anything is written,
    so a bad log never leaves a partial file behind.
    """
    validate_log(log)
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            for event in log:
                fh.write(event.to_json_line())
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot persist event log to {path}: {exc}") from exc


def load(path: str | Path) -> list[SimEvent]:
    """Read a persisted log back; inverse of persist.

    A truncated or malformed line raises LogFormatError with its line
    number, which is how partial writes are detected.
    """
    path = Path(path)
    events: list[SimEvent] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.endswith("\n"):
                raise LogFormatError(line_no, "truncated final line")
            try:
                events.append(SimEvent.from_json_line(line))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise LogFormatError(line_no, f"malformed event record ({exc})") from exc
    validate_log(events)
    return events


def compliance_report(log: list[SimEvent]) -> ComplianceReport:
    """Count alert outcomes; pure function of the log contents."""
    report = ComplianceReport()
    braked: set[str] = set()
    for event in log:
        if event.kind == ALERT_RAISED:
            report.total_alerts += 1
            report.per_vehicle.setdefault(event.subject,
                                          {"alerts": 0, "auto_brakes": 0})["alerts"] += 1
        elif event.kind == ALERT_CLEARED:
            report.alerts_cleared_by_driver += 1
        elif event.kind == AUTO_BRAKE_ENGAGED:
            report.auto_brake_events += 1
            braked.add(event.subject)
            report.per_vehicle.setdefault(event.subject,
                                          {"alerts": 0, "auto_brakes": 0})["auto_brakes"] += 1
    report.non_compliant_vehicles = len(braked)
    return report


def preemption_report(log: list[SimEvent]) -> PreemptionReport:
    """Pair light changes per board; pure function of the log contents."""
    report = PreemptionReport()
    awaiting_red: set[str] = set()
    served: set[str] = set()
    for event in log:
        if event.kind != LIGHT_CHANGED:
            continue
        color = event.detail.get("color")
        if color == "green":
            report.preemption_requests += 1
            awaiting_red.add(event.subject)
            source = event.detail.get("source")
            if source is not None:
                served.add(source)
        elif color == "red" and event.subject in awaiting_red:
            report.completions += 1
            awaiting_red.discard(event.subject)
    report.ambulances_served = len(served)
    return report


def render_report_table(compliance: ComplianceReport,
                        preemption: PreemptionReport) -> str:
    """Aligned plain-text rendering of both reports for the CLI."""
    rows = [
        ("total_alerts", compliance.total_alerts),
        ("alerts_cleared_by_driver", compliance.alerts_cleared_by_driver),
        ("auto_brake_events", compliance.auto_brake_events),
        ("non_compliant_vehicles", compliance.non_compliant_vehicles),
    ]
    lines = ["compliance"]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        lines.append(f"  {name:<{width}}  {value}")
    if compliance.per_vehicle:
        lines.append("  per_vehicle")
        id_width = max(len(vid) for vid in compliance.per_vehicle)
        for vid in sorted(compliance.per_vehicle):
            counts = compliance.per_vehicle[vid]
            lines.append(f"    {vid:<{id_width}}  alerts={counts['alerts']}"
                         f"  auto_brakes={counts['auto_brakes']}")
    rows = [
        ("preemption_requests", preemption.preemption_requests),
        ("completions", preemption.completions),
        ("ambulances_served", preemption.ambulances_served),
    ]
    lines.append("preemption")
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        lines.append(f"  {name:<{width}}  {value}")
    return "\n".join(lines)
