"""Command-line entry point.

Exit codes are stable across subcommands: 0 success, 2 input or
validation failure, 3 environment/I-O failure. Diagnostics go through
logging; set TMSCA_LOG_LEVEL (e.g. DEBUG) to turn them up.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from tmsca import engine, telemetry
from tmsca.engine import Scenario, ScenarioError
from tmsca.telemetry import LogFormatError

log = logging.getLogger("tmsca.cli")

EXIT_INPUT = 2
EXIT_ENVIRONMENT = 3


def _configure_logging() -> None:
    level = os.environ.get("TMSCA_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _load_scenario_file(path: str) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read scenario file: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    try:
        return engine.load_scenario(text)
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _reports_json(events) -> dict:
    return {
        "compliance": telemetry.compliance_report(events).to_json_dict(),
        "preemption": telemetry.preemption_report(events).to_json_dict(),
    }


@click.group()
def main() -> None:
    """Sign-board beacon and speed-governor simulator."""
    _configure_logging()


@main.command()
@click.argument("scenario_path", type=click.Path())
def validate(scenario_path: str) -> None:
    """Validate a scenario file without running it."""
    scenario = _load_scenario_file(scenario_path)
    click.echo(f"ok: {len(scenario.signboards)} signboard(s), "
               f"{len(scenario.vehicles)} vehicle(s), "
               f"{scenario.n_steps} step(s) of {scenario.dt_s} s")


@main.command(name="run")
@click.argument("scenario_path", type=click.Path())
@click.option("--log", "log_path", type=click.Path(), default=None,
              help="Write the event log (newline-delimited JSON) here.")
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Write the combined compliance+preemption report (JSON) here.")
def run_cmd(scenario_path: str, log_path: str | None, report_path: str | None) -> None:
    """Run a scenario to completion; write its log and report."""
    scenario = _load_scenario_file(scenario_path)
    events, _ = engine.run(scenario)
    try:
        if log_path is not None:
            telemetry.persist(events, log_path)
        if report_path is not None:
            Path(report_path).write_text(
                json.dumps(_reports_json(events), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    compliance = telemetry.compliance_report(events)
    preemption = telemetry.preemption_report(events)
    click.echo(f"ran {scenario.n_steps} steps, {len(events)} events")
    click.echo(telemetry.render_report_table(compliance, preemption))


@main.command()
@click.argument("log_path", type=click.Path())
def report(log_path: str) -> None:
    """Recompute and print the reports for a persisted event log."""
    try:
        events = telemetry.load(log_path)
    except OSError as exc:
        click.echo(f"error: cannot read log: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except (LogFormatError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    compliance = telemetry.compliance_report(events)
    preemption = telemetry.preemption_report(events)
    click.echo(telemetry.render_report_table(compliance, preemption))
    click.echo(json.dumps(_reports_json(events), indent=2))


@main.command()
@click.argument("scenario_path", type=click.Path())
@click.option("--listen", default="127.0.0.1:8000", show_default=True,
              help="host:port to bind.")
@click.option("--log", "log_path", type=click.Path(), default="tmsca_events.ndjson",
              show_default=True, help="Event log written when the server stops.")
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="Directory of static console assets to serve at /. "
                   "Defaults to ./frontend/dist when present.")
def serve(scenario_path: str, listen: str, log_path: str, ui_dir: str | None) -> None:
    """Run the scenario paced to wall clock with the live driver console."""
    import uvicorn

    from tmsca.control import LiveSession, create_app
    from tmsca.engine import World

    scenario = _load_scenario_file(scenario_path)
    if not any(v.drivable for v in scenario.vehicles):
        click.echo("error: scenario has no drivable vehicle", err=True)
        sys.exit(EXIT_INPUT)
    try:
        host, _, port_text = listen.rpartition(":")
        port = int(port_text)
    except ValueError:
        click.echo(f"error: --listen must be host:port, got {listen!r}", err=True)
        sys.exit(EXIT_INPUT)

    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"

    world = World(scenario)
    session = LiveSession(world)
    app = create_app(session, ui_dir=ui_dir)
    click.echo(f"serving on ws://{host or '127.0.0.1'}:{port}/ws "
               f"({len(world.vehicles)} vehicle(s); interrupt to stop)")
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=port, log_level="warning")
    except SystemExit:
        raise
    except OSError as exc:
        click.echo(f"error: cannot bind {listen}: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)

    events = world.log.events
    try:
        telemetry.persist(events, log_path)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    compliance = telemetry.compliance_report(events)
    preemption = telemetry.preemption_report(events)
    click.echo(f"log written to {log_path} ({len(events)} events)")
    click.echo(telemetry.render_report_table(compliance, preemption))


if __name__ == "__main__":
    main()
