"""CLI tests: exit codes, log/report outputs, determinism through the CLI."""

import json

from click.testing import CliRunner

from tmsca.cli import main

from scenarios import compliant_doc, four_zone_doc, override_doc


def write_scenario(tmp_path, doc, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


class TestValidate:
    def test_valid_file(self, tmp_path):
        path = write_scenario(tmp_path, four_zone_doc())
        result = invoke("validate", path)
        assert result.exit_code == 0
        assert "4 signboard(s)" in result.output
        assert "1 vehicle(s)" in result.output

    def test_invalid_dt(self, tmp_path):
        doc = four_zone_doc()
        doc["dt_s"] = 0
        result = invoke("validate", write_scenario(tmp_path, doc))
        assert result.exit_code == 2
        assert "dt_s" in result.output

    def test_missing_file(self, tmp_path):
        result = invoke("validate", tmp_path / "nope.json")
        assert result.exit_code == 2


class TestRun:
    def test_compliant_baseline_zero_non_compliant(self, tmp_path):
        path = write_scenario(tmp_path, compliant_doc())
        report_path = tmp_path / "report.json"
        result = invoke("run", path, "--report", report_path)
        assert result.exit_code == 0
        report = json.loads(report_path.read_text())
        assert report["compliance"]["non_compliant_vehicles"] == 0
        assert report["compliance"]["total_alerts"] == 0

    def test_override_scenario_counts_one(self, tmp_path):
        path = write_scenario(tmp_path, override_doc())
        report_path = tmp_path / "report.json"
        result = invoke("run", path, "--report", report_path)
        assert result.exit_code == 0
        report = json.loads(report_path.read_text())
        assert report["compliance"]["non_compliant_vehicles"] == 1

    def test_same_seed_identical_log_files(self, tmp_path):
        path = write_scenario(tmp_path, four_zone_doc())
        log_a, log_b = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        assert invoke("run", path, "--log", log_a).exit_code == 0
        assert invoke("run", path, "--log", log_b).exit_code == 0
        assert log_a.read_bytes() == log_b.read_bytes()

    def test_invalid_scenario_exits_2(self, tmp_path):
        doc = four_zone_doc()
        doc["vehicles"][0]["position_m"] = -5
        result = invoke("run", write_scenario(tmp_path, doc))
        assert result.exit_code == 2

    def test_unwritable_log_exits_3(self, tmp_path):
        path = write_scenario(tmp_path, override_doc())
        result = invoke("run", path, "--log", tmp_path / "missing_dir" / "log.ndjson")
        assert result.exit_code == 3


class TestReport:
    def test_matches_run_report(self, tmp_path):
        path = write_scenario(tmp_path, override_doc())
        log_path = tmp_path / "log.ndjson"
        report_path = tmp_path / "report.json"
        invoke("run", path, "--log", log_path, "--report", report_path)
        result = invoke("report", log_path)
        assert result.exit_code == 0
        written = json.loads(report_path.read_text())
        json_start = result.output.index("{")
        recomputed = json.loads(result.output[json_start:])
        assert recomputed == written

    def test_empty_log(self, tmp_path):
        log_path = tmp_path / "empty.ndjson"
        log_path.write_text("")
        result = invoke("report", log_path)
        assert result.exit_code == 0
        assert "total_alerts" in result.output

    def test_truncated_log_exits_2_with_line(self, tmp_path):
        path = write_scenario(tmp_path, override_doc())
        log_path = tmp_path / "log.ndjson"
        invoke("run", path, "--log", log_path)
        text = log_path.read_text()
        log_path.write_text(text[:-8])
        result = invoke("report", log_path)
        assert result.exit_code == 2
        assert "line" in result.output

    def test_missing_log_exits_2(self, tmp_path):
        assert invoke("report", tmp_path / "nope.ndjson").exit_code == 2


class TestServeValidation:
    def test_no_drivable_vehicle_exits_2(self, tmp_path):
        doc = override_doc()
        doc["vehicles"][0]["drivable"] = False
        result = invoke("serve", write_scenario(tmp_path, doc))
        assert result.exit_code == 2
        assert "drivable" in result.output

    def test_bad_listen_exits_2(self, tmp_path):
        path = write_scenario(tmp_path, override_doc())
        result = invoke("serve", path, "--listen", "nonsense")
        assert result.exit_code == 2
