import csv
import json
import math

import pytest
from click.testing import CliRunner

from qnslab.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def strip_stamp(text):
    doc = json.loads(text)
    doc.pop("generated_at", None)
    return doc


GEO_SET = {"form": "family", "window": [0.01, 100.0],
           "family": {"name": "geometric", "params": {"base": 1.0, "ratio": 2.0}}}
SUPER_SET = {"form": "family", "window": [1.1253517471925912e-07, 1.0],
             "family": {"name": "super_geometric", "params": {"power": 2.0}}}

PROBLEM = {
    "region": {"dimension": 2, "primitives": [{"type": "ball", "center": ["0.0", "0.0"], "radius": "2.0"}]},
    "field": {"kind": "indicator",
              "support": {"dimension": 2,
                          "primitives": [{"type": "ball", "center": ["0.0", "0.0"],
                                          "radius": "1.0", "closed": True}]}},
    "probes": {"center_resolution": 11, "radii_per_center": 5, "radius_range": [0.1, 0.999]},
}


class TestAnalyzeSet:
    def test_geometric(self, runner, tmp_path):
        cfg = write_json(tmp_path / "geo.json", GEO_SET)
        result = runner.invoke(main, ["analyze-set", "--config", cfg])
        assert result.exit_code == 0
        doc = strip_stamp(result.output)
        assert doc["favorable_all_open"] == "yes"
        assert doc["gap_constant"] == 2.0

    def test_super_geometric(self, runner, tmp_path):
        cfg = write_json(tmp_path / "super.json", SUPER_SET)
        result = runner.invoke(main, ["analyze-set", "--config", cfg])
        assert result.exit_code == 0
        doc = strip_stamp(result.output)
        assert doc["favorable_all_open"] == "no"
        assert doc["p0"] == 1.0

    def test_invalid_input_exit_2(self, runner, tmp_path):
        cfg = write_json(tmp_path / "bad.json", {"form": "elements", "window": [0.1, 1.0], "elements": []})
        result = runner.invoke(main, ["analyze-set", "--config", cfg])
        assert result.exit_code == 2

    def test_writes_report(self, runner, tmp_path):
        cfg = write_json(tmp_path / "geo.json", GEO_SET)
        out = tmp_path / "out"
        result = runner.invoke(main, ["analyze-set", "--config", cfg, "--out", str(out)])
        assert result.exit_code == 0
        assert (out / "classification.json").exists()


class TestCheckQns:
    def test_pass_below_max_k(self, runner, tmp_path):
        cfg = write_json(tmp_path / "p.json", PROBLEM)
        result = runner.invoke(main, ["check-qns", "--config", cfg, "--max-K", "3", "--samples", "4096"])
        assert result.exit_code == 0

    def test_fail_above_max_k(self, runner, tmp_path):
        cfg = write_json(tmp_path / "p.json", PROBLEM)
        result = runner.invoke(main, ["check-qns", "--config", cfg, "--max-K", "2", "--samples", "4096"])
        assert result.exit_code == 1

    def test_constant_field_k_one(self, runner, tmp_path):
        doc = dict(PROBLEM)
        doc["field"] = {"kind": "constant", "value": "1.0"}
        cfg = write_json(tmp_path / "c.json", doc)
        result = runner.invoke(main, ["check-qns", "--config", cfg, "--max-K", "1.000001"])
        assert result.exit_code == 0

    def test_malformed_exit_2(self, runner, tmp_path):
        cfg = write_json(tmp_path / "bad.json", {"region": {"primitives": []}})
        result = runner.invoke(main, ["check-qns", "--config", cfg])
        assert result.exit_code == 2

    def test_wholesale_containment_failure_exit_2(self, runner, tmp_path):
        doc = json.loads(json.dumps(PROBLEM))
        doc["probes"]["radius_range"] = [50.0, 60.0]
        cfg = write_json(tmp_path / "p.json", doc)
        result = runner.invoke(main, ["check-qns", "--config", cfg])
        assert result.exit_code == 2

    def test_determinism(self, runner, tmp_path):
        cfg = write_json(tmp_path / "p.json", PROBLEM)
        args = ["check-qns", "--config", cfg, "--seed", "5", "--samples", "4096"]
        a = strip_stamp(runner.invoke(main, args).output)
        b = strip_stamp(runner.invoke(main, args).output)
        assert a == b

    def test_restricted_radius_set(self, runner, tmp_path):
        doc = json.loads(json.dumps(PROBLEM))
        doc["radius_set"] = {"form": "elements", "window": [0.05, 1.0],
                             "elements": ["0.25", "0.5", "0.9"]}
        del doc["probes"]["radius_range"]
        doc["probes"]["radius_range"] = [0.05, 1.0]
        cfg = write_json(tmp_path / "p.json", doc)
        result = runner.invoke(main, ["check-qns", "--config", cfg])
        assert result.exit_code == 0
        doc_out = strip_stamp(result.output)
        assert doc_out["probes"]["used"] > 0


class TestCounterexample:
    def test_default_run(self, runner, tmp_path):
        out = tmp_path / "ce"
        result = runner.invoke(main, ["counterexample", "--m-count", "4", "--out", str(out),
                                      "--seed", "3"])
        assert result.exit_code == 0, result.output
        assert (out / "domain.json").exists()
        assert (out / "certification.json").exists()
        with open(out / "implied_k.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert [round(float(r[8])) for r in rows[1:]] == [4, 16, 36, 64]
        cert = json.loads((out / "certification.json").read_text())
        assert cert["failure_side"]["verdict"] == "unbounded-constant-confirmed"
        assert cert["restricted_side"]["verdict"] == "pass"

    def test_n0_two_exit_2(self, runner, tmp_path):
        result = runner.invoke(main, ["counterexample", "--n0", "2", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_f1_variant(self, runner, tmp_path):
        out = tmp_path / "f1"
        result = runner.invoke(main, ["counterexample", "--variant", "f1", "--m-count", "4",
                                      "--out", str(out), "--seed", "3"])
        assert result.exit_code == 0, result.output
        cert = json.loads((out / "certification.json").read_text())
        assert cert["scale_rule_admissibility"]["verdict"] == "not admissible"
        assert cert["variant_report"]["verdict"] == "pass"


class TestConstants:
    def test_lens_constant(self, runner):
        result = runner.invoke(main, ["constants", "--mc-samples", "1000000"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert math.isclose(doc["lens_constant_analytic"], 0.3910022, abs_tol=1e-7)
        assert abs(doc["lens_constant_mc"] - 0.3910022) < 0.002

    def test_square_conversions(self, runner):
        result = runner.invoke(main, ["constants", "--set", "unit-square", "--K", "1", "--C", "2"])
        doc = json.loads(result.output)
        assert math.isclose(doc["C_from_K"], 2.0, rel_tol=1e-12)
        assert math.isclose(doc["K_from_C"], math.pi, rel_tol=1e-12)

    def test_unit_ball_identity(self, runner):
        result = runner.invoke(main, ["constants", "--set", "unit-ball", "--C", "5"])
        doc = json.loads(result.output)
        assert math.isclose(doc["K_from_C"], 5.0, rel_tol=1e-12)


class TestAnalyzeF:
    def test_linear(self, runner):
        result = runner.invoke(main, ["analyze-f", "--f", "linear"])
        assert result.exit_code == 0
        doc = strip_stamp(result.output)
        assert doc["verdict"] == "admissible on window"
        assert math.isclose(doc["c_window"], 1.0, rel_tol=1e-9)

    def test_periodic(self, runner):
        result = runner.invoke(main, ["analyze-f", "--f", "periodic", "--t-grid", "0.5,1.25"])
        doc = strip_stamp(result.output)
        assert doc["verdict"] == "admissible on window"
        assert doc["c_window"] <= 2.5 + 1e-9

    def test_chain_rule_not_admissible(self, runner):
        result = runner.invoke(main, ["analyze-f", "--f", "chain-rule", "--t-grid", "0.25,0.5"])
        doc = strip_stamp(result.output)
        assert doc["verdict"] == "not admissible"

    def test_bad_window_exit_2(self, runner):
        result = runner.invoke(main, ["analyze-f", "--f", "linear", "--window", "oops"])
        assert result.exit_code == 2


class TestPhi:
    def test_square_deficit(self, runner):
        result = runner.invoke(main, ["phi", "--kind", "isoperimetric_deficit", "--set", "unit-square"])
        doc = json.loads(result.output)
        assert math.isclose(doc["value"], math.sqrt(16.0 - 4.0 * math.pi), rel_tol=1e-12)

    def test_disk_deficit_exit_2(self, runner):
        result = runner.invoke(main, ["phi", "--kind", "isoperimetric_deficit", "--set", "unit-disk"])
        assert result.exit_code == 2

    def test_scaled_perimeter(self, runner):
        result = runner.invoke(main, ["phi", "--kind", "perimeter", "--set", "unit-disk", "--scale", "2.0"])
        doc = json.loads(result.output)
        assert math.isclose(doc["value"], 4.0 * math.pi, rel_tol=1e-12)
