import io
import json
import math

import pytest

from cartan_entropy.bounds import zimmert_fried_lb
from cartan_entropy.cli import main

GOLDEN = [[2, 1], [1, 1]]


def run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def run_json(capsys, argv):
    rc, out, err = run(capsys, argv)
    assert rc == 0, err
    return json.loads(out)


class TestField:
    def test_json_shape(self, capsys):
        doc = run_json(capsys, ["field", "x^4-x^3-3x^2+x+1", "--json"])
        assert set(doc) >= {"field", "unitSystem", "fried", "slow",
                            "bounds", "manifest"}
        assert set(doc["manifest"]) >= {"command", "inputs", "seed",
                                        "tolerances", "toolVersion",
                                        "wallTimeSeconds"}
        assert doc["field"]["discriminant"] == 725
        assert doc["fried"]["case"] == "P"

    def test_reference_values(self, capsys):
        doc = run_json(capsys, ["field", "x^4-x^3-3x^2+x+1", "--json"])
        assert doc["unitSystem"]["regulator"] == pytest.approx(
            0.825068, abs=1e-4)
        assert doc["fried"]["friedEntropy"] == pytest.approx(
            0.330027, abs=1e-4)
        assert doc["slow"]["shEntropy"] > 0
        assert doc["bounds"]["regulatorSatisfied"] is True
        assert doc["bounds"]["friedSatisfied"] is True

    def test_coefficient_form_matches_polynomial_form(self, capsys):
        a = run_json(capsys, ["field", "x^4-x^3-3x^2+x+1", "--json"])
        b = run_json(capsys, ["field", "[1, 1, -3, -1, 1]", "--json"])
        assert a["fried"]["friedEntropy"] == b["fried"]["friedEntropy"]
        assert a["unitSystem"]["regulator"] == b["unitSystem"]["regulator"]

    def test_quadratic_field_skips_slow_and_zimmert(self, capsys):
        doc = run_json(capsys, ["field", "x^2-3", "--json"])
        assert doc["slow"] is None
        assert doc["bounds"] is None
        # n = 2: the average entropy equals the regulator exactly
        assert doc["fried"]["friedEntropy"] == pytest.approx(
            doc["unitSystem"]["regulator"], rel=1e-12)
        assert doc["fried"]["friedEntropy"] == pytest.approx(
            math.log(2 + math.sqrt(3)), rel=1e-12)

    def test_friedman_flag_adds_block(self, capsys):
        doc = run_json(capsys, ["field", "x^3-x^2-2x+1", "--json",
                                "--friedman"])
        fb = doc["bounds"]["friedman"]
        assert fb["satisfied"] is True
        assert fb["twoG"] < doc["unitSystem"]["regulator"]

    def test_text_mode_mentions_key_quantities(self, capsys):
        rc, out, _ = run(capsys, ["field", "x^3-3x-1"])
        assert rc == 0
        assert "fried entropy" in out
        assert "regulator" in out
        assert "slow entropy" in out

    def test_not_totally_real_exits_2(self, capsys):
        rc, out, err = run(capsys, ["field", "x^2+1", "--json"])
        assert rc == 2
        assert out == ""
        assert "error:" in err

    def test_unparsable_polynomial_exits_2(self, capsys):
        rc, _, err = run(capsys, ["field", "xx+junk"])
        assert rc == 2
        assert "error:" in err


class TestTables:
    def test_csv_has_header_and_nineteen_rows(self, capsys):
        rc, out, _ = run(capsys, ["tables", "--csv"])
        assert rc == 0
        lines = out.strip().splitlines()
        assert len(lines) == 20
        assert lines[0].startswith("degree,D_K,polynomial,R_K_computed")

    def test_json_reports_all_ok(self, capsys):
        doc = run_json(capsys, ["tables", "--json"])
        assert doc["ok"] is True
        assert len(doc["rows"]) == 19
        assert doc["worstDelta"] <= 1e-4

    def test_thread_env_does_not_change_output(self, capsys, monkeypatch):
        monkeypatch.delenv("CARTAN_ENTROPY_THREADS", raising=False)
        _, serial, _ = run(capsys, ["tables", "--csv"])
        monkeypatch.setenv("CARTAN_ENTROPY_THREADS", "3")
        _, threaded, _ = run(capsys, ["tables", "--csv"])
        assert serial == threaded


class TestAction:
    def _write(self, tmp_path, doc):
        path = tmp_path / "action.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_golden_mean_case_p(self, capsys, tmp_path):
        doc = run_json(capsys, ["action",
                                self._write(tmp_path, [GOLDEN]), "--json"])
        assert doc["case"] == "P"
        assert doc["fried"]["friedEntropy"] == pytest.approx(
            math.log((3 + math.sqrt(5)) / 2), abs=1e-12)
        assert doc["weylChambers"]["count"] == 2
        assert doc["diagnostics"]["commuting"] is True

    def test_identity_generator_gives_case_o(self, capsys, tmp_path):
        path = self._write(tmp_path, [GOLDEN, [[1, 0], [0, 1]]])
        doc = run_json(capsys, ["action", path, "--json"])
        assert doc["case"] == "O"
        assert doc["friedEntropy"] == 0.0
        assert doc["slowEntropy"] == 0.0
        assert "rationale" in doc

    def test_noncommuting_exits_2(self, capsys, tmp_path):
        path = self._write(tmp_path, [[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
        rc, _, err = run(capsys, ["action", path, "--json"])
        assert rc == 2
        assert "error:" in err

    def test_polynomial_units_form(self, capsys, tmp_path):
        path = self._write(tmp_path,
                           {"polynomial": "x^2-3", "units": [[2, 1]]})
        doc = run_json(capsys, ["action", path, "--json"])
        assert doc["case"] == "P"
        assert doc["fried"]["friedEntropy"] == pytest.approx(
            math.log(2 + math.sqrt(3)), rel=1e-12)

    def test_stdin_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps([GOLDEN])))
        doc = run_json(capsys, ["action", "-", "--json"])
        assert doc["case"] == "P"

    def test_missing_file_exits_2(self, capsys):
        rc, _, err = run(capsys, ["action", "/nonexistent/file.json"])
        assert rc == 2
        assert "error:" in err

    def test_agrees_with_field_pipeline(self, capsys, tmp_path):
        path = self._write(tmp_path, {
            "polynomial": "x^4-x^3-3x^2+x+1",
            # primitive generator first so diagonalization anchors on it
            "units": [[0, 1, 0, 0], [0, 2, 1, -1], [1, -1, -2, 1]],
        })
        via_action = run_json(capsys, ["action", path, "--json"])
        via_field = run_json(capsys, ["field", "x^4-x^3-3x^2+x+1", "--json"])
        assert via_action["fried"]["friedEntropy"] == pytest.approx(
            via_field["fried"]["friedEntropy"], rel=1e-9)


class TestBounds:
    def test_scan_json(self, capsys):
        doc = run_json(capsys, ["bounds", "--json"])
        scan = doc["scan"]
        assert scan["minMax"] == pytest.approx(0.089, abs=2e-3)
        assert set(scan["perN"]) == {str(n) for n in range(8, 18)}
        assert doc["constants"]["prefactorCalibrated"] == pytest.approx(
            0.000376, rel=1e-9)
        assert doc["constants"]["expPrefactor"] == pytest.approx(
            0.000752, rel=1e-9)

    def test_single_s_curve(self, capsys):
        doc = run_json(capsys, ["bounds", "--n", "8..9", "--s", "0.35",
                                "--json"])
        curve = doc["curve"]
        assert [entry["n"] for entry in curve] == [8, 9]
        assert curve[0]["zFried"] == pytest.approx(
            zimmert_fried_lb(8, 0.35), rel=1e-12)

    def test_out_writes_curve_csv(self, capsys, tmp_path):
        out_path = tmp_path / "curves.csv"
        rc, _, _ = run(capsys, ["bounds", "--json", "--out", str(out_path)])
        assert rc == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "n,s,Z"
        assert len(lines) > 100


class TestCn:
    def test_n3(self, capsys):
        doc = run_json(capsys, ["cn", "3", "--json"])
        assert doc["cOfN"] == pytest.approx(math.sqrt(3), abs=1e-3)
        assert doc["probeDelta"] <= 1e-4

    @pytest.mark.parametrize("bad", ["2", "9"])
    def test_out_of_range_exits_2(self, capsys, bad):
        rc, _, err = run(capsys, ["cn", bad, "--json"])
        assert rc == 2
        assert "error:" in err


class TestConfig:
    def test_config_file_sets_seed(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("seed=123\n")
        doc = run_json(capsys, ["field", "x^3-x^2-2x+1", "--json",
                                "--config", str(cfg)])
        assert doc["manifest"]["seed"] == 123

    def test_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("seed=123\n")
        doc = run_json(capsys, ["field", "x^3-x^2-2x+1", "--json",
                                "--config", str(cfg), "--seed", "7"])
        assert doc["manifest"]["seed"] == 7

    def test_default_seed_is_stable(self, capsys):
        doc = run_json(capsys, ["field", "x^3-x^2-2x+1", "--json"])
        assert doc["manifest"]["seed"] == 94111


class TestDeterminism:
    def test_field_json_identical_up_to_wall_time(self, capsys):
        argv = ["field", "x^4-x^3-3x^2+x+1", "--json"]
        first = run_json(capsys, argv)
        second = run_json(capsys, argv)
        first["manifest"].pop("wallTimeSeconds")
        second["manifest"].pop("wallTimeSeconds")
        assert first == second

    def test_tables_csv_byte_identical(self, capsys):
        _, first, _ = run(capsys, ["tables", "--csv"])
        _, second, _ = run(capsys, ["tables", "--csv"])
        assert first == second
