"""Command-line behavior: output documents, exit codes, configuration
layering, and report determinism."""

import json

import pytest

from zetalab.cli import RunConfig, load_config_file, main

from conftest import fixture_path

P1 = str(fixture_path("p1.vty"))
P2 = str(fixture_path("p2.vty"))
E5 = str(fixture_path("e5.vty"))
SPECQ = str(fixture_path("specq.json"))
ELLIPTIC = str(fixture_path("elliptic.json"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert out, err
    return code, json.loads(out)


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.precision == 50
        assert config.format == "json"

    def test_validation(self):
        with pytest.raises(ValueError):
            RunConfig(weil_tol=0)
        with pytest.raises(ValueError):
            RunConfig(precision=-1)
        with pytest.raises(ValueError):
            RunConfig(format="yaml")

    def test_config_file_parsing(self, tmp_path):
        path = tmp_path / "cfg"
        path.write_text("precision = 30\nformat = \"text\"  # trailing comment\n\n# full comment\n")
        assert load_config_file(path) == {"precision": "30", "format": "text"}

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "cfg"
        path.write_text("precisionn = 30\n")
        with pytest.raises(ValueError, match="unknown config key"):
            load_config_file(path)


class TestCount:
    def test_projective_line(self, capsys):
        code, doc = run_json(capsys, "count", "--spec", P1, "--p", "3", "--degrees", "3")
        assert code == 0
        assert doc["counts"] == [4, 10, 28]
        assert doc["schema"] == 1

    def test_parse_error_exits_one(self, capsys, tmp_path):
        bad = tmp_path / "bad.vty"
        bad.write_text("projective 1 vars x y\n")
        code, out, err = run(capsys, "count", "--spec", str(bad), "--p", "3", "--degrees", "2")
        assert code == 1
        assert "line 1" in err

    def test_missing_flag_exits_one(self, capsys):
        code, _, err = run(capsys, "count", "--spec", P1, "--degrees", "2")
        assert code == 1 and "--p" in err

    def test_missing_file_exits_one(self, capsys):
        code, _, err = run(capsys, "count", "--spec", "/nonexistent.vty", "--p", "3", "--degrees", "1")
        assert code == 1

    def test_no_command_exits_one(self, capsys):
        code, _, _ = run(capsys)
        assert code == 1


class TestZetaAndSpectrum:
    def test_elliptic_zeta(self, capsys):
        code, doc = run_json(capsys, "zeta", "--spec", E5, "--p", "5")
        assert code == 0
        assert doc["numerator"] == ["1", "-2", "5"]
        assert doc["denominator"] == ["1", "-6", "5"]

    def test_spectrum_document(self, capsys):
        code, doc = run_json(capsys, "nc", "--spec", P2, "--p", "3")
        assert code == 0
        assert doc["chi0"] == 3 and doc["chi1"] == 0
        assert len(doc["even"]) == 3

    def test_lfun_value(self, capsys):
        code, doc = run_json(
            capsys, "lfun", "--model", SPECQ, "--s", "2.0", "--prime-cutoff", "500"
        )
        assert code == 0
        assert abs(doc["value"]["re"] - 1.6449340668) < 1e-2


class TestCheckSubcommand:
    def test_weil_pass(self, capsys):
        code, doc = run_json(
            capsys, "check", "weil", "--spec", E5, "--p", "5", "--betti", "1,2,1"
        )
        assert code == 0
        assert doc["verdict"] == "PASS"
        names = {c["name"] for c in doc["checks"]}
        assert "weil.weight1" in names and "nc_weil.odd" in names

    def test_tate_pass_and_fail(self, capsys):
        code, doc = run_json(capsys, "check", "tate", "--spec", P2, "--p", "3", "--k0-rank", "3")
        assert code == 0 and doc["verdict"] == "PASS"
        code, doc = run_json(capsys, "check", "tate", "--spec", P2, "--p", "3", "--k0-rank", "2")
        assert code == 3 and doc["verdict"] == "FAIL"

    def test_functional_variants(self, capsys):
        for kind in ("functional", "nc-functional"):
            code, doc = run_json(capsys, "check", kind, "--spec", E5, "--p", "5")
            assert code == 0 and doc["verdict"] == "PASS"

    def test_ladic(self, capsys):
        code, doc = run_json(capsys, "check", "ladic", "--spec", E5, "--p", "5")
        assert code == 0 and doc["verdict"] == "PASS"

    def test_serre(self, capsys):
        code, doc = run_json(
            capsys,
            "check", "serre", "--model", ELLIPTIC, "--weight", "1",
            "--prime-cutoff", "100", "--n-cutoff", "4",
        )
        assert code == 0 and doc["verdict"] == "PASS"

    def test_beilinson_pass(self, capsys):
        code, doc = run_json(capsys, "check", "beilinson", "--model", SPECQ, "--j", "1")
        assert code == 0 and doc["verdict"] == "PASS"

    def test_beilinson_unsupported_exits_four(self, capsys):
        code, doc = run_json(capsys, "check", "beilinson", "--model", ELLIPTIC, "--j", "1")
        assert code == 4
        assert doc["verdict"] == "UNSUPPORTED"

    def test_report_carries_config_and_hypotheses(self, capsys):
        _, doc = run_json(capsys, "check", "ladic", "--spec", E5, "--p", "5")
        assert doc["config"]["precision"] == 50
        assert doc["unverified_hypotheses"] == ["smooth", "proper"]


class TestConfigLayering:
    def test_show_config(self, capsys):
        code, doc = run_json(capsys, "count", "--spec", P1, "--p", "3", "--degrees", "1", "--show-config")
        assert code == 0
        assert doc["config"]["precision"] == 50

    def test_file_overridden_by_flag(self, capsys, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("precision = 30\n")
        _, doc = run_json(
            capsys, "count", "--spec", P1, "--p", "3", "--degrees", "1",
            "--config", str(cfg), "--precision", "40", "--show-config",
        )
        assert doc["config"]["precision"] == 40

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "zeta", "--spec", E5, "--p", "5", "--format", "text")
        assert code == 0
        assert "denominator" in out and "{" not in out.splitlines()[0]


class TestDeterminism:
    def test_byte_identical_reports_with_warm_cache(self, capsys, tmp_path):
        argv = [
            "check", "weil", "--spec", E5, "--p", "5", "--betti", "1,2,1",
            "--cache-dir", str(tmp_path),
        ]
        code1, out1, _ = run(capsys, *argv)
        code2, out2, _ = run(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2
