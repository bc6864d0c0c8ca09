"""Front-end dispatch, output formats, exit codes."""

import json
import subprocess
import sys

import pytest

from paraferm.cli import CHECKS, main, run_all, run_check
from paraferm.errors import BadParams, UnknownCheck


class TestRunCheck:
    def test_registry_names(self):
        assert set(CHECKS) == {
            "ope",
            "singular-vector",
            "ek-power",
            "lk0-decomposition",
            "lki-decomposition",
            "string-dual-route",
            "top-weight-match",
            "identify",
            "w1inf-generation",
            "intertwiner-leading",
        }

    def test_dispatch(self):
        r = run_check("ope", {"k": 3})
        assert r.check == "ope" and r.passed

    def test_unknown_check(self):
        with pytest.raises(UnknownCheck):
            run_check("nonsense", {"k": 3})

    def test_every_report_names_its_identity(self):
        for name, params in [
            ("ope", {"k": 3}),
            ("top-weight-match", {"k": 5}),
            ("identify", {"k": 3}),
            ("w1inf-generation", {"max": 8}),
            ("intertwiner-leading", {"k": 3}),
        ]:
            r = run_check(name, params)
            assert r.identity

    def test_run_all_requires_k3(self):
        with pytest.raises(BadParams):
            run_all(2)


class TestMain:
    def test_pass_exit_code(self, capsys):
        assert main(["ope", "--k", "3"]) == 0
        out = capsys.readouterr().out
        rec = json.loads(out.strip())
        assert rec["status"] == "pass"

    def test_json_lines_deterministic(self, capsys):
        main(["identify", "--k", "4"])
        first = capsys.readouterr().out
        main(["identify", "--k", "4"])
        second = capsys.readouterr().out
        assert first == second

    def test_table_format(self, capsys):
        main(["top-weight-match", "--k", "6", "--format", "table"])
        out = capsys.readouterr().out
        assert "CHECK" in out and "top-weight-match" in out

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "reports.jsonl"
        assert main(["w1inf-generation", "--max", "10", "--out", str(path)]) == 0
        assert capsys.readouterr().out == ""
        rec = json.loads(path.read_text().strip())
        assert rec["check"] == "w1inf-generation" and rec["status"] == "pass"

    def test_seed_recorded(self, capsys):
        main(["singular-vector", "--k", "3", "--seed", "7"])
        rec = json.loads(capsys.readouterr().out.strip())
        assert rec["params"]["seed"] == 7

    def test_lki_single_module(self, capsys):
        assert main(["lki-decomposition", "--k", "3", "--i", "1", "--max-weight", "4"]) == 0
        rec = json.loads(capsys.readouterr().out.strip())
        assert rec["params"]["i"] == 1

    def test_dual_route_flags(self, capsys):
        code = main(
            ["string-dual-route", "--k", "3", "--i", "0", "--j", "0", "--max-weight", "3"]
        )
        assert code == 0
        rec = json.loads(capsys.readouterr().out.strip())
        assert rec["params"]["j"] == 0


class TestSubprocess:
    def test_module_invocation_and_usage_error(self):
        ok = subprocess.run(
            [sys.executable, "-m", "paraferm", "ek-power", "--k", "3"],
            capture_output=True,
            text=True,
        )
        assert ok.returncode == 0
        assert json.loads(ok.stdout.strip())["status"] == "pass"
        bad = subprocess.run(
            [sys.executable, "-m", "paraferm", "all", "--kmax", "2"],
            capture_output=True,
            text=True,
        )
        assert bad.returncode == 2
        missing = subprocess.run(
            [sys.executable, "-m", "paraferm", "no-such-check"],
            capture_output=True,
            text=True,
        )
        assert missing.returncode == 2

    def test_truncation_env_override(self):
        proc = subprocess.run(
            [sys.executable, "-m", "paraferm", "ope", "--k", "3"],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "PARAFERM_TRUNCATION": "5"},
        )
        assert proc.returncode == 0
        rec = json.loads(proc.stdout.strip())
        assert rec["params"]["truncation"] == "5"
