"""
Unit tests for the command line.

Core claims:
    - each subcommand prints a report and exits 0 when its verdicts pass
    - JSON output is versioned and byte-identical between runs unless --timing is set
    - usage errors and bad parameters exit 2; failing verdicts exit 1 and name the identity
    - --out writes the same report to JSON or to a workbook
"""

import json

import openpyxl
import pytest

from cli import commands
from cli.commands import run
from cli.parser import build_parser
from cli.report import REPORT_FORMAT, ReportBundle
from utils.exceptions import PurityViolationError
from utils.load_preferences import WORKERS_ENV


# -- Helpers -----------------------------------------------------------------

@pytest.fixture(autouse=True)
def _no_worker_override(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)


def _json(capsys, argv):
    code = run(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def _write(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


# == 1. Parser ================================================================

class TestParser:
    def test_flags_after_subcommand(self):
        args = build_parser().parse_args(["betti", "--space", "open", "--n", "5", "--format", "json"])
        assert args.format == "json"
        assert args.space == "open"

    def test_flags_before_subcommand(self):
        args = build_parser().parse_args(["--format", "json", "purity", "--n", "4"])
        assert args.format == "json"

    def test_unknown_flag_exits_two(self, capsys):
        assert run(["betti", "--space", "open", "--n", "5", "--bogus"]) == 2

    def test_unknown_space_exits_two(self, capsys):
        assert run(["betti", "--space", "torus", "--n", "5"]) == 2

    def test_missing_subcommand(self, capsys):
        assert run([]) == 2


# == 2. Tables ================================================================

class TestBetti:
    def test_mbar_five(self, capsys):
        code, report = _json(capsys, ["betti", "--space", "mbar", "--n", "5"])
        assert code == 0
        assert report["format"] == REPORT_FORMAT
        assert report["data"]["coefficients"] == [1, 0, 5, 0, 1]
        assert report["passed"]
        assert "wall_time" not in report

    def test_open_with_primes(self, capsys):
        code, report = _json(capsys, ["betti", "--space", "open", "--n", "6", "--primes", "5,7,23"])
        assert code == 0
        assert report["data"]["coefficients"] == [1, 9, 26, 24]
        assert report["parameters"]["primes"] == [5, 7, 23]
        primes = [row[0] for row in report["tables"]["counts"]["rows"]]
        assert 23 in primes

    @pytest.mark.parametrize(
        "space, n, expected",
        [("ld", 3, [1, 3, 2]), ("fld", 2, [1, 3, 3, 1]), ("flc", 2, [1, 3, 3, 1]), ("flc", 1, [1, 1])],
    )
    def test_operad_tables(self, capsys, space, n, expected):
        code, report = _json(capsys, ["betti", "--space", space, "--n", str(n)])
        assert code == 0
        assert report["data"]["coefficients"] == expected

    def test_deterministic(self, capsys):
        argv = ["betti", "--space", "open", "--n", "5", "--format", "json"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_timing(self, capsys):
        code, report = _json(capsys, ["betti", "--space", "open", "--n", "4", "--timing"])
        assert code == 0
        assert report["wall_time"] >= 0

    def test_bad_prime_exits_two(self, capsys):
        assert run(["betti", "--space", "open", "--n", "5", "--primes", "4"]) == 2
        assert "error" in capsys.readouterr().err

    def test_bad_arity_exits_two(self, capsys):
        assert run(["betti", "--space", "open", "--n", "2"]) == 2


class TestStrata:
    def test_census(self, capsys):
        code, report = _json(capsys, ["strata", "--n", "4"])
        assert code == 0
        assert report["tables"]["census"]["rows"] == [[0, 1], [1, 10], [2, 15]]

    def test_single_codim(self, capsys):
        code, report = _json(capsys, ["strata", "--n", "5", "--codim", "1"])
        assert code == 0
        assert report["tables"]["census"]["rows"] == [[1, 25]]


# == 3. Certificates ==========================================================

class TestPurityAndAcyclicity:
    def test_purity_four_text(self, capsys):
        assert run(["purity", "--n", "4"]) == 0
        out = capsys.readouterr().out
        assert "3 − 1 = 2" in out
        assert "verdict: PASS" in out

    def test_purity_five_rows(self, capsys):
        code, report = _json(capsys, ["purity", "--n", "5"])
        assert code == 0
        details = [c["detail"] for c in report["checks"]]
        assert any(d.startswith("10 − 5 = 5") for d in details)
        assert any(d.startswith("15 − 10 + 1 = 6") for d in details)

    def test_purity_out_of_range(self, capsys):
        assert run(["purity", "--n", "3"]) == 2

    def test_acyclic_p1(self, capsys):
        code, report = _json(capsys, ["acyclic", "--space", "p1", "--points", "4"])
        assert code == 0
        assert report["data"]["certificate"]["hodge_dims"] == [1, 3]
        assert report["tables"]["coherent"]["rows"] == [[0, 1, 0], [1, 3, 0]]

    def test_acyclic_flc(self, capsys):
        code, report = _json(capsys, ["acyclic", "--space", "flc", "--n", "2"])
        assert code == 0
        assert report["data"]["certificate"]["hodge_dims"] == [1, 3, 3, 1]

    def test_acyclic_missing_value(self, capsys):
        assert run(["acyclic", "--space", "p1"]) == 2


# == 4. FLC and BV ============================================================

class TestFLC:
    def test_compose_table(self, capsys):
        code, report = _json(capsys, ["flc", "compose", "--m", "2", "--n", "2", "--i", "1"])
        assert code == 0
        rows = dict(report["tables"]["matching"]["rows"])
        assert rows == {
            "L0": "a:L0",
            "L1": "b:L1",
            "L2": "b:L2",
            "L3": "a:L2",
            "N[1,2]": "a:L1 * b:L0",
        }
        assert report["tables"]["exponent_matrix"]["headers"][0] == "target"

    def test_compose_bad_slot(self, capsys):
        assert run(["flc", "compose", "--m", "2", "--n", "2", "--i", "3"]) == 2

    def test_check_axioms_small(self, capsys):
        code, report = _json(capsys, ["flc", "check-axioms", "--max-arity", "2", "--strata-arity", "2"])
        assert code == 0
        names = [c["name"] for c in report["checks"]]
        assert "graft.sequential" in names
        assert "flc.sequential" in names
        assert "comm.sequential" in names


class TestBV:
    def test_compose_files(self, tmp_path, capsys):
        a = _write(tmp_path / "a.json", {"mul": [{"gen": 1}, {"gen": 2}]})
        b = _write(tmp_path / "b.json", {"mul": [{"gen": 1}, {"gen": 2}]})
        code, report = _json(capsys, ["bv", "compose", "--expr-file", a, "--slot", "1", "--with", b])
        assert code == 0
        assert report["data"]["result"]["text"] == "x1·x2·x3"

    def test_compose_delta_insertion(self, tmp_path, capsys):
        a = _write(tmp_path / "a.json", {"bracket": [{"gen": 1}, {"gen": 2}]})
        b = _write(tmp_path / "b.json", {"delta": {"gen": 1}})
        code, report = _json(capsys, ["bv", "compose", "--expr-file", a, "--slot", "2", "--with", b])
        assert code == 0
        assert report["data"]["result"]["text"] == "-[x1,Δx2]"

    def test_malformed_term(self, tmp_path, capsys):
        a = _write(tmp_path / "a.json", {"mul": [{"gen": 1}, {"gen": 1}]})
        assert run(["bv", "normal-form", "--expr-file", a]) == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["bv", "normal-form", "--expr-file", str(tmp_path / "nope.json")]) == 2

    def test_dims(self, capsys):
        code, report = _json(capsys, ["bv", "dims", "--n", "2"])
        assert code == 0
        assert report["data"]["bv"] == [1, 3, 3, 1]
        assert report["data"]["ger"] == [1, 1]

    def test_formality_report(self, capsys):
        code, report = _json(capsys, ["formality", "report", "--n", "3"])
        assert code == 0
        assert report["data"]["report"]["pushout"] == [1, 3, 2]
        assert report["data"]["report"]["model"]["zero_differential"]


# == 5. Exit codes and persistence ============================================

class TestExitCodes:
    def test_failing_verdict(self, monkeypatch, capsys):
        def broken(args, settings):
            raise PurityViolationError("M_0,4 weight 2: 3 − 1 = 2 but b = 3")

        monkeypatch.setitem(commands.HANDLERS, ("purity", None), broken)
        assert run(["purity", "--n", "4"]) == 1
        captured = capsys.readouterr()
        assert "FAIL" in captured.out
        assert "3 − 1 = 2 but b = 3" in captured.err

    def test_failing_check(self, monkeypatch, capsys):
        def failing(args, settings):
            bundle = ReportBundle("purity", {"n": 4})
            bundle.add_check("weight 2", False, "3 − 1 = 1")
            return bundle

        monkeypatch.setitem(commands.HANDLERS, ("purity", None), failing)
        assert run(["purity", "--n", "4"]) == 1
        assert "FAILED weight 2: 3 − 1 = 1" in capsys.readouterr().err

    def test_missing_config(self, tmp_path, capsys):
        assert run(["--config", str(tmp_path / "missing.toml"), "purity", "--n", "4"]) == 2

    def test_config_format(self, tmp_path, capsys):
        config = tmp_path / "settings.toml"
        config.write_text('[output]\nformat = "json"\n', encoding="utf-8")
        assert run(["--config", str(config), "purity", "--n", "4"]) == 0
        assert json.loads(capsys.readouterr().out)["command"] == "purity"

    def test_verify_all_range(self, capsys):
        assert run(["verify-all", "--max-n", "2"]) == 2


class TestOut:
    def test_json_out(self, tmp_path, capsys):
        target = tmp_path / "reports" / "mbar.json"
        assert run(["betti", "--space", "mbar", "--n", "5", "--format", "json", "--out", str(target)]) == 0
        printed = capsys.readouterr().out
        assert target.read_text(encoding="utf-8").strip() == printed.strip()

    def test_xlsx_out(self, tmp_path, capsys):
        target = tmp_path / "purity.xlsx"
        assert run(["purity", "--n", "4", "--out", str(target)]) == 0
        wb = openpyxl.load_workbook(target)
        assert "checks" in wb.sheetnames
        assert "e1" in wb.sheetnames
        assert wb["checks"].max_row == 3

    def test_unsupported_out(self, tmp_path, capsys):
        assert run(["purity", "--n", "4", "--out", str(tmp_path / "x.csv")]) == 2


@pytest.mark.slow
class TestVerifyAll:
    def test_max_n_three(self, capsys):
        code, report = _json(capsys, ["verify-all", "--max-n", "3"])
        assert code == 0
        assert len(report["checks"]) == 8
        assert all(c["passed"] for c in report["checks"])

    def test_default_bound(self, capsys):
        assert run(["verify-all", "--max-n", "5"]) == 0
        lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("PASS")]
        assert len(lines) == 8
