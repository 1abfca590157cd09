import json
import subprocess
import sys
from pathlib import Path

import pytest

from hcourant.cli import main, parse_n_values

SCEN = Path(__file__).resolve().parent.parent / "scenarios"

BROKEN = """\
model desk
dimension 3
n 2
omega 1 dx0^dx1^dx2
basepoint 0 0 0
degenerate no
gauge 1 x2 dx0^dx1
algebra 2
bracket 0 1 -> 0
rho 0 = 1 d/dx0
rho 1 = 1 d/dx1
f 0 = -1 x1 dx2
f 1 = 1 x0 dx2
f 0 1 = 1 x2
seed 1
"""


def test_parse_n_values():
    assert parse_n_values("7") == [7]
    assert parse_n_values("5,7") == [5, 7]
    assert parse_n_values("5:15") == [5, 7, 9, 11, 13, 15]
    for bad in ("4", "3", "27", "x"):
        with pytest.raises(ValueError):
            parse_n_values(bad)


def test_tables_text_output(capsys):
    assert main(["tables"]) == 0
    out = capsys.readouterr().out
    assert "PASS tables/bernoulli" in out
    assert out.strip().endswith("2/2 checks passed")


def test_appendixb_json(capsys, tmp_path):
    target = tmp_path / "report.json"
    assert main(["appendixb", "--n", "5", "--json", "--out", str(target)]) == 0
    printed = capsys.readouterr().out
    report = json.loads(printed)
    assert printed == target.read_text()
    assert report["passed"] is True and report["suite"] == "appendixb"
    assert report["records"][0]["solution"] == {"a_21": "3/4", "a_11": "3/8"}


def test_zero_tuples_is_vacuous(capsys):
    assert main(["structures", "--seed", "1", "--tuples", "0", "--max-arity", "2"]) == 0


def test_desk_scenario_passes(capsys):
    assert main(["pentagon", "--scenario", str(SCEN / "desk.scn")]) == 0
    assert "6/6 checks passed" in capsys.readouterr().out


def test_broken_comoment_exits_one(tmp_path, capsys):
    path = tmp_path / "broken.scn"
    path.write_text(BROKEN)
    assert main(["pentagon", "--scenario", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL pentagon/desk/comoment-valid" in out
    assert "counterexample" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["nosuch"],
        ["tables", "--seed", "-3"],
        ["tables", "--tuples", "-1"],
        ["tables", "--max-arity", "0"],
        ["appendixb", "--n", "6"],
        ["tables", "--scenario", "/nonexistent/file.scn"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_comoment_without_gauge_is_rejected(tmp_path, capsys):
    path = tmp_path / "nogauge.scn"
    path.write_text(BROKEN.replace("gauge 1 x2 dx0^dx1\n", ""))
    assert main(["pentagon", "--scenario", str(path)]) == 2


def test_json_report_is_deterministic(capsys):
    def run():
        main(["pentagon", "--json"])
        rep = json.loads(capsys.readouterr().out)
        for r in rep["records"]:
            r.pop("seconds")
        return rep

    assert run() == run()


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "hcourant.cli", "tables"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "checks passed" in proc.stdout
