from pathlib import Path

import pytest

from hcourant.cartan import parse_form
from hcourant.scenario import ScenarioError, load_scenario, parse_scenario, serialize

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.mark.parametrize("name", ["desk.scn", "r4.scn"])
def test_canonical_files_round_trip(name):
    text = (SCEN / name).read_text()
    assert serialize(parse_scenario(text)) == text


def test_desk_scenario_contents():
    sc = load_scenario(str(SCEN / "desk.scn"))
    assert (sc.name, sc.dimension, sc.n) == ("desk", 3, 2)
    assert sc.gauge == parse_form("1 x2 dx0^dx1", 3)
    assert sc.basepoints[1] == (1, 2, 3)
    fm = sc.comoment()
    assert fm.validate()["ok"]


def test_builtin_name_sets_dimensions():
    sc = parse_scenario("model R4\n")
    assert (sc.dimension, sc.n) == (4, 3)
    sc.model().validate()


def test_comments_and_blank_lines_are_ignored():
    sc = parse_scenario("# header\n\nmodel R3   # trailing\nseed 7\n")
    assert sc.seed == 7 and sc.name == "R3"


@pytest.mark.parametrize(
    "text",
    [
        "frobnicate 3\n",
        "seed 1\nseed 2\n",
        "seed -1\n",
        "seed many\n",
        "degenerate maybe\n",
        "dimension 0\n",
        "model two words\n",
        "suite nonsense\n",
        "rho 0 = 1 d/dx0\n",
        "algebra 2\nbracket 1 0 -> 0\n",
        "algebra 2\nbracket 0 1 1:0\n",
        "algebra 2\nbracket 0 1 -> x:0\n",
        "algebra 2\nrho 5 = 1 d/dx0\n",
        "algebra 2\nf 1 0 = 1 x0\n",
        "algebra 2\nf 0 = 1 x0 dx1\nf 0 = 1 x0 dx1\n",
        "dimension 3\nbasepoint 1 2\n",
        "dimension 3\nomega 1 dx0^dx7\n",
        "dimension 3\nomega )(\n",
    ],
)
def test_malformed_scenarios_raise(text):
    with pytest.raises(ScenarioError):
        parse_scenario(text)


def test_missing_file_is_a_scenario_error(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "absent.scn"))
