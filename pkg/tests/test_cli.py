import json

import pytest
from click.testing import CliRunner

from sandwich.cli import main


def run(*args):
    res = CliRunner().invoke(main, list(args))
    return res.exit_code, [json.loads(line) for line in res.output.splitlines() if line.startswith("{")], res.output


def test_gl_entry_campaign():
    code, recs, _ = run("decompose", "--group", "gl", "--target", "entry", "--m", "5", "--n", "3",
                        "--trials", "100", "--seed", "7", "--no-words")
    assert code == 0 and len(recs) == 100
    assert all(r["verified"] and r["count"] == 8 for r in recs)


def test_zero_trials():
    code, recs, out = run("decompose", "--group", "gl", "--target", "gl-entry", "--m", "5", "--trials", "0")
    assert code == 0 and out == ""


def test_unitary_value_bound():
    code, recs, _ = run("decompose", "--group", "u", "--target", "value", "--lambda", "-1", "--form", "max",
                        "--m", "3", "--n", "3", "--no-words")
    assert code == 0
    assert recs[0]["verified"] and recs[0]["count"] <= 1600 * 3 + 4004


def test_relations_and_gen_and_sct():
    code, recs, _ = run("relations", "--group", "gl", "--m", "4", "--n", "3")
    assert code == 0 and recs[0]["report"]["ok"]
    code, recs, _ = run("gen", "--group", "o", "--m", "5", "--n", "3", "--len", "0", "--seed", "1")
    ent = recs[0]["matrix"]["entries"]
    assert code == 0 and all((ent[a][b] == [1]) == (a == b) for a in range(6) for b in range(6))
    code, recs, _ = run("sct", "--group", "gl", "--m", "6", "--n", "3", "--seed", "2")
    assert code == 0 and recs[0]["report"]["upper_inclusion"]


@pytest.mark.parametrize("args", [
    ("decompose", "--group", "o", "--target", "entry", "--m", "5", "--lambda", "3"),
    ("decompose", "--group", "gl", "--target", "value", "--m", "5"),
    ("decompose", "--group", "gl", "--target", "entry", "--m", "1"),
    ("gen", "--group", "u", "--m", "5", "--lambda", "2"),
])
def test_config_errors_exit_2(args):
    assert run(*args)[0] == 2


def test_determinism():
    args = ("decompose", "--group", "u", "--target", "entry", "--m", "4", "--lambda", "3",
            "--form", "max", "--trials", "2", "--seed", "5")
    assert run(*args)[2] == run(*args)[2]
    recs = run(*args)[1]
    assert all(r["seed"] == 5 for r in recs)
