import json

import pytest

from tropwp.cli import main
from tropwp.covers import cover_to_dict
from tropwp.graphs import standard_families


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hurwitz(capsys):
    code, out, _ = run(capsys, "hurwitz", "--d", "4", "--profiles", "(2,1,1);(2,1,1);(4)")
    assert code == 0 and json.loads(out) == {"hurwitz": "0"}
    code, out, _ = run(capsys, "hurwitz", "--d", "3", "--profiles", "(3);(3)", "--pretty")
    assert code == 0 and out.strip() == "1/3"


def test_trees(capsys):
    code, out, _ = run(capsys, "trees", "--m", "5")
    assert code == 0 and len(json.loads(out)) == 15
    code, out, _ = run(capsys, "trees", "--m", "6", "--mode", "interchangeable", "--pretty")
    assert out.startswith("3 trees, total orbit size 105")


def test_gwp_count_is_deterministic(capsys, tmp_path):
    args = ["gwp", "count", "--family", "O", "--genus", "2", "--seed", "7", "--verify-rank"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    data = json.loads(out)
    assert data["total"] == "6" and data["seed"] == 7
    assert sorted(int(p["multiplicity"]) for p in data["points"]) == [1, 1, 2, 2]
    assert all(p["isWeierstrass"] for p in data["points"])
    target = tmp_path / "r.json"
    run(capsys, *args, "--out", str(target))
    assert target.read_text() == out


def test_gwp_with_lengths(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps(standard_families("O", 2).to_dict()))
    code, out, _ = run(capsys, "gwp", "count", "--graph", str(g), "--lengths", "7/3,11/5,13/7")
    assert code == 0 and json.loads(out)["total"] == "6"


def test_rank_and_weierstrass(capsys, tmp_path):
    O = standard_families("O", 2)
    l1 = O.find("l1")
    g = tmp_path / "g.json"
    spec = O.to_dict()
    spec["lengths"] = {str(O.find("l1")): "4", str(O.find("l2")): "3", str(O.find("h1")): "1"}
    g.write_text(json.dumps(spec))
    d = tmp_path / "d.json"
    d.write_text(json.dumps([{"at": {"edge": l1, "offset": "2"}, "coeff": 2}]))
    code, out, _ = run(capsys, "rank", "--graph", str(g), "--divisor", str(d))
    assert code == 0 and json.loads(out)["rank"] == 1
    code, out, _ = run(capsys, "weierstrass", "--graph", str(g), "--point", f"{l1}:2", "--pretty")
    assert code == 0 and out.strip() == "True"
    code, out, _ = run(capsys, "weierstrass", "--graph", str(g), "--point", f"{l1}:1", "--pretty")
    assert out.strip() == "False"


def test_covers(capsys, tmp_path, g2_covers):
    code, out, _ = run(capsys, "covers", "enumerate", "--genus", "2", "--pretty")
    assert code == 0 and out.startswith("3 covers, 3 contributing")
    c = tmp_path / "c.json"
    c.write_text(json.dumps(cover_to_dict(g2_covers[0].cover)))
    code, out, _ = run(capsys, "covers", "validate", "--cover", str(c))
    data = json.loads(out)
    assert code == 0 and data["degree"] == 2 and data["rhResidual"] == 0
    assert set(data["weight"]) == {"weight", "edgeProduct", "lcmDenominator", "perVertex"}


def test_export(capsys):
    code, out, _ = run(capsys, "export", "--family", "O", "--genus", "3")
    assert code == 0 and out.startswith("graph G {")
    code, out, _ = run(capsys, "export", "--family", "T", "--genus", "2", "--format", "json")
    assert len(json.loads(out)["marking"]) == 6


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["rank", "--family", "O", "--genus", "2"],
    ["hurwitz", "--d", "x", "--profiles", "(1)"],
    ["gwp", "count", "--family", "O"],
    ["gwp", "count"],
    ["rank", "--graph", "/nonexistent.json", "--divisor", "/nonexistent.json"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_domain_errors_exit_1(capsys):
    code, _, err = run(capsys, "hurwitz", "--d", "3", "--profiles", "(2);(3)")
    assert code == 1 and "ProfileSumMismatch" in err
    code, _, err = run(capsys, "gwp", "count", "--family", "O", "--genus", "5", "--genus-cap", "4")
    assert code == 1 and "GenusCapExceeded" in err
    code, _, err = run(capsys, "export", "--family", "O", "--genus", "1")
    assert code == 1 and "GenusTooSmall" in err
