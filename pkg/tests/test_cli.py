import json
from fractions import Fraction

import pytest

from combquad.cli import main
from combquad.rules import (
    load_rule,
    midpoint,
    rule_from_jsonable,
    save_rule,
    simpson,
    trapezoid,
)
from combquad.families import gauss3


@pytest.fixture
def rule_files(tmp_path):
    paths = {}
    for rule in (midpoint(), trapezoid(), simpson(), gauss3()):
        path = tmp_path / f"{rule.label}.json"
        save_rule(rule, path)
        paths[rule.label] = str(path)
    return paths


def test_classify_output(rule_files, capsys):
    assert main(["classify", "--rule", rule_files["simpson"]]) == 0
    out = capsys.readouterr().out
    assert "degree=3" in out
    assert "gamma=-4/15" in out
    assert "sign=negative" in out
    assert "mu=2/5" in out


def test_classify_surd_rule(rule_files, capsys):
    assert main(["classify", "--rule", rule_files["gauss-legendre-3"]]) == 0
    out = capsys.readouterr().out
    assert "degree=5" in out and "gamma=8/175" in out


def test_combine_json(rule_files, capsys):
    code = main(
        ["combine", "--a", rule_files["midpoint"], "--b", rule_files["trapezoid"],
         "--least-squares-check"]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["coefficients"] == ["2/3", "1/3"]
    assert doc["bracketing"] is True
    assert rule_from_jsonable(doc["flattened"]) == simpson()


def test_combine_degree_mismatch_is_domain_error(rule_files, capsys):
    code = main(["combine", "--a", rule_files["midpoint"], "--b", rule_files["simpson"]])
    assert code == 1
    err = capsys.readouterr().err
    assert "error" in err and "degree" in err


def test_mean_command(rule_files, capsys, tmp_path):
    code = main(["mean", "--a", rule_files["gauss-legendre-3"], "--b", rule_files["simpson"]])
    assert code == 1  # degrees 5 vs 3
    code = main(["mean", "--a", rule_files["midpoint"], "--b", rule_files["trapezoid"]])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["coefficients"] == ["2/3", "1/3"]


def test_build_nodes(capsys, tmp_path):
    out_file = tmp_path / "w3.json"
    code = main(
        ["build", "--nodes", "1/2,1/3,1/4", "--base", "midpoint", "--out", str(out_file)]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["coefficients"] == ["-4426/105", "5344/315", "-5589/49", "309248/2205"]
    assert doc["degree"] == 7
    assert doc["gamma"] == "1817/15120"
    saved = load_rule(out_file)
    assert len(saved) == 7


def test_build_random_is_deterministic(capsys):
    assert main(["build", "--random", "--seed", "2020", "--k", "3", "--tol", "1/1000"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert main(["build", "--random", "--seed", "2020", "--k", "3", "--tol", "1/1000"]) == 0
    second = json.loads(capsys.readouterr().out)
    assert first == second
    assert first["degree"] == 7


def test_build_argument_conflicts(capsys):
    assert main(["build", "--nodes", "1/2", "--random"]) == 1
    assert main(["build"]) == 1


def test_eval_exact_table(rule_files, capsys):
    code = main(
        ["eval", "--rule", rule_files["simpson"], "--expr", "2/(1+t^2)",
         "--a", "-1", "--b", "1", "--n-list", "1,2", "--prec", "30",
         "--ref", "pi", "--exact"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "n,value,signed_error,significant_digits"
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "10/3"
    assert first[3] != ""
    assert len(lines) == 3


def test_eval_without_reference(rule_files, capsys):
    code = main(
        ["eval", "--rule", rule_files["midpoint"], "--expr", "t^2",
         "--a", "0", "--b", "1", "--n-list", "1", "--prec", "20", "--exact"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[1] == "1,1/4,,"


def test_eval_float_mode(rule_files, capsys):
    code = main(
        ["eval", "--rule", rule_files["gauss-legendre-3"], "--expr", "2/(1+t^2)",
         "--a", "-1", "--b", "1", "--n-list", "4", "--prec", "25", "--ref", "pi"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    n, value, err, digits = lines[1].split(",")
    assert n == "4"
    assert value.startswith("3.141")
    assert int(digits) >= 6


def test_regionmap_pgm(tmp_path, capsys):
    out = tmp_path / "map.pgm"
    code = main(
        ["regionmap", "--family", "two-point", "--grid", "9", "--band", "1/1000",
         "--out", str(out)]
    )
    assert code == 0
    blob = out.read_bytes()
    assert blob.startswith(b"P5\n9 9\n255\n")
    assert len(blob) == len(b"P5\n9 9\n255\n") + 81


def test_regionmap_csv_slice(tmp_path, capsys):
    out = tmp_path / "map.csv"
    code = main(
        ["regionmap", "--family", "three-point-slice", "--fix", "-3/4",
         "--grid", "5", "--band", "1/1000", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 25
    assert all(len(line.split(",")) == 3 for line in lines)


def test_regionmap_bad_extension(tmp_path):
    code = main(
        ["regionmap", "--family", "two-point", "--grid", "5", "--out",
         str(tmp_path / "map.png")]
    )
    assert code == 1


def test_legendre_nodes(capsys):
    assert main(["legendre-nodes", "--n", "2", "--tol", "1/100"]) == 0
    assert capsys.readouterr().out.strip() == "4/7"
    assert main(["legendre-nodes", "--n", "10", "--tol", "1/10000000000000000"]) == 0
    nodes = capsys.readouterr().out.strip().split(",")
    assert len(nodes) == 5
    assert nodes[0] == "37444403/251516838"


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["classify"])  # missing --rule
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--rule", "x", "--expr", "t", "--a", "p/q/r", "--b", "1",
              "--n-list", "1", "--prec", "10"])
    assert exc.value.code == 2


def test_bad_expression_is_domain_error(rule_files, capsys):
    code = main(
        ["eval", "--rule", rule_files["midpoint"], "--expr", "2/(1+t^2",
         "--a", "-1", "--b", "1", "--n-list", "1", "--prec", "10"]
    )
    assert code == 1
    assert "offset 8" in capsys.readouterr().err


def test_rule_round_trip_through_cli_formats(rule_files, tmp_path, capsys):
    # classify the rule written by build --out: exact values survive the trip
    out_file = tmp_path / "w1.json"
    assert main(["build", "--nodes", "1/2", "--out", str(out_file)]) == 0
    capsys.readouterr()
    assert main(["classify", "--rule", str(out_file)]) == 0
    out = capsys.readouterr().out
    assert "degree=3" in out
    assert "gamma=7/30" in out


def test_pi_demo(capsys):
    assert main(["pi-demo"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.count("PASS") == 8
