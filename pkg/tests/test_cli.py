import json

import pytest

from hsinteg.cli import main


CUSP_F2 = {
    "coefficients": "F2",
    "variables": ["x", "y"],
    "order": "degrevlex",
    "ideal": ["x^2 + y^3"],
    "weights": [3, 2],
}


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(CUSP_F2))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check_report_schema(capsys, problem_file):
    code, doc = run_json(capsys, ["check", "--problem", problem_file,
                                  "--max-level", "4"])
    assert code == 0
    assert doc["command"] == "check"
    assert doc["problem"]["ideal"] == ["y^3 + x^2"]
    assert doc["max_level"] == 4
    assert doc["trivial_ring"] is False
    assert doc["generators"] == [["0", "y^3 + x^2"], ["1", "0"]]
    assert [lv["verdict"] for lv in doc["levels"]] == ["FALSE"]
    w = doc["levels"][0]["witness"]
    assert w["coefficients"] == ["1", "0"]
    assert w["remainder"] == ["1"]
    assert doc["ledger"] == [1]


def test_check_output_is_deterministic(tmp_path, problem_file):
    outs = []
    for i in range(2):
        target = tmp_path / f"report{i}.json"
        assert main(["check", "--problem", problem_file, "--max-level", "3",
                     "--output", str(target)]) == 0
        outs.append(target.read_text())
    assert outs[0] == outs[1]


def test_inline_problem(capsys):
    code, doc = run_json(capsys, ["derlog", "--ring", "F3", "--vars", "x,y",
                                  "--ideal", "x^2 + y^3"])
    assert code == 0
    assert doc["generators"] == [["y^3 + x^2", "0"], ["0", "1"]]


def test_integrate_yes_and_inconclusive(capsys, problem_file):
    code, doc = run_json(capsys, ["integrate", "--problem", problem_file,
                                  "--derivation", "x,0", "--level", "6"])
    assert code == 0 and doc["status"] == "YES"
    assert doc["certificate"]["x"] == ["x", "x", "0", "0", "0", "0", "0"]
    assert doc["certificate"]["y"] == ["y", "0", "y", "0", "y", "0", "y"]

    code, doc = run_json(capsys, ["integrate", "--problem", problem_file,
                                  "--derivation", "y,0", "--level", "4"])
    assert code == 0 and doc["status"] == "INCONCLUSIVE"
    assert doc["failed_level"] == 4
    assert doc["vector"] == ["y"] and doc["remainder"] == ["y"]
    assert doc["hypothesis_level"] == 2
    assert doc["hypothesis_established"] is False


def test_integrate_no_is_exit_zero(capsys, problem_file):
    # a refutation is still a successful computation
    code, doc = run_json(capsys, ["integrate", "--problem", problem_file,
                                  "--derivation", "1,0", "--level", "2"])
    assert code == 0 and doc["status"] == "NO"


def test_euler_command(capsys, problem_file):
    code, doc = run_json(capsys, ["euler", "--problem", problem_file,
                                  "--level", "6"])
    assert code == 0
    assert doc["weights"] == [3, 2]
    assert doc["first_component"] == ["x", "0"]  # 3x and 2y mod 2
    assert doc["certificate"]["x"][:2] == ["x", "x"]


def test_gb_nf_quotient_jacobian(capsys):
    base = ["--ring", "Z", "--vars", "x,y"]
    code, doc = run_json(capsys, ["gb"] + base +
                         ["--ideal", "4", "6*x"])
    assert code == 0 and doc["basis"] == ["2*x", "4"]

    code, doc = run_json(capsys, ["nf"] + base +
                         ["--ideal", "6*x", "6*y^2", "3*x^2", "2*y^3",
                          "--poly", "3*y^4 + 6*x^2*y"])
    assert code == 0
    assert doc["remainder"] == "y^4" and doc["member"] is False

    code, doc = run_json(capsys, ["quotient"] + base +
                         ["--ideal", "6*x", "6*y^2", "3*x^2", "2*y^3",
                          "--by", "3*y^4"])
    assert code == 0 and doc["generators"] == ["2", "x^2"]

    code, doc = run_json(capsys, ["jacobian-ideal", "--ring", "F2",
                                  "--vars", "x,y", "--ideal", "x^2 + y^3"])
    assert code == 0
    assert doc["rank"] == 1 and doc["minors"] == ["y^2"]
    assert doc["basis"] == ["x^2", "y^2"]


def test_verify_roundtrip(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"coefficients": "F3", "variables": ["x", "y"],
                                "order": "degrevlex", "ideal": ["x^2 + y^3"]}))
    report = tmp_path / "r.json"
    assert main(["check", "--problem", str(path), "--max-level", "3",
                 "--output", str(report)]) == 0
    capsys.readouterr()
    code, doc = run_json(capsys, ["verify", "--report", str(report)])
    assert code == 0
    assert doc["verified"] is True and doc["checked"] == 3


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"coefficients": "F3", "variables": ["x", "y"],
                                "order": "degrevlex", "ideal": ["x^2 + y^3"]}))
    report = tmp_path / "r.json"
    main(["check", "--problem", str(path), "--max-level", "2",
          "--output", str(report)])
    doc = json.loads(report.read_text())
    doc["levels"][0]["certificates"][0]["images"]["x"][1] = "x + 1"
    report.write_text(json.dumps(doc))
    capsys.readouterr()
    code, out = run_json(capsys, ["verify", "--report", str(report)])
    assert code == 1
    assert out["verified"] is False and out["failures"]


def test_verify_rejects_tampered_witness(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(CUSP_F2))
    report = tmp_path / "r.json"
    main(["check", "--problem", str(path), "--max-level", "2",
          "--output", str(report)])
    doc = json.loads(report.read_text())
    doc["levels"][0]["witness"]["remainder"] = ["0"]
    report.write_text(json.dumps(doc))
    capsys.readouterr()
    code, out = run_json(capsys, ["verify", "--report", str(report)])
    assert code == 1 and out["verified"] is False


def test_usage_errors_exit_one(capsys, tmp_path):
    assert main(["check", "--ring", "F4", "--vars", "x,y"]) == 1
    assert main(["check", "--ring", "F2", "--vars", "x,y",
                 "--ideal", "x +* y"]) == 1
    assert main(["check", "--vars", "x,y"]) == 1
    assert main(["nonsense"]) == 1
    assert main([]) == 1
    assert main(["verify", "--report", str(tmp_path / "missing.json")]) == 1
    err = capsys.readouterr().err
    assert "error" in err


def test_resource_abort_exits_two(capsys):
    code = main(["check", "--ring", "Q", "--vars", "x,y,z",
                 "--ideal", "x^2*y + z", "y^2*z + x", "z^2*x + y",
                 "--max-level", "2", "--max-pairs", "2"])
    assert code == 2
    err = capsys.readouterr().err
    assert "not a verdict" in err


def test_parse_error_messages_carry_position(capsys):
    assert main(["gb", "--ring", "Q", "--vars", "x", "--ideal", "x^"]) == 1
    assert "position" in capsys.readouterr().err
