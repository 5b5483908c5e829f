import json

from a4canon.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identities(capsys):
    assert run(capsys, "identities", "--kind", "i", "--m-max", "8", "--delta-max", "5")[0] == 0
    assert run(capsys, "identities", "--kind", "i", "--m-max", "0")[0] == 0
    assert run(capsys, "identities", "--kind", "ii", "--m-max", "3", "--n-max", "2", "--delta-max", "2")[0] == 0
    assert run(capsys, "identities", "--kind", "iii")[0] == 2


def test_verify_point(capsys):
    code, out, _ = run(capsys, "verify", "--case", "1.1", "--point", "1,1,0,0,1,0,1,0,0,1")
    assert code == 0 and out.startswith("PASS")


def test_verify_unknown_case(capsys):
    assert run(capsys, "verify", "--case", "99.9")[0] == 2


def test_verify_json_agrees_with_text(capsys):
    code, out, _ = run(capsys, "verify", "--case", "2.1", "--format", "json", "--jobs", "1")
    records = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and records[-1]["summary"]["pass"] == 2
    code2, text, _ = run(capsys, "verify", "--case", "2.1", "--jobs", "1")
    assert code2 == code and text.count("PASS") == 2


def test_verify_failure_exit(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(
        "case B.1\nterm e1^(a10) e2^(a8)\nregion a10 >= 0 ; a8 >= 1 ; a10 >= 1\nend\n"
    )
    code, out, _ = run(capsys, "verify", "--cases", str(path), "--all", "--jobs", "1")
    assert code == 1 and "FAIL" in out


def test_locate(capsys):
    code, out, _ = run(capsys, "locate", "--point", "0,0,0,0,0,0,0,0,0,0")
    assert code == 0 and len(out.split()) == 75
    code, out, _ = run(capsys, "locate", "--point", "1,1,0,0,1,0,1,0,1,1")
    assert {"M1.1", "1.1"} <= set(out.split())
    assert run(capsys, "locate", "--point", "1,2")[0] == 2


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--word", "e1^1")
    assert code == 0 and out.strip() == "E^(0,0,0,0,0,0,0,0,0,1): 1"
    code, out, _ = run(capsys, "expand", "--case", "1.1", "--point", "1,1,0,0,1,0,1,0,0,1", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["congruence"]["in_lattice"]
    code, _, err = run(capsys, "expand", "--word", "e1^9 e2^9")
    assert code == 3 and "cap" in err


def test_quadform(capsys, tmp_path):
    code, out, _ = run(capsys, "quadform", "--builtin", "QM", "--bound", "6", "--jobs", "1")
    assert code == 0 and "weakly positive" in out
    bad = tmp_path / "bad.form"
    bad.write_text("n=2\nq 1 2 -3\n")
    code, out, _ = run(capsys, "quadform", "--file", str(bad), "--bound", "1", "--format", "json")
    rec = json.loads(out)
    assert code == 1 and rec["witness"] == [1, 1]
    assert run(capsys, "quadform", "--builtin", "QX")[0] == 2
    code, out, _ = run(capsys, "quadform", "--builtin", "LP1", "--case", "1.1")
    assert code == 0 and "nonnegative" in out


def test_coverage(capsys):
    code, out, _ = run(capsys, "coverage", "--max-entry", "2", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["uncovered"] > 0 and rec["interior_overlaps"] == []


def test_missing_subcommand(capsys):
    assert run(capsys)[0] == 2
