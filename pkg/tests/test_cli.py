import json

import pytest

from stated_skein.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    torus = tmp_path / "torus.json"
    torus.write_text(json.dumps({"faces": [["e1", "e2", "e3"], ["e1", "e2", "e3"]]}))
    tri = tmp_path / "tri.json"
    tri.write_text(json.dumps({"faces": [["a", "b", "c"]]}))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"faces": [["e1", "e2", "e3"], ["e1", "e4", "e5"], ["e1", "e6", "e7"]]}))
    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps({"components": [{"kind": "loop", "passes": [[0, 0, 1], [1, 1, 0]]}]}))
    arc = tmp_path / "arc.json"
    arc.write_text(json.dumps({"components": [{"kind": "arc", "passes": [[0, 2, 1]], "endpoints": ["+", "+"]}]}))
    bumpy = tmp_path / "bumpy.json"
    bumpy.write_text(json.dumps({"components": [
        {"kind": "loop", "passes": [[0, 0, 2], [1, 2, 2], [0, 2, 1], [1, 1, 0]]}]}))
    return {p.stem: str(p) for p in (torus, tri, bad, loop, arc, bumpy)}


def test_validate(capsys, files):
    assert run(capsys, "validate", "--surface", files["torus"])[:2] == (0, "valid, 0 boundary edges, 1 puncture, χ=-1\n")
    code, out, _ = run(capsys, "validate", "--surface", files["tri"])
    assert code == 0 and out.startswith("valid, 3 boundary edges")
    code, _, err = run(capsys, "validate", "--surface", files["bad"])
    assert code == 1 and "used 3 times" in err
    code, out, _ = run(capsys, "validate", "--surface", "punctured-torus", "--format", "json")
    assert json.loads(out)["punctures"] == 1


def test_normalize(capsys):
    assert run(capsys, "normalize", "b(+,+) a(+,+)")[:2] == (0, "q * a(+,+) b(+,+)\n")
    assert run(capsys, "normalize", "a(+,+)")[1] == "a(+,+)\n"
    assert run(capsys, "normalize", "a(-,+) a(+,-)")[1] == "q^2 * a(+,+) a(-,-) - q^2\n"
    assert run(capsys, "normalize", "x(+,+)")[0] == 1


def test_trace(capsys, files):
    code, out, _ = run(capsys, "trace", "--surface", files["torus"], "--tangle", files["loop"])
    lines = out.splitlines()
    assert code == 0 and lines[0].count(" + ") == 2 and lines[-1] == "in Chekhov-Fock: true"
    assert run(capsys, "trace", "--surface", files["tri"])[1].splitlines()[0] == "1"
    code, out, _ = run(capsys, "trace", "--surface", files["tri"], "--tangle", files["arc"])
    assert out.splitlines()[:2] == ["q^{1/2} * y_b y_c", "weyl: [y_b y_c]"]
    code, _, err = run(capsys, "trace", "--surface", files["torus"], "--tangle", files["bumpy"])
    assert code == 1 and "hint" in err


def test_decompose_and_leading(capsys, files):
    code, out, _ = run(capsys, "decompose", "--surface", files["torus"], "--tangle", files["loop"])
    assert code == 0 and len(out.splitlines()) == 4
    code, out, _ = run(capsys, "leading", "--surface", files["torus"], "--tangle", files["loop"])
    assert code == 0 and "match" in out and "MISMATCH" not in out


def test_check_and_determinism(capsys):
    a = run(capsys, "check", "--suite", "phi-relations,domain", "--seed", "42")
    b = run(capsys, "check", "--suite", "phi-relations,domain", "--seed", "42")
    assert a == b and a[0] == 0
    assert "all 96 relation instances hold" in a[1]
    assert run(capsys, "check", "--suite", "nope")[0] == 1


def test_check_failure_exit_code(capsys, monkeypatch):
    from stated_skein import checks
    monkeypatch.setitem(checks.SUITES, "broken", lambda seed: (False, "always fails"))
    code, out, _ = run(capsys, "check", "--suite", "broken")
    assert code == 2 and out.startswith("FAIL broken")


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(capsys, "validate", "--surface", "/nonexistent.json")[0] == 1
