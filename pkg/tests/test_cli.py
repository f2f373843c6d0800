import json

import pytest

from golden import EXAMPLE
from highschool.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_poly(capsys):
    code, out, _ = call(capsys, "normalize", "(p|q) -> r", "--notation", "poly")
    assert code == 0 and out.strip() == "r^p r^q"


def test_normalize_both_notations(capsys):
    code, out, _ = call(capsys, "normalize", "p -> p")
    assert code == 0 and "p^p" in out and "p -> p" in out


def test_normalize_units(capsys):
    _, out, _ = call(capsys, "normalize", "p", "--notation", "poly", "--verbose-units")
    assert out.strip() == "p^(1)·1"


def test_classify_json(capsys):
    code, out, _ = call(capsys, "classify", "forall x. exists y. P(x) -> Q(y)", "--emit", "json")
    assert code == 0 and json.loads(out)["top"] == "Pi"


@pytest.mark.parametrize("text, code", [
    ("p -> p", 0),
    ("((p->q)->p)->p", 1),
    ("p -> ", 2),
    ("forall x. P(x) -> P(x)", 2),
])
def test_prove_exit_codes(capsys, text, code):
    assert call(capsys, "prove", text)[0] == code


def test_unknown_flag_is_input_error(capsys):
    assert call(capsys, "prove", "p", "--calculus", "nd")[0] == 2


def test_prove_sequent(capsys):
    code, out, _ = call(capsys, "prove", "p, p -> q |- q")
    assert code == 0 and "axiom" in out.lower()


def test_ex_falso_flag(capsys):
    assert call(capsys, "prove", "bot -> p")[0] == 1
    assert call(capsys, "prove", "bot -> p", "--logic", "ex-falso")[0] == 0


def test_hs_latex_example(capsys):
    code, out, _ = call(capsys, "prove", EXAMPLE, "--calculus", "hs", "--emit", "latex")
    assert code == 0
    # one inference line per node: axiom, then two implication steps
    assert out.count("\\AxiomC") == 1 and out.count("\\UnaryInfC") == 3
    assert out.count("\\to_l^P") == 2


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_json_round_trip_through_translate_and_check(capsys, tmp_path):
    _, g4, _ = call(capsys, "prove", EXAMPLE, "--emit", "json")
    g4_file = _write(tmp_path, "d.json", g4)
    assert call(capsys, "check", g4_file)[0] == 0

    code, hs, _ = call(capsys, "translate", g4_file, "--emit", "json")
    assert code == 0
    hs_file = _write(tmp_path, "h.json", hs)
    assert call(capsys, "check", hs_file)[0] == 0

    code, back, _ = call(capsys, "translate", hs_file, "--emit", "json")
    assert code == 0 and json.loads(back) == json.loads(g4)


def test_hs_prove_output_is_checkable(capsys, tmp_path):
    _, hs, _ = call(capsys, "prove", EXAMPLE, "--calculus", "hs", "--emit", "json")
    code, out, _ = call(capsys, "check", _write(tmp_path, "h.json", hs), "--emit", "json")
    assert code == 0 and json.loads(out) == {"calculus": "hs", "ok": True, "path": [], "reason": ""}


def test_check_rejects_tampered(capsys, tmp_path):
    _, g4, _ = call(capsys, "prove", "p -> p", "--emit", "json")
    data = json.loads(g4)
    data["sequent"] = "|- q -> p"
    assert call(capsys, "check", _write(tmp_path, "d.json", json.dumps(data)))[0] in (1, 2)


def test_bad_files(capsys, tmp_path):
    assert call(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    assert call(capsys, "check", _write(tmp_path, "x.json", "{not json"))[0] == 2
    assert call(capsys, "check", _write(tmp_path, "y.json", "[1, 2]"))[0] == 2


def test_json_output_is_stable(capsys):
    first = call(capsys, "prove", EXAMPLE, "--emit", "json")[1]
    second = call(capsys, "prove", EXAMPLE, "--emit", "json")[1]
    assert first == second


def test_measure_grid(capsys):
    code, out, _ = call(capsys, "measure", "--grid")
    assert code == 0 and out


def test_measure_sample_is_seeded(capsys):
    a = call(capsys, "measure", "--sample", "5", "--seed", "3", "--emit", "json")
    b = call(capsys, "measure", "--sample", "5", "--seed", "3", "--emit", "json")
    assert a[0] == 0 and a[1] == b[1]


def test_measure_file(capsys, tmp_path):
    _, g4, _ = call(capsys, "prove", EXAMPLE, "--emit", "json")
    code, out, _ = call(capsys, "measure", _write(tmp_path, "d.json", g4))
    assert code == 0 and out


def test_lemmas(capsys):
    code, out, _ = call(capsys, "lemmas")
    assert code == 0 and "power_gap" in out


def test_bad_valuation(capsys, tmp_path):
    _, g4, _ = call(capsys, "prove", "p -> p", "--emit", "json")
    assert call(capsys, "measure", _write(tmp_path, "d.json", g4), "--valuation", "1")[0] == 2


def test_normalize_logical_hides_units(capsys):
    _, out, _ = call(capsys, "normalize", "(p|q) -> r", "--notation", "logical")
    assert out.strip() == "(p -> r) & (q -> r)"
    _, out, _ = call(capsys, "normalize", "(p|q) -> r", "--notation", "logical", "--verbose-units")
    assert "top" in out
