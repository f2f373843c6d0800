import pytest
from hypothesis import given

from golden import EXAMPLE, example_derivation
from highschool.g4ip import (
    BOT,
    NON_INVERTIBLE,
    Derivation,
    ProverConfig,
    ResourceLimit,
    RuleError,
    RIGHT_RULES,
    RuleTag,
    apply_rule,
    applicable_rules,
    check,
    derivation_from_json,
    derivation_to_json,
    derivation_to_latex,
    derivation_to_text,
    is_provable,
    oracle_decide,
    prove,
)
from highschool.generate import CLASSIC_TAUTOLOGIES, atoms_named, enumerate_formulas
from highschool.syntax import TOP, Imp, Sequent, parse_formula, parse_sequent, simplify_sequent
from strategies import formulas, small_formulas

NON_THEOREMS = [
    "((p -> q) -> p) -> p",
    "p | (p -> q)",
    "((p -> q) -> q) -> p | q",
    "(p -> q | r) -> (p -> q) | (p -> r)",
    "p -> q",
]


@pytest.mark.parametrize("text", CLASSIC_TAUTOLOGIES)
def test_classics_are_provable(text):
    d = prove(parse_formula(text))
    assert d is not None and check(d).ok


@pytest.mark.parametrize("text", NON_THEOREMS)
def test_non_theorems(text):
    assert prove(parse_formula(text)) is None
    assert not oracle_decide(parse_formula(text))


def test_example_derivation_shape():
    d = example_derivation()
    assert check(d).ok
    assert [n.rule for n in d.nodes()] == [
        RuleTag.ImpR, RuleTag.AndL, RuleTag.ImpR, RuleTag.ImpLAtom,
        RuleTag.ImpLOr, RuleTag.ImpLAtom, RuleTag.Axiom,
    ]
    assert d.non_invertible_count() == 3
    assert prove(parse_formula(EXAMPLE)) == d


def test_impland_curries_right_conjunct_outermost():
    s = parse_sequent("p & q -> r |- r")
    (prem,) = apply_rule(s, RuleTag.ImpLAnd, 0)
    assert prem.context == (parse_formula("q -> p -> r"),)


def test_implimp_premises():
    s = parse_sequent("(p -> q) -> r, s |- t")
    left, right = apply_rule(s, RuleTag.ImpLImp, s.context.index(parse_formula("(p -> q) -> r")))
    assert left == parse_sequent("q -> r, s |- p -> q")
    assert right == parse_sequent("r, s |- t")


def test_apply_rule_rejects_mismatch():
    with pytest.raises(RuleError):
        apply_rule(parse_sequent("p |- q"), RuleTag.Axiom, 0)
    with pytest.raises(RuleError):
        apply_rule(parse_sequent("p |- q"), RuleTag.ImpR)
    with pytest.raises(RuleError):
        apply_rule(parse_sequent("p -> q |- q"), RuleTag.ImpLAtom, 0)


def test_applicable_rules():
    rules = {r for r, _ in applicable_rules(parse_sequent("p, p -> q |- q | p"))}
    assert {RuleTag.ImpLAtom, RuleTag.OrR1, RuleTag.OrR2} <= rules


def test_check_reports_path():
    d = example_derivation()
    bad_leaf = Derivation(RuleTag.Axiom, parse_sequent("q |- s"), 0)
    tampered = Derivation(d.rule, d.conclusion, d.principal, (Derivation(
        d.premises[0].rule, d.premises[0].conclusion, d.premises[0].principal, (bad_leaf,)),))
    res = check(tampered)
    # the parent of the altered leaf no longer matches its premise
    assert not res.ok and res.path == (0,)
    assert not bool(res)


def test_ex_falso_is_opt_in():
    f = Imp(BOT, parse_formula("p"))
    assert prove(f) is None
    d = prove(f, ProverConfig(ex_falso=True))
    assert d is not None and check(d, ex_falso=True).ok
    assert not check(d).ok


def test_node_budget():
    f = parse_formula("(p -> q -> r) -> (p -> q) -> p -> r")
    with pytest.raises(ResourceLimit):
        prove(f, ProverConfig(node_budget=2))


def test_quantifiers_rejected():
    with pytest.raises(ValueError):
        prove(parse_formula("forall x. P(x) -> P(x)"))


def test_top_goal_is_trivial():
    d = prove(Sequent((), TOP))
    assert d is not None and check(d).ok


def test_text_and_latex_output():
    d = example_derivation()
    text = derivation_to_text(d)
    assert text.count("\n") == d.size() - 1
    latex = derivation_to_latex(d)
    assert latex.startswith("\\begin{prooftree}") and latex.count("\\AxiomC") == 1
    assert "\\top" not in latex and "\\lor" in latex


def test_prove_agrees_with_oracle_small_exhaustive():
    leaves = atoms_named("pq")
    for f in enumerate_formulas(leaves, 3):
        assert is_provable(f) == oracle_decide(f), f


@given(formulas())
def test_proofs_check(f):
    d = prove(f)
    if d is not None:
        assert check(d).ok
        assert d.conclusion == simplify_sequent(Sequent((), f))


@given(formulas())
def test_prove_agrees_with_oracle(f):
    assert is_provable(f) == oracle_decide(f)


@given(small_formulas())
def test_json_round_trip(f):
    d = prove(f)
    if d is not None:
        assert derivation_from_json(derivation_to_json(d)) == d


@given(formulas())
def test_spine_lists_non_invertible_rules(f):
    d = prove(f)
    if d is not None:
        spine = d.spine()
        assert all(r in NON_INVERTIBLE for r in spine)
        assert len(spine) == d.non_invertible_count()


def _frontier(seq, order):
    for rule in order:
        for i in [None] if rule in RIGHT_RULES else range(len(seq.context)):
            try:
                prems = apply_rule(seq, rule, i)
            except RuleError:
                continue
            out = set()
            for p in prems:
                out |= _frontier(p, order)
            return out
    return {seq}


@pytest.mark.parametrize("text", [
    "p & q, r | s |- (p -> q) & (s -> r)",
    "(p | q) & r -> s, p & (q | r) |- (q -> s) & p",
])
def test_invertible_saturation_orders_agree(text):
    s = parse_sequent(text)
    order = [RuleTag.AndL, RuleTag.OrL, RuleTag.ImpR, RuleTag.AndR, RuleTag.ImpLAnd, RuleTag.ImpLOr]
    assert _frontier(s, order) == _frontier(s, order[::-1])
