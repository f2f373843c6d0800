import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from highschool.g4ip import INVERTIBLE, NON_INVERTIBLE, RuleTag, prove
from highschool.interp import (
    QuantifierError,
    Valuation,
    Value,
    ValueTooLarge,
    audit_derivation,
    audit_rule_instance,
    check_g3ip_failure,
    check_inequality_lemmas,
    conditional_lemma_holds,
    degenerate_implimp,
    eval_fol,
    eval_formula,
    eval_sequent,
    eval_value,
    final_lemma_holds,
    g3ip_values,
    is_top_isomorphic,
    schema_instance,
    sweep_rule_grid,
    termination_budget,
    within_budget,
)
from highschool.normalize import embed, enf
from highschool.syntax import TOP, Sequent, parse_formula, parse_sequent, simplify_top
from strategies import ATOMS, fol_formulas, formulas, small_formulas, valuations


def test_values_of_connectives():
    v = Valuation({"p": 2, "q": 3})
    assert eval_formula(parse_formula("p & q"), v) == 6
    assert eval_formula(parse_formula("p | q"), v) == 5
    assert eval_formula(parse_formula("p -> q"), v) == 9
    assert eval_formula(TOP, v) == 1
    assert eval_formula(parse_formula("p -> top"), v) == 1


def test_sequent_value_is_goal_to_context():
    s = parse_sequent("p, q |- p")
    assert eval_sequent(s, Valuation({"p": 2, "q": 3})) == 2**6


def test_valuation_rejects_small_values():
    with pytest.raises(ValueError):
        Valuation({"p": 1})
    with pytest.raises(ValueError):
        Valuation(default=0)


def test_symbolic_tower_compare():
    f = parse_formula("((p -> p) -> p) -> p")  # 5^5^5^5
    big = eval_value(f, Valuation(default=5))
    small = eval_value(parse_formula("p -> p -> p"), Valuation(default=5))
    assert small < big
    with pytest.raises(ValueTooLarge):
        big.to_int()
    assert "10^" in str(big)


def test_value_arithmetic_exact():
    a = Value.of(12)
    assert (a * Value.of(18)).to_int() == 216
    assert a.power(5).to_int() == 12**5
    assert Value.of(8).compare(Value.of(2).power(3)) == 0


def test_quantified_formula_has_no_value():
    with pytest.raises(QuantifierError):
        eval_value(parse_formula("forall x. P(x)"))


def test_eval_fol_domain():
    v = Valuation({"P(0)": 2, "P(1)": 3})
    assert eval_fol(parse_formula("forall x. P(x)"), v) == 6
    assert eval_fol(parse_formula("exists x. P(x)"), v) == 5


@given(formulas(), valuations())
def test_normal_form_preserves_value(f, vals):
    v = Valuation(vals)
    try:
        want = eval_value(f, v)
    except ValueTooLarge:
        assume(False)
    assert eval_value(embed(enf(f)), v).compare(want) == 0


@given(fol_formulas(max_leaves=5))
def test_normal_form_preserves_finite_domain_value(f):
    try:
        want = eval_fol(f)
    except ValueTooLarge:
        assume(False)
    assert eval_fol(embed(enf(f))) == want


@given(small_formulas(top=True))
def test_top_lemma(f):
    one = eval_value(f, Valuation()).compare(Value()) == 0
    assert one == (simplify_top(f) == TOP) == is_top_isomorphic(f)


def test_every_schema_instance_is_well_formed():
    for rule in INVERTIBLE | NON_INVERTIBLE:
        concl, prems = schema_instance(rule)
        assert isinstance(concl, Sequent)
        assert len(prems) == (0 if rule == RuleTag.Axiom else 2 if rule in (RuleTag.AndR, RuleTag.OrL, RuleTag.ImpLImp) else 1)


def test_rule_grid_has_no_violations():
    rep = sweep_rule_grid()
    assert rep.ok, rep.violations[:3]
    assert set(rep.by_rule) == {r.value for r in INVERTIBLE | NON_INVERTIBLE}


def test_grid_spot_value_for_implimp():
    # F=G=H=I=2, empty context: premises (2^2)^(2^2) * 2^2 against 2^(2^(2^2))
    concl, prems = schema_instance(RuleTag.ImpLImp, with_context=False)
    rep = audit_rule_instance(RuleTag.ImpLImp, prems, concl, Valuation(default=2))
    assert (rep.premise.to_int(), rep.conclusion.to_int()) == (1024, 65536)
    assert rep.verdict == "strictly-less"


def test_degenerate_instance_breaks_the_measure():
    prem, concl = degenerate_implimp()
    assert (prem.to_int(), concl.to_int()) == (256, 1)


def test_inequality_lemmas_hold():
    rep = check_inequality_lemmas()
    assert rep.ok
    assert {r.name for r in rep.results} == {"power_gap", "doubling", "power_step", "final", "conditional"}


def test_final_lemma_spot_values():
    assert final_lemma_holds(2, 2, 2)
    assert conditional_lemma_holds(2, 2, 2, 2, 1)


def test_g3ip_counterexample():
    cx = check_g3ip_failure()
    assert (cx.a, cx.c) == (2, 2)
    assert cx.premise > cx.conclusion
    assert g3ip_values(2, 2, 2, 1) == (16, 64)


@given(st.sampled_from([
    "p -> p", "(p -> q -> r) -> (p -> q) -> p -> r", "p & q -> q & p",
    "(p -> r) -> (q -> r) -> p | q -> r", "r & (q -> (r | t) -> s) -> q -> s",
]), st.sampled_from([2, 3]))
def test_audits_of_proofs(text, k):
    d = prove(parse_formula(text))
    reps = audit_derivation(d, Valuation(default=k))
    assert all(r.ok for r in reps)
    assert within_budget(d, Valuation(default=k))


def test_budget_examples():
    assert termination_budget(parse_sequent("|- p | (p -> p)")) == 6
    assert termination_budget(parse_sequent("|- p -> p")) == 4


def test_budget_rejects_unsimplified():
    with pytest.raises(ValueError):
        termination_budget(parse_sequent("top, p |- p"))
    with pytest.raises(ValueError):
        termination_budget(Sequent((), TOP))


@given(small_formulas(ATOMS[:2], top=True))
def test_value_at_least_one(f):
    assert eval_value(f, Valuation()).compare(Value()) >= 0
