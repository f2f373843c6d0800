import pytest
from hypothesis import given

from golden import EXAMPLE, EXAMPLE_NF, example_derivation
from highschool import hs as H
from highschool.g4ip import RuleTag, check, is_provable, prove
from highschool.generate import atoms_named, enumerate_formulas
from highschool.interp import Valuation
from highschool.normalize import ONE, Conj, Factor, Prime, Sum, enf, nf_equal, print_nf
from highschool.syntax import Atom, parse_formula
from strategies import formulas

p, q, r, s = (Atom(n) for n in "pqrs")


def atoms_conj(*xs):
    return Conj(tuple(Factor(Prime(a), ONE) for a in xs))


def test_example_maps_to_three_node_spine():
    h = H.g4ip_to_hs(example_derivation())
    assert h.spine() == [RuleTag.ImpLAtom, RuleTag.ImpLAtom, RuleTag.Axiom]
    assert h.size() == 3 and len(h.roots) == 1
    assert H.check_hs(h).ok
    # the sorted G4ip context lists the factors in another order
    assert print_nf(h.root.conclusion) == "s^(s^(r q) s^(t q) q r)"
    assert nf_equal(h.root.conclusion, enf(parse_formula(EXAMPLE)), mod_comm=True)
    assert print_nf(enf(parse_formula(EXAMPLE))) == EXAMPLE_NF
    assert nf_equal(h.conclusion, enf(parse_formula(EXAMPLE)), mod_comm=True)


def test_example_search_finds_same_spine():
    h = H.prove_hs_formula(parse_formula(EXAMPLE))
    assert h is not None and H.check_hs(h).ok
    assert h.spine() == [RuleTag.ImpLAtom, RuleTag.ImpLAtom, RuleTag.Axiom]


def test_identity_is_one_axiom():
    h = H.g4ip_to_hs(prove(parse_formula("p -> p")))
    assert h.spine() == [RuleTag.Axiom]
    assert print_nf(h.root.conclusion) == "p^p"


def test_peirce_not_provable():
    assert H.prove_hs_formula(parse_formula("((p -> q) -> p) -> p")) is None


def test_or_patterns():
    # (p+q)^r (p+q)^s matches both disjunction rules with exponent r + s
    d = Sum((atoms_conj(p), atoms_conj(q)))
    e = Conj((Factor(d, atoms_conj(r)), Factor(d, atoms_conj(s))))
    found = {rule: inst for rule, inst in H.match_patterns(e) if rule in (RuleTag.OrR1, RuleTag.OrR2)}
    assert set(found) == {RuleTag.OrR1, RuleTag.OrR2}
    assert found[RuleTag.OrR1]["e"] == Sum((atoms_conj(r), atoms_conj(s)))


def test_axiom_pattern():
    e = Conj((Factor(Prime(p), atoms_conj(p, q)),))
    ((rule, inst),) = [m for m in H.match_patterns(e) if m[0] is RuleTag.Axiom]
    assert inst["p"] == p and nf_equal(inst["e"], atoms_conj(q))


def test_empty_product_has_no_patterns():
    assert H.match_patterns(ONE) == []


def test_check_hs_catches_swapped_exponent():
    h = H.g4ip_to_hs(example_derivation())
    node = h.root
    bad = H.HsDerivation(node.rule, Conj((Factor(Prime(s), atoms_conj(q)),)), node.instantiation, node.premises)
    assert not H.check_hs(bad).ok


def test_translation_rejects_unchecked():
    h = H.g4ip_to_hs(example_derivation())
    bad = H.HsDerivation(RuleTag.Axiom, atoms_conj(p), {"p": p, "e": ONE}, ())
    with pytest.raises(H.TranslationError):
        H.hs_to_g4ip(H.HsProof(atoms_conj(p), (bad,), None))
    assert H.hs_to_g4ip(h) is not None


def test_example_value_audit():
    h = H.g4ip_to_hs(example_derivation())
    assert all(a.verdict == "strictly-less" for a in H.hs_value_audit(h, Valuation()))


def test_text_and_latex():
    h = H.g4ip_to_hs(example_derivation())
    assert H.hs_to_text(h).count("\n") == 2
    tex = H.hs_to_latex(h)
    assert tex.count("\\AxiomC") == 1 and "s^{" in tex


def test_completeness_small_exhaustive():
    for f in enumerate_formulas(atoms_named("pq"), 3):
        assert (H.prove_hs_formula(f) is not None) == is_provable(f), f


@given(formulas())
def test_completeness(f):
    assert (H.prove_hs_formula(f) is not None) == is_provable(f)


@given(formulas())
def test_g4ip_to_hs_preserves_spine(f):
    d = prove(f)
    if d is not None:
        h = H.g4ip_to_hs(d)
        assert H.check_hs(h).ok
        assert h.spine() == d.spine()
        assert nf_equal(h.conclusion, enf(d.conclusion.as_formula()), mod_comm=True)


@given(formulas())
def test_hs_round_trip(f):
    d0 = prove(f)
    if d0 is not None:
        h = H.g4ip_to_hs(d0)
        d = H.hs_to_g4ip(h)
        assert check(d).ok
        assert H.g4ip_to_hs(d).spine() == h.spine()


@given(formulas())
def test_searched_proofs_round_trip_stably(f):
    # a searched proof may batch implications that G4ip takes one at a time,
    # so only the second trip is required to keep the spine
    h = H.prove_hs_formula(f)
    if h is not None:
        d = H.hs_to_g4ip(h)
        assert check(d).ok
        h2 = H.g4ip_to_hs(d)
        assert H.g4ip_to_hs(H.hs_to_g4ip(h2)).spine() == h2.spine()


@given(formulas())
def test_hs_nodes_decrease_value(f):
    h = H.prove_hs_formula(f)
    if h is not None:
        assert all(a.ok for a in H.hs_value_audit(h, Valuation()))


@given(formulas())
def test_patterns_reproduce_input(f):
    e = enf(f)
    if isinstance(e, Sum):
        e = Conj((Factor(e, ONE),))
    for fac in e.factors:
        single = Conj((fac,))
        for rule, inst in H.match_patterns(single):
            assert H.same_nf(H.schema_conclusion(rule, inst), single), rule


@given(formulas())
def test_json_round_trip(f):
    h = H.prove_hs_formula(f)
    if h is not None:
        back = H.hs_from_json(H.hs_to_json(h))
        assert H.hs_to_json(back) == H.hs_to_json(h)
        assert H.check_hs(back).ok
