"""The High-School sequent calculus.

HS has only the five non-invertible rules of G4ip.  Its sequents are
normal forms: ``Γ ⊢ G`` is ``explog(enfpos(G), ctx)`` where ``ctx`` is the
distributed product of the context's normal forms.  An HS proof of a
product is a forest, one tree per factor group, because the invertible
G4ip rules that would split it are absorbed by the algebra.

All comparisons are up to commutativity of products and sums.  When a
formula keeps ``⊤`` as a disjunct the exp-log forms on the two sides of an
absorbed invertible step can also differ by unit laws alone, so equality
falls back to comparing after a unit clean-up (see :func:`same_nf`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from . import normalize as N
from .g4ip import (
    INVERTIBLE,
    LABELS,
    LATEX_LABELS,
    CheckResult,
    Derivation,
    ResourceLimit,
    RuleTag,
    _first_invertible,
    apply_rule,
    check,
    prove,
)
from .interp import DEFAULT, AuditReport, Valuation, Value, add, eval_value, power
from .normalize import ONE, Conj, Factor, Prime, Sum
from .syntax import (
    Atom,
    Formula,
    Imp,
    Or,
    Sequent,
    formula_from_json,
    formula_to_json,
    sequent_from_json,
    sequent_to_json,
    simplify_sequent,
    simplify_top,
)

HS_RULES = (RuleTag.Axiom, RuleTag.OrR1, RuleTag.OrR2, RuleTag.ImpLAtom, RuleTag.ImpLImp)

SLOTS = {
    RuleTag.Axiom: ("p", "e"),
    RuleTag.OrR1: ("c1", "c2", "e"),
    RuleTag.OrR2: ("c1", "c2", "e"),
    RuleTag.ImpLAtom: ("c", "c0", "p", "e"),
    RuleTag.ImpLImp: ("c", "c1", "c2", "e1", "e2"),
}


class TranslationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Equality helpers


def unit_normal(e) -> N.NF:
    """Re-normalize after removing units: ``enf(simplify_top(embed(e)))``."""
    return N.enf(simplify_top(N.embed(e)))


def same_nf(a, b) -> bool:
    if N.nf_equal(a, b, mod_comm=True):
        return True
    return N.nf_equal(unit_normal(a), unit_normal(b), mod_comm=True)


def product(cs) -> Conj:
    out: tuple = ()
    for c in cs:
        out += c.factors
    return Conj(out)


def _factor_bag(c: Conj) -> Counter:
    return Counter(N.canonicalize(Conj((f,))).factors[0] for f in c.factors)


def _covers(big: Conj, small: Conj) -> bool:
    need, have = _factor_bag(small), _factor_bag(big)
    return all(have[k] >= n for k, n in need.items())


def _atom_conj(p: Atom) -> Conj:
    return Conj((Factor(Prime(p), ONE),))


# ---------------------------------------------------------------------------
# Schemas


def schema_conclusion(rule: RuleTag, inst: dict) -> Conj:
    if rule is RuleTag.Axiom:
        p = inst["p"]
        return N.explog1(Prime(p), N.distrib1(_atom_conj(p), inst["e"]))
    if rule in (RuleTag.OrR1, RuleTag.OrR2):
        return N.explog1(N.nplus(inst["c1"], inst["c2"]), inst["e"])
    if rule is RuleTag.ImpLAtom:
        pc = _atom_conj(inst["p"])
        return N.explog(inst["c"], N.distrib1(N.explog(inst["c0"], pc), N.distrib1(pc, inst["e"])))
    if rule is RuleTag.ImpLImp:
        inner = N.explog(inst["c1"], N.explog(inst["c2"], inst["e1"]))
        return N.explog(inst["c"], N.distrib1(inner, inst["e2"]))
    raise ValueError(f"{rule} is not an HS rule")


def schema_premise(rule: RuleTag, inst: dict) -> Conj:
    """The product of all premises (1 for the axiom)."""
    if rule is RuleTag.Axiom:
        return ONE
    if rule is RuleTag.OrR1:
        return N.explog(inst["c1"], inst["e"])
    if rule is RuleTag.OrR2:
        c2 = inst["c2"]
        if isinstance(c2, Sum):
            return N.explog1(c2, inst["e"])
        return N.explog(c2, inst["e"])
    if rule is RuleTag.ImpLAtom:
        pc = _atom_conj(inst["p"])
        ctx = N.distrib(N.expand_partial(inst["c0"]), N.distrib1(pc, inst["e"]))
        return N.explog(inst["c"], ctx)
    if rule is RuleTag.ImpLImp:
        c, c1, c2, e1, e2 = (inst[k] for k in ("c", "c1", "c2", "e1", "e2"))
        left = N.explog(N.explog(c2, e1), N.distrib1(N.explog(c1, N.expand_partial(c2)), e2))
        right = N.explog(c, N.distrib(N.expand_partial(c1), e2))
        return N.ntimes(left, right)
    raise ValueError(f"{rule} is not an HS rule")


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True, eq=False)
class HsDerivation:
    rule: RuleTag
    conclusion: Conj
    instantiation: dict
    premises: tuple = ()

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def spine(self) -> list:
        return [n.rule for n in self.nodes()]


@dataclass(frozen=True, eq=False)
class HsProof:
    """A forest of HS derivations whose conclusions multiply to ``goal``.

    ``sequent`` records the G4ip sequent the goal was read from, if any.
    """

    goal: Conj
    roots: tuple
    sequent: Optional[Sequent] = None

    def nodes(self):
        for r in self.roots:
            yield from r.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def spine(self) -> list:
        return [n.rule for n in self.nodes()]

    @property
    def conclusion(self) -> N.NF:
        """The goal with its suspended sums distributed, i.e. ``enf`` of
        the sequent read as a formula."""
        return N.expand_partial(self.goal)

    @property
    def root(self) -> HsDerivation:
        if len(self.roots) != 1:
            raise ValueError(f"proof has {len(self.roots)} roots")
        return self.roots[0]


def _well_formed(rule: RuleTag, inst: dict) -> str:
    if rule not in SLOTS:
        return f"{rule} is not an HS rule"
    missing = [k for k in SLOTS[rule] if k not in inst]
    if missing:
        return f"missing {', '.join(missing)}"
    for k in ("c", "c0", "c1"):
        if k in inst and not isinstance(inst[k], Conj):
            return f"{k} must be a product"
    if rule in (RuleTag.ImpLImp,) and not isinstance(inst["c2"], Conj):
        return "c2 must be a product"
    if "p" in inst and not isinstance(inst["p"], Atom):
        return "p must be an atom"
    for k in ("e", "e1", "e2", "c2"):
        if k in inst and not isinstance(inst[k], (Conj, Sum)):
            return f"{k} must be a normal form"
    return ""


def check_hs(h: Union[HsProof, HsDerivation]) -> CheckResult:
    """Every node must equal its schema conclusion and its premises must
    multiply to the schema premise (mod commutativity)."""
    if isinstance(h, HsProof):
        got = product(r.conclusion for r in h.roots)
        if not same_nf(got, h.goal):
            return CheckResult(False, (), "roots do not multiply to the goal")
        roots = h.roots
    else:
        roots = (h,)
    stack = [(r, (i,)) for i, r in enumerate(roots)]
    while stack:
        node, path = stack.pop()
        if not isinstance(node, HsDerivation):
            return CheckResult(False, path, "not an HS node")
        reason = _well_formed(node.rule, node.instantiation)
        if reason:
            return CheckResult(False, path, reason)
        if not same_nf(node.conclusion, schema_conclusion(node.rule, node.instantiation)):
            return CheckResult(False, path, f"{node.rule.value}: conclusion does not match schema")
        got = product(p.conclusion for p in node.premises)
        if not same_nf(got, schema_premise(node.rule, node.instantiation)):
            return CheckResult(False, path, f"{node.rule.value}: premises do not match schema")
        stack += [(p, path + (i,)) for i, p in enumerate(node.premises)]
    return CheckResult(True)


# ---------------------------------------------------------------------------
# G4ip to HS


def ctx_nf(ctx) -> N.NF:
    """Distributed product of the context's normal forms (1 if empty)."""
    ctx = list(ctx)
    if not ctx:
        return ONE
    acc = N.enf(ctx[-1])
    for f in reversed(ctx[:-1]):
        acc = N.distrib(N.enf(f), acc)
    return acc


def sequent_nf(s: Sequent) -> Conj:
    return N.explog(N.enfpos(s.goal), ctx_nf(s.context))


def _rest(ctx: tuple, *drop: Formula) -> list:
    out = list(ctx)
    for f in drop:
        out.remove(f)
    return out


def _instantiate(d: Derivation) -> dict:
    s = d.conclusion
    ctx, goal = s.context, s.goal
    if d.rule is RuleTag.Axiom:
        p = ctx[d.principal]
        return {"p": p, "e": ctx_nf(_rest(ctx, p))}
    if d.rule in (RuleTag.OrR1, RuleTag.OrR2):
        return {"c1": N.enfpos(goal.left), "c2": N.enfpos(goal.right), "e": ctx_nf(ctx)}
    f = ctx[d.principal]
    if d.rule is RuleTag.ImpLAtom:
        p = f.left
        return {"c": N.enfpos(goal), "c0": N.enfpos(f.right), "p": p, "e": ctx_nf(_rest(ctx, f, p))}
    if d.rule is RuleTag.ImpLImp:
        return {
            "c": N.enfpos(goal),
            "c1": N.enfpos(f.right),
            "c2": N.enfpos(f.left.right),
            "e1": N.enf(f.left.left),
            "e2": ctx_nf(_rest(ctx, f)),
        }
    raise TranslationError(f"{d.rule.value} has no HS counterpart")


def _forest(d: Derivation) -> tuple:
    below: tuple = ()
    for p in d.premises:
        below += _forest(p)
    if d.rule in INVERTIBLE:
        return below
    inst = _instantiate(d)
    return (HsDerivation(d.rule, schema_conclusion(d.rule, inst), inst, below),)


def g4ip_to_hs(d: Derivation) -> HsProof:
    """Invertible nodes disappear; each non-invertible node becomes the HS
    node with the same tag, instantiated from its formulas."""
    res = check(d)
    if not res:
        raise TranslationError(f"derivation does not check: {res.reason} at {res.path}")
    return HsProof(sequent_nf(d.conclusion), _forest(d), d.conclusion)


# ---------------------------------------------------------------------------
# Pattern recognition and search


def _strip(c: Conj, f: Factor) -> Optional[Conj]:
    """``c`` with one occurrence of ``f`` removed, or None."""
    fs = list(c.factors)
    for i, g in enumerate(fs):
        if g == f:
            return Conj(tuple(fs[:i] + fs[i + 1:]))
    return None


def _sum_of(cs: list) -> N.NF:
    return cs[0] if len(cs) == 1 else Sum(tuple(cs))


def _split_sum(d: Sum) -> tuple[Conj, N.NF]:
    rest = d.summands[1:]
    return d.summands[0], rest[0] if len(rest) == 1 else Sum(rest)


def _impl_atom_choices(x: Conj) -> list:
    """(p, c0, e) for each atom p of the context that some other factor
    uses as a hypothesis; c0 collects every such factor, p removed."""
    out, seen = [], set()
    for f in x.factors:
        if not isinstance(f.base, Prime) or f.exp.factors or f.vars or f.base.atom in seen:
            continue
        p = f.base.atom
        pf = Factor(Prime(p), ONE)
        rest = _strip(x, pf)
        c0, e = [], []
        for g in rest.factors:
            stripped = _strip(g.exp, pf) if not g.vars else None
            if stripped is not None:
                c0.append(Factor(g.base, stripped, ()))
            else:
                e.append(g)
        if c0:
            seen.add(p)
            out.append((p, Conj(tuple(c0)), Conj(tuple(e))))
    return out


def _impl_imp_choices(x: Conj) -> list:
    """(c1, c2, e1, e2): a context factor b1^Z and a factor y = b2^W of Z
    with W non-trivial."""
    out = []
    for i, f in enumerate(x.factors):
        if f.vars:
            continue
        e2 = Conj(x.factors[:i] + x.factors[i + 1:])
        for j, y in enumerate(f.exp.factors):
            if y.vars or not y.exp.factors:
                continue
            c1 = Conj((Factor(f.base, Conj(f.exp.factors[:j] + f.exp.factors[j + 1:])),))
            c2 = Conj((Factor(y.base, ONE),))
            out.append((c1, c2, y.exp, e2))
    return out


def match_patterns(e: Conj) -> list:
    """HS rule instances whose conclusion is ``e`` (mod commutativity).

    Axiom and disjunction patterns are recognized on any product of
    factors sharing a base.  The implication rules are recognized on a
    single factor ``b^X`` with goal ``c = b^1``; for (->lP) both the
    all-at-once choice of ``c0`` and each single-factor choice are listed.
    """
    if isinstance(e, Sum):
        e = Conj((Factor(e, ONE),))
    fs = e.factors
    if not fs or any(f.vars for f in fs):
        return []
    out = []
    base = fs[0].base
    if all(f.base == base for f in fs):
        if isinstance(base, Prime):
            pf = Factor(base, ONE)
            rests = [_strip(f.exp, pf) for f in fs]
            if all(r is not None for r in rests):
                out.append((RuleTag.Axiom, {"p": base.atom, "e": _sum_of(rests)}))
        if isinstance(base, Sum):
            c1, c2 = _split_sum(base)
            ex = _sum_of([f.exp for f in fs])
            out.append((RuleTag.OrR1, {"c1": c1, "c2": c2, "e": ex}))
            out.append((RuleTag.OrR2, {"c1": c1, "c2": c2, "e": ex}))
    if len(fs) == 1 and not isinstance(fs[0].base, N.Ex):
        f = fs[0]
        c = Conj((Factor(f.base, ONE),))
        for p, c0, rest in _impl_atom_choices(f.exp):
            out.append((RuleTag.ImpLAtom, {"c": c, "c0": c0, "p": p, "e": rest}))
            if len(c0.factors) > 1:
                pf = Factor(Prime(p), ONE)
                for k, g in enumerate(c0.factors):
                    others = tuple(Factor(h.base, N.ntimes(h.exp, Conj((pf,))), h.vars) for h in c0.factors[:k] + c0.factors[k + 1:])
                    out.append((RuleTag.ImpLAtom, {"c": c, "c0": Conj((g,)), "p": p, "e": Conj(rest.factors + others)}))
        for c1, c2, e1, e2 in _impl_imp_choices(f.exp):
            out.append((RuleTag.ImpLImp, {"c": c, "c1": c1, "c2": c2, "e1": e1, "e2": e2}))
    return out


class _HsSearch:
    def __init__(self, node_budget: Optional[int] = None):
        self.memo: dict = {}
        self.budget = node_budget
        self.visited = 0

    def forest(self, c: Conj) -> Optional[tuple]:
        out: tuple = ()
        for f in c.factors:
            node = self.factor(f)
            if node is None:
                return None
            out += (node,)
        return out

    def factor(self, f: Factor) -> Optional[HsDerivation]:
        if f.vars or isinstance(f.base, N.Ex):
            raise ValueError("HS proof search is propositional only")
        key = N.canonicalize(Conj((f,)))
        if key in self.memo:
            return self.memo[key]
        self.visited += 1
        if self.budget is not None and self.visited > self.budget:
            raise ResourceLimit(f"node budget {self.budget} exceeded")
        self.memo[key] = None  # the measure decreases, so this never loops
        result = self._factor(f)
        self.memo[key] = result
        return result

    def _node(self, rule, inst) -> Optional[HsDerivation]:
        prem = self.forest(schema_premise(rule, inst))
        if prem is None:
            return None
        return HsDerivation(rule, schema_conclusion(rule, inst), inst, prem)

    def _factor(self, f: Factor) -> Optional[HsDerivation]:
        x, b = f.exp, f.base
        if isinstance(b, Prime):
            rest = _strip(x, Factor(b, ONE))
            if rest is not None:
                return self._node(RuleTag.Axiom, {"p": b.atom, "e": rest})
        c = Conj((Factor(b, ONE),))
        # the hypothesis p is kept, so this step never needs undoing
        for p, c0, e in _impl_atom_choices(x)[:1]:
            return self._node(RuleTag.ImpLAtom, {"c": c, "c0": c0, "p": p, "e": e})
        for c1, c2, e1, e2 in _impl_imp_choices(x):
            d = self._node(RuleTag.ImpLImp, {"c": c, "c1": c1, "c2": c2, "e1": e1, "e2": e2})
            if d is not None:
                return d
        if isinstance(b, Sum):
            c1, c2 = _split_sum(b)
            for rule in (RuleTag.OrR1, RuleTag.OrR2):
                d = self._node(rule, {"c1": c1, "c2": c2, "e": x})
                if d is not None:
                    return d
        return None


def prove_hs(e: N.NF, node_budget: Optional[int] = None) -> Optional[HsProof]:
    """Depth-first HS search; a sum goal is read as ``d^1``."""
    if isinstance(e, Sum):
        e = Conj((Factor(e, ONE),))
    roots = _HsSearch(node_budget).forest(e)
    return None if roots is None else HsProof(e, roots)


def prove_hs_formula(f, node_budget: Optional[int] = None) -> Optional[HsProof]:
    """HS search for ``⊢ f`` (or a sequent), after unit simplification."""
    s = f if isinstance(f, Sequent) else Sequent((), f)
    s = simplify_sequent(s)
    goal = sequent_nf(s)
    roots = _HsSearch(node_budget).forest(goal)
    return None if roots is None else HsProof(goal, roots, s)


# ---------------------------------------------------------------------------
# HS to G4ip


def read_sequent(goal: Conj) -> Sequent:
    """The G4ip sequent a normal form stands for: ``⊢ embed(goal)``."""
    return simplify_sequent(Sequent((), N.embed(goal)))


class _Builder:
    def __init__(self, fallback: bool):
        self.fallback = fallback
        self.fallbacks = 0

    def build(self, s: Sequent, pool: tuple, pending=None) -> Derivation:
        inv = _first_invertible(s)
        if inv is not None:
            rule, i = inv
            subs = tuple(self.build(p, pool, pending) for p in apply_rule(s, rule, i))
            return Derivation(rule, s, i, subs)
        nf = sequent_nf(s)
        for node in pool:
            if _covers(node.conclusion, nf) or same_nf(node.conclusion, nf):
                d = self.apply(s, node)
                if d is not None:
                    return d
        if pending is not None:
            d = self.apply(s, *pending)
            if d is not None:
                return d
        if not self.fallback:
            raise TranslationError(f"no HS node matches {s}")
        d = prove(s)
        if d is None:
            raise TranslationError(f"HS proof does not cover {s}")
        self.fallbacks += 1
        return d

    def apply(self, s: Sequent, node: HsDerivation, remaining: Optional[Counter] = None):
        ctx, goal, inst = s.context, s.goal, node.instantiation
        rule = node.rule
        if rule is RuleTag.Axiom:
            p = inst["p"]
            if goal == p and p in ctx:
                return Derivation(RuleTag.Axiom, s, ctx.index(p))
            return None
        if rule in (RuleTag.OrR1, RuleTag.OrR2):
            if not isinstance(goal, Or):
                return None
            (prem,) = apply_rule(s, rule, None)
            return Derivation(rule, s, None, (self.build(prem, node.premises),))
        if rule is RuleTag.ImpLAtom:
            p = inst["p"]
            want = _factor_bag(inst["c0"]) if remaining is None else remaining
            for i, f in enumerate(ctx):
                if not (isinstance(f, Imp) and f.left == p and p in ctx[:i] + ctx[i + 1:]):
                    continue
                got = _factor_bag(N.enfpos(f.right))
                if all(want[k] >= n for k, n in got.items()):
                    left = want - got
                    (prem,) = apply_rule(s, rule, i)
                    pending = (node, left) if left else None
                    return Derivation(rule, s, i, (self.build(prem, node.premises, pending),))
            return None
        if rule is RuleTag.ImpLImp:
            for i, f in enumerate(ctx):
                if not (isinstance(f, Imp) and isinstance(f.left, Imp)):
                    continue
                if (
                    same_nf(N.enfpos(f.right), inst["c1"])
                    and same_nf(N.enfpos(f.left.right), inst["c2"])
                    and same_nf(N.enf(f.left.left), inst["e1"])
                ):
                    p1, p2 = apply_rule(s, rule, i)
                    return Derivation(
                        rule, s, i, (self.build(p1, node.premises), self.build(p2, node.premises))
                    )
            return None
        return None


def translate_hs(h, target: Optional[Sequent] = None, fallback: bool = True) -> tuple[Derivation, int]:
    """A G4ip derivation following ``h`` and the number of leaves where
    the context's shape forced a detour through the G4ip prover."""
    res = check_hs(h)
    if not res:
        raise TranslationError(f"HS proof does not check: {res.reason} at {res.path}")
    if isinstance(h, HsDerivation):
        h = HsProof(h.conclusion, (h,))
    if target is None:
        target = h.sequent if h.sequent is not None else read_sequent(h.goal)
    b = _Builder(fallback)
    d = b.build(simplify_sequent(target), h.roots)
    return d, b.fallbacks


def hs_to_g4ip(h, target: Optional[Sequent] = None) -> Derivation:
    return translate_hs(h, target)[0]


# ---------------------------------------------------------------------------
# Values


def nf_value(e, v: Valuation = DEFAULT) -> Value:
    if isinstance(e, Conj):
        out = Value()
        for f in e.factors:
            out = out * nf_value(f, v)
        return out
    if isinstance(e, Sum):
        out = nf_value(e.summands[0], v)
        for c in e.summands[1:]:
            out = add(out, nf_value(c, v))
        return out
    if isinstance(e, Factor):
        if e.vars:
            raise ValueError("quantified normal forms have no value")
        return power(nf_value(e.base, v), nf_value(e.exp, v))
    if isinstance(e, Prime):
        return eval_value(e.atom, v)
    raise ValueError("quantified normal forms have no value")


def hs_value_audit(h, v: Valuation = DEFAULT) -> list:
    """Each node's premise product must be strictly below its conclusion."""
    nodes = h.nodes()
    out = []
    for n in nodes:
        prem = Value()
        for p in n.premises:
            prem = prem * nf_value(p.conclusion, v)
        concl = nf_value(n.conclusion, v)
        c = prem.compare(concl)
        verdict = "strictly-less" if c < 0 else "VIOLATION"
        detail = "" if c < 0 else "premise value is not below the conclusion"
        out.append(AuditReport(n.rule, prem, concl, verdict, detail))
    return out


# ---------------------------------------------------------------------------
# Serialization and display


def _inst_to_json(inst: dict) -> dict:
    return {
        k: formula_to_json(v) if isinstance(v, Formula) else N.nf_to_json(v)
        for k, v in sorted(inst.items())
    }


def _inst_from_json(d: dict) -> dict:
    return {k: formula_from_json(v) if k == "p" else N.nf_from_json(v) for k, v in d.items()}


def hs_to_json(h) -> dict:
    if isinstance(h, HsProof):

        return {
            "goal": N.nf_to_json(h.goal),
            "sequent": None if h.sequent is None else sequent_to_json(h.sequent),
            "roots": [hs_to_json(r) for r in h.roots],
        }
    return {
        "rule": h.rule.value,
        "conclusion": N.nf_to_json(h.conclusion),
        "instantiation": _inst_to_json(h.instantiation),
        "premises": [hs_to_json(p) for p in h.premises],
    }


def hs_from_json(d: dict):
    if "roots" in d:

        seq = d.get("sequent")
        return HsProof(
            N.nf_from_json(d["goal"]),
            tuple(hs_from_json(r) for r in d["roots"]),
            None if seq is None else sequent_from_json(seq),
        )
    rule = RuleTag(d["rule"])
    if rule not in HS_RULES:
        raise ValueError(f"{rule.value} is not an HS rule")
    return HsDerivation(
        rule,
        N.nf_from_json(d["conclusion"]),
        _inst_from_json(d["instantiation"]),
        tuple(hs_from_json(p) for p in d.get("premises", ())),
    )


def hs_to_text(h, units: bool = False) -> str:

    lines = []

    def go(n: HsDerivation, indent: str):
        lines.append(f"{indent}{N.print_nf(n.conclusion, units)}    ({LABELS[n.rule]})")
        for p in n.premises:
            go(p, indent + "  ")

    roots = h.roots if isinstance(h, HsProof) else (h,)
    for r in roots:
        go(r, "")
    return "\n".join(lines)


def hs_to_latex(h, units: bool = False) -> str:

    def render(c) -> str:
        s = c if isinstance(c, str) else N.print_nf(c, units)
        out, i = [], 0
        while i < len(s):
            if s[i] == "^" and i + 1 < len(s) and s[i + 1] == "(":
                depth, j = 0, i + 1
                while j < len(s):
                    depth += {"(": 1, ")": -1}.get(s[j], 0)
                    if depth == 0:
                        break
                    j += 1
                out.append("^{" + render(s[i + 2:j]) + "}")
                i = j + 1
            else:
                out.append(s[i])
                i += 1
        return "".join(out).replace("·", r"\cdot ")

    lines = [r"\begin{prooftree}"]

    def go(n: HsDerivation):
        for p in n.premises:
            go(p)
        if not n.premises:
            lines.append(r"\AxiomC{}")
        lines.append(rf"\RightLabel{{$({LATEX_LABELS[n.rule]})$}}")
        k = min(max(1, len(n.premises)), 5)
        inf = ("UnaryInfC", "BinaryInfC", "TrinaryInfC", "QuaternaryInfC", "QuinaryInfC")[k - 1]
        lines.append(rf"\{inf}{{${render(n.conclusion)}$}}")

    roots = h.roots if isinstance(h, HsProof) else (h,)
    for r in roots:
        go(r)
    lines.append(r"\end{prooftree}")
    return "\n".join(lines)
