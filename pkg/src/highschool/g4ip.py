"""The contraction-free sequent calculus G4ip.

Derivations are plain trees of :class:`Derivation` nodes.  ``prove`` is a
decision procedure; ``check`` validates a tree node by node without
reusing the prover's rule code; ``oracle_decide`` is an independent G3ip
search with loop checking, kept around to cross-validate ``prove``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    And,
    Atom,
    Formula,
    Imp,
    Or,
    Sequent,
    Top,
    is_propositional,
    print_logical,
    sequent_from_json,
    sequent_to_json,
    simplify_sequent,
    size as fsize,
)

BOT = Atom("bot")


class RuleTag(str, enum.Enum):
    Axiom = "axiom"
    OrR1 = "orr1"
    OrR2 = "orr2"
    ImpLAtom = "implatom"
    ImpLImp = "implimp"
    ImpR = "impr"
    AndR = "andr"
    OrL = "orl"
    AndL = "andl"
    ImpLAnd = "impland"
    ImpLOr = "implor"
    FalsumL = "falsuml"

    @property
    def invertible(self) -> bool:
        return self in INVERTIBLE


INVERTIBLE = frozenset(
    {RuleTag.ImpR, RuleTag.AndR, RuleTag.OrL, RuleTag.AndL, RuleTag.ImpLAnd, RuleTag.ImpLOr}
)
NON_INVERTIBLE = frozenset(
    {RuleTag.Axiom, RuleTag.OrR1, RuleTag.OrR2, RuleTag.ImpLAtom, RuleTag.ImpLImp}
)
RIGHT_RULES = frozenset({RuleTag.OrR1, RuleTag.OrR2, RuleTag.ImpR, RuleTag.AndR})

LABELS = {
    RuleTag.Axiom: "axiom",
    RuleTag.OrR1: "∨r1",
    RuleTag.OrR2: "∨r2",
    RuleTag.ImpLAtom: "→lP",
    RuleTag.ImpLImp: "→l→",
    RuleTag.ImpR: "→r",
    RuleTag.AndR: "∧r",
    RuleTag.OrL: "∨l",
    RuleTag.AndL: "∧l",
    RuleTag.ImpLAnd: "→l∧",
    RuleTag.ImpLOr: "→l∨",
    RuleTag.FalsumL: "⊥l",
}

LATEX_LABELS = {
    RuleTag.Axiom: r"\text{axiom}",
    RuleTag.OrR1: r"\vee_r^1",
    RuleTag.OrR2: r"\vee_r^2",
    RuleTag.ImpLAtom: r"\to_l^P",
    RuleTag.ImpLImp: r"\to_l^\to",
    RuleTag.ImpR: r"\to_r",
    RuleTag.AndR: r"\wedge_r",
    RuleTag.OrL: r"\vee_l",
    RuleTag.AndL: r"\wedge_l",
    RuleTag.ImpLAnd: r"\to_l^\wedge",
    RuleTag.ImpLOr: r"\to_l^\vee",
    RuleTag.FalsumL: r"\bot_l",
}


class RuleError(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class Derivation:
    rule: RuleTag
    conclusion: Sequent
    principal: Optional[int] = None
    premises: tuple = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def non_invertible_count(self) -> int:
        return sum(1 for n in self.nodes() if n.rule in NON_INVERTIBLE)

    def spine(self) -> list:
        """Non-invertible rule tags in pre-order."""
        return [n.rule for n in self.nodes() if n.rule in NON_INVERTIBLE]


@dataclass(frozen=True)
class ProverConfig:
    ex_falso: bool = False
    node_budget: Optional[int] = None


# ---------------------------------------------------------------------------
# Rule application


def _without(ctx: tuple, i: int) -> tuple:
    return ctx[:i] + ctx[i + 1:]


def apply_rule(s: Sequent, rule: RuleTag, principal: Optional[int] = None) -> tuple:
    """Premises of ``rule`` applied to ``s`` (bottom-up)."""
    ctx, goal = s.context, s.goal
    if rule in RIGHT_RULES:
        if rule is RuleTag.ImpR and isinstance(goal, Imp):
            return (Sequent(ctx + (goal.left,), goal.right),)
        if rule is RuleTag.AndR and isinstance(goal, And):
            return (Sequent(ctx, goal.left), Sequent(ctx, goal.right))
        if rule is RuleTag.AndR and isinstance(goal, Top):
            return ()
        if rule is RuleTag.OrR1 and isinstance(goal, Or):
            return (Sequent(ctx, goal.left),)
        if rule is RuleTag.OrR2 and isinstance(goal, Or):
            return (Sequent(ctx, goal.right),)
        raise RuleError(f"{rule.value} does not apply to {s}")
    if principal is None or not 0 <= principal < len(ctx):
        raise RuleError(f"{rule.value} needs a principal formula")
    f, rest = ctx[principal], _without(ctx, principal)
    if rule is RuleTag.Axiom and isinstance(f, Atom) and f == goal:
        return ()
    if rule is RuleTag.FalsumL and f == BOT:
        return ()
    if rule is RuleTag.AndL:
        if isinstance(f, And):
            return (Sequent(rest + (f.left, f.right), goal),)
        if isinstance(f, Top):
            return (Sequent(rest, goal),)
    if rule is RuleTag.OrL and isinstance(f, Or):
        return (Sequent(rest + (f.left,), goal), Sequent(rest + (f.right,), goal))
    if isinstance(f, Imp):
        a, h = f.left, f.right
        if rule is RuleTag.ImpLAnd:
            if isinstance(a, And):
                return (Sequent(rest + (Imp(a.right, Imp(a.left, h)),), goal),)
            if isinstance(a, Top):
                return (Sequent(rest + (h,), goal),)
        if rule is RuleTag.ImpLOr and isinstance(a, Or):
            return (Sequent(rest + (Imp(a.left, h), Imp(a.right, h)), goal),)
        if rule is RuleTag.ImpLAtom and isinstance(a, Atom) and a in rest:
            return (Sequent(rest + (h,), goal),)
        if rule is RuleTag.ImpLImp and isinstance(a, Imp):
            return (
                Sequent(rest + (Imp(a.right, h),), a),
                Sequent(rest + (h,), goal),
            )
    raise RuleError(f"{rule.value} does not apply to {s} at {principal}")


_LEFT_INVERTIBLE = (RuleTag.AndL, RuleTag.ImpLAnd, RuleTag.ImpLOr, RuleTag.OrL)


def _matches(f: Formula, rule: RuleTag) -> bool:
    if rule is RuleTag.AndL:
        return isinstance(f, (And, Top))
    if rule is RuleTag.OrL:
        return isinstance(f, Or)
    if not isinstance(f, Imp):
        return False
    if rule is RuleTag.ImpLAnd:
        return isinstance(f.left, (And, Top))
    if rule is RuleTag.ImpLOr:
        return isinstance(f.left, Or)
    if rule is RuleTag.ImpLAtom:
        return isinstance(f.left, Atom)
    if rule is RuleTag.ImpLImp:
        return isinstance(f.left, Imp)
    return False


def applicable_rules(s: Sequent, ex_falso: bool = False) -> list:
    """Every rule instance that applies to ``s`` as ``(tag, principal)``.

    Invertible rules come first, then non-invertible ones, each group in a
    fixed tag order with the leftmost principal first.
    """
    ctx, goal = s.context, s.goal
    out = []
    for rule in (RuleTag.AndL, RuleTag.ImpLAnd, RuleTag.ImpLOr):
        out += [(rule, i) for i, f in enumerate(ctx) if _matches(f, rule)]
    if isinstance(goal, Imp):
        out.append((RuleTag.ImpR, None))
    if isinstance(goal, (And, Top)):
        out.append((RuleTag.AndR, None))
    out += [(RuleTag.OrL, i) for i, f in enumerate(ctx) if isinstance(f, Or)]
    out += [(RuleTag.Axiom, i) for i, f in enumerate(ctx) if isinstance(f, Atom) and f == goal]
    if ex_falso:
        out += [(RuleTag.FalsumL, i) for i, f in enumerate(ctx) if f == BOT]
    out += [
        (RuleTag.ImpLAtom, i)
        for i, f in enumerate(ctx)
        if _matches(f, RuleTag.ImpLAtom) and f.left in _without(ctx, i)
    ]
    out += [(RuleTag.ImpLImp, i) for i, f in enumerate(ctx) if _matches(f, RuleTag.ImpLImp)]
    if isinstance(goal, Or):
        out += [(RuleTag.OrR1, None), (RuleTag.OrR2, None)]
    return out


def _first_invertible(s: Sequent):
    ctx = s.context
    for rule in (RuleTag.AndL, RuleTag.ImpLAnd, RuleTag.ImpLOr):
        for i, f in enumerate(ctx):
            if _matches(f, rule):
                return rule, i
    if isinstance(s.goal, Imp):
        return RuleTag.ImpR, None
    if isinstance(s.goal, (And, Top)):
        return RuleTag.AndR, None
    for i, f in enumerate(ctx):
        if isinstance(f, Or):
            return RuleTag.OrL, i
    return None


# ---------------------------------------------------------------------------
# Proof search


class _Search:
    def __init__(self, config: ProverConfig):
        self.config = config
        self.memo: dict = {}
        self.visited = 0

    def run(self, s: Sequent) -> Optional[Derivation]:
        if s in self.memo:
            return self.memo[s]
        self.visited += 1
        budget = self.config.node_budget
        if budget is not None and self.visited > budget:
            raise ResourceLimit(f"node budget {budget} exceeded")
        result = self._run(s)
        self.memo[s] = result
        return result

    def _build(self, s, rule, i) -> Optional[Derivation]:
        subs = []
        for p in apply_rule(s, rule, i):
            d = self.run(p)
            if d is None:
                return None
            subs.append(d)
        return Derivation(rule, s, i, tuple(subs))

    def _run(self, s: Sequent) -> Optional[Derivation]:
        inv = _first_invertible(s)
        if inv is not None:
            # invertible: failure of a premise is final
            return self._build(s, *inv)
        ctx, goal = s.context, s.goal
        for i, f in enumerate(ctx):
            if isinstance(f, Atom) and f == goal:
                return Derivation(RuleTag.Axiom, s, i)
        if self.config.ex_falso:
            for i, f in enumerate(ctx):
                if f == BOT:
                    return Derivation(RuleTag.FalsumL, s, i)
        # P, P->F |- G and P, F |- G are interderivable, so no backtracking
        for i, f in enumerate(ctx):
            if _matches(f, RuleTag.ImpLAtom) and f.left in _without(ctx, i):
                return self._build(s, RuleTag.ImpLAtom, i)
        for i, f in enumerate(ctx):
            if _matches(f, RuleTag.ImpLImp):
                d = self._build(s, RuleTag.ImpLImp, i)
                if d is not None:
                    return d
        if isinstance(goal, Or):
            for rule in (RuleTag.OrR1, RuleTag.OrR2):
                d = self._build(s, rule, None)
                if d is not None:
                    return d
        return None


def prove(s, config: ProverConfig = ProverConfig()) -> Optional[Derivation]:
    """A G4ip derivation of ``s`` (after unit simplification), or None."""
    if isinstance(s, Formula):
        s = Sequent((), s)
    if not all(is_propositional(f) for f in s.context + (s.goal,)):
        raise ValueError("proof search is propositional only")
    return _Search(config).run(simplify_sequent(s))


def is_provable(s, config: ProverConfig = ProverConfig()) -> bool:
    return prove(s, config) is not None


# ---------------------------------------------------------------------------
# Checking


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    path: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.ok


def _ms(fs) -> Counter:
    return Counter(fs)


def _check_node(d: Derivation, ex_falso: bool) -> str:
    """Empty string if the node instantiates its schema, else a reason."""
    s, rule, ps = d.conclusion, d.rule, d.premises
    ctx, goal = _ms(s.context), s.goal
    prem = [(p.conclusion.goal, _ms(p.conclusion.context)) for p in ps]

    def arity(n):
        return "" if len(ps) == n else f"expected {n} premises, found {len(ps)}"

    if rule in RIGHT_RULES:
        if d.principal is not None:
            return "right rule with a principal formula"
        if rule is RuleTag.ImpR:
            if not isinstance(goal, Imp):
                return "goal is not an implication"
            return arity(1) or (
                "" if prem[0] == (goal.right, ctx + _ms([goal.left])) else "premise mismatch"
            )
        if rule is RuleTag.AndR:
            if isinstance(goal, Top):
                return arity(0)
            if not isinstance(goal, And):
                return "goal is not a conjunction"
            want = [(goal.left, ctx), (goal.right, ctx)]
            return arity(2) or ("" if prem == want else "premise mismatch")
        if not isinstance(goal, Or):
            return "goal is not a disjunction"
        side = goal.left if rule is RuleTag.OrR1 else goal.right
        return arity(1) or ("" if prem[0] == (side, ctx) else "premise mismatch")

    if d.principal is None or not 0 <= d.principal < len(s.context):
        return "missing principal formula"
    f = s.context[d.principal]
    rest = ctx - _ms([f])

    if rule is RuleTag.Axiom:
        return arity(0) or ("" if isinstance(f, Atom) and f == goal else "not an axiom")
    if rule is RuleTag.FalsumL:
        if not ex_falso:
            return "ex falso is disabled"
        return arity(0) or ("" if f == BOT else "principal is not bot")
    if rule is RuleTag.AndL:
        if isinstance(f, Top):
            want = [(goal, rest)]
        elif isinstance(f, And):
            want = [(goal, rest + _ms([f.left, f.right]))]
        else:
            return "principal is not a conjunction"
        return arity(1) or ("" if prem == want else "premise mismatch")
    if rule is RuleTag.OrL:
        if not isinstance(f, Or):
            return "principal is not a disjunction"
        want = [(goal, rest + _ms([f.left])), (goal, rest + _ms([f.right]))]
        return arity(2) or ("" if prem == want else "premise mismatch")
    if not isinstance(f, Imp):
        return "principal is not an implication"
    a, h = f.left, f.right
    if rule is RuleTag.ImpLAnd:
        if isinstance(a, Top):
            want = [(goal, rest + _ms([h]))]
        elif isinstance(a, And):
            want = [(goal, rest + _ms([Imp(a.right, Imp(a.left, h))]))]
        else:
            return "antecedent is not a conjunction"
        return arity(1) or ("" if prem == want else "premise mismatch")
    if rule is RuleTag.ImpLOr:
        if not isinstance(a, Or):
            return "antecedent is not a disjunction"
        want = [(goal, rest + _ms([Imp(a.left, h), Imp(a.right, h)]))]
        return arity(1) or ("" if prem == want else "premise mismatch")
    if rule is RuleTag.ImpLAtom:
        if not isinstance(a, Atom) or rest[a] == 0:
            return "antecedent atom missing from the context"
        return arity(1) or ("" if prem == [(goal, rest + _ms([h]))] else "premise mismatch")
    if rule is RuleTag.ImpLImp:
        if not isinstance(a, Imp):
            return "antecedent is not an implication"
        want = [(a, rest + _ms([Imp(a.right, h)])), (goal, rest + _ms([h]))]
        return arity(2) or ("" if prem == want else "premise mismatch")
    return f"unknown rule {rule!r}"


def check(d: Derivation, ex_falso: bool = False) -> CheckResult:
    """Validate every node against its rule schema.

    On failure the result carries the path (premise indices from the root)
    to the first offending node.
    """
    stack = [(d, ())]
    while stack:
        node, path = stack.pop()
        if not isinstance(node, Derivation) or not isinstance(node.rule, RuleTag):
            return CheckResult(False, path, "not a derivation node")
        reason = _check_node(node, ex_falso)
        if reason:
            return CheckResult(False, path, f"{node.rule.value}: {reason}")
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + (i,)))
    return CheckResult(True)


# ---------------------------------------------------------------------------
# Independent oracle: G3ip with loop checking


class SizeCap(ValueError):
    pass


def oracle_decide(s, ex_falso: bool = False, size_cap: int = 40) -> bool:
    """Decide provability by G3ip search over set contexts.

    The implication-left rule keeps its principal formula; loops are cut by
    remembering the sequents already on the current branch.
    """
    if isinstance(s, Formula):
        s = Sequent((), s)
    s = simplify_sequent(s)
    total = sum(fsize(f) for f in s.context) + fsize(s.goal)
    if total > size_cap:
        raise SizeCap(f"sequent of size {total} exceeds cap {size_cap}")
    proved: set = set()
    return _g3(frozenset(s.context), s.goal, frozenset(), proved, ex_falso)


def _saturate(ctx: frozenset) -> tuple[frozenset, list]:
    """Apply the invertible non-branching left rules; return the
    saturated context and the disjunctions still to split."""
    todo = list(ctx)
    out = set()
    while todo:
        f = todo.pop()
        if f in out:
            continue
        if isinstance(f, And):
            todo += [f.left, f.right]
        elif isinstance(f, Top):
            pass
        else:
            out.add(f)
    return frozenset(out), [f for f in out if isinstance(f, Or)]


def _g3(ctx: frozenset, goal: Formula, history: frozenset, proved: set, ex_falso: bool) -> bool:
    ctx, ors = _saturate(ctx)
    key = (ctx, goal)
    if key in proved:
        return True
    if key in history:
        return False
    history = history | {key}

    def done():
        proved.add(key)
        return True

    if isinstance(goal, Top) or goal in ctx:
        return done()
    if ex_falso and BOT in ctx:
        return done()
    if isinstance(goal, Imp):
        if _g3(ctx | {goal.left}, goal.right, history, proved, ex_falso):
            return done()
        return False
    if isinstance(goal, And):
        if _g3(ctx, goal.left, history, proved, ex_falso) and _g3(
            ctx, goal.right, history, proved, ex_falso
        ):
            return done()
        return False
    if ors:
        f = min(ors, key=str)
        rest = ctx - {f}
        if _g3(rest | {f.left}, goal, history, proved, ex_falso) and _g3(
            rest | {f.right}, goal, history, proved, ex_falso
        ):
            return done()
        return False
    if isinstance(goal, Or):
        for side in (goal.left, goal.right):
            if _g3(ctx, side, history, proved, ex_falso):
                return done()
    for f in sorted((f for f in ctx if isinstance(f, Imp)), key=str):
        if f.right in ctx:
            continue
        if _g3(ctx, f.left, history, proved, ex_falso) and _g3(
            ctx | {f.right}, goal, history, proved, ex_falso
        ):
            return done()
    return False


# ---------------------------------------------------------------------------
# Serialization


def derivation_to_json(d: Derivation) -> dict:
    return {
        "rule": d.rule.value,
        "sequent": sequent_to_json(d.conclusion),
        "principal": d.principal,
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(data: dict) -> Derivation:
    try:
        rule = RuleTag(data["rule"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad rule in derivation: {data.get('rule')!r}") from exc
    return Derivation(
        rule,
        sequent_from_json(data["sequent"]),
        data.get("principal"),
        tuple(derivation_from_json(p) for p in data.get("premises", ())),
    )


def latex_formula(f: Formula) -> str:
    s = print_logical(f)
    for a, b in (("->", r"\to "), ("&", r"\land "), ("|", r"\lor "), ("top", r"\top ")):
        s = s.replace(a, b)
    s = s.replace("forall ", r"\forall ").replace("exists ", r"\exists ")
    return s


def latex_sequent(s: Sequent) -> str:
    ctx = ", ".join(latex_formula(f) for f in s.context)
    return f"{ctx} \\vdash {latex_formula(s.goal)}".strip()


def derivation_to_latex(d: Derivation) -> str:
    """A bussproofs ``prooftree`` environment."""
    lines = [r"\begin{prooftree}"]

    def go(n: Derivation):
        for p in n.premises:
            go(p)
        if not n.premises:
            lines.append(r"\AxiomC{}")
        lines.append(rf"\RightLabel{{$({LATEX_LABELS[n.rule]})$}}")
        k = max(1, len(n.premises))
        inf = {1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC"}[k]
        lines.append(rf"\{inf}{{${latex_sequent(n.conclusion)}$}}")

    go(d)
    lines.append(r"\end{prooftree}")
    return "\n".join(lines)


def derivation_to_text(d: Derivation, indent: str = "") -> str:
    lines = [f"{indent}{d.conclusion}    ({LABELS[d.rule]})"]
    for p in d.premises:
        lines.append(derivation_to_text(p, indent + "  "))
    return "\n".join(lines)
