"""Arithmetic interpretation of formulas and sequents.

Atoms denote integers >= 2, conjunction is product, disjunction is sum,
``G -> F`` is ``F^G`` and a sequent ``Γ ⊢ G`` is ``G^Γ``.  Values grow as
exponent towers, so they are kept as products of powers over pairwise
coprime bases; products and powers never materialize the number, and only
sums do.  Equality is then exact and order is decided with interval
arithmetic at increasing precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from mpmath import iv, mp

from .g4ip import INVERTIBLE, NON_INVERTIBLE, RuleTag, apply_rule
from .syntax import (
    And,
    Atom,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Top,
    TOP,
    Var,
    atoms,
    is_propositional,
    simplify_sequent,
    simplify_top,
)

DEFAULT_GUARD = 10**5  # decimal digits


class ValueTooLarge(ArithmeticError):
    """A value would exceed the digit guard if materialized."""


class QuantifierError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Values


def _refine(pairs: Iterable[tuple[int, int]]) -> tuple:
    """Rewrite a product of powers over pairwise coprime bases."""
    items: dict[int, int] = {}
    for b, e in pairs:
        if b > 1 and e:
            items[b] = items.get(b, 0) + e
    while True:
        items = {b: e for b, e in items.items() if e}
        bases = sorted(items)
        split = None
        for x, y in itertools.combinations(bases, 2):
            g = math.gcd(x, y)
            if g > 1:
                split = (x, y, g)
                break
        if split is None:
            return tuple(sorted(items.items()))
        x, y, g = split
        ex, ey = items.pop(x), items.pop(y)
        for b, e in ((g, ex + ey), (x // g, ex), (y // g, ey)):
            if b > 1:
                items[b] = items.get(b, 0) + e


def _set_prec(bits: int) -> int:
    old = iv.prec
    iv.prec = bits
    return old


@dataclass(frozen=True)
class Value:
    """A positive integer as ``prod b^e`` with pairwise coprime ``b``."""

    parts: tuple = ()

    @staticmethod
    def of(n: int) -> "Value":
        if n < 1:
            raise ValueError(f"values are positive, got {n}")
        return Value(((n, 1),)) if n > 1 else ONE

    def __mul__(self, other: "Value") -> "Value":
        if not other.parts:
            return self
        if not self.parts:
            return other
        return Value(_refine(self.parts + other.parts))

    def power(self, k: int) -> "Value":
        if k < 0:
            raise ValueError("negative exponent")
        return Value(tuple((b, e * k) for b, e in self.parts)) if k else ONE

    def log10(self):
        """Decimal logarithm; an mpf when it would overflow a float."""
        try:
            return sum(e * math.log10(b) for b, e in self.parts)
        except OverflowError:
            return mp.fsum(mp.mpf(e) * mp.log10(b) for b, e in self.parts)

    def digits(self) -> float:
        return self.log10() + 1

    def to_int(self, guard: int = DEFAULT_GUARD) -> int:
        if self.digits() > guard:
            raise ValueTooLarge(f"value has about {mp.nstr(self.log10(), 3)} digits")
        out = 1
        for b, e in self.parts:
            out *= b**e
        return out

    def compare(self, other: "Value") -> int:
        """-1, 0 or 1, exactly."""
        diff = _refine(self.parts + tuple((b, -e) for b, e in other.parts))
        if not diff:
            return 0
        if all(e > 0 for _, e in diff):
            return 1
        if all(e < 0 for _, e in diff):
            return -1
        bits = 64 + max(max(abs(e) for _, e in diff).bit_length(), 1)
        while bits < 1 << 24:
            old = _set_prec(bits)
            try:
                total = iv.mpf(0)
                for b, e in diff:
                    total += iv.mpf(e) * iv.log(b)
            finally:
                iv.prec = old
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
            bits *= 2
        raise ValueTooLarge("comparison needs more than 2^24 bits")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self):
        try:
            return str(self.to_int(guard=60))
        except ValueTooLarge:
            return f"~10^{mp.nstr(self.log10(), 6)}"


ONE = Value()


def add(a: Value, b: Value, guard: int = DEFAULT_GUARD) -> Value:
    return Value.of(a.to_int(guard) + b.to_int(guard))


def power(base: Value, exp: Value, guard: int = DEFAULT_GUARD) -> Value:
    if not base.parts:
        return ONE
    return base.power(exp.to_int(guard))


# ---------------------------------------------------------------------------
# Valuations


@dataclass(frozen=True)
class Valuation:
    """Atom values, keyed by printed atom; unlisted atoms get ``default``."""

    values: tuple = ()
    default: int = 2

    def __init__(self, values: Optional[Mapping[str, int]] = None, default: int = 2):
        items = tuple(sorted(dict(values or {}).items()))
        for name, v in items:
            if not isinstance(v, int) or v < 2:
                raise ValueError(f"atom {name} must be valued >= 2, got {v!r}")
        if not isinstance(default, int) or default < 2:
            raise ValueError(f"default value must be >= 2, got {default!r}")
        object.__setattr__(self, "values", items)
        object.__setattr__(self, "default", default)

    def __getitem__(self, name: str) -> int:
        for k, v in self.values:
            if k == name:
                return v
        return self.default

    def as_dict(self) -> dict:
        return dict(self.values)


DEFAULT = Valuation()


def _atom_key(a: Atom) -> str:
    if not a.args:
        return a.name
    return f"{a.name}({', '.join(map(str, a.args))})"


def eval_value(f: Formula, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> Value:
    if isinstance(f, Atom):
        return Value.of(v[_atom_key(f)])
    if isinstance(f, Top):
        return ONE
    if isinstance(f, And):
        return eval_value(f.left, v, guard) * eval_value(f.right, v, guard)
    if isinstance(f, Or):
        return add(eval_value(f.left, v, guard), eval_value(f.right, v, guard), guard)
    if isinstance(f, Imp):
        base = eval_value(f.right, v, guard)
        if not base.parts:
            return ONE
        return power(base, eval_value(f.left, v, guard), guard)
    raise QuantifierError("quantified formulas have no arithmetic value")


def eval_formula(f: Formula, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> int:
    return eval_value(f, v, guard).to_int(guard)


def context_value(ctx: Iterable[Formula], v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> Value:
    out = ONE
    for f in ctx:
        out = out * eval_value(f, v, guard)
    return out


def sequent_value(s: Sequent, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> Value:
    goal = eval_value(s.goal, v, guard)
    if not goal.parts:
        return ONE
    return power(goal, context_value(s.context, v, guard), guard)


def eval_sequent(s: Sequent, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> int:
    return sequent_value(s, v, guard).to_int(guard)


def eval_fol(f: Formula, v: Valuation = DEFAULT, domain: int = 2, guard: int = DEFAULT_GUARD) -> int:
    """Value over the finite domain ``{0..domain-1}``: a universal is the
    product of its instances and an existential their sum.  Ground atoms
    are looked up by their printed form, e.g. ``P(0)``; a function symbol
    ``f(t1..tn)`` denotes ``(len(f) + t1 + ... + tn) mod domain``."""

    def term(t, env):
        if isinstance(t, Var):
            return env.get(t.name, 0)
        return (len(t.name) + sum(term(a, env) for a in t.args)) % domain

    def go(g, env) -> Value:
        if isinstance(g, Atom):
            if not g.args:
                return Value.of(v[g.name])
            args = ", ".join(str(term(t, env)) for t in g.args)
            return Value.of(v[f"{g.name}({args})"])
        if isinstance(g, Top):
            return ONE
        if isinstance(g, And):
            return go(g.left, env) * go(g.right, env)
        if isinstance(g, Or):
            return add(go(g.left, env), go(g.right, env), guard)
        if isinstance(g, Imp):
            base = go(g.right, env)
            return power(base, go(g.left, env), guard) if base.parts else ONE
        vals = [go(g.body, {**env, g.var: k}) for k in range(domain)]
        out = vals[0]
        for x in vals[1:]:
            out = out * x if isinstance(g, Forall) else add(out, x, guard)
        return out

    return go(f, {}).to_int(guard)


# ---------------------------------------------------------------------------
# Rule audits


@dataclass(frozen=True)
class AuditReport:
    rule: RuleTag
    premise: Value
    conclusion: Value
    verdict: str  # "equal", "strictly-less" or "VIOLATION"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != "VIOLATION"

    def as_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "premise": str(self.premise),
            "conclusion": str(self.conclusion),
            "verdict": self.verdict,
            "detail": self.detail,
        }


def audit_rule_instance(
    rule: RuleTag,
    premises: Iterable[Sequent],
    conclusion: Sequent,
    v: Valuation = DEFAULT,
    guard: int = DEFAULT_GUARD,
) -> AuditReport:
    """Compare the product of premise values with the conclusion value.

    Invertible rules must preserve the value, non-invertible ones must
    decrease it strictly.
    """
    prem = ONE
    for p in premises:
        prem = prem * sequent_value(p, v, guard)
    concl = sequent_value(conclusion, v, guard)
    c = prem.compare(concl)
    seen = {0: "equal", -1: "strictly-less", 1: "greater"}[c]
    if rule in INVERTIBLE:
        want = "equal"
    elif rule in NON_INVERTIBLE:
        want = "strictly-less"
    else:
        want = seen if c <= 0 else "strictly-less"
    if seen == want:
        return AuditReport(rule, prem, concl, want)
    return AuditReport(rule, prem, concl, "VIOLATION", f"expected {want}, got {seen}")


def audit_derivation(d, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> list:
    """Audit every node of a G4ip derivation."""
    return [
        audit_rule_instance(n.rule, [p.conclusion for p in n.premises], n.conclusion, v, guard)
        for n in d.nodes()
    ]


# Schema instances: metavariables are atoms, and Γ is an atom standing for
# the whole context (omitted when its value is 1).

_F, _G, _H, _I, _P, _GAMMA = (Atom(n) for n in ("F", "G", "H", "I", "P", "Gamma"))


def schema_instance(rule: RuleTag, with_context: bool = True) -> tuple[Sequent, tuple]:
    """A generic conclusion for ``rule`` and its premises, built by the
    prover's own rule application."""
    gam = (_GAMMA,) if with_context else ()
    table = {
        RuleTag.Axiom: (Sequent((_P,) + gam, _P), _P),
        RuleTag.OrR1: (Sequent(gam, Or(_F, _G)), None),
        RuleTag.OrR2: (Sequent(gam, Or(_F, _G)), None),
        RuleTag.ImpLAtom: (Sequent((Imp(_P, _F), _P) + gam, _G), Imp(_P, _F)),
        RuleTag.ImpLImp: (Sequent((Imp(Imp(_F, _G), _H),) + gam, _I), Imp(Imp(_F, _G), _H)),
        RuleTag.ImpR: (Sequent(gam, Imp(_F, _G)), None),
        RuleTag.AndR: (Sequent(gam, And(_F, _G)), None),
        RuleTag.OrL: (Sequent((Or(_F, _G),) + gam, _H), Or(_F, _G)),
        RuleTag.AndL: (Sequent((And(_F, _G),) + gam, _H), And(_F, _G)),
        RuleTag.ImpLAnd: (Sequent((Imp(And(_F, _G), _H),) + gam, _I), Imp(And(_F, _G), _H)),
        RuleTag.ImpLOr: (Sequent((Imp(Or(_F, _G), _H),) + gam, _I), Imp(Or(_F, _G), _H)),
    }
    concl, f = table[rule]
    principal = None if f is None else concl.context.index(f)
    return concl, apply_rule(concl, rule, principal)


def _metavars(rule: RuleTag) -> list[str]:
    concl, prems = schema_instance(rule, with_context=False)
    names = set()
    for s in (concl,) + prems:
        for f in s.context + (s.goal,):
            names |= {a.name for a in atoms(f)}
    return sorted(names)


@dataclass(frozen=True)
class GridReport:
    checked: int
    violations: tuple
    by_rule: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def sweep_rule_grid(
    rules: Iterable[RuleTag] = tuple(INVERTIBLE | NON_INVERTIBLE),
    values: Iterable[int] = (2, 3, 4),
    contexts: Iterable[int] = range(1, 9),
    guard: int = DEFAULT_GUARD,
) -> GridReport:
    """Audit every rule schema over a grid of metavariable values."""
    values, contexts = tuple(values), tuple(contexts)
    checked, bad, by_rule = 0, [], {}
    for rule in sorted(rules, key=lambda r: r.value):
        names = _metavars(rule)
        n = 0
        for gamma in contexts:
            concl, prems = schema_instance(rule, with_context=gamma > 1)
            for combo in itertools.product(values, repeat=len(names)):
                env = dict(zip(names, combo))
                if gamma > 1:
                    env["Gamma"] = gamma
                rep = audit_rule_instance(rule, prems, concl, Valuation(env), guard)
                n += 1
                if not rep.ok:
                    bad.append((rule.value, env, rep.detail))
        by_rule[rule.value] = n
        checked += n
    return GridReport(checked, tuple(bad), by_rule)


def degenerate_implimp() -> tuple[Value, Value]:
    """The (->l->) instance with F, G, H atoms, empty context and I = T:
    premise product and conclusion, unsimplified."""
    p = Atom("P")
    concl = Sequent((Imp(Imp(p, p), p),), TOP)
    prems = apply_rule(concl, RuleTag.ImpLImp, 0)
    prem = ONE
    for s in prems:
        prem = prem * sequent_value(s)
    return prem, sequent_value(concl)


# ---------------------------------------------------------------------------
# Inequality lemmas


@dataclass(frozen=True)
class LemmaResult:
    name: str
    statement: str
    checked: int
    violations: tuple
    skipped: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class LemmaReport:
    results: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def as_dict(self) -> dict:
        return {
            r.name: {
                "statement": r.statement,
                "checked": r.checked,
                "violations": [list(x) for x in r.violations],
                "skipped": [list(x) for x in r.skipped],
            }
            for r in self.results
        }


def _sweep(name, statement, ranges, pred) -> LemmaResult:
    checked, bad, skipped = 0, [], []
    for point in itertools.product(*ranges):
        try:
            holds = pred(*point)
        except ValueTooLarge:
            skipped.append(point)
            continue
        checked += 1
        if not holds:
            bad.append(point)
    return LemmaResult(name, statement, checked, tuple(bad), tuple(skipped))


def final_lemma_holds(f: int, g: int, h: int, guard: int = DEFAULT_GUARD) -> bool:
    """2^(H^(G^F) - H) > G^(F H^G)."""
    gf = g**f
    if gf * math.log10(h) > guard:
        raise ValueTooLarge("H^(G^F) past the digit guard")
    lhs = Value.of(2).power(h**gf - h)
    rhs = Value.of(g).power(f * h**g)
    return lhs > rhs


def conditional_lemma_holds(f, g, h, i, gamma, guard: int = DEFAULT_GUARD) -> bool:
    """I^(H^(G^F) Γ) > (G^F)^(H^G Γ) I^(H Γ)."""
    gf = g**f
    if gf * math.log10(h) > guard:
        raise ValueTooLarge("H^(G^F) past the digit guard")
    lhs = Value.of(i).power(h**gf * gamma)
    rhs = Value.of(gf).power(h**g * gamma) * Value.of(i).power(h * gamma)
    return lhs > rhs


def check_inequality_lemmas(
    f_range: Iterable[int] = range(2, 7),
    g_range: Iterable[int] = range(3, 7),
    h_range: Iterable[int] = range(2, 7),
    final_range: Iterable[int] = range(2, 6),
    guard: int = DEFAULT_GUARD,
) -> LemmaReport:
    """Brute-force the auxiliary inequalities over the given ranges."""
    fr, gr, hr, fin = (tuple(r) for r in (f_range, g_range, h_range, final_range))
    if min(gr, default=3) < 3 or min(fr + hr + fin, default=2) < 2:
        raise ValueError("ranges must respect the lemma domains (F,H >= 2, G >= 3)")
    results = [
        _sweep("power_gap", "G^F - G - 1 >= G^(F-1)", (fr, gr), lambda f, g: g**f - g - 1 >= g ** (f - 1)),
        _sweep("doubling", "2^(G^(F-1)) >= F G", (fr, gr), lambda f, g: 2 ** (g ** (f - 1)) >= f * g),
        _sweep(
            "power_step",
            "F H^G G >= F H^(G-1) G + 1",
            (fr, gr, hr),
            lambda f, g, h: f * h**g * g >= f * h ** (g - 1) * g + 1,
        ),
        _sweep(
            "final",
            "2^(H^(G^F) - H) > G^(F H^G)",
            (fin, fin, fin),
            lambda f, g, h: final_lemma_holds(f, g, h, guard),
        ),
        _sweep(
            "conditional",
            "I^(H^(G^F) Γ) > (G^F)^(H^G Γ) I^(H Γ)",
            (fin, fin, fin, (2, 3), (1, 2)),
            lambda f, g, h, i, c: conditional_lemma_holds(f, g, h, i, c, guard),
        ),
    ]
    return LemmaReport(tuple(results))


@dataclass(frozen=True)
class Counterexample:
    a: int
    b: int
    c: int
    gamma: int
    conclusion: int
    premise: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def g3ip_values(a: int, b: int, c: int, gamma: int) -> tuple[int, int]:
    """(A->B), Γ ⊢ C against its premises (A->B), Γ ⊢ A and B, Γ ⊢ C."""
    ctx = b**a * gamma
    return c**ctx, a**ctx * c ** (b * gamma)


def check_g3ip_failure(limit: int = 6) -> Counterexample:
    """The first point with a = c where the G3ip implication-left rule
    fails to decrease the value."""
    for a in range(2, limit + 1):
        for b in range(2, limit + 1):
            for gamma in range(1, limit + 1):
                concl, prem = g3ip_values(a, b, a, gamma)
                if not prem < concl:
                    return Counterexample(a, b, a, gamma, concl, prem)
    raise AssertionError("no counterexample in range")


# ---------------------------------------------------------------------------
# Units and budgets


def is_top_isomorphic(f: Formula) -> bool:
    if not is_propositional(f):
        raise QuantifierError("propositional formulas only")
    return simplify_top(f) == TOP


def budget_value(s: Sequent, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> Value:
    """The budget of ``s`` kept symbolic, so it never overflows."""
    if simplify_sequent(s) != s or s.goal == TOP:
        raise ValueError("budget needs a unit-simplified sequent with a non-unit goal")
    if not all(is_propositional(f) for f in s.context + (s.goal,)):
        raise QuantifierError("propositional sequents only")
    return sequent_value(s, v, guard)


def termination_budget(s: Sequent, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> int:
    """Upper bound on non-invertible rule applications in any derivation
    of ``s``: its value, which each such rule lowers by at least one.
    Raises ``ValueTooLarge`` past the digit guard."""
    return budget_value(s, v, guard).to_int(guard)


def within_budget(d, v: Valuation = DEFAULT, guard: int = DEFAULT_GUARD) -> bool:
    """Whether ``d`` uses no more non-invertible rules than its budget."""
    return Value.of(d.non_invertible_count()).compare(budget_value(d.conclusion, v, guard)) <= 0
