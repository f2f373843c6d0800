"""Exp-log normal forms.

A normal form ``e`` is either a product ``c`` (:class:`Conj`) of
exponentials ``(b^c1)^x`` or a sum ``d`` (:class:`Sum`) of at least two
products.  Bases are primes, sums, or existential blocks ``x c``.  Products
and sums are flat tuples, which is the same thing as the right-nested lists
built by ``nplus`` and ``ntimes``.

The functions below follow the defining clauses of the normalization
procedure one by one; the helpers on sums (``nplus1``, ``distrib0``,
``distribn``, ``explog0``) are exposed separately so that the algebraic
laws relating them can be tested directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .syntax import (
    And,
    Atom,
    Exists,
    Fn,
    Forall,
    Formula,
    Imp,
    Or,
    Top,
    Var,
    conj,
    disj,
    formula_from_json,
    formula_to_json,
    rename_fresh,
    size,
)


# ---------------------------------------------------------------------------
# Classes B, C, D, E


@dataclass(frozen=True)
class Prime:
    atom: Atom

    def __post_init__(self):
        if not isinstance(self.atom, Atom):
            raise TypeError("Prime wraps an Atom")


@dataclass(frozen=True)
class Conj:
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if not isinstance(f, Factor):
                raise TypeError(f"product of non-factor {f!r}")

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class Sum:
    summands: tuple

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if len(self.summands) < 2:
            raise ValueError("a sum needs at least two summands")
        for c in self.summands:
            if not isinstance(c, Conj):
                raise TypeError(f"summand is not a product: {c!r}")

    def __len__(self):
        return len(self.summands)


@dataclass(frozen=True)
class Ex:
    vars: tuple
    body: Conj

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("existential block without variables")
        _check_vars(self.vars)
        if not isinstance(self.body, Conj):
            raise TypeError("existential body must be a product")


@dataclass(frozen=True)
class Factor:
    """``(base ^ exp) ^ vars``: for all vars, exp implies base."""

    base: Union[Prime, Sum, Ex]
    exp: Conj = field(default_factory=Conj)
    vars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        _check_vars(self.vars)
        if not isinstance(self.base, (Prime, Sum, Ex)):
            raise TypeError(f"bad base {self.base!r}")
        if not isinstance(self.exp, Conj):
            raise TypeError("exponent must be a product")


NF = Union[Conj, Sum]
Base = Union[Prime, Sum, Ex]
ONE = Conj(())


def _check_vars(xs):
    if len(set(xs)) != len(xs):
        raise ValueError(f"duplicate variables in {xs}")


def prime(name: str, *args) -> Conj:
    """``p^1 1`` for a named atom."""
    return Conj((Factor(Prime(Atom(name, tuple(args))), ONE),))


def summands(e: NF) -> tuple:
    return e.summands if isinstance(e, Sum) else (e,)


# ---------------------------------------------------------------------------
# Propositional operations


def nplus(e1: NF, e2: NF) -> Sum:
    """Flattening sum (the ⊕ of the normalization procedure)."""
    if isinstance(e1, Conj):
        return Sum((e1,) + summands(e2))
    return nplus1(e1, e2)


def nplus1(d: Sum, e: NF) -> Sum:
    """``nplus`` with a sum on the left."""
    if len(d.summands) == 2:
        return Sum((d.summands[0], d.summands[1]) + summands(e))
    rest = Sum(d.summands[1:])
    return Sum((d.summands[0],) + nplus1(rest, e).summands)


def ntimes(c1: Conj, c2: Conj) -> Conj:
    return Conj(c1.factors + c2.factors)


def distrib0(c: Conj, d: Sum) -> Sum:
    """``c`` times each summand of ``d``."""
    return Sum(tuple(ntimes(c, ci) for ci in d.summands))


def distrib1(c: Conj, e: NF) -> NF:
    if isinstance(e, Conj):
        return ntimes(c, e)
    return distrib0(c, e)


def distribn(d: Sum, e: NF) -> NF:
    """Each summand of ``d`` distributed over ``e``."""
    first = distrib1(d.summands[0], e)
    if len(d.summands) == 2:
        return nplus(first, distrib1(d.summands[1], e))
    return nplus(first, distribn(Sum(d.summands[1:]), e))


def distrib(e1: NF, e2: NF) -> NF:
    if isinstance(e1, Conj):
        return distrib1(e1, e2)
    return distribn(e1, e2)


def explog0(b: Base, d: Sum) -> Conj:
    """``b`` raised to a sum: a product of exponentials."""
    return qexplog0(b, d, ())


def explog1(b: Base, e: NF) -> Conj:
    return qexplog1(b, e, ())


def explog(c: Conj, e: NF) -> Conj:
    """``c`` raised to ``e``: each factor's exponent is multiplied by ``e``."""
    out: tuple = ()
    for f in c.factors:
        out += qexplog1(f.base, distrib1(f.exp, e), f.vars).factors
    return Conj(out)


# ---------------------------------------------------------------------------
# Quantifiers


def _absorb(c: Conj) -> tuple[Conj, tuple]:
    """Pull trivial existential factors ``(y c')^1`` out of an exponent.

    ``G^{(y F) H} = (G^{F H})^y`` when ``y`` is not free in ``G`` or ``H``;
    binder names are unique, so the side condition always holds here.
    Nested blocks are absorbed too, innermost binder first.
    """
    factors: tuple = ()
    ys: tuple = ()
    for f in c.factors:
        if isinstance(f.base, Ex) and not f.exp.factors and not f.vars:
            body, inner = _absorb(f.base.body)
            factors += body.factors
            ys += inner + f.base.vars
        else:
            factors += (f,)
    return Conj(factors), ys


def _qfactor(b: Base, c: Conj, xs: tuple) -> Factor:
    c, ys = _absorb(c)
    return Factor(b, c, xs + ys)


def qexplog0(b: Base, d: Sum, xs: tuple) -> Conj:
    return Conj(tuple(_qfactor(b, ci, xs) for ci in d.summands))


def qexplog1(b: Base, e: NF, xs: tuple = ()) -> Conj:
    """``(b^e)^xs`` as a product, with existential exponents absorbed."""
    if isinstance(e, Conj):
        return Conj((_qfactor(b, e, xs),))
    return qexplog0(b, e, xs)


def explog_all(c: Conj, xs: tuple) -> Conj:
    """Universal closure of every factor."""
    return Conj(tuple(Factor(f.base, f.exp, f.vars + tuple(xs)) for f in c.factors))


def distrib_ex(xs: tuple, e: NF) -> NF:
    """Existential block pushed into each summand."""
    if isinstance(e, Conj):
        return Conj((Factor(Ex(tuple(xs), e), ONE),))
    return Sum(tuple(distrib_ex(xs, ci) for ci in e.summands))


# ---------------------------------------------------------------------------
# Normalization of formulas


def enf(f: Formula) -> NF:
    """Exp-log normal form of a formula."""
    f = rename_fresh(f)
    return _enf(f, size(f) + 1)


def enfpos(f: Formula) -> Conj:
    """Normal form in which sums stay suspended under a trivial exponent."""
    f = rename_fresh(f)
    return _enfpos(f, size(f) + 1)


def _enf(f: Formula, fuel: int) -> NF:
    assert fuel > 0, "normalization recursion is not structural"
    if isinstance(f, Atom):
        return Conj((Factor(Prime(f), ONE),))
    if isinstance(f, Top):
        return ONE
    if isinstance(f, Or):
        return nplus(_enf(f.left, fuel - 1), _enf(f.right, fuel - 1))
    if isinstance(f, And):
        return distrib(_enf(f.left, fuel - 1), _enf(f.right, fuel - 1))
    if isinstance(f, Imp):
        return explog(_enfpos(f.right, fuel - 1), _enf(f.left, fuel - 1))
    if isinstance(f, Exists):
        return distrib_ex((f.var,), _enf(f.body, fuel - 1))
    if isinstance(f, Forall):
        return explog_all(_enfpos(f.body, fuel - 1), (f.var,))
    raise TypeError(f"not a formula: {f!r}")


def _enfpos(f: Formula, fuel: int) -> Conj:
    assert fuel > 0, "normalization recursion is not structural"
    if isinstance(f, Atom):
        return Conj((Factor(Prime(f), ONE),))
    if isinstance(f, Top):
        return ONE
    if isinstance(f, Or):
        d = nplus(_enfpos(f.left, fuel - 1), _enfpos(f.right, fuel - 1))
        return Conj((Factor(d, ONE),))
    if isinstance(f, And):
        return ntimes(_enfpos(f.left, fuel - 1), _enfpos(f.right, fuel - 1))
    if isinstance(f, Imp):
        return explog(_enfpos(f.right, fuel - 1), _enf(f.left, fuel - 1))
    if isinstance(f, Exists):
        return Conj((Factor(Ex((f.var,), _enfpos(f.body, fuel - 1)), ONE),))
    if isinstance(f, Forall):
        return explog_all(_enfpos(f.body, fuel - 1), (f.var,))
    raise TypeError(f"not a formula: {f!r}")


def expand_partial(c: Conj) -> NF:
    """Distribute the suspended sums ``(c1+...+cn)^1`` of an enfpos result."""
    parts = []
    for f in c.factors:
        if not f.exp.factors and not f.vars and isinstance(f.base, Sum):
            ss = [expand_partial(ci) for ci in f.base.summands]
            acc = ss[-1]
            for s in reversed(ss[:-1]):
                acc = nplus(s, acc)
            parts.append(acc)
        elif not f.exp.factors and not f.vars and isinstance(f.base, Ex):
            parts.append(distrib_ex(f.base.vars, expand_partial(f.base.body)))
        else:
            parts.append(Conj((f,)))
    if not parts:
        return ONE
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = distrib(p, acc)
    return acc


# ---------------------------------------------------------------------------
# Reading normal forms back as formulas


def embed(e) -> Formula:
    if isinstance(e, Conj):
        return conj(embed(f) for f in e.factors)
    if isinstance(e, Sum):
        return disj(embed(c) for c in e.summands)
    if isinstance(e, Factor):
        out = Imp(embed(e.exp), embed(e.base))
        for x in reversed(e.vars):
            out = Forall(x, out)
        return out
    if isinstance(e, Prime):
        return e.atom
    if isinstance(e, Ex):
        out = embed(e.body)
        for x in reversed(e.vars):
            out = Exists(x, out)
        return out
    raise TypeError(f"not a normal form: {e!r}")


# ---------------------------------------------------------------------------
# Equality and canonical forms


def alpha_normalize(e, env: dict | None = None, depth: int = 0):
    """Rename bound variables after their binding depth (``%0``, ``%1``...)."""
    env = env or {}
    if isinstance(e, Conj):
        return Conj(tuple(alpha_normalize(f, env, depth) for f in e.factors))
    if isinstance(e, Sum):
        return Sum(tuple(alpha_normalize(c, env, depth) for c in e.summands))
    if isinstance(e, Factor):
        new = tuple(f"%{depth + i}" for i in range(len(e.vars)))
        inner = {**env, **dict(zip(e.vars, new))}
        d = depth + len(e.vars)
        return Factor(alpha_normalize(e.base, inner, d), alpha_normalize(e.exp, inner, d), new)
    if isinstance(e, Ex):
        new = tuple(f"%{depth + i}" for i in range(len(e.vars)))
        inner = {**env, **dict(zip(e.vars, new))}
        return Ex(new, alpha_normalize(e.body, inner, depth + len(e.vars)))
    if isinstance(e, Prime):
        return Prime(_rename_atom(e.atom, env)) if env else e
    raise TypeError(f"not a normal form: {e!r}")


def _rename_atom(a: Atom, env: dict) -> Atom:
    # simultaneous, since bound names may be swapped
    def go(t):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        return Fn(t.name, tuple(go(s) for s in t.args))

    return Atom(a.name, tuple(go(t) for t in a.args))


def nf_key(e) -> tuple:
    if isinstance(e, Conj):
        return tuple(nf_key(f) for f in e.factors)
    if isinstance(e, Factor):
        return (nf_key(e.base), nf_key(e.exp), e.vars)
    if isinstance(e, Prime):
        return (0, e.atom.name, tuple(str(t) for t in e.atom.args))
    if isinstance(e, Sum):
        return (1, tuple(nf_key(c) for c in e.summands))
    if isinstance(e, Ex):
        return (2, e.vars, nf_key(e.body))
    raise TypeError(f"not a normal form: {e!r}")


def _sort(e):
    if isinstance(e, Conj):
        return Conj(tuple(sorted((_sort(f) for f in e.factors), key=nf_key)))
    if isinstance(e, Sum):
        return Sum(tuple(sorted((_sort(c) for c in e.summands), key=nf_key)))
    if isinstance(e, Factor):
        return Factor(_sort(e.base), _sort(e.exp), e.vars)
    if isinstance(e, Ex):
        return Ex(e.vars, _sort(e.body))
    return e


def canonicalize(e):
    """Sort every product and sum, recursively, after alpha-normalizing."""
    return _sort(alpha_normalize(e))


def _occurrences(e, out: list) -> list:
    if isinstance(e, Conj):
        for f in e.factors:
            _occurrences(f, out)
    elif isinstance(e, Sum):
        for c in e.summands:
            _occurrences(c, out)
    elif isinstance(e, Factor):
        _occurrences(e.base, out)
        _occurrences(e.exp, out)
    elif isinstance(e, Ex):
        _occurrences(e.body, out)
    elif isinstance(e, Prime):
        stack = list(reversed(e.atom.args))
        while stack:
            t = stack.pop()
            if isinstance(t, Var):
                out.append(t.name)
            else:
                stack.extend(reversed(t.args))
    return out


def order_blocks(e):
    """Reorder each universal block by first occurrence in its body.

    Adjacent universal quantifiers commute, so this picks one representative
    per permutation class. Binders must be distinct, as ``enf`` ensures.
    """
    if isinstance(e, Conj):
        return Conj(tuple(order_blocks(f) for f in e.factors))
    if isinstance(e, Sum):
        return Sum(tuple(order_blocks(c) for c in e.summands))
    if isinstance(e, Ex):
        return Ex(e.vars, order_blocks(e.body))
    if isinstance(e, Factor):
        base, exp = order_blocks(e.base), order_blocks(e.exp)
        seen = _occurrences(Factor(e.base, e.exp), [])
        used = [x for x in dict.fromkeys(seen) if x in e.vars]
        rest = [x for x in e.vars if x not in used]
        return Factor(base, exp, tuple(used + rest))
    return e


def nf_equal(e1, e2, mod_comm: bool = False, mod_qperm: bool = False) -> bool:
    """Structural equality up to bound-variable names; with ``mod_comm``
    also up to reordering of products and sums, with ``mod_qperm`` up to
    reordering inside universal blocks."""
    if mod_qperm:
        e1, e2 = order_blocks(e1), order_blocks(e2)
    if mod_comm:
        return canonicalize(e1) == canonicalize(e2)
    return alpha_normalize(e1) == alpha_normalize(e2)


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class ClassReport:
    top: str  # "Sigma" or "Pi"
    size: int  # summands or factors at the top
    tree: dict
    depth: dict

    def summary(self) -> str:
        what = "summands" if self.top == "Sigma" else "factors"
        d = ", ".join(f"{k}={v}" for k, v in self.depth.items())
        return f"{self.top} with {self.size} {what} ({d})"


def _class_tree(e) -> dict:
    if isinstance(e, Sum):
        return {"class": "Sigma", "summands": [_class_tree(c) for c in e.summands]}
    if isinstance(e, Conj):
        return {
            "class": "Pi",
            "factors": [
                {
                    "vars": list(f.vars),
                    "base": _base_tree(f.base),
                    "exp": _class_tree(f.exp),
                }
                for f in e.factors
            ],
        }
    raise TypeError(f"not a normal form: {e!r}")


def _base_tree(b) -> dict:
    if isinstance(b, Prime):
        return {"class": "B", "kind": "p", "atom": str(b.atom)}
    if isinstance(b, Sum):
        return {"class": "B", "kind": "d", "sum": _class_tree(b)}
    return {"class": "B", "kind": "ex", "vars": list(b.vars), "body": _class_tree(b.body)}


def _depths(e, last=None) -> tuple[int, int, int]:
    """(Sigma/Pi alternations, max nested sums, max nested existentials)."""
    if isinstance(e, Sum):
        alt = 1 if last == "Pi" else 0
        kids = [_depths(c, "Sigma") for c in e.summands]
        return (
            alt + max(k[0] for k in kids),
            1 + max(k[1] for k in kids),
            max(k[2] for k in kids),
        )
    if isinstance(e, Conj):
        alt = 1 if last == "Sigma" and e.factors else 0
        best = (0, 0, 0)
        for f in e.factors:
            for sub, bump in _factor_children(f):
                k = _depths(sub, "Pi")
                k = (k[0], k[1], k[2] + bump)
                best = tuple(max(a, b) for a, b in zip(best, k))
        return (alt + best[0], best[1], best[2])
    raise TypeError(f"not a normal form: {e!r}")


def _factor_children(f: Factor):
    yield f.exp, 0
    if isinstance(f.base, Sum):
        yield f.base, 0
    elif isinstance(f.base, Ex):
        yield f.base.body, 1


def classify(e: NF) -> ClassReport:
    alt, sums, exs = _depths(e)
    top = "Sigma" if isinstance(e, Sum) else "Pi"
    n = len(e.summands) if isinstance(e, Sum) else len(e.factors)
    return ClassReport(
        top, n, _class_tree(e), {"alternation": alt, "sum_nesting": sums, "exists_nesting": exs}
    )


def in_class(e) -> bool:
    """Membership check for Sigma ∪ Pi, re-validating every invariant."""
    try:
        if isinstance(e, Sum):
            return len(e.summands) >= 2 and all(in_class(c) for c in e.summands)
        if isinstance(e, Conj):
            for f in e.factors:
                if not isinstance(f, Factor) or len(set(f.vars)) != len(f.vars):
                    return False
                if not in_class(f.exp):
                    return False
                b = f.base
                if isinstance(b, Sum) and not in_class(b):
                    return False
                if isinstance(b, Ex) and not (b.vars and isinstance(b.body, Conj) and in_class(b.body)):
                    return False
                if not isinstance(b, (Prime, Sum, Ex)):
                    return False
            return True
    except (TypeError, AttributeError):
        return False
    return False


# ---------------------------------------------------------------------------
# Printing and JSON


def print_nf(e, units: bool = False) -> str:
    """Polynomial rendering.  Without ``units`` trivial ``^1`` and ``·1``
    are dropped."""

    def conj_str(c: Conj, wrap: bool) -> str:
        if not c.factors:
            return "1"
        parts = [factor_str(f) for f in c.factors]
        if units:
            s = "·".join(parts + ["1"])
            return f"({s})" if wrap else s
        s = " ".join(parts)
        return f"({s})" if wrap and len(parts) > 1 else s

    def factor_str(f: Factor) -> str:
        b = base_str(f.base)
        if units or f.exp.factors:
            e = conj_str(f.exp, wrap=False)
            simple = len(f.exp.factors) == 1 and not f.exp.factors[0].exp.factors and not units
            simple = simple and isinstance(f.exp.factors[0].base, Prime) and not f.exp.factors[0].vars
            s = f"{b}^{e}" if simple else f"{b}^({e})"
        else:
            s = b
        if f.vars:
            s = f"({s})^{{{','.join(f.vars)}}}"
        return s

    def base_str(b) -> str:
        if isinstance(b, Prime):
            return str(b.atom)
        if isinstance(b, Sum):
            return "(" + " + ".join(conj_str(c, wrap=False) for c in b.summands) + ")"
        return f"({','.join(b.vars)} {conj_str(b.body, wrap=True)})"

    if isinstance(e, Sum):
        return " + ".join(conj_str(c, wrap=False) for c in e.summands)
    return conj_str(e, wrap=False)


def nf_to_json(e) -> dict:
    if isinstance(e, Conj):
        return {"class": "C", "factors": [nf_to_json(f) for f in e.factors]}
    if isinstance(e, Sum):
        return {"class": "D", "summands": [nf_to_json(c) for c in e.summands]}
    if isinstance(e, Factor):
        return {"base": nf_to_json(e.base), "exp": nf_to_json(e.exp), "vars": list(e.vars)}
    if isinstance(e, Prime):

        return {"class": "B", "kind": "p", "atom": formula_to_json(e.atom)}
    if isinstance(e, Ex):
        return {"class": "B", "kind": "ex", "vars": list(e.vars), "body": nf_to_json(e.body)}
    raise TypeError(f"not a normal form: {e!r}")


def nf_from_json(d: dict):

    if "factors" in d:
        return Conj(tuple(nf_from_json(f) for f in d["factors"]))
    if "summands" in d:
        return Sum(tuple(nf_from_json(c) for c in d["summands"]))
    if "base" in d:
        return Factor(nf_from_json(d["base"]), nf_from_json(d["exp"]), tuple(d.get("vars", ())))
    if d.get("kind") == "p":
        return Prime(formula_from_json(d["atom"]))
    if d.get("kind") == "ex":
        return Ex(tuple(d["vars"]), nf_from_json(d["body"]))
    raise ValueError(f"bad normal form json: {d!r}")
