"""Formula and normal-form generators for sweeps and property tests."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterator, Sequence

from . import normalize as N
from .g4ip import is_provable
from .syntax import TOP, And, Atom, Exists, Forall, Formula, Imp, Or, Var, parse_formula

CONNECTIVES = (And, Or, Imp)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def count_formulas(n_leaves: int, n_connectives: int, n_ops: int = 3) -> int:
    """Formulas with exactly ``n_connectives`` binary connectives."""
    n = n_connectives
    return catalan(n) * n_ops**n * n_leaves ** (n + 1)


def enumerate_formulas(
    leaves: Sequence[Formula], max_connectives: int, connectives=CONNECTIVES
) -> Iterator[Formula]:
    """Every formula over ``leaves`` with at most ``max_connectives``
    binary connectives, smallest first."""
    leaves = tuple(leaves)

    @lru_cache(maxsize=None)
    def exactly(n: int) -> tuple:
        return tuple(_build(n))

    def _build(n: int) -> Iterator[Formula]:
        if n == 0:
            yield from leaves
            return
        for k in range(n):
            for op in connectives:
                for a, b in product(exactly(k), exactly(n - 1 - k)):
                    yield op(a, b)

    for n in range(max_connectives + 1):
        if n < max_connectives:
            yield from exactly(n)
        else:
            yield from _build(n)


def atoms_named(names: str | Sequence[str]) -> tuple:
    return tuple(Atom(n) for n in names)


def random_formula(
    rng: random.Random,
    leaves: Sequence[Formula],
    n_connectives: int,
    connectives=CONNECTIVES,
) -> Formula:
    """A formula with exactly ``n_connectives`` connectives; the tree
    shape splits the remaining count uniformly at each node."""
    if n_connectives == 0:
        return rng.choice(tuple(leaves))
    k = rng.randrange(n_connectives)
    op = rng.choice(tuple(connectives))
    return op(
        random_formula(rng, leaves, k, connectives),
        random_formula(rng, leaves, n_connectives - 1 - k, connectives),
    )


def random_fol_formula(
    rng: random.Random,
    preds: Sequence[str] = ("P", "Q"),
    vars_: Sequence[str] = ("x", "y"),
    size: int = 4,
    quantifier_rate: float = 0.35,
) -> Formula:
    """A first-order formula over unary/binary predicates and variables."""
    if size == 0:
        name = rng.choice(tuple(preds))
        arity = rng.choice((0, 1, 1, 2))
        return Atom(name.lower() if arity == 0 else name, tuple(Var(rng.choice(vars_)) for _ in range(arity)))
    if rng.random() < quantifier_rate:
        q = rng.choice((Forall, Exists))
        return q(rng.choice(tuple(vars_)), random_fol_formula(rng, preds, vars_, size - 1, quantifier_rate))
    k = rng.randrange(size)
    op = rng.choice(CONNECTIVES)
    return op(
        random_fol_formula(rng, preds, vars_, k, quantifier_rate),
        random_fol_formula(rng, preds, vars_, size - 1 - k, quantifier_rate),
    )


# ---------------------------------------------------------------------------
# Random normal forms (propositional)


class NFGen:
    """Random well-typed members of the classes B, C, D, E."""

    def __init__(self, rng: random.Random, atoms: str = "pqrs", depth: int = 3, width: int = 3):
        self.rng = rng
        self.atoms = [Atom(a) for a in atoms]
        self.depth = depth
        self.width = width

    def base(self, depth: int | None = None):
        d = self.depth if depth is None else depth
        if d <= 0 or self.rng.random() < 0.7:
            return N.Prime(self.rng.choice(self.atoms))
        return self.sum(d - 1)

    def conj(self, depth: int | None = None, min_len: int = 0) -> N.Conj:
        d = self.depth if depth is None else depth
        n = self.rng.randint(min_len, max(min_len, self.width))
        fs = []
        for _ in range(n):
            exp = self.conj(d - 1) if d > 0 and self.rng.random() < 0.5 else N.ONE
            fs.append(N.Factor(self.base(d - 1), exp))
        return N.Conj(tuple(fs))

    def sum(self, depth: int | None = None) -> N.Sum:
        d = self.depth if depth is None else depth
        n = self.rng.randint(2, max(2, self.width))
        return N.Sum(tuple(self.conj(d, min_len=0) for _ in range(n)))

    def nf(self, depth: int | None = None):
        return self.sum(depth) if self.rng.random() < 0.5 else self.conj(depth)


# ---------------------------------------------------------------------------
# Corpora

CLASSIC_TAUTOLOGIES = (
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p & q -> q & p",
    "p | q -> q | p",
    "(p -> r) -> (q -> r) -> p | q -> r",
    "((p | (p -> q)) -> q) -> q",
    "r & (q -> (r | t) -> s) -> q -> s",
    "(p & q -> r) -> p -> q -> r",
    "(p -> q -> r) -> p & q -> r",
    "((p -> q) -> r) -> (q -> r)",
    "(p -> q) -> (q -> r) -> p -> r",
    "p | q & r -> (p | q) & (p | r)",
    "((p -> q) -> p) -> (p -> q) -> q",
)


def tautology_corpus(n: int = 50, seed: int = 0, atoms: str = "pqr", max_connectives: int = 7) -> list:
    """``n`` formulas: the classic list first, then seeded random formulas
    that the prover accepts."""

    out = [parse_formula(t) for t in CLASSIC_TAUTOLOGIES][:n]
    rng = random.Random(seed)
    leaves = atoms_named(atoms)
    seen = set(out)
    while len(out) < n:
        f = random_formula(rng, leaves, rng.randint(2, max_connectives))
        if f not in seen and is_provable(f):
            seen.add(f)
            out.append(f)
    return out


def mixed_corpus(n: int = 50, seed: int = 0, atoms: str = "pqr", max_connectives: int = 7) -> list:
    """Seeded random formulas, provable or not."""
    rng = random.Random(seed)
    leaves = atoms_named(atoms)
    return [random_formula(rng, leaves, rng.randint(1, max_connectives)) for _ in range(n)]


def with_top(leaves: Sequence[Formula]) -> tuple:
    return tuple(leaves) + (TOP,)
