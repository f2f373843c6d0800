"""The normalization equations, as executable lhs/rhs pairs over random NFs."""

from __future__ import annotations

import random

from highschool.generate import NFGen, random_fol_formula
from highschool.normalize import (
    ONE,
    distrib,
    distrib0,
    distrib1,
    distribn,
    enf,
    explog,
    explog0,
    explog1,
    nf_equal,
    nplus,
    nplus1,
    ntimes,
)
from highschool.syntax import And, Exists, Forall, Imp, Or, free_vars

# name -> builder; a builder draws arguments and returns (lhs, rhs)
EQUATIONS = {
    "ntimes_top": (lambda g: (lambda c: (ntimes(c, ONE), c))(g.conj())),
    "ntimes_assoc": (lambda g: (lambda a, b, c: (ntimes(a, ntimes(b, c)), ntimes(ntimes(a, b), c)))(g.conj(), g.conj(), g.conj())),
    "nplus1_assoc": (lambda g: (lambda d, e2, e3: (nplus1(d, nplus(e2, e3)), nplus1(nplus1(d, e2), e3)))(g.sum(), g.nf(), g.nf())),
    "nplus_assoc": (lambda g: (lambda a, b, c: (nplus(a, nplus(b, c)), nplus(nplus(a, b), c)))(g.nf(), g.nf(), g.nf())),
    "distrib0_nplus1": (lambda g: (lambda c, d, e: (distrib0(c, nplus1(d, e)), nplus(distrib0(c, d), distrib1(c, e))))(g.conj(), g.sum(), g.nf())),
    "distrib0_nplus": (lambda g: (lambda c, a, b: (distrib0(c, nplus(a, b)), nplus(distrib1(c, a), distrib1(c, b))))(g.conj(), g.nf(), g.nf())),
    "distribn_nplus1": (lambda g: (lambda d, a, b: (distribn(nplus1(d, a), b), nplus(distribn(d, b), distrib(a, b))))(g.sum(), g.nf(), g.nf())),
    "distribn_nplus": (lambda g: (lambda a, b, c: (distribn(nplus(a, b), c), nplus(distrib(a, c), distrib(b, c))))(g.nf(), g.nf(), g.nf())),
    "distrib1_top": (lambda g: (lambda e: (distrib1(ONE, e), e))(g.nf())),
    "distrib1_distrib0": (lambda g: (lambda a, b, d: (distrib1(a, distrib0(b, d)), distrib0(ntimes(a, b), d)))(g.conj(), g.conj(), g.sum())),
    "distrib1_distrib1": (lambda g: (lambda a, b, e: (distrib1(a, distrib1(b, e)), distrib1(ntimes(a, b), e)))(g.conj(), g.conj(), g.nf())),
    "distrib1_distribn": (lambda g: (lambda c, d, e: (distrib1(c, distribn(d, e)), distrib(distrib0(c, d), e)))(g.conj(), g.sum(), g.nf())),
    "distrib1_distrib": (lambda g: (lambda c, a, b: (distrib1(c, distrib(a, b)), distrib(distrib1(c, a), b)))(g.conj(), g.nf(), g.nf())),
    "distribn_distrib": (lambda g: (lambda d, a, b: (distribn(d, distrib(a, b)), distrib(distribn(d, a), b)))(g.sum(), g.nf(), g.nf())),
    "distrib_assoc": (lambda g: (lambda a, b, c: (distrib(a, distrib(b, c)), distrib(distrib(a, b), c)))(g.nf(), g.nf(), g.nf())),
    "explogn_top": (lambda g: (lambda c: (explog(c, ONE), c))(g.conj())),
    "explogn_ntimes": (lambda g: (lambda a, b, e: (explog(ntimes(a, b), e), ntimes(explog(a, e), explog(b, e))))(g.conj(), g.conj(), g.nf())),
    "explog0_nplus1": (lambda g: (lambda b, d, e: (explog0(b, nplus(d, e)), ntimes(explog0(b, d), explog1(b, e))))(g.base(), g.sum(), g.nf())),
    "explog0_nplus": (lambda g: (lambda b, e1, e2: (explog0(b, nplus(e1, e2)), ntimes(explog1(b, e1), explog1(b, e2))))(g.base(), g.nf(), g.nf())),
    "explogn_explog1": (lambda g: (lambda b, a, c: (explog1(b, distrib(a, c)), explog(explog1(b, a), c)))(g.base(), g.nf(), g.nf())),
    "explogn_distrib": (lambda g: (lambda c, a, b: (explog(c, distrib(a, b)), explog(explog(c, a), b)))(g.conj(), g.nf(), g.nf())),
    "explogn_nplus": (lambda g: (lambda c, a, b: (explog(c, nplus(a, b)), ntimes(explog(c, a), explog(c, b))))(g.conj(), g.nf(), g.nf())),
    "explogn_distribn_nplus": (lambda g: (lambda c, a, b, e3: (explog(c, distribn(nplus(a, b), e3)), ntimes(explog(c, distrib(a, e3)), explog(c, distrib(b, e3)))))(g.conj(), g.nf(), g.nf(), g.nf())),
}

# the one equation that only holds up to reordering of products
MOD_COMM = frozenset({"explogn_nplus"})


def run_equation(name: str, count: int = 1000, seed: int = 0, mod_comm: bool | None = None) -> list:
    """Failing instances of equation ``name`` among ``count`` seeded draws."""
    g = NFGen(random.Random(f"{seed}:{name}"), depth=2, width=3)
    if mod_comm is None:
        mod_comm = name in MOD_COMM
    failures = []
    for _ in range(count):
        lhs, rhs = EQUATIONS[name](g)
        if not nf_equal(lhs, rhs, mod_comm=mod_comm):
            failures.append((lhs, rhs))
    return failures


# Quantifier isomorphisms; the side condition x not free in G is enforced.

QUANTIFIER_ISOS = ("forall_and", "exists_or", "exists_antecedent", "forall_consequent")


def _fol(rng, avoid=None):
    while True:
        f = random_fol_formula(rng, size=rng.randint(0, 4))
        if avoid is None or avoid not in free_vars(f):
            return f


def quantifier_iso_instance(name: str, rng: random.Random) -> tuple:
    """Both sides of a quantifier isomorphism over random F and G."""
    F = _fol(rng)
    G = _fol(rng, "x" if name in ("exists_antecedent", "forall_consequent") else None)
    if name == "forall_and":
        return And(Forall("x", F), Forall("x", G)), Forall("x", And(F, G))
    if name == "exists_or":
        return Or(Exists("x", F), Exists("x", G)), Exists("x", Or(F, G))
    if name == "exists_antecedent":
        return Imp(Exists("x", F), G), Forall("x", Imp(F, G))
    return Imp(G, Forall("x", F)), Forall("x", Imp(G, F))


def quantifier_iso_holds(name: str, lhs, rhs) -> bool:
    # universal blocks from G and from the outer binder come out in either order
    return nf_equal(enf(lhs), enf(rhs), mod_qperm=name == "forall_consequent")
