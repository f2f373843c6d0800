"""Formulas of minimal first-order logic, sequents, parsing and printing.

Formulas are immutable trees.  Hashes are computed once at construction so
that formulas can be used freely as dictionary keys by the provers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class ParseError(ValueError):
    """Raised on malformed formula text; ``pos`` is the offending offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------------------
# First-order terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn(Term):
    name: str
    args: tuple = ()

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def term_subst(t: Term, name: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.name == name else t
    return Fn(t.name, tuple(term_subst(a, name, repl) for a in t.args))


# ---------------------------------------------------------------------------
# Formulas

_TAGS = {"Atom": 0, "Top": 1, "And": 2, "Or": 3, "Imp": 4, "Forall": 5, "Exists": 6}


class Formula:
    """Base class.  Subclasses are frozen dataclasses with ``eq=False``."""

    def _init(self, *fields):
        object.__setattr__(self, "_h", hash((type(self).__name__,) + fields))
        object.__setattr__(self, "_k", None)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._h != other._h:
            return False
        return self._fields() == other._fields()

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def _fields(self):
        raise NotImplementedError

    def __str__(self):
        return print_logical(self)


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        self._init(self.name, self.args)

    def _fields(self):
        return (self.name, self.args)

    def __repr__(self):
        if self.args:
            return f"Atom({self.name!r}, {self.args!r})"
        return f"Atom({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Top(Formula):
    def __post_init__(self):
        self._init()

    def _fields(self):
        return ()

    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        self._init(self.left._h, self.right._h)

    def _fields(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        self._init(self.left._h, self.right._h)

    def _fields(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        self._init(self.left._h, self.right._h)

    def _fields(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Imp({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        self._init(self.var, self.body._h)

    def _fields(self):
        return (self.var, self.body)

    def __repr__(self):
        return f"Forall({self.var!r}, {self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        self._init(self.var, self.body._h)

    def _fields(self):
        return (self.var, self.body)

    def __repr__(self):
        return f"Exists({self.var!r}, {self.body!r})"


TOP = Top()
BINARY = (And, Or, Imp)
QUANTIFIERS = (Forall, Exists)


def sort_key(f: Formula) -> tuple:
    """Fixed total order on formulas, used to store contexts canonically."""
    k = f._k
    if k is None:
        tag = _TAGS[type(f).__name__]
        if isinstance(f, Atom):
            k = (tag, f.name, tuple(str(a) for a in f.args))
        elif isinstance(f, Top):
            k = (tag,)
        elif isinstance(f, BINARY):
            k = (tag, sort_key(f.left), sort_key(f.right))
        else:
            k = (tag, f.var, sort_key(f.body))
        object.__setattr__(f, "_k", k)
    return k


def conj(fs: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is top."""
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        raise ValueError("empty disjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


def atoms(f: Formula) -> set[Atom]:
    return {g for g in subformulas(f) if isinstance(g, Atom)}


def size(f: Formula) -> int:
    """Number of connectives and quantifiers."""
    return sum(1 for g in subformulas(f) if not isinstance(g, (Atom, Top)))


def is_propositional(f: Formula) -> bool:
    return all(
        not isinstance(g, QUANTIFIERS) and not (isinstance(g, Atom) and g.args)
        for g in subformulas(f)
    )


# ---------------------------------------------------------------------------
# Sequents


@dataclass(frozen=True)
class Sequent:
    """A multiset context and a goal.  The context is kept sorted."""

    context: tuple
    goal: Formula

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(sorted(self.context, key=sort_key)))

    def as_formula(self) -> Formula:
        if not self.context:
            return self.goal
        return Imp(conj(self.context), self.goal)

    def __str__(self):
        ctx = ", ".join(print_logical(f) for f in self.context)
        return f"{ctx} |- {print_logical(self.goal)}".strip()


def simplify_sequent(s: Sequent) -> Sequent:
    ctx = [simplify_top(f) for f in s.context]
    return Sequent(tuple(f for f in ctx if f != TOP), simplify_top(s.goal))


# ---------------------------------------------------------------------------
# Top simplification


def simplify_top(f: Formula) -> Formula:
    """Remove units: T&F ~> F, F&T ~> F, T->F ~> F, F->T ~> T (innermost first).

    Disjunctions are left alone.  ``forall x. T`` also collapses to T.
    """
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, QUANTIFIERS):
        body = simplify_top(f.body)
        if isinstance(f, Forall) and body == TOP:
            return TOP
        return type(f)(f.var, body) if body is not f.body else f
    left, right = simplify_top(f.left), simplify_top(f.right)
    if isinstance(f, And):
        if left == TOP:
            return right
        if right == TOP:
            return left
    elif isinstance(f, Imp):
        if right == TOP:
            return TOP
        if left == TOP:
            return right
    if left is f.left and right is f.right:
        return f
    return type(f)(left, right)


# ---------------------------------------------------------------------------
# Variables and binders


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Top):
        return set()
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def bound_vars(f: Formula) -> list[str]:
    return [g.var for g in subformulas(f) if isinstance(g, QUANTIFIERS)]


def fresh_name(base: str, avoid: set[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(f: Formula, name: str, repl: Term) -> Formula:
    """Replace free occurrences of variable ``name``.  ``repl`` must not be
    captured; callers substitute closed terms or fresh variables."""
    if isinstance(f, Atom):
        if not f.args:
            return f
        return Atom(f.name, tuple(term_subst(a, name, repl) for a in f.args))
    if isinstance(f, Top):
        return f
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, name, repl), substitute(f.right, name, repl))
    if f.var == name:
        return f
    return type(f)(f.var, substitute(f.body, name, repl))


def rename_fresh(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Alpha-rename binders so that every binder name is distinct from the
    others, from the free variables of ``f`` and from ``avoid``."""
    used = set(avoid) | free_vars(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, (Atom, Top)):
            return g
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        new = fresh_name(g.var, used)
        used.add(new)
        body = g.body if new == g.var else substitute(g.body, g.var, Var(new))
        return type(g)(new, go(body))

    return go(f)


def _no_shadowing(f: Formula) -> Formula:
    """Rename only binders that shadow an enclosing binder or a free variable."""
    free = free_vars(f)

    def go(g: Formula, scope: frozenset) -> Formula:
        if isinstance(g, (Atom, Top)):
            return g
        if isinstance(g, BINARY):
            return type(g)(go(g.left, scope), go(g.right, scope))
        name = g.var
        body = g.body
        if name in scope or name in free:
            name = fresh_name(name, set(scope) | free | set(bound_vars(body)) | free_vars(body))
            body = substitute(body, g.var, Var(name))
        return type(g)(name, go(body, scope | {name}))

    return go(f, frozenset())


def alpha_equal(f: Formula, g: Formula) -> bool:
    def go(a, b, env_a, env_b):
        if type(a) is not type(b):
            return False
        if isinstance(a, Top):
            return True
        if isinstance(a, Atom):
            if a.name != b.name or len(a.args) != len(b.args):
                return False
            return all(term_eq(s, t, env_a, env_b) for s, t in zip(a.args, b.args))
        if isinstance(a, BINARY):
            return go(a.left, b.left, env_a, env_b) and go(a.right, b.right, env_a, env_b)
        depth = len(env_a)
        return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth})

    def term_eq(s, t, env_a, env_b):
        if isinstance(s, Var) and isinstance(t, Var):
            if s.name in env_a or t.name in env_b:
                return env_a.get(s.name) == env_b.get(t.name)
            return s.name == t.name
        if isinstance(s, Fn) and isinstance(t, Fn):
            return (
                s.name == t.name
                and len(s.args) == len(t.args)
                and all(term_eq(x, y, env_a, env_b) for x, y in zip(s.args, t.args))
            )
        return False

    return go(f, g, {}, {})


# ---------------------------------------------------------------------------
# Parsing
#
#   formula := quant | disj ('->' formula)?
#   disj    := conj ('|' conj)*
#   conj    := unary ('&' unary)*
#   unary   := quant | '(' formula ')' | 'top' | '1' | atom
#   quant   := ('forall' | 'exists') ident+ '.' formula

_TOKEN_RE = re.compile(
    r"""\s*(?:
      (?P<imp>->|→|=>)
    | (?P<and>&|∧|/\\)
    | (?P<or>\||∨|\\/)
    | (?P<forall>∀)
    | (?P<exists>∃)
    | (?P<top>⊤)
    | (?P<lp>\()
    | (?P<rp>\))
    | (?P<comma>,)
    | (?P<dot>\.)
    | (?P<num>1\b)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value in ("forall", "exists", "top"):
            kind = value
        if kind == "num":
            kind = "top"
        out.append((kind, value, start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        if self.peek()[0] in ("forall", "exists"):
            return self.quant()
        left = self.disj()
        if self.peek()[0] == "imp":
            self.take()
            return Imp(left, self.formula())
        return left

    def quant(self) -> Formula:
        kind = self.take()[0]
        names = [self.take("ident")[1]]
        while self.peek()[0] == "ident":
            names.append(self.take()[1])
        self.take("dot")
        body = self.formula()
        cls = Forall if kind == "forall" else Exists
        for n in reversed(names):
            body = cls(n, body)
        return body

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "or":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind in ("forall", "exists"):
            return self.quant()
        if kind == "lp":
            self.take()
            f = self.formula()
            self.take("rp")
            return f
        if kind == "top":
            self.take()
            return TOP
        if kind == "ident":
            self.take()
            if self.peek()[0] == "lp":
                return Atom(value, self.term_args())
            return Atom(value)
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)

    def term_args(self) -> tuple:
        self.take("lp")
        args = []
        if self.peek()[0] != "rp":
            args.append(self.term())
            while self.peek()[0] == "comma":
                self.take()
                args.append(self.term())
        self.take("rp")
        return tuple(args)

    def term(self) -> Term:
        name = self.take("ident")[1]
        if self.peek()[0] == "lp":
            return Fn(name, self.term_args())
        return Var(name)


def parse_formula(text: str) -> Formula:
    """Parse formula text.  Binders are renamed where they would shadow."""
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    return _no_shadowing(f)


def parse_sequent(text: str) -> Sequent:
    """``A, B |- C`` or a bare formula (empty context)."""
    if "|-" in text or "⊢" in text:
        lhs, rhs = re.split(r"\|-|⊢", text, maxsplit=1)
        ctx = [parse_formula(part) for part in _split_top_commas(lhs) if part.strip()]
        return Sequent(tuple(ctx), parse_formula(rhs))
    return Sequent((), parse_formula(text))


def _split_top_commas(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


# ---------------------------------------------------------------------------
# Printing

_PREC = {Imp: 1, Or: 2, And: 3}


def print_logical(f: Formula) -> str:
    """ASCII logical notation that re-parses to the same tree."""
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Atom):
        if f.args:
            return f"{f.name}({', '.join(map(str, f.args))})"
        return f.name
    if isinstance(f, QUANTIFIERS):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"{kw} {f.var}. {print_logical(f.body)}"
    op = {And: " & ", Or: " | ", Imp: " -> "}[type(f)]
    prec = _PREC[type(f)]

    def child(g, side):
        s = print_logical(g)
        if isinstance(g, QUANTIFIERS):
            return f"({s})"
        if isinstance(g, BINARY):
            p = _PREC[type(g)]
            # & and | associate left, -> associates right
            if p < prec or (p == prec and (side == "right") != (type(f) is Imp)):
                return f"({s})"
        return s

    return child(f.left, "left") + op + child(f.right, "right")


def _all_short_names(f: Formula) -> bool:
    return all(len(a.name) == 1 for a in atoms(f)) and all(
        len(v) == 1 for v in bound_vars(f)
    )


def print_polynomial(f: Formula, sep: str | None = None) -> str:
    """Exponential polynomial notation: FG for F&G, F+G, G^F for F->G,
    xF for exists x.F and F^x for forall x.F, 1 for top."""
    if sep is None:
        sep = "" if _all_short_names(f) else "·"

    def atomic(g):
        return isinstance(g, (Atom, Top))

    def go(g, ctx):
        # ctx: "sum", "prod", "base", "exp"
        if isinstance(g, Top):
            return "1"
        if isinstance(g, Atom):
            return print_logical(g)
        if isinstance(g, Or):
            s = go(g.left, "sum") + "+" + go(g.right, "sum")
            return s if ctx == "sum" else f"({s})"
        if isinstance(g, And):
            s = go(g.left, "prod") + sep + go(g.right, "prod")
            return s if ctx in ("sum", "prod") else f"({s})"
        if isinstance(g, Exists):
            s = g.var + go(g.body, "base")
            return s if ctx == "sum" else f"({s})"
        if isinstance(g, Imp):
            base, expo = g.right, g.left
        else:
            base, expo = g.body, None
        b = go(base, "base")
        if expo is None:
            e = g.var
        else:
            e = go(expo, "exp") if atomic(expo) else f"({go(expo, 'sum')})"
        s = f"{b}^{e}"
        return s if ctx in ("sum", "prod") else f"({s})"

    return go(f, "sum")


# ---------------------------------------------------------------------------
# JSON


def term_to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    return {"fn": t.name, "args": [term_to_json(a) for a in t.args]}


def term_from_json(d: dict) -> Term:
    if "var" in d:
        return Var(d["var"])
    return Fn(d["fn"], tuple(term_from_json(a) for a in d.get("args", [])))


def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        d = {"op": "atom", "name": f.name}
        if f.args:
            d["args"] = [term_to_json(a) for a in f.args]
        return d
    if isinstance(f, Top):
        return {"op": "top"}
    if isinstance(f, BINARY):
        op = {And: "and", Or: "or", Imp: "imp"}[type(f)]
        return {"op": op, "left": formula_to_json(f.left), "right": formula_to_json(f.right)}
    op = "forall" if isinstance(f, Forall) else "exists"
    return {"op": op, "var": f.var, "body": formula_to_json(f.body)}


def formula_from_json(d: dict) -> Formula:
    op = d["op"]
    if op == "atom":
        return Atom(d["name"], tuple(term_from_json(a) for a in d.get("args", [])))
    if op == "top":
        return TOP
    if op in ("and", "or", "imp"):
        cls = {"and": And, "or": Or, "imp": Imp}[op]
        return cls(formula_from_json(d["left"]), formula_from_json(d["right"]))
    if op in ("forall", "exists"):
        cls = Forall if op == "forall" else Exists
        return cls(d["var"], formula_from_json(d["body"]))
    raise ValueError(f"unknown formula op {op!r}")


def sequent_to_json(s: Sequent) -> dict:
    return {"context": [formula_to_json(f) for f in s.context], "goal": formula_to_json(s.goal)}


def sequent_from_json(d: dict) -> Sequent:
    return Sequent(
        tuple(formula_from_json(f) for f in d["context"]), formula_from_json(d["goal"])
    )
