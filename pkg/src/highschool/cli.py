"""Command-line interface.

Exit codes: 0 success or provable, 1 not provable (or a derivation that
does not check), 2 input error, 3 audit violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys
from typing import Optional, Sequence

from . import hs as H
from . import normalize as N
from .g4ip import (
    ProverConfig,
    RuleError,
    check,
    derivation_from_json,
    derivation_to_json,
    derivation_to_latex,
    derivation_to_text,
    prove,
)
from .generate import tautology_corpus
from .interp import (
    DEFAULT_GUARD,
    QuantifierError,
    Valuation,
    ValueTooLarge,
    audit_derivation,
    check_g3ip_failure,
    check_inequality_lemmas,
    degenerate_implimp,
    sweep_rule_grid,
    budget_value,
)
from .syntax import (
    ParseError,
    Sequent,
    is_propositional,
    parse_formula,
    parse_sequent,
    print_logical,
    simplify_top,
)

OK, UNPROVABLE, INPUT_ERROR, VIOLATION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _read_text(arg: Optional[str]) -> str:
    if arg is None or arg == "-":
        return sys.stdin.read()
    return arg


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _parse_input(text: str):
    text = text.strip()
    if not text:
        raise InputError("empty input")
    try:
        if "|-" in text or "⊢" in text:
            return parse_sequent(text)
        return parse_formula(text)
    except ParseError as exc:
        raise InputError(f"parse error: {exc}") from exc


def _load_derivation(path: str):
    """A G4ip ``Derivation`` or an HS proof, decided by the JSON shape."""
    try:
        data = json.loads(_read_file(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("expected a JSON object")
    try:
        if "roots" in data or "instantiation" in data:
            return "hs", H.hs_from_json(data)
        if "sequent" in data and "rule" in data:
            return "g4ip", derivation_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed derivation: {exc}") from exc
    raise InputError("not a G4ip or HS derivation")


def _valuation(args) -> Valuation:
    try:
        return Valuation(default=args.valuation)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit_g4ip(d, args) -> str:
    if args.emit == "json":
        return _dump(derivation_to_json(d))
    if args.emit == "latex":
        return derivation_to_latex(d)
    return derivation_to_text(d)


def _emit_hs(h, args) -> str:
    if args.emit == "json":
        return _dump(H.hs_to_json(h))
    if args.emit == "latex":
        return H.hs_to_latex(h, units=args.verbose_units)
    return H.hs_to_text(h, units=args.verbose_units)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_normalize(args) -> int:
    f = _parse_input(_read_text(args.formula))
    if isinstance(f, Sequent):
        f = f.as_formula()
    e = N.enf(f)
    if args.emit == "json":
        print(_dump(N.nf_to_json(e)))
        return OK
    poly = N.print_nf(e, units=args.verbose_units)
    logical = N.embed(e)
    logical = print_logical(logical if args.verbose_units else simplify_top(logical))
    if args.notation == "poly":
        print(poly)
    elif args.notation == "logical":
        print(logical)
    else:
        print(f"poly:    {poly}")
        print(f"logical: {logical}")
    return OK


def cmd_classify(args) -> int:
    f = _parse_input(_read_text(args.formula))
    if isinstance(f, Sequent):
        f = f.as_formula()
    e = N.enf(f)
    rep = N.classify(e)
    if args.emit == "json":
        print(_dump({"nf": N.print_nf(e), **dataclasses.asdict(rep)}))
    else:
        print(N.print_nf(e, units=args.verbose_units))
        print(rep.summary())
    return OK


def cmd_prove(args) -> int:
    f = _parse_input(_read_text(args.formula))
    s = f if isinstance(f, Sequent) else Sequent((), f)
    if not all(is_propositional(g) for g in s.context + (s.goal,)):
        raise InputError("the provers handle propositional formulas only")
    if args.calculus == "hs":
        if args.logic == "ex-falso":
            raise InputError("HS has no falsum rule; use --calculus g4ip")
        h = H.prove_hs_formula(s)
        if h is None:
            print("not provable", file=sys.stderr)
            return UNPROVABLE
        print(_emit_hs(h, args))
        return OK
    d = prove(s, ProverConfig(ex_falso=args.logic == "ex-falso"))
    if d is None:
        print("not provable", file=sys.stderr)
        return UNPROVABLE
    print(_emit_g4ip(d, args))
    return OK


def cmd_translate(args) -> int:
    kind, d = _load_derivation(args.file)
    try:
        if kind == "g4ip":
            out = H.g4ip_to_hs(d)
            print(_emit_hs(out, args))
        else:
            out, fallbacks = H.translate_hs(d)
            if fallbacks:
                print(f"note: {fallbacks} subproof(s) rebuilt by search", file=sys.stderr)
            print(_emit_g4ip(out, args))
    except (RuleError, H.TranslationError) as exc:
        print(f"translation failed: {exc}", file=sys.stderr)
        return UNPROVABLE
    return OK


def cmd_check(args) -> int:
    kind, d = _load_derivation(args.file)
    res = check(d, ex_falso=args.logic == "ex-falso") if kind == "g4ip" else H.check_hs(d)
    if args.emit == "json":
        print(_dump({"calculus": kind, "ok": res.ok, "path": list(res.path), "reason": res.reason}))
    else:
        print(f"{kind}: ok" if res.ok else f"{kind}: FAILED at {list(res.path)}: {res.reason}")
    return OK if res.ok else UNPROVABLE


def _print_audit(reports, args, extra: Optional[dict] = None) -> None:
    if args.emit == "json":
        print(_dump({**(extra or {}), "nodes": [r.as_dict() for r in reports]}))
        return
    for k, v in (extra or {}).items():
        print(f"{k}: {v}")
    for r in reports:
        line = f"{r.rule.value:9} {r.premise!s:>24} vs {r.conclusion!s:<24} {r.verdict}"
        print(line + (f"  ({r.detail})" if r.detail else ""))


def cmd_measure(args) -> int:
    v = _valuation(args)
    if args.grid:
        rep = sweep_rule_grid()
        prem, concl = degenerate_implimp()
        if args.emit == "json":
            print(_dump({
                "checked": rep.checked,
                "by_rule": rep.by_rule,
                "violations": [list(map(str, x)) for x in rep.violations],
                "degenerate": {"premise": str(prem), "conclusion": str(concl)},
            }))
        else:
            for rule, n in rep.by_rule.items():
                print(f"{rule:9} {n:5} instances")
            print(f"checked {rep.checked}, violations {len(rep.violations)}")
            print(f"degenerate ->l-> with I = top: premise {prem} vs conclusion {concl}")
        return OK if rep.ok else VIOLATION
    if args.sample:
        rng = random.Random(args.seed)
        corpus = tautology_corpus(args.sample, seed=rng.randrange(2**31))
        bad = 0
        rows = []
        for f in corpus:
            d = prove(f)
            reps = audit_derivation(d, v)
            bad += sum(not r.ok for r in reps)
            rows.append({"formula": print_logical(f), "nodes": d.size(), "violations": sum(not r.ok for r in reps)})
        if args.emit == "json":
            print(_dump({"seed": args.seed, "formulas": rows, "violations": bad}))
        else:
            for r in rows:
                print(f"{r['nodes']:4} nodes  {r['violations']} violations  {r['formula']}")
        return OK if bad == 0 else VIOLATION
    if args.file is None:
        raise InputError("measure needs a derivation file, --grid or --sample")
    kind, d = _load_derivation(args.file)
    try:
        if kind == "g4ip":
            reps = audit_derivation(d, v)
            extra = {"valuation": v.default, "nodes": d.size()}
            try:
                extra["budget"] = str(budget_value(d.conclusion, v))
                extra["non_invertible"] = d.non_invertible_count()
            except (ValueError, ValueTooLarge):
                pass
        else:
            reps = H.hs_value_audit(d, v)
            extra = {"valuation": v.default}
    except QuantifierError as exc:
        raise InputError(str(exc)) from exc
    _print_audit(reps, args, extra)
    return OK if all(r.ok for r in reps) else VIOLATION


def cmd_lemmas(args) -> int:
    rep = check_inequality_lemmas(guard=args.guard)
    cx = check_g3ip_failure()
    if args.emit == "json":
        print(_dump({"lemmas": rep.as_dict(), "g3ip_counterexample": cx.as_dict()}))
    else:
        for r in rep.results:
            status = "ok" if r.ok else f"{len(r.violations)} VIOLATIONS"
            print(f"{r.name:12} checked {r.checked:4}  skipped {len(r.skipped):3}  {status}   {r.statement}")
        print(
            f"g3ip counterexample: a={cx.a} b={cx.b} c={cx.c} gamma={cx.gamma}: "
            f"premise {cx.premise} vs conclusion {cx.conclusion}"
        )
    return OK if rep.ok else VIOLATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--notation", choices=("logical", "poly"), default=None)
    common.add_argument("--emit", choices=("text", "json", "latex"), default="text")
    common.add_argument("--logic", choices=("minimal", "ex-falso"), default="minimal")
    common.add_argument("--valuation", type=int, default=2, metavar="K", help="value of every atom (>= 2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--verbose-units", action="store_true", help="show trivial ^1 and 1 factors")

    p = argparse.ArgumentParser(prog="highschool", description="Exp-log normal forms and G4ip/HS proof search.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="print the exp-log normal form")
    s.add_argument("formula", nargs="?", help="formula text, or - for stdin")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("classify", parents=[common], help="report the Sigma/Pi class of the normal form")
    s.add_argument("formula", nargs="?")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("prove", parents=[common], help="search for a derivation")
    s.add_argument("formula", nargs="?", help="formula or sequent 'A, B |- C'")
    s.add_argument("--calculus", choices=("g4ip", "hs"), default="g4ip")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("translate", parents=[common], help="map a JSON derivation between G4ip and HS")
    s.add_argument("file", help="JSON file, or - for stdin")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("check", parents=[common], help="validate a JSON derivation")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("measure", parents=[common], help="audit rule values")
    s.add_argument("file", nargs="?")
    s.add_argument("--grid", action="store_true", help="sweep every rule schema over small values")
    s.add_argument("--sample", type=int, default=0, metavar="N", help="audit proofs of N seeded tautologies")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("lemmas", parents=[common], help="check the inequality lemmas")
    s.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="digit guard for huge values")
    s.set_defaults(func=cmd_lemmas)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INPUT_ERROR
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
