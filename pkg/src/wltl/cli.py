"""Command-line front end: ``wltl {check,translate,eval,equiv}``.

Exit codes: 0 success, 1 parse error, 2 formula outside the fragment,
3 state cap exceeded, 4 semantics and automaton disagree.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .automata import normalize, to_dict, to_dot, to_json
from .consistency import CapExceeded, consistent_sets, reach
from .evaluate import (
    LassoSyntaxError,
    UnknownAtom,
    check_equivalence,
    eval_behavior,
    eval_semantics,
    parse_lasso,
    pipeline,
)
from .formula import FormulaError, atoms, classify_fragment, in_translatable_fragment, parse, reduce, to_text
from .generate import random_lassos
from .monoid import MONOIDS, PRODUCT, format_weight, get_monoid
from .translate import translate

EXIT_OK, EXIT_PARSE, EXIT_FRAGMENT, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wltl", description="Weighted LTL to weighted Büchi automata.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("formula", help="formula text, e.g. 'G(a & 2)'")
    common.add_argument("--monoid", choices=sorted(MONOIDS), default="tropical")
    common.add_argument("--ap", help="comma-separated atoms (default: atoms of the formula)")
    common.add_argument("--cap", type=_positive, default=10_000, help="limit on consistent sets")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="classify and reduce a formula")

    p = sub.add_parser("translate", parents=[common], help="print the automaton of a formula")
    p.add_argument("--format", choices=["json", "dot", "text"], default="json")
    p.add_argument("--normalize", action="store_true", help="degeneralize and remove epsilon moves")

    p = sub.add_parser("eval", parents=[common], help="value of a formula on a lasso word")
    p.add_argument("--word", required=True, help="lasso word such as '{a}({b}{})^w'")

    p = sub.add_parser("equiv", parents=[common], help="compare semantics and automaton on sampled words")
    p.add_argument("--samples", type=_positive, default=10)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args):
    monoid = get_monoid(args.monoid)
    ap = [s.strip() for s in args.ap.split(",") if s.strip()] if args.ap else None
    try:
        f = parse(args.formula, ap, monoid)
    except FormulaError as exc:
        raise _Exit(EXIT_PARSE, f"parse error: {exc}") from None
    if ap is None:
        ap = sorted(atoms(f))
    return monoid, tuple(ap), f


def _fragment_name(monoid) -> str:
    return "RULTL" if monoid.kind == PRODUCT else "t-RULTL"


def _reduced_in_fragment(monoid, f):
    g = reduce(f, monoid)
    if not in_translatable_fragment(g, monoid):
        raise _Exit(EXIT_FRAGMENT, f"{to_text(g, monoid)} is not in {_fragment_name(monoid)}")
    return g


def cmd_check(args, out) -> int:
    monoid, _, f = _load(args)
    g = reduce(f, monoid)
    print(f"formula: {to_text(f, monoid)}", file=out)
    print(f"reduced: {to_text(g, monoid)}", file=out)
    for line in classify_fragment(g, monoid).lines():
        print(line, file=out)
    ok = in_translatable_fragment(g, monoid)
    print(f"translatable ({_fragment_name(monoid)}): {'yes' if ok else 'no'}", file=out)
    return EXIT_OK if ok else EXIT_FRAGMENT


def _text_dump(a) -> str:
    data = to_dict(a)
    lines = [f"monoid {data['monoid']}", f"ap {','.join(data['ap'])}"]
    lines += [f"state {s['id']} {s['label']}" for s in data["states"]]
    lines.append("initial " + " ".join(data["initial"]))
    for k, fam in enumerate(data["finalFamily"]):
        lines.append(f"final{k} " + " ".join(fam))
    for t in data["transitions"]:
        letter = t["letter"] if t["letter"] == "eps" else "{" + ",".join(t["letter"]) + "}"
        lines.append(f"{t['from']} -{letter}-> {t['to']} : {t['weight']}")
    return "\n".join(lines) + "\n"


def cmd_translate(args, out) -> int:
    monoid, ap, f = _load(args)
    g = reduce(f, monoid)
    if not in_translatable_fragment(g, monoid):
        # outside the fragment the state space may be infinite; report that first
        reach(consistent_sets(g), monoid, args.cap)
    g = _reduced_in_fragment(monoid, f)
    a = translate(g, monoid, ap=ap, cap=args.cap).automaton
    if args.normalize:
        a = normalize(a)
    if args.format == "json":
        out.write(to_json(a) + "\n")
    elif args.format == "dot":
        out.write(to_dot(a))
    else:
        out.write(_text_dump(a))
    return EXIT_OK


def _word(args, ap):
    try:
        return parse_lasso(args.word, ap)
    except (LassoSyntaxError, UnknownAtom) as exc:
        raise _Exit(EXIT_PARSE, f"parse error: {exc}") from None


def cmd_eval(args, out) -> int:
    monoid, ap, f = _load(args)
    w = _word(args, ap)
    g = _reduced_in_fragment(monoid, f)
    sem = eval_semantics(f, w, monoid)
    beh = eval_behavior(pipeline(g, monoid, ap=ap, cap=args.cap), w)
    print(f"semantics={format_weight(sem)}", file=out)
    print(f"behavior={format_weight(beh)}", file=out)
    return EXIT_OK if sem == beh else EXIT_MISMATCH


def cmd_equiv(args, out) -> int:
    monoid, ap, f = _load(args)
    g = _reduced_in_fragment(monoid, f)
    words = random_lassos(args.samples, seed=args.seed, ap=ap)
    report = check_equivalence(g, monoid, words, ap=ap, cap=args.cap)
    print(f"formula: {to_text(report.formula, monoid)}", file=out)
    print(f"samples: {report.samples}", file=out)
    print(f"mismatches: {len(report.mismatches)}", file=out)
    print(f"oracle checks: {report.oracle_checks}", file=out)
    print(f"oracle mismatches: {len(report.oracle_mismatches)}", file=out)
    print(f"horizon mismatches: {len(report.horizon_mismatches)}", file=out)
    for _, word, expected, got in report.mismatches + report.oracle_mismatches:
        print(f"  counterexample {word}: {format_weight(expected)} != {format_weight(got)}", file=out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


COMMANDS = {"check": cmd_check, "translate": cmd_translate, "eval": cmd_eval, "equiv": cmd_equiv}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except _Exit as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
