"""Command-line entry point.

Exit codes: 0 success / contained, 1 not contained (or a violation or
disagreement was found), 2 usage, parse or semantic error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .automaton import Automaton, membership
from .configuration import Configuration, succ_letter
from .engine import check_containment
from .errors import AutomatonError, ParseError, UnsupportedAutomatonError
from .oracle import FuzzParams, bounded_unambiguity_check, fuzz
from .parser import format_word, parse_automaton, parse_word

UNAMBIGUITY_BOUND = 4
UNAMBIGUITY_DOMAIN = 8


class _Usage(Exception):
    pass


def _load(path: str) -> Automaton:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_automaton(text)
    except ParseError as exc:
        raise _Usage(f"{path}: {exc}") from None


def _word(text: str):
    try:
        return parse_word(text)
    except (ParseError, ValueError) as exc:
        raise _Usage(f"bad word: {exc}") from None


def _format_run(run) -> str:
    def val(v):
        return ",".join("⊥" if x is None else str(x) for x in v)

    return " -> ".join(f"({s.location}; {val(s.valuation)})" for s in run)


def cmd_check(args, out) -> int:
    a, b = _load(args.file_a), _load(args.file_b)
    caveat = None
    if args.assume_unambiguous:
        caveat = "note: unambiguity of B assumed, not checked"
    elif b.register_count == 1:
        hit = bounded_unambiguity_check(b, UNAMBIGUITY_BOUND, UNAMBIGUITY_DOMAIN)
        if hit is None:
            caveat = (
                f"note: B is unambiguous only up to words of length {UNAMBIGUITY_BOUND}; "
                "a 'contained' verdict relies on full unambiguity"
            )
        else:
            caveat = (
                f"WARNING: B is ambiguous (two accepting runs on {format_word(hit[0])}); "
                "a 'contained' verdict may be wrong"
            )
    verdict = check_containment(a, b)
    if args.json:
        print(json.dumps(verdict.to_json(), ensure_ascii=False), file=out)
    elif verdict.contained:
        print("CONTAINED", file=out)
    else:
        print("NOT CONTAINED", file=out)
        print(f"witness: {format_word(verdict.witness)}", file=out)
    if caveat:
        print(caveat, file=sys.stderr)
    return 0 if verdict.contained else 1


def cmd_member(args, out) -> int:
    aut = _load(args.file)
    print("true" if membership(aut, _word(args.word)) else "false", file=out)
    return 0


def cmd_unambiguous(args, out) -> int:
    aut = _load(args.file)
    if args.bound < 0 or args.domain < args.bound:
        raise _Usage("need 0 <= bound <= domain")
    hit = bounded_unambiguity_check(aut, args.bound, args.domain)
    if hit is None:
        print(f"no violation up to bound {args.bound}", file=out)
        return 0
    w, r1, r2 = hit
    print(f"violation: {format_word(w)}", file=out)
    print(f"run 1: {_format_run(r1)}", file=out)
    print(f"run 2: {_format_run(r2)}", file=out)
    return 1


def cmd_fuzz(args, out) -> int:
    try:
        params = FuzzParams(
            max_word_length=args.max_len,
            data_domain_size=args.domain,
            max_locations=args.max_locations,
            max_edges=args.max_edges,
            max_registers_a=args.max_registers,
            seed=args.seed,
            instances=args.instances,
        )
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    bad = 0
    for outcome in fuzz(params):
        bad += not outcome.oracle_agrees
        print(json.dumps(outcome.to_json()), file=out, flush=True)
    return 1 if bad else 0


def cmd_trace(args, out) -> int:
    b = _load(args.file)
    w = _word(args.word)
    c = Configuration.initial(b)
    for letter in w:
        c = succ_letter(b, c, letter)
        print(c.dumps(), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="guracheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide L(A) ⊆ L(B)")
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.add_argument("--json", action="store_true", help="print the verdict as JSON")
    c.add_argument("--assume-unambiguous", action="store_true", help="skip the bounded unambiguity pre-check")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("member", help="test whether a word is accepted")
    m.add_argument("file")
    m.add_argument("word", help="space-separated tag:datum pairs")
    m.set_defaults(func=cmd_member)

    u = sub.add_parser("unambiguous", help="bounded search for two accepting runs")
    u.add_argument("file")
    u.add_argument("--bound", type=int, default=UNAMBIGUITY_BOUND)
    u.add_argument("--domain", type=int, default=UNAMBIGUITY_DOMAIN)
    u.set_defaults(func=cmd_unambiguous)

    f = sub.add_parser("fuzz", help="compare the decision procedure with the bounded oracle")
    defaults = FuzzParams()
    f.add_argument("--instances", type=int, default=defaults.instances)
    f.add_argument("--seed", type=int, default=defaults.seed)
    f.add_argument("--max-len", type=int, default=defaults.max_word_length)
    f.add_argument("--domain", type=int, default=defaults.data_domain_size)
    f.add_argument("--max-locations", type=int, default=defaults.max_locations)
    f.add_argument("--max-edges", type=int, default=defaults.max_edges)
    f.add_argument("--max-registers", type=int, default=defaults.max_registers_a)
    f.set_defaults(func=cmd_fuzz)

    t = sub.add_parser("trace", help="print B's configuration after each letter")
    t.add_argument("file")
    t.add_argument("word")
    t.set_defaults(func=cmd_trace)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args, out)
    except (_Usage, AutomatonError, UnsupportedAutomatonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
