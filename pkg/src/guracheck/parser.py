"""Line-oriented text format for automata, and the ``tag:datum`` word syntax.

Example::

    alphabet σ
    registers 1
    initial l0
    accepting l2
    edge l0 -> l1 on σ when r1' != in
    edge l1 -> l1 on σ when (in != r1 & r1' == r1)
    edge l1 -> l2 on σ when (in == r1 & r1' == r1)

An optional ``locations`` header declares locations explicitly; when it is
present every other location name is an error.  Otherwise locations are
collected in order of first mention.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .automaton import Automaton, DataWord, Edge, Letter
from .constraints import (
    TRUE,
    And,
    Constraint,
    CurEq,
    NextEqInput,
    NextEqReg,
    Not,
    Or,
    format_constraint,
)
from .errors import AutomatonError, ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<op>==|!=|&&|\|\||[()!&|])|(?P<reg>r(?P<idx>\d*)(?P<prime>')?)|(?P<word>true|in)\b)"
)


def _tokenize(text: str, line: int, offset: int) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", line, col)
        col = offset + m.start(m.lastgroup) + 1
        if m.group("op"):
            op = {"&&": "&", "||": "|"}.get(m.group("op"), m.group("op"))
            tokens.append(("op", op, col))
        elif m.group("reg"):
            idx = m.group("idx") or "1"
            kind = "next" if m.group("prime") else "cur"
            tokens.append((kind, idx, col))
        else:
            tokens.append((m.group("word"), m.group("word"), col))
        pos = m.end()
    tokens.append(("end", "", offset + len(text) + 1))
    return tokens


class _ConstraintParser:
    # or := and ('|' and)* ; and := unary ('&' unary)* ; unary := '!' unary | primary
    def __init__(self, text: str, line: int, offset: int):
        self.tokens = _tokenize(text, line, offset)
        self.pos = 0
        self.line = line

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.line, tok[2])

    def expect_op(self, op):
        tok = self.take()
        if tok[:2] != ("op", op):
            self.fail(f"expected {op!r}", tok)

    def parse(self) -> Constraint:
        phi = self.parse_or()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return phi

    def parse_or(self):
        phi = self.parse_and()
        while self.peek()[:2] == ("op", "|"):
            self.take()
            phi = Or(phi, self.parse_and())
        return phi

    def parse_and(self):
        phi = self.parse_unary()
        while self.peek()[:2] == ("op", "&"):
            self.take()
            phi = And(phi, self.parse_unary())
        return phi

    def parse_unary(self):
        if self.peek()[:2] == ("op", "!"):
            self.take()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        tok = self.peek()
        if tok[:2] == ("op", "("):
            self.take()
            phi = self.parse_or()
            self.expect_op(")")
            return phi
        if tok[0] == "true":
            self.take()
            return TRUE
        if tok[0] in ("in", "cur", "next"):
            return self.parse_atom()
        self.fail(f"unexpected token {tok[1]!r}" if tok[0] != "end" else "unexpected end of constraint")

    def _reg(self, tok) -> int:
        i = int(tok[1])
        if i < 1:
            self.fail("registers are numbered from r1", tok)
        return i - 1

    def parse_atom(self):
        lhs = self.take()
        op = self.take()
        if op[0] != "op" or op[1] not in ("==", "!="):
            self.fail("expected '==' or '!='", op)
        rhs = self.take()
        kinds = (lhs[0], rhs[0])
        if kinds in (("in", "cur"), ("cur", "in")):
            reg = lhs if lhs[0] == "cur" else rhs
            atom = CurEq(self._reg(reg))
        elif kinds == ("next", "cur"):
            atom = NextEqReg(self._reg(lhs), self._reg(rhs))
        elif kinds == ("cur", "next"):
            atom = NextEqReg(self._reg(rhs), self._reg(lhs))
        elif kinds in (("next", "in"), ("in", "next")):
            reg = lhs if lhs[0] == "next" else rhs
            atom = NextEqInput(self._reg(reg))
        else:
            self.fail("unsupported comparison", lhs)
        return atom if op[1] == "==" else Not(atom)


def parse_constraint(text: str, line: Optional[int] = None, offset: int = 0) -> Constraint:
    return _ConstraintParser(text, line, offset).parse()


_EDGE = re.compile(r"^edge\s+(\S+)\s*->\s*(\S+)\s+on\s+(\S+)(?:\s+when\s+(.*))?$")


def parse_automaton(text: str) -> Automaton:
    """Parse and validate an automaton in the text format.

    Raises :class:`ParseError` for syntax and semantic problems, both carrying
    the offending line.
    """
    alphabet = None
    registers = None
    declared = None
    initial = None
    accepting = None
    edges = []
    mentioned: List[str] = []
    first_line = {}

    def mention(loc, lineno):
        if loc not in first_line:
            first_line[loc] = lineno
            mentioned.append(loc)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        keyword, _, rest = stripped.partition(" ")
        args = rest.split()

        def once(value, name):
            if value is not None:
                raise ParseError(f"duplicate {name!r} header", lineno, indent + 1)

        if keyword == "alphabet":
            once(alphabet, "alphabet")
            if not args:
                raise ParseError("alphabet needs at least one symbol", lineno, indent + 1)
            alphabet = args
        elif keyword == "registers":
            once(registers, "registers")
            if len(args) != 1 or not args[0].isdigit():
                raise ParseError("registers expects one non-negative integer", lineno, indent + 10)
            registers = int(args[0])
        elif keyword == "locations":
            once(declared, "locations")
            declared = args
        elif keyword == "initial":
            once(initial, "initial")
            if len(args) != 1:
                raise ParseError("initial expects exactly one location", lineno, indent + 1)
            initial = args[0]
            mention(initial, lineno)
        elif keyword == "accepting":
            once(accepting, "accepting")
            accepting = args
            for a in args:
                mention(a, lineno)
        elif keyword == "edge":
            m = _EDGE.match(stripped)
            if not m:
                raise ParseError(
                    "expected 'edge <src> -> <dst> on <tag> when <constraint>'", lineno, indent + 1
                )
            src, dst, tag, guard_text = m.groups()
            if guard_text is None:
                guard = TRUE
            else:
                guard = parse_constraint(guard_text, lineno, indent + m.start(4))
            mention(src, lineno)
            mention(dst, lineno)
            edges.append((lineno, Edge(src, tag, guard, dst)))
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno, indent + 1)

    for name, value in (("alphabet", alphabet), ("registers", registers), ("initial", initial)):
        if value is None:
            raise ParseError(f"missing {name!r} header")
    if declared is not None:
        for loc in mentioned:
            if loc not in declared:
                raise ParseError(f"unknown location {loc!r}", first_line[loc])
        locations = declared
    else:
        locations = mentioned
    for lineno, e in edges:
        try:
            Automaton(alphabet, registers, locations, initial, accepting or (), [e])
        except AutomatonError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        return Automaton(alphabet, registers, locations, initial, accepting or (), [e for _, e in edges])
    except AutomatonError as exc:
        raise ParseError(str(exc)) from None


def format_automaton(aut: Automaton) -> str:
    lines = [
        "alphabet " + " ".join(aut.alphabet),
        f"registers {aut.register_count}",
        "locations " + " ".join(aut.locations),
        f"initial {aut.initial}",
        "accepting " + " ".join(l for l in aut.locations if l in aut.accepting),
    ]
    for e in aut.edges:
        lines.append(f"edge {e.source} -> {e.target} on {e.tag} when {format_constraint(e.guard)}")
    return "\n".join(lines) + "\n"


def parse_word(text: str) -> DataWord:
    """Parse space-separated ``tag:datum`` pairs; ``ε`` or blank is the empty word."""
    letters = []
    stripped = text.strip()
    if stripped in ("", "ε"):
        return ()
    for item in stripped.split():
        tag, sep, datum = item.rpartition(":")
        if not sep or not tag or not datum.isdigit():
            raise ParseError(f"bad letter {item!r}; expected tag:datum")
        letters.append(Letter(tag, int(datum)))
    return tuple(letters)


def format_word(w) -> str:
    if not w:
        return "ε"
    return " ".join(f"{l.tag}:{l.datum}" for l in w)
