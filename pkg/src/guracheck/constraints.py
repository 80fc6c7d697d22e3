"""Register constraints: syntax tree, satisfaction and disjunctive normal form.

Registers are 0-indexed internally.  The undefined register value is ``None``;
data values are non-negative integers and are only ever compared for equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import FrozenSet, Optional, Sequence, Tuple, Union

Datum = Optional[int]
Valuation = Tuple[Datum, ...]


@dataclass(frozen=True)
class Top:
    """The constraint ``true``."""


@dataclass(frozen=True)
class CurEq:
    """The input datum equals the current value of register ``reg``."""

    reg: int


@dataclass(frozen=True)
class NextEqReg:
    """The next value of register ``reg`` equals the current value of ``src``."""

    reg: int
    src: int


@dataclass(frozen=True)
class NextEqInput:
    """The next value of register ``reg`` equals the input datum."""

    reg: int


@dataclass(frozen=True)
class Not:
    arg: "Constraint"


@dataclass(frozen=True)
class And:
    left: "Constraint"
    right: "Constraint"


Atom = Union[CurEq, NextEqReg, NextEqInput]
Constraint = Union[Top, CurEq, NextEqReg, NextEqInput, Not, And]
Literal = Tuple[Atom, bool]
Conjunct = FrozenSet[Literal]

TRUE = Top()


def Or(left: Constraint, right: Constraint) -> Constraint:
    return Not(And(Not(left), Not(right)))


def conj(*parts: Constraint) -> Constraint:
    """Fold ``parts`` into a right-nested conjunction (``true`` if empty)."""
    if not parts:
        return TRUE
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = And(part, result)
    return result


def registers_used(phi: Constraint) -> set:
    if isinstance(phi, CurEq) or isinstance(phi, NextEqInput):
        return {phi.reg}
    if isinstance(phi, NextEqReg):
        return {phi.reg, phi.src}
    if isinstance(phi, Not):
        return registers_used(phi.arg)
    if isinstance(phi, And):
        return registers_used(phi.left) | registers_used(phi.right)
    return set()


def eval_atom(atom: Atom, u: Sequence[Datum], d: int, v: Sequence[Datum]) -> bool:
    if isinstance(atom, CurEq):
        return u[atom.reg] == d
    if isinstance(atom, NextEqReg):
        return v[atom.reg] == u[atom.src]
    return v[atom.reg] == d


def eval_constraint(u: Sequence[Datum], d: int, v: Sequence[Datum], phi: Constraint) -> bool:
    """Return whether ``(u, d, v)`` satisfies ``phi``.

    ``None`` compares equal to itself and unequal to every datum.
    """
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Not):
        return not eval_constraint(u, d, v, phi.arg)
    if isinstance(phi, And):
        return eval_constraint(u, d, v, phi.left) and eval_constraint(u, d, v, phi.right)
    return eval_atom(phi, u, d, v)


def _atom_order(literal: Literal):
    atom, positive = literal
    kind = type(atom).__name__
    return (kind, getattr(atom, "reg", 0), getattr(atom, "src", 0), positive)


def _dnf(phi: Constraint, positive: bool) -> list:
    if isinstance(phi, Top):
        return [frozenset()] if positive else []
    if isinstance(phi, Not):
        return _dnf(phi.arg, not positive)
    if isinstance(phi, And):
        if not positive:
            return _dnf(phi.left, False) + _dnf(phi.right, False)
        out = []
        for a, b in product(_dnf(phi.left, True), _dnf(phi.right, True)):
            merged = a | b
            if not any((atom, not pol) in merged for atom, pol in merged):
                out.append(merged)
        return out
    return [frozenset({(phi, positive)})]


@lru_cache(maxsize=None)
def dnf(phi: Constraint) -> Tuple[Conjunct, ...]:
    """Disjunctive normal form of ``phi`` as a tuple of literal sets.

    Conjuncts containing an atom in both polarities are dropped.  No further
    simplification (absorption, subsumption) is done: the undefined-value copy
    rule in :func:`conjunct_targets` reads literals syntactically.
    """
    seen = []
    for c in _dnf(phi, True):
        if c not in seen:
            seen.append(c)
    seen.sort(key=lambda c: sorted(map(_atom_order, c)))
    return tuple(seen)


def conjunct_targets(
    c: Conjunct, u: Sequence[Datum], d: int, values: FrozenSet[int]
) -> Optional[list]:
    """Per-register candidate sets for the next valuation under conjunct ``c``.

    ``values`` is the finite pool of data the next values are drawn from.
    Returns ``None`` when the conjunct fails on ``(u, d)`` alone.  Atoms never
    relate two next values to each other, so the admissible next valuations
    are exactly the product of the returned per-register lists.

    A register may only become ``None`` by a positive copy literal from a
    register that currently holds ``None``; guesses range over data only.
    """
    n = len(u)
    fixed = [None] * n
    has_fixed = [False] * n
    excluded = [set() for _ in range(n)]
    for atom, positive in c:
        if isinstance(atom, CurEq):
            if (u[atom.reg] == d) != positive:
                return None
            continue
        target = u[atom.src] if isinstance(atom, NextEqReg) else d
        i = atom.reg
        if positive:
            if has_fixed[i] and fixed[i] != target:
                return None
            fixed[i] = target
            has_fixed[i] = True
        else:
            excluded[i].add(target)
    out = []
    for i in range(n):
        if has_fixed[i]:
            cands = [fixed[i]] if fixed[i] not in excluded[i] else []
        else:
            cands = sorted(x for x in values if x not in excluded[i])
        if not cands:
            return None
        out.append(cands)
    return out


def conjunct_holds(c: Conjunct, u: Sequence[Datum], d: int, v: Sequence[Datum]) -> bool:
    for atom, positive in c:
        if eval_atom(atom, u, d, v) != positive:
            return False
    for i, x in enumerate(v):
        if x is None and not any(
            positive and isinstance(atom, NextEqReg) and atom.reg == i for atom, positive in c
        ):
            return False
    return True


def step_holds(phi: Constraint, u: Sequence[Datum], d: int, v: Sequence[Datum]) -> bool:
    """Transition-level satisfaction: ``eval_constraint`` plus the copy rule for ``None``."""
    return any(conjunct_holds(c, u, d, v) for c in dnf(phi))


def format_constraint(phi: Constraint) -> str:
    """Render ``phi`` in the automaton text syntax (registers printed 1-based)."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, CurEq):
        return f"in == r{phi.reg + 1}"
    if isinstance(phi, NextEqReg):
        return f"r{phi.reg + 1}' == r{phi.src + 1}"
    if isinstance(phi, NextEqInput):
        return f"r{phi.reg + 1}' == in"
    if isinstance(phi, Not):
        arg = phi.arg
        if isinstance(arg, (CurEq, NextEqReg, NextEqInput)):
            return format_constraint(arg).replace("==", "!=")
        if isinstance(arg, (Not, Top)):
            return f"!({format_constraint(arg)})"
        return "!" + format_constraint(arg)
    return f"({format_constraint(phi.left)} & {format_constraint(phi.right)})"
