"""Register automata with guessing and their concrete operational semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .constraints import (
    Constraint,
    TRUE,
    Valuation,
    conjunct_targets,
    dnf,
    registers_used,
)
from .errors import AutomatonError


@dataclass(frozen=True, order=True)
class Letter:
    tag: str
    datum: int

    def __post_init__(self):
        if not isinstance(self.datum, int) or self.datum < 0:
            raise ValueError(f"letter datum must be a non-negative integer, got {self.datum!r}")


DataWord = Tuple[Letter, ...]


def word(*pairs) -> DataWord:
    """Build a data word from ``(tag, datum)`` pairs."""
    return tuple(Letter(t, d) for t, d in pairs)


def data_of(w: Iterable) -> set:
    """Data occurring in a word or a valuation (``None`` excluded)."""
    out = set()
    for x in w:
        if isinstance(x, Letter):
            out.add(x.datum)
        elif x is not None:
            out.add(x)
    return out


@dataclass(frozen=True)
class Edge:
    source: str
    tag: str
    guard: Constraint
    target: str


@dataclass(frozen=True)
class ConcreteState:
    location: str
    valuation: Valuation


@dataclass(frozen=True)
class Automaton:
    """A register automaton with guessing.

    ``locations`` keeps declaration order; it fixes the order used for
    printing and for canonical encodings.
    """

    alphabet: Tuple[str, ...]
    register_count: int
    locations: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    edges: Tuple[Edge, ...] = ()
    _by_source: Dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.register_count < 0:
            raise AutomatonError("register count must be non-negative")
        if len(set(self.locations)) != len(self.locations):
            raise AutomatonError("duplicate location")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate alphabet symbol")
        locs = set(self.locations)
        if self.initial not in locs:
            raise AutomatonError(f"unknown initial location {self.initial!r}")
        for loc in self.accepting:
            if loc not in locs:
                raise AutomatonError(f"unknown accepting location {loc!r}")
        index: Dict[Tuple[str, str], List[Edge]] = {}
        for e in self.edges:
            for loc in (e.source, e.target):
                if loc not in locs:
                    raise AutomatonError(f"unknown location {loc!r}")
            if e.tag not in self.alphabet:
                raise AutomatonError(f"tag {e.tag!r} not in alphabet")
            for r in registers_used(e.guard):
                if not 0 <= r < self.register_count:
                    raise AutomatonError(
                        f"register r{r + 1} out of range for {self.register_count} register(s)"
                    )
            index.setdefault((e.source, e.tag), []).append(e)
        object.__setattr__(self, "_by_source", {k: tuple(v) for k, v in index.items()})

    def edges_from(self, location: str, tag: str) -> Tuple[Edge, ...]:
        return self._by_source.get((location, tag), ())

    def initial_state(self) -> ConcreteState:
        return ConcreteState(self.initial, (None,) * self.register_count)


def concrete_successors(
    aut: Automaton, s: ConcreteState, letter: Letter, guess_pool: Iterable[int]
) -> FrozenSet[ConcreteState]:
    """All one-step successors of ``s`` on ``letter``, with guesses drawn from ``guess_pool``.

    Next register values range over the current register data, the input
    datum and the pool.  ``None`` only survives by an explicit copy.
    """
    d = letter.datum
    u = s.valuation
    values = frozenset(guess_pool) | {d} | {x for x in u if x is not None}
    out = set()
    for e in aut.edges_from(s.location, letter.tag):
        for c in dnf(e.guard):
            cands = conjunct_targets(c, u, d, values)
            if cands is None:
                continue
            for v in product(*cands):
                out.add(ConcreteState(e.target, tuple(v)))
    return frozenset(out)


def step_states(aut: Automaton, states: Iterable[ConcreteState], letter: Letter, guess_pool) -> FrozenSet[ConcreteState]:
    out = set()
    for s in states:
        out |= concrete_successors(aut, s, letter, guess_pool)
    return frozenset(out)


def fresh_data(avoid: Iterable[int], count: int) -> List[int]:
    """The ``count`` least non-negative integers not in ``avoid``."""
    avoid = set(avoid)
    out, x = [], 0
    while len(out) < count:
        if x not in avoid:
            out.append(x)
        x += 1
    return out


def membership(aut: Automaton, w: Sequence[Letter]) -> bool:
    """Decide ``w`` in L(aut) by a subset search over concrete states.

    Guesses come from data(w) plus ``registers * (|w| + 1)`` fresh data; runs
    are closed under renaming of data, so this pool loses no run up to
    renaming of the guessed values.
    """
    used = data_of(w)
    pool = used | set(fresh_data(used, aut.register_count * (len(w) + 1)))
    states = frozenset({aut.initial_state()})
    for letter in w:
        states = step_states(aut, states, letter, pool)
        if not states:
            return False
    return any(s.location in aut.accepting for s in states)


def universal_automaton(alphabet: Sequence[str] = ("σ",), registers: int = 1) -> Automaton:
    """One accepting location with an unconstrained self-loop per tag."""
    return Automaton(
        alphabet=tuple(alphabet),
        register_count=registers,
        locations=("q",),
        initial="q",
        accepting={"q"},
        edges=tuple(Edge("q", t, TRUE, "q") for t in alphabet),
    )
