"""Brute-force reference procedures and a seeded random automaton generator.

Everything here works on concrete states only and shares no code with the
symbolic search beyond the automaton model itself.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .automaton import Automaton, ConcreteState, Edge, Letter, concrete_successors, membership, step_states
from .constraints import TRUE, And, Constraint, CurEq, NextEqInput, NextEqReg, Not, Or, conj

Run = Tuple[ConcreteState, ...]


@dataclass(frozen=True)
class FuzzParams:
    max_word_length: int = 6
    data_domain_size: int = 10
    max_locations: int = 3
    max_edges: int = 5
    max_registers_a: int = 2
    seed: int = 0
    instances: int = 500
    alphabet: Tuple[str, ...] = ("a", "b")
    unambiguity_bound: int = 5
    unambiguity_domain: int = 8

    def __post_init__(self):
        for name in ("max_word_length", "data_domain_size", "max_locations", "max_edges", "instances"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_registers_a < 0:
            raise ValueError("max_registers_a must be non-negative")
        if self.data_domain_size < self.max_word_length + self.max_registers_a + 1:
            raise ValueError("data_domain_size must leave room for fresh data")


def canonical_extensions(used: int, alphabet: Sequence[str]) -> List[Letter]:
    """Letters extending a word whose data are exactly 0..used-1.

    Words are enumerated up to renaming of data: each new datum is the least
    unused one.  Membership is invariant under renaming, so this covers every
    word over any domain with at least ``max_len`` elements.
    """
    return [Letter(t, d) for t in alphabet for d in range(used + 1)]


def coreachable(aut: Automaton) -> frozenset:
    """Locations with a path to an accepting location, ignoring constraints."""
    back = {}
    for e in aut.edges:
        back.setdefault(e.target, set()).add(e.source)
    seen = set(aut.accepting)
    todo = list(seen)
    while todo:
        for src in back.get(todo.pop(), ()):
            if src not in seen:
                seen.add(src)
                todo.append(src)
    return frozenset(seen)


def bounded_containment(a: Automaton, b: Automaton, max_len: int, dom_size: int) -> Optional[Tuple[Letter, ...]]:
    """Shortest word of length <= ``max_len`` in L(a) but not in L(b), if any.

    Words are generated level by level with state sets carried along each
    prefix.  Guesses range over the word-data window ``0..max_len-1`` plus
    ``2 * registers`` values outside it: at any step at most that many
    non-word values are live across a transition, so every run can be
    recolored into the pool.  Prefixes whose A-states cannot reach an
    accepting location are dropped, and prefixes with identical data count
    and state sets are merged (their futures coincide).
    """
    if dom_size < max_len:
        raise ValueError("dom_size must be at least max_len")
    pool_a = range(max_len + 2 * a.register_count)
    pool_b = range(max_len + 2 * b.register_count)
    live = coreachable(a)
    level = [((), 0, frozenset({a.initial_state()}), frozenset({b.initial_state()}))]
    for length in range(max_len + 1):
        for w, _, sa, sb in level:
            if any(s.location in a.accepting for s in sa) and not any(s.location in b.accepting for s in sb):
                return w
        if length == max_len:
            break
        nxt = {}
        for w, used, sa, sb in level:
            for letter in canonical_extensions(used, a.alphabet):
                sa2 = frozenset(s for s in step_states(a, sa, letter, pool_a) if s.location in live)
                if not sa2:
                    continue
                sb2 = step_states(b, sb, letter, pool_b)
                used2 = max(used, letter.datum + 1)
                nxt.setdefault((used2, sa2, sb2), w + (letter,))
        level = [(w, used, sa, sb) for (used, sa, sb), w in nxt.items()]
    return None


def bounded_unambiguity_check(
    b: Automaton, max_len: int, dom_size: int
) -> Optional[Tuple[Tuple[Letter, ...], Run, Run]]:
    """First word of length <= ``max_len`` with two distinct initialized accepting runs.

    Runs are sequences of states.  Guesses come from the word window plus
    ``max_len + registers`` further data, so an accepting run that makes an
    unforced guess shows up at least twice.
    """
    if dom_size < max_len:
        raise ValueError("dom_size must be at least max_len")
    pool = range(2 * max_len + b.register_count)
    start = b.initial_state()
    level = [((), 0, {start: [(start,)]})]
    for length in range(max_len + 1):
        for w, _, runs in level:
            accepted = [r for s, rs in sorted(runs.items(), key=_state_order) if s.location in b.accepting for r in rs]
            if len(accepted) >= 2:
                return w, accepted[0], accepted[1]
        if length == max_len:
            break
        nxt = []
        for w, used, runs in level:
            for letter in canonical_extensions(used, b.alphabet):
                runs2 = {}
                for s, rs in sorted(runs.items(), key=_state_order):
                    for s2 in sorted(concrete_successors(b, s, letter, pool), key=_state_order_1):
                        bucket = runs2.setdefault(s2, [])
                        for r in rs:
                            if len(bucket) < 2:
                                bucket.append(r + (s2,))
                if runs2:
                    nxt.append((w + (letter,), max(used, letter.datum + 1), runs2))
        level = nxt
    return None


def _state_order_1(s: ConcreteState):
    return (s.location, tuple(-1 if x is None else x for x in s.valuation))


def _state_order(item):
    return _state_order_1(item[0])


# random generation

def _random_literal_atoms(rng: random.Random, registers: int) -> List:
    atoms = []
    for i in range(registers):
        atoms.append(CurEq(i))
        atoms.append(NextEqInput(i))
        for j in range(registers):
            atoms.append(NextEqReg(i, j))
    return atoms


def _random_conjunct(rng: random.Random, registers: int, role: str) -> Constraint:
    if registers == 0:
        return TRUE
    atoms = _random_literal_atoms(rng, registers)
    parts = []
    if role == "B":
        # bias towards deterministic register updates
        r = rng.random()
        if r < 0.45:
            parts.append(NextEqReg(0, 0))
        elif r < 0.8:
            parts.append(NextEqInput(0))
        elif r < 0.9:
            parts.append(And(Not(NextEqInput(0)), Not(NextEqReg(0, 0))))
        r = rng.random()
        if r < 0.35:
            parts.append(CurEq(0))
        elif r < 0.7:
            parts.append(Not(CurEq(0)))
    else:
        if rng.random() < 0.5:
            parts.append(NextEqInput(rng.randrange(registers)))
        for _ in range(rng.randint(0, 2)):
            atom = rng.choice(atoms)
            parts.append(atom if rng.random() < 0.5 else Not(atom))
    return conj(*parts)


def random_constraint(rng: random.Random, registers: int, role: str) -> Constraint:
    """A random DNF of one or two conjuncts, nesting depth at most 3."""
    phi = _random_conjunct(rng, registers, role)
    if rng.random() < 0.2:
        phi = Or(phi, _random_conjunct(rng, registers, role))
    return phi


def random_automaton(params: FuzzParams, role: str, rng: Optional[random.Random] = None) -> Automaton:
    """Seeded random automaton; role ``"B"`` has one register and passes the bounded unambiguity check."""
    if role not in ("A", "B"):
        raise ValueError("role must be 'A' or 'B'")
    rng = rng or random.Random(f"{params.seed}-{role}")
    while True:
        aut = _draw(params, role, rng)
        if role == "A":
            return aut
        if bounded_unambiguity_check(aut, params.unambiguity_bound, params.unambiguity_domain) is None:
            return aut


def _draw(params: FuzzParams, role: str, rng: random.Random) -> Automaton:
    n_locs = rng.randint(1, params.max_locations)
    locations = tuple(f"{role.lower()}{i}" for i in range(n_locs))
    registers = 1 if role == "B" else rng.randint(0, params.max_registers_a)
    accepting = {l for l in locations[1:] if rng.random() < 0.5}
    if rng.random() < 0.25 or n_locs == 1:
        accepting.add(locations[0])
    edges = []
    for _ in range(rng.randint(min(n_locs, params.max_edges), params.max_edges)):
        edges.append(
            Edge(
                rng.choice(locations),
                rng.choice(params.alphabet),
                random_constraint(rng, registers, role),
                rng.choice(locations),
            )
        )
    return Automaton(params.alphabet, registers, locations, locations[0], frozenset(accepting), tuple(edges))


def mutate(aut: Automaton, rng: random.Random, prefix: str = "a") -> Automaton:
    """A renamed copy of ``aut`` with one edge changed, added or removed."""
    names = {l: f"{prefix}{i}" for i, l in enumerate(aut.locations)}
    edges = [Edge(names[e.source], e.tag, e.guard, names[e.target]) for e in aut.edges]
    locations = tuple(names[l] for l in aut.locations)
    choice = rng.random()
    if choice < 0.4 and edges:
        i = rng.randrange(len(edges))
        e = edges[i]
        edges[i] = Edge(e.source, e.tag, random_constraint(rng, aut.register_count, "B"), e.target)
    elif choice < 0.7 or not edges:
        edges.append(
            Edge(
                rng.choice(locations),
                rng.choice(aut.alphabet),
                random_constraint(rng, aut.register_count, "B"),
                rng.choice(locations),
            )
        )
    else:
        edges.pop(rng.randrange(len(edges)))
    accepting = frozenset(names[l] for l in aut.accepting)
    return Automaton(aut.alphabet, aut.register_count, locations, names[aut.initial], accepting, tuple(edges))


@dataclass
class FuzzOutcome:
    seed: int
    contained: bool
    oracle_agrees: bool
    witness_length: Optional[int]
    explored_states: int
    guard_ok: bool
    elapsed: float
    oracle_witness_length: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        rec = {
            "seed": self.seed,
            "verdict": "contained" if self.contained else "not_contained",
            "oracleAgrees": self.oracle_agrees,
            "exploredStates": self.explored_states,
        }
        if self.witness_length is not None:
            rec["witnessLength"] = self.witness_length
        return rec


def random_instance(params: FuzzParams, seed: int) -> Tuple[Automaton, Automaton]:
    rng = random.Random(seed)
    b = random_automaton(params, "B", rng)
    if rng.random() < 0.5:
        return mutate(b, rng), b
    return random_automaton(params, "A", rng), b


def fuzz_one(params: FuzzParams, seed: int) -> FuzzOutcome:
    """Run the symbolic procedure and the bounded oracle on one generated instance."""
    from .engine import check_containment, state_count_guard

    a, b = random_instance(params, seed)
    t0 = time.perf_counter()
    verdict = check_containment(a, b, check_guard=False)
    elapsed = time.perf_counter() - t0
    guard_ok = state_count_guard(verdict.explored_states, a, b)
    oracle_w = bounded_containment(a, b, params.max_word_length, params.data_domain_size)
    detail = ""
    if verdict.contained:
        agrees = oracle_w is None
        wlen = None
        if not agrees:
            detail = "oracle found a counterexample"
    else:
        wlen = len(verdict.witness)
        verified = membership(a, verdict.witness) and not membership(b, verdict.witness)
        # the symbolic search is breadth-first, so within the bound both must agree on the length
        length_ok = (
            oracle_w is not None and len(oracle_w) == wlen
            if wlen <= params.max_word_length
            else oracle_w is None
        )
        agrees = verified and length_ok
        if not verified:
            detail = "witness failed verification"
        elif not length_ok:
            detail = "shortest counterexample length differs from oracle"
    return FuzzOutcome(
        seed,
        verdict.contained,
        agrees,
        wlen,
        verdict.explored_states,
        guard_ok,
        elapsed,
        None if oracle_w is None else len(oracle_w),
        detail,
    )


def fuzz(params: FuzzParams) -> Iterator[FuzzOutcome]:
    for i in range(params.instances):
        yield fuzz_one(params, params.seed * 1_000_003 + i)
