"""Containment L(A) ⊆ L(B) for an arbitrary A and an unambiguous one-register B.

The search runs over synchronized configurations: one concrete state of A
paired with the symbolic configuration of B.  After every step the B side is
maximally collapsed and the result is reduced to a renaming-invariant key, so
the explored graph is finite.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .automaton import (
    Automaton,
    ConcreteState,
    DataWord,
    Letter,
    concrete_successors,
    data_of,
    fresh_data,
    membership,
)
from .configuration import (
    Configuration,
    DataSet,
    PartialIso,
    apply_iso,
    collapse_max,
    is_accepting,
    is_maximally_collapsed,
    succ_letter,
    support,
)
from .constraints import Datum, Valuation
from .errors import ContractError, UnsupportedAutomatonError, WitnessError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyncConfig:
    a_location: str
    a_valuation: Valuation
    config: Configuration

    def __apply_iso__(self, pi: PartialIso) -> "SyncConfig":
        return SyncConfig(self.a_location, apply_iso(pi, self.a_valuation), apply_iso(pi, self.config))

    def data(self) -> FrozenSet[int]:
        return support(self.config) | data_of(self.a_valuation)


LocSet = Tuple[str, ...]


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Renaming-invariant encoding of a maximally collapsed synchronized configuration.

    ``shape[i]`` is ``None`` for an undefined register and otherwise the
    1-based rank of the register's datum by first occurrence.  Datum ``i``
    (1-based) of the valuation sits in the rows listed in
    ``valuation_rows[i-1]``; ``other_rows`` lists, sorted, the rows of each
    remaining support datum.
    """

    a_location: str
    shape: Tuple[Optional[int], ...]
    bot_rows: LocSet
    valuation_rows: Tuple[LocSet, ...]
    other_rows: Tuple[LocSet, ...]
    cofinite_rows: LocSet


@dataclass(frozen=True)
class Verdict:
    contained: bool
    witness: Optional[DataWord] = None
    explored_states: int = 0
    witness_verified: bool = False

    def to_json(self) -> dict:
        if self.contained:
            return {"contained": True}
        return {
            "contained": False,
            "witness": [{"tag": l.tag, "datum": l.datum} for l in self.witness],
            "witness_verified": self.witness_verified,
            "explored_states": self.explored_states,
        }


@dataclass
class SearchNode:
    key: CanonicalKey
    parent: Optional[CanonicalKey]
    letter: Optional[Letter]
    a_guess: Optional[Valuation]
    renaming: PartialIso
    depth: int
    rep: SyncConfig = field(repr=False)


class SearchLimitError(RuntimeError):
    """The number of explored keys exceeded the theoretical bound."""


def initial_sync(a: Automaton, b: Automaton) -> SyncConfig:
    return SyncConfig(a.initial, (None,) * a.register_count, Configuration.initial(b))


def is_bad(a: Automaton, b: Automaton, s: SyncConfig) -> bool:
    return s.a_location in a.accepting and not is_accepting(b, s.config)


def abstract_letters(s: SyncConfig, alphabet: Iterable[str]) -> List[Letter]:
    """One letter per tag and per relevant datum, plus one fresh datum per tag.

    Data outside the support and the valuation are interchangeable, so the
    least such datum represents all of them.
    """
    used = s.data()
    candidates = sorted(used) + fresh_data(used, 1)
    return [Letter(t, d) for t in alphabet for d in candidates]


def sync_successors(a: Automaton, b: Automaton, s: SyncConfig, letter: Letter) -> FrozenSet[SyncConfig]:
    """Synchronized successors: every A move on ``letter`` paired with B's successor configuration.

    A's guesses range over the mentioned data plus ``m`` fresh data, enough to
    realize every equality type of the new valuation.
    """
    mentioned = s.data() | {letter.datum}
    pool = mentioned | set(fresh_data(mentioned, a.register_count))
    moves = concrete_successors(a, ConcreteState(s.a_location, s.a_valuation), letter, pool)
    if not moves:
        return frozenset()
    c2 = succ_letter(b, s.config, letter)
    return frozenset(SyncConfig(m.location, m.valuation, c2) for m in moves)


def collapse_sync(s: SyncConfig) -> SyncConfig:
    return SyncConfig(s.a_location, s.a_valuation, collapse_max(s.config, s.a_valuation))


def _rows_of(c: Configuration, d: Datum) -> LocSet:
    return tuple(sorted(c.locations_of(d)))


def canonicalize(s: SyncConfig) -> Tuple[CanonicalKey, PartialIso]:
    """Encode a maximally collapsed ``s`` and return the renaming used.

    Valuation data become 1..k in order of first occurrence; the other
    support data become k+1..p ordered by their row sets.
    """
    c = s.config
    if not is_maximally_collapsed(c, s.a_valuation):
        raise ContractError("canonicalize needs a maximally collapsed configuration")
    held: List[int] = []
    for x in s.a_valuation:
        if x is not None and x not in held:
            held.append(x)
    rank = {x: i + 1 for i, x in enumerate(held)}
    shape = tuple(None if x is None else rank[x] for x in s.a_valuation)
    rest = sorted(support(c) - set(held), key=lambda x: _rows_of(c, x))
    mapping = dict(rank)
    for j, x in enumerate(rest):
        mapping[x] = len(held) + j + 1
    key = CanonicalKey(
        a_location=s.a_location,
        shape=shape,
        bot_rows=_rows_of(c, None),
        valuation_rows=tuple(_rows_of(c, x) for x in held),
        other_rows=tuple(_rows_of(c, x) for x in rest),
        cofinite_rows=tuple(sorted(loc for loc, ds in c.rows.items() if ds.cofinite)),
    )
    return key, PartialIso(mapping)


def decode_key(key: CanonicalKey) -> SyncConfig:
    """The representative of ``key`` over data 1..p."""
    k = len(key.valuation_rows)
    all_rows = list(key.valuation_rows) + list(key.other_rows)
    p = len(all_rows)
    locations = set(key.bot_rows) | set(key.cofinite_rows)
    for rs in all_rows:
        locations |= set(rs)
    rows = {}
    for loc in locations:
        members = {i + 1 for i, rs in enumerate(all_rows) if loc in rs}
        if loc in key.cofinite_rows:
            excluded = set(range(1, p + 1)) - members
            rows[loc] = DataSet(True, frozenset(excluded), loc in key.bot_rows)
        else:
            rows[loc] = DataSet(False, frozenset(members), loc in key.bot_rows)
    valuation = tuple(key.shape)
    assert all(x is None or 1 <= x <= k for x in valuation)
    return SyncConfig(key.a_location, valuation, Configuration(rows))


def canonical_key(s: SyncConfig) -> CanonicalKey:
    """Key of the maximal collapse of an arbitrary synchronized configuration."""
    return canonicalize(collapse_sync(s))[0]


def _bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def valuation_types(m: int) -> int:
    """Number of equality types of m-tuples over data plus the undefined value."""
    return _bell(m + 1)


def state_bound(a: Automaton, b: Automaton) -> int:
    """Upper bound on the number of distinct canonical keys.

    Factors: B-locations, k^k, one row set per valuation datum and for None,
    the set of other row sets, cofinite bits, A-locations, valuation types.
    """
    nb = len(b.locations)
    k = a.register_count
    return (
        nb
        * k**k
        * 2 ** ((k + 1) * nb)
        * 2 ** (2**nb)
        * 2**nb
        * len(a.locations)
        * valuation_types(k)
    )


def state_count_guard(explored: int, a: Automaton, b: Automaton) -> bool:
    return explored <= state_bound(a, b)


def _check_inputs(a: Automaton, b: Automaton):
    if b.register_count != 1:
        raise UnsupportedAutomatonError(
            f"the right-hand automaton must have exactly one register, got {b.register_count}"
        )


@dataclass
class SearchResult:
    bad: Optional[SearchNode]
    nodes: Dict[CanonicalKey, SearchNode]

    @property
    def explored(self) -> int:
        return len(self.nodes)


def explore(
    a: Automaton,
    b: Automaton,
    start: Optional[SyncConfig] = None,
    *,
    collapse_start: bool = True,
    stop_at_bad: bool = True,
    max_depth: Optional[int] = None,
) -> SearchResult:
    """Breadth-first search over canonical keys.

    With ``collapse_start=False`` the start configuration itself is expanded
    as given (it must then be checked by the caller for badness); only its
    successors are collapsed.
    """
    _check_inputs(a, b)
    if start is None:
        start = initial_sync(a, b)
    bound = state_bound(a, b)
    nodes: Dict[CanonicalKey, SearchNode] = {}
    queue: deque = deque()

    def visit(s: SyncConfig, parent: Optional[SearchNode], letter, guess) -> Optional[SearchNode]:
        key, pi = canonicalize(collapse_sync(s))
        if key in nodes:
            return None
        node = SearchNode(
            key,
            parent.key if parent else None,
            letter,
            guess,
            pi,
            parent.depth + 1 if parent else 0,
            decode_key(key),
        )
        nodes[key] = node
        if len(nodes) > bound:
            raise SearchLimitError(f"explored {len(nodes)} keys, bound is {bound}")
        queue.append(node)
        return node

    def expand(s: SyncConfig, parent: Optional[SearchNode]):
        for letter in abstract_letters(s, a.alphabet):
            for s2 in sorted(sync_successors(a, b, s, letter), key=_sync_order):
                node = visit(s2, parent, letter, s2.a_valuation)
                if node is not None and stop_at_bad and is_bad(a, b, node.rep):
                    return node
        return None

    if collapse_start:
        root = visit(start, None, None, None)
        if stop_at_bad and is_bad(a, b, root.rep):
            return SearchResult(root, nodes)
    else:
        hit = expand(start, None)
        if hit is not None:
            return SearchResult(hit, nodes)
    while queue:
        node = queue.popleft()
        if max_depth is not None and node.depth >= max_depth:
            continue
        hit = expand(node.rep, node)
        if hit is not None:
            return SearchResult(hit, nodes)
    bad = None
    if not stop_at_bad:
        bads = [n for n in nodes.values() if is_bad(a, b, n.rep)]
        bad = min(bads, key=lambda n: n.depth) if bads else None
    return SearchResult(bad, nodes)


def _sync_order(s: SyncConfig):
    return (s.a_location, tuple(-1 if x is None else x for x in s.a_valuation))


def reaches_bad(a: Automaton, b: Automaton, start: SyncConfig, *, collapse_start: bool = True) -> bool:
    """Whether some bad synchronized configuration is reachable from ``start``."""
    if is_bad(a, b, start):
        return True
    return explore(a, b, start, collapse_start=collapse_start).bad is not None


def find_witness(a: Automaton, b: Automaton, start: SyncConfig, depth: int) -> Optional[DataWord]:
    """A word of length ``depth`` leading the uncollapsed ``start`` to a bad configuration.

    Collapsing preserves the length of the shortest path to a bad
    configuration, so whether a concrete configuration can reach a bad one
    within ``r`` steps depends only on its key; failures are memoized on
    ``(key, r)``.
    """
    failed = set()

    def dfs(s: SyncConfig, r: int) -> Optional[List[Letter]]:
        if is_bad(a, b, s):
            return []
        if r == 0:
            return None
        memo = (canonical_key(s), r)
        if memo in failed:
            return None
        for letter in abstract_letters(s, a.alphabet):
            for s2 in sorted(sync_successors(a, b, s, letter), key=_sync_order):
                rest = dfs(s2, r - 1)
                if rest is not None:
                    return [letter] + rest
        failed.add(memo)
        return None

    found = dfs(start, depth)
    return None if found is None else tuple(found)


def check_containment(a: Automaton, b: Automaton, *, check_guard: bool = True) -> Verdict:
    """Decide L(a) ⊆ L(b).

    ``b`` must have one register and is assumed unambiguous.  Counterexamples
    are re-checked with :func:`membership` on both automata before they are
    returned; a failed check raises :class:`WitnessError`.
    """
    _check_inputs(a, b)
    result = explore(a, b)
    if check_guard and not state_count_guard(result.explored, a, b):
        raise SearchLimitError(f"explored {result.explored} keys, bound is {state_bound(a, b)}")
    if result.bad is None:
        return Verdict(True, explored_states=result.explored)
    depth = result.bad.depth
    w = find_witness(a, b, initial_sync(a, b), depth)
    if w is None:
        raise WitnessError(f"no concrete word of length {depth} reaches the bad key", None)
    if not (membership(a, w) and not membership(b, w)):
        raise WitnessError("witness failed membership verification", w)
    log.debug("counterexample of length %d after %d keys", len(w), result.explored)
    return Verdict(False, w, result.explored, True)
