"""Symbolic configurations of a single-register automaton.

A configuration assigns to every location a set of register values that is
either finite or cofinite in the data domain, plus an explicit flag for the
undefined value ``None``.  Absent locations hold the empty set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from .automaton import Automaton, Letter
from .constraints import CurEq, Datum, NextEqInput, NextEqReg, dnf
from .errors import ContractError, UnsupportedAutomatonError

State = Tuple[str, Datum]


@dataclass(frozen=True)
class DataSet:
    """``data`` is the element set of a finite row, or the excluded set of a cofinite one."""

    cofinite: bool = False
    data: FrozenSet[int] = frozenset()
    bot: bool = False

    @classmethod
    def finite(cls, values: Iterable[Datum] = ()) -> "DataSet":
        values = set(values)
        bot = None in values
        values.discard(None)
        return cls(False, frozenset(values), bot)

    @classmethod
    def cofinite_of(cls, excluded: Iterable[int] = (), bot: bool = False) -> "DataSet":
        excluded = frozenset(excluded)
        if None in excluded:
            raise ValueError("cofinite exclusions are data; use the bot flag for None")
        return cls(True, excluded, bot)

    def __contains__(self, d: Datum) -> bool:
        if d is None:
            return self.bot
        return (d in self.data) != self.cofinite

    def is_empty(self) -> bool:
        return not self.cofinite and not self.data and not self.bot

    def single(self) -> Tuple[bool, Datum]:
        """``(True, x)`` if the set is exactly ``{x}``, else ``(False, None)``."""
        if self.cofinite or len(self.data) + self.bot != 1:
            return False, None
        return True, (next(iter(self.data)) if self.data else None)

    def only(self, d: int) -> "DataSet":
        return DataSet.finite([d]) if d in self else EMPTY

    def without(self, d: int) -> "DataSet":
        if self.cofinite:
            return DataSet(True, self.data | {d}, self.bot)
        return DataSet(False, self.data - {d}, self.bot)

    def union(self, other: "DataSet") -> "DataSet":
        bot = self.bot or other.bot
        if self.cofinite and other.cofinite:
            return DataSet(True, self.data & other.data, bot)
        if self.cofinite:
            return DataSet(True, self.data - other.data, bot)
        if other.cofinite:
            return DataSet(True, other.data - self.data, bot)
        return DataSet(False, self.data | other.data, bot)

    def __repr__(self):
        inner = ", ".join(map(str, sorted(self.data)))
        bot = " +⊥" if self.bot else ""
        return f"{'Cofinite' if self.cofinite else 'Finite'}({{{inner}}}){bot}"


EMPTY = DataSet()


class Configuration:
    """Immutable mapping from locations to non-empty :class:`DataSet` rows."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Mapping[str, DataSet] | Iterable = ()):
        items = rows.items() if isinstance(rows, Mapping) else rows
        self._rows = {loc: ds for loc, ds in items if not ds.is_empty()}
        self._hash = None

    @classmethod
    def initial(cls, aut: Automaton) -> "Configuration":
        return cls({aut.initial: DataSet.finite([None])})

    @classmethod
    def from_states(cls, states: Iterable[State]) -> "Configuration":
        rows: Dict[str, set] = {}
        for loc, d in states:
            rows.setdefault(loc, set()).add(d)
        return cls({loc: DataSet.finite(v) for loc, v in rows.items()})

    @property
    def rows(self) -> Mapping[str, DataSet]:
        return MappingProxyType(self._rows)

    def row(self, loc: str) -> DataSet:
        return self._rows.get(loc, EMPTY)

    def __contains__(self, state: State) -> bool:
        loc, d = state
        return d in self.row(loc)

    def locations_of(self, d: Datum) -> FrozenSet[str]:
        return frozenset(loc for loc, ds in self._rows.items() if d in ds)

    def is_empty(self) -> bool:
        return not self._rows

    def __eq__(self, other):
        return isinstance(other, Configuration) and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._rows.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{loc} ↦ {self._rows[loc]!r}" for loc in sorted(self._rows))
        return f"Configuration({{{inner}}})"

    def to_json(self) -> dict:
        return {
            "rows": {
                loc: {
                    "kind": "cofinite" if ds.cofinite else "finite",
                    "data": sorted(ds.data),
                    "bot": ds.bot,
                }
                for loc, ds in sorted(self._rows.items())
            }
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        rows = {}
        for loc, r in obj["rows"].items():
            rows[loc] = DataSet(r["kind"] == "cofinite", frozenset(r["data"]), bool(r["bot"]))
        return cls(rows)


def support(c: Configuration) -> FrozenSet[int]:
    """Data that are members of a finite row or excluded from a cofinite row."""
    out = set()
    for ds in c.rows.values():
        out |= ds.data
    return frozenset(out)


def data_of_config(c: Configuration, universe: Iterable[Datum]) -> FrozenSet[Datum]:
    """Members of ``universe`` that occur in some row (data(C) restricted to a finite window)."""
    return frozenset(d for d in universe if c.locations_of(d))


def is_accepting(b: Automaton, c: Configuration) -> bool:
    return any(loc in b.accepting for loc in c.rows)


def _literal(c, atom) -> Optional[bool]:
    if (atom, True) in c:
        return True
    if (atom, False) in c:
        return False
    return None


_IN_EQ_R = CurEq(0)
_KEEP = NextEqReg(0, 0)
_LOAD = NextEqInput(0)


def _image(u_set: DataSet, d: int, c) -> DataSet:
    """Next-register values reachable from ``u_set`` on datum ``d`` under one conjunct."""
    cur, keep, load = _literal(c, _IN_EQ_R), _literal(c, _KEEP), _literal(c, _LOAD)
    if cur is True:
        u_set = u_set.only(d)
    elif cur is False:
        u_set = u_set.without(d)
    if u_set.is_empty():
        return EMPTY
    if keep is True:
        if load is True:
            return u_set.only(d)
        if load is False:
            return u_set.without(d)
        return u_set
    if load is True:
        if keep is False and u_set.without(d).is_empty():
            return EMPTY
        return DataSet.finite([d])
    # the new value is a guess
    excluded = set()
    if load is False:
        excluded.add(d)
    if keep is False:
        is_single, u0 = u_set.single()
        if is_single and u0 is not None:
            excluded.add(u0)
    return DataSet.cofinite_of(excluded)


def _check_single_register(b: Automaton):
    if b.register_count != 1:
        raise UnsupportedAutomatonError(
            f"symbolic configurations need exactly one register, automaton has {b.register_count}"
        )


def succ_letter(b: Automaton, c: Configuration, letter: Letter) -> Configuration:
    """Set of all one-step successors of the states in ``c`` on ``letter``."""
    _check_single_register(b)
    acc: Dict[str, DataSet] = {}
    for loc, u_set in c.rows.items():
        for e in b.edges_from(loc, letter.tag):
            for conj in dnf(e.guard):
                img = _image(u_set, letter.datum, conj)
                if not img.is_empty():
                    acc[e.target] = acc.get(e.target, EMPTY).union(img)
    return Configuration(acc)


def succ_word(b: Automaton, c: Configuration, w: Iterable[Letter]) -> Configuration:
    for letter in w:
        c = succ_letter(b, c, letter)
    return c


def c_plus(c: Configuration, d: int) -> FrozenSet[State]:
    if d is None:
        raise ContractError("c_plus is defined for data only")
    return frozenset((loc, d) for loc, ds in c.rows.items() if not ds.cofinite and d in ds)


def c_minus(c: Configuration, d: int) -> FrozenSet[State]:
    if d is None:
        raise ContractError("c_minus is defined for data only")
    return frozenset((loc, d) for loc, ds in c.rows.items() if ds.cofinite and d not in ds)


def indistinguishable(c: Configuration, valuation: Sequence[Datum], a: int, b: int) -> bool:
    held = set(valuation)
    if a in held or b in held:
        return False
    return c.locations_of(a) == c.locations_of(b)


def collapse_step(c: Configuration, valuation: Sequence[Datum], a: int, b: int) -> Configuration:
    """Make ``b`` generic: ``(C minus C_b^+) union C_b^-``.

    Requires ``a != b``, both in the support, and indistinguishable.
    """
    supp = support(c)
    if a == b or a not in supp or b not in supp:
        raise ContractError(f"collapse needs two distinct support data, got {a!r}, {b!r}")
    if not indistinguishable(c, valuation, a, b):
        raise ContractError(f"{a} and {b} are distinguishable")
    return Configuration({loc: DataSet(ds.cofinite, ds.data - {b}, ds.bot) for loc, ds in c.rows.items()})


def collapse_max(c: Configuration, valuation: Sequence[Datum]) -> Configuration:
    """Collapse until no two support data outside the valuation share a location set.

    Pairs are scanned in ascending order and the larger datum is made
    generic.  Collapsing ``b`` leaves the location sets of all other data
    untouched, so the scan is a single pass over the support.
    """
    held = set(valuation)
    keep_for: Dict[FrozenSet[str], int] = {}
    for x in sorted(support(c) - held):
        locs = c.locations_of(x)
        if locs in keep_for:
            c = collapse_step(c, valuation, keep_for[locs], x)
        else:
            keep_for[locs] = x
    return c


def is_maximally_collapsed(c: Configuration, valuation: Sequence[Datum]) -> bool:
    held = set(valuation)
    seen = set()
    for x in support(c) - held:
        locs = c.locations_of(x)
        if locs in seen:
            return False
        seen.add(locs)
    return True


class PartialIso:
    """A finite injective renaming of data; ``None`` always maps to itself."""

    __slots__ = ("_map",)

    def __init__(self, pairs: Mapping[int, int] | Iterable = ()):
        m = dict(pairs)
        if m.get(None, None) is not None:
            raise ContractError("a partial isomorphism must fix None")
        m.pop(None, None)
        if any(v is None for v in m.values()):
            raise ContractError("only None may map to None")
        if len(set(m.values())) != len(m):
            raise ContractError("partial isomorphism must be injective")
        self._map = m

    @classmethod
    def identity(cls, domain: Iterable[int]) -> "PartialIso":
        return cls({d: d for d in domain if d is not None})

    @property
    def mapping(self) -> Mapping[int, int]:
        return MappingProxyType(self._map)

    def domain(self) -> FrozenSet[int]:
        return frozenset(self._map)

    def __call__(self, d: Datum) -> Datum:
        if d is None:
            return None
        try:
            return self._map[d]
        except KeyError:
            raise ContractError(f"datum {d} outside the domain of the renaming") from None

    def inverse(self) -> "PartialIso":
        return PartialIso({v: k for k, v in self._map.items()})

    def then(self, other: "PartialIso") -> "PartialIso":
        """``other`` after ``self``, on the part of the domain where both are defined."""
        return PartialIso({k: other._map[v] for k, v in self._map.items() if v in other._map})

    def __eq__(self, other):
        return isinstance(other, PartialIso) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        return f"PartialIso({dict(sorted(self._map.items()))})"


def _rename(pi: PartialIso, x):
    if isinstance(x, Configuration):
        rows = {}
        for loc, ds in x.rows.items():
            rows[loc] = DataSet(ds.cofinite, frozenset(pi(d) for d in ds.data), ds.bot)
        return Configuration(rows)
    if isinstance(x, Letter):
        return Letter(x.tag, pi(x.datum))
    if isinstance(x, tuple):
        return tuple(_rename(pi, y) if isinstance(y, Letter) else pi(y) for y in x)
    if isinstance(x, list):
        return [_rename(pi, y) for y in x]
    if hasattr(x, "__apply_iso__"):
        return x.__apply_iso__(pi)
    raise TypeError(f"cannot rename {type(x).__name__}")


def apply_iso(pi: PartialIso, x):
    """Rename all data in ``x`` (configuration, letter, word, valuation) by ``pi``.

    Cofinite rows rename their excluded set and keep the remaining bulk of the
    domain as the bulk.  Objects defining ``__apply_iso__`` are delegated to.
    """
    return _rename(pi, x)
