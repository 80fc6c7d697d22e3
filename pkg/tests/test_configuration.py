import random

import pytest

from gen import (
    concrete_succ_restricted,
    fixture,
    random_configuration,
    random_iso,
    random_one_register,
    restrict,
)
from guracheck.automaton import Automaton, Letter, word
from guracheck.configuration import (
    Configuration,
    DataSet,
    PartialIso,
    apply_iso,
    c_minus,
    c_plus,
    collapse_max,
    collapse_step,
    indistinguishable,
    is_accepting,
    is_maximally_collapsed,
    succ_letter,
    succ_word,
    support,
)
from guracheck.errors import ContractError, UnsupportedAutomatonError

LAD = fixture("lad.gra")
Fin = lambda *xs: DataSet.finite(xs)
Cof = lambda *xs: DataSet.cofinite_of(xs)
K3 = Configuration({"l1": Cof(1, 2, 3), "l2": Fin(3)})
THREE_ROWS = Configuration({"l1": Fin(0, 1), "l2": Cof(1, 2), "l3": Cof(0, 1)})


def sigma(*data):
    return word(*(("σ", d) for d in data))


def test_dataset_basics():
    assert 4 in Cof(1) and 1 not in Cof(1) and None not in Cof(1)
    assert None in DataSet.finite([None, 2])
    assert Fin(1, 2).union(Cof(2, 3)) == Cof(3)
    assert Cof(1, 2).union(Cof(2, 3)) == Cof(2)
    assert Fin(1).without(1).is_empty()
    assert Fin(None).single() == (True, None)
    with pytest.raises(ValueError):
        DataSet.cofinite_of([None])


def test_support():
    assert support(K3) == {1, 2, 3}
    assert support(Configuration({"l": Fin()})) == set()
    assert support(Configuration({"l": Cof()})) == set()
    assert support(Configuration({"l": Fin(None)})) == set()


def test_succ_lad():
    c1 = succ_letter(LAD, Configuration.initial(LAD), Letter("σ", 1))
    assert c1 == Configuration({"l1": Cof(1)})
    c = Configuration({"l1": Cof(1, 2), "l2": Fin(2)})
    assert succ_letter(LAD, c, Letter("σ", 3)) == K3
    init = Configuration.initial(LAD)
    assert succ_word(LAD, init, sigma(1, 2, 3)) == K3
    assert succ_word(LAD, init, sigma(1, 2, 2, 3)) == K3
    assert succ_word(LAD, c, ()) == c
    assert succ_letter(LAD, Configuration(), Letter("σ", 0)) == Configuration()


def test_succ_rejects_multi_register():
    two = Automaton(("a",), 2, ("p",), "p", (), ())
    with pytest.raises(UnsupportedAutomatonError):
        succ_letter(two, Configuration.initial(two), Letter("a", 0))


def test_accepting():
    assert not is_accepting(LAD, Configuration({"l1": Cof(1), "l2": Fin()}))
    assert is_accepting(LAD, Configuration({"l2": Fin(3)}))
    assert not is_accepting(LAD, Configuration())


def test_c_plus_minus_example():
    c = THREE_ROWS
    assert c_plus(c, 0) == {("l1", 0)}
    assert c_minus(c, 0) == {("l3", 0)}
    assert c_plus(c, 2) == set()
    assert c_minus(c, 2) == {("l2", 2)}
    assert c_minus(c, 1) == {("l2", 1), ("l3", 1)}
    with pytest.raises(ContractError):
        c_plus(c, None)


def test_indistinguishable():
    assert indistinguishable(K3, (None,), 1, 2)
    assert not indistinguishable(K3, (None,), 1, 3)
    assert not indistinguishable(K3, (1,), 1, 2)


def test_collapse_step():
    assert collapse_step(K3, (None,), 1, 2) == Configuration({"l1": Cof(1, 3), "l2": Fin(3)})
    with pytest.raises(ContractError):
        collapse_step(K3, (None,), 1, 3)
    with pytest.raises(ContractError):
        collapse_step(K3, (None,), 1, 7)


def test_collapse_max():
    # 3 sits in l2 and is the only datum with that location set, so it stays;
    # 1 and 2 share the empty location set and one of them is kept
    out = collapse_max(K3, (None,))
    assert out == Configuration({"l1": Cof(1, 3), "l2": Fin(3)})
    assert is_maximally_collapsed(out, (None,))
    assert collapse_max(out, (None,)) == out
    c = Configuration({"l1": Fin(5, 7)})
    assert collapse_max(c, (5,)) == c


def test_apply_iso():
    pi = PartialIso({1: 9, 2: 2, 3: 3})
    assert apply_iso(pi, Configuration({"l1": Cof(1, 2, 3)})) == Configuration({"l1": Cof(9, 2, 3)})
    swap = PartialIso({1: 3, 3: 1, 2: 2})
    assert apply_iso(swap, sigma(1, 2, 3)) == sigma(3, 2, 1)
    assert apply_iso(PartialIso.identity(support(K3)), K3) == K3
    assert apply_iso(pi, (None, 1)) == (None, 9)
    with pytest.raises(ContractError):
        apply_iso(PartialIso({1: 1}), K3)
    with pytest.raises(ContractError):
        PartialIso({1: 2, 3: 2})


def test_partial_iso_algebra():
    pi = PartialIso({1: 5, 2: 6})
    assert pi.then(pi.inverse()) == PartialIso.identity({1, 2})
    assert pi.then(PartialIso({5: 0})) == PartialIso({1: 0})


def test_json_round_trip():
    for c in (K3, THREE_ROWS, Configuration.initial(LAD), Configuration()):
        assert Configuration.from_json(c.to_json()) == c
    assert K3.dumps() == (
        '{"rows": {"l1": {"bot": false, "data": [1, 2, 3], "kind": "cofinite"}, '
        '"l2": {"bot": false, "data": [3], "kind": "finite"}}}'
    )


def test_fact_one_and_collapse_support():
    rng = random.Random(3)
    for _ in range(300):
        c = random_configuration(rng, ["p", "q", "r"])
        for d in range(7):
            assert not any(s in c for s in c_minus(c, d))
            assert c_plus(c, d) <= {(loc, d) for loc in c.rows if (loc, d) in c}
        supp = sorted(support(c))
        for a in supp:
            for b in supp:
                if a != b and indistinguishable(c, (), a, b):
                    c2 = collapse_step(c, (), a, b)
                    assert support(c2) == support(c) - {b}
                    # b now behaves like a datum outside the support
                    generic = max(supp) + 10
                    assert c2.locations_of(b) == c2.locations_of(generic)


def test_symbolic_matches_concrete():
    rng = random.Random(5)
    for _ in range(250):
        b = random_one_register(rng)
        c = random_configuration(rng, b.locations)
        letter = Letter(rng.choice(b.alphabet), rng.randrange(8))
        assert restrict(succ_letter(b, c, letter)) == concrete_succ_restricted(b, c, letter)


def test_equivariance_and_transport():
    rng = random.Random(9)
    for _ in range(250):
        b = random_one_register(rng)
        c = random_configuration(rng, b.locations)
        w = tuple(Letter(rng.choice(b.alphabet), rng.randrange(8)) for _ in range(rng.randint(1, 3)))
        pi = random_iso(rng, support(c) | {l.datum for l in w})
        lhs = apply_iso(pi, succ_letter(b, c, w[0]))
        rhs = succ_letter(b, apply_iso(pi, c), apply_iso(pi, w[0]))
        assert lhs == rhs
        assert is_accepting(b, succ_word(b, c, w)) == is_accepting(b, succ_word(b, apply_iso(pi, c), apply_iso(pi, w)))


def test_collapse_confluence_up_to_renaming():
    # different collapse orders reach configurations with the same key
    from guracheck.engine import SyncConfig, canonicalize

    rng = random.Random(13)
    for _ in range(300):
        c = random_configuration(rng, ["p", "q"])
        val = tuple(rng.choice([None, 0, 1]) for _ in range(rng.randint(0, 2)))
        keys = set()
        for _ in range(4):
            cur = c
            while True:
                held = set(val)
                pairs = [
                    (a, b)
                    for a in support(cur) - held
                    for b in support(cur) - held
                    if a != b and indistinguishable(cur, val, a, b)
                ]
                if not pairs:
                    break
                cur = collapse_step(cur, val, *rng.choice(pairs))
            keys.add(canonicalize(SyncConfig("x", val, cur))[0])
        assert len(keys) == 1
