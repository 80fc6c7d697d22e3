import random

import pytest

from gen import fixture, random_iso, random_one_register
from guracheck.automaton import (
    Automaton,
    ConcreteState,
    Edge,
    Letter,
    concrete_successors,
    data_of,
    fresh_data,
    membership,
    universal_automaton,
    word,
)
from guracheck.configuration import apply_iso
from guracheck.constraints import TRUE, NextEqInput
from guracheck.errors import AutomatonError

LAD = fixture("lad.gra")


def sigma(*data):
    return word(*(("σ", d) for d in data))


def test_lad_successors():
    s = ConcreteState("l1", (2,))
    assert concrete_successors(LAD, s, Letter("σ", 3), range(5)) == {ConcreteState("l1", (2,))}
    assert concrete_successors(LAD, s, Letter("σ", 2), range(5)) == {ConcreteState("l2", (2,))}


def test_lad_first_step_guesses_everything_but_input():
    succ = concrete_successors(LAD, LAD.initial_state(), Letter("σ", 1), range(4))
    assert succ == {ConcreteState("l1", (x,)) for x in (0, 2, 3)}


def test_no_bottom_from_guess():
    u = universal_automaton()
    succ = concrete_successors(u, u.initial_state(), Letter("σ", 0), [0, 1])
    assert ConcreteState("q", (None,)) not in succ


@pytest.mark.parametrize(
    "data, expected",
    [((1, 2, 2, 3), True), ((1, 2, 1), False), ((5, 5), False), ((4, 7), True), ((), False), ((3,), False)],
)
def test_lad_membership(data, expected):
    assert membership(LAD, sigma(*data)) is expected


def test_lad_language_brute_force():
    # L_ad: the last datum differs from all earlier ones, length >= 2
    from itertools import product

    for n in range(4):
        for data in product(range(3), repeat=n):
            expected = n >= 2 and data[-1] not in data[:-1]
            assert membership(LAD, sigma(*data)) == expected


def test_validation():
    with pytest.raises(AutomatonError):
        Automaton(("a",), 1, ("p",), "x", (), ())
    with pytest.raises(AutomatonError):
        Automaton(("a",), 0, ("p",), "p", (), (Edge("p", "a", NextEqInput(0), "p"),))
    with pytest.raises(AutomatonError):
        Automaton(("a",), 1, ("p", "p"), "p", (), ())
    with pytest.raises(ValueError):
        Letter("a", -1)


def test_fresh_data():
    assert fresh_data({0, 2}, 3) == [1, 3, 4]
    assert data_of(sigma(3, 1)) == {1, 3}
    assert data_of((None, 4)) == {4}


def test_zero_registers():
    aut = Automaton(("a",), 0, ("p", "q"), "p", {"q"}, (Edge("p", "a", TRUE, "q"),))
    assert membership(aut, word(("a", 9)))
    assert not membership(aut, word(("a", 9), ("a", 9)))


def test_membership_closed_under_renaming():
    rng = random.Random(7)
    for _ in range(150):
        aut = random_one_register(rng)
        w = tuple(Letter(rng.choice("ab"), rng.randrange(4)) for _ in range(rng.randint(0, 4)))
        pi = random_iso(rng, data_of(w), range(100, 140))
        assert membership(aut, w) == membership(aut, apply_iso(pi, w))


def test_pool_monotone():
    rng = random.Random(11)
    for _ in range(100):
        aut = random_one_register(rng)
        s = ConcreteState(rng.choice(aut.locations), (rng.choice([None, 0, 1]),))
        letter = Letter(rng.choice("ab"), rng.randrange(3))
        small = concrete_successors(aut, s, letter, range(3))
        big = concrete_successors(aut, s, letter, range(6))
        assert small <= big
