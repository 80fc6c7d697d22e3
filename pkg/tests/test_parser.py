import pytest
from hypothesis import given, settings

from gen import FIXTURES, constraints
from guracheck.automaton import Automaton, Edge, Letter
from guracheck.constraints import CurEq, NextEqInput, NextEqReg, Not, dnf
from guracheck.errors import ParseError
from guracheck.parser import format_automaton, format_word, parse_automaton, parse_constraint, parse_word


def test_lad_fixture():
    aut = parse_automaton((FIXTURES / "lad.gra").read_text())
    assert aut.locations == ("l0", "l1", "l2")
    assert aut.initial == "l0" and aut.accepting == {"l2"}
    assert aut.register_count == 1
    assert len(aut.edges) == 3
    assert aut.edges[0].guard == Not(NextEqInput(0))


def test_atoms_and_operators():
    assert parse_constraint("in == r1") == CurEq(0)
    assert parse_constraint("r1 == in") == CurEq(0)
    assert parse_constraint("r2' == r1") == NextEqReg(1, 0)
    assert parse_constraint("r1 == r2'") == NextEqReg(1, 0)
    assert parse_constraint("in != r1'") == Not(NextEqInput(0))
    assert parse_constraint("r == in") == CurEq(0)
    # precedence: & binds tighter than |
    phi = parse_constraint("in == r1 | r1' == in & !(r1' == r1)")
    assert len(dnf(phi)) == 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("alphabet a\nregisters 1\ninitial p\nedge p -> q on a when r2' == in\n", 4),
        ("alphabet a\nregisters 1\ninitial p\nedge p -> q on b\n", 4),
        ("alphabet a\nregisters 1\nlocations p\ninitial p\nedge p -> q on a\n", 5),
        ("alphabet a\nregisters 1\ninitial p\nedge p -> q on a when in == \n", 4),
        ("alphabet a\nregisters 1\ninitial p\nfoo\n", 4),
        ("alphabet a\nregisters x\ninitial p\n", 2),
    ],
)
def test_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_automaton(text)
    assert info.value.line == line


def test_missing_header():
    with pytest.raises(ParseError):
        parse_automaton("alphabet a\ninitial p\n")


def test_zero_edges():
    aut = parse_automaton("alphabet a\nregisters 0\ninitial p\naccepting p\n")
    assert aut.edges == () and aut.register_count == 0


def test_error_message_has_position():
    with pytest.raises(ParseError) as info:
        parse_constraint("in == r1 &", line=3, offset=10)
    assert "3" in str(info.value)


@settings(max_examples=100)
@given(constraints(2))
def test_round_trip(phi):
    aut = Automaton(("a", "b"), 2, ("p", "q"), "p", {"q"}, (Edge("p", "a", phi, "q"), Edge("q", "b", phi, "p")))
    again = parse_automaton(format_automaton(aut))
    assert again.locations == aut.locations
    assert again.accepting == aut.accepting
    for e1, e2 in zip(aut.edges, again.edges):
        assert dnf(e1.guard) == dnf(e2.guard)


def test_words():
    w = parse_word("σ:1 σ:2 a:30")
    assert w == (Letter("σ", 1), Letter("σ", 2), Letter("a", 30))
    assert parse_word(format_word(w)) == w
    assert parse_word("") == () == parse_word("ε")
    assert format_word(()) == "ε"
    for bad in ("σ1", "σ:-1", ":3", "σ:x"):
        with pytest.raises(ParseError):
            parse_word(bad)
