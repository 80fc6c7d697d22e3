"""Containment checking for register automata with guessing against unambiguous one-register automata."""

from .automaton import (
    Automaton,
    ConcreteState,
    Edge,
    Letter,
    concrete_successors,
    membership,
    universal_automaton,
    word,
)
from .configuration import (
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
    succ_letter,
    succ_word,
    support,
)
from .constraints import TRUE, And, CurEq, NextEqInput, NextEqReg, Not, Or, eval_constraint
from .engine import (
    CanonicalKey,
    SyncConfig,
    Verdict,
    canonical_key,
    canonicalize,
    check_containment,
    decode_key,
    state_bound,
    state_count_guard,
)
from .errors import AutomatonError, ContractError, ParseError, UnsupportedAutomatonError, WitnessError
from .oracle import FuzzParams, bounded_containment, bounded_unambiguity_check, fuzz, random_automaton
from .parser import format_automaton, format_word, parse_automaton, parse_constraint, parse_word

__version__ = "0.1.0"

import types as _types

__all__ = [n for n, v in dict(globals()).items() if not n.startswith("_") and not isinstance(v, _types.ModuleType)]
