"""Exception types shared across the package."""


class AutomatonError(ValueError):
    """An automaton violates a structural invariant."""


class ParseError(ValueError):
    """Malformed automaton or data-word text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ContractError(ValueError):
    """A precondition of an operation does not hold."""


class UnsupportedAutomatonError(ValueError):
    """The right-hand automaton of a containment query has the wrong shape."""


class WitnessError(RuntimeError):
    """A counterexample failed independent verification.

    This always indicates an implementation bug; the unverified word is kept
    on the exception so it can be reported.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness
