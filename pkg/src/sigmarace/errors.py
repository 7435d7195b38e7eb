"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: DomainError -> 2, UndecidedComparisonError
and PrecisionError -> 3, BudgetExhaustedError and ResourceLimitError -> 4,
VerificationError -> 5.
"""


class SigmaRaceError(Exception):
    """Base class for all package errors."""


class DomainError(SigmaRaceError):
    """Input outside the mathematical domain of an operation."""


class PrecisionError(SigmaRaceError):
    """Requested precision is unreachable under the configured caps."""

    def __init__(self, message: str, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class UndecidedComparisonError(SigmaRaceError):
    """A comparison stayed undecided after full precision escalation."""

    def __init__(self, n: int, precision_reached: int):
        super().__init__(
            f"comparison at n={n} undecided after escalating to "
            f"{precision_reached} bits"
        )
        self.n = n
        self.precision_reached = precision_reached


class ResourceLimitError(SigmaRaceError):
    """A configured memory / enumeration cap would be exceeded."""


class BudgetExhaustedError(SigmaRaceError):
    """A bounded search (prime hunt, rho factorization) ran out of budget."""


class PartialFactorizationError(BudgetExhaustedError):
    """Factorization budget exhausted; carries whatever was found."""

    def __init__(self, n: int, found, cofactor: int):
        super().__init__(
            f"factorization of {n} incomplete: composite cofactor {cofactor} "
            f"not split within budget"
        )
        self.n = n
        self.found = found
        self.cofactor = cofactor


class VerificationError(SigmaRaceError):
    """A serialized certificate failed independent re-verification."""
