"""Exception hierarchy shared by all modules."""


class X1GonError(Exception):
    """Base class; the CLI prints the class name on failure."""


class DivisionError(X1GonError):
    """Exact division was requested but the divisor does not divide."""


class FieldMismatch(X1GonError):
    """Operands live over different coefficient fields or variable sets."""


class ZeroPolynomial(X1GonError):
    """The zero polynomial was passed where a nonzero one is required."""


class ParseError(X1GonError):
    """Polynomial text could not be parsed."""


class UnsupportedLevel(X1GonError):
    """The level is outside the range served by the requested routine."""


class DegenerateSubstitution(X1GonError):
    """A substitution made a denominator vanish identically."""


class WildRamification(X1GonError):
    """A Newton polygon step needs a ramification index divisible by p."""

    def __init__(self, message, suggested_q=None):
        super().__init__(message)
        self.suggested_q = suggested_q


class NotSquarefree(X1GonError):
    """The curve equation has a repeated factor."""


class NotAFunction(X1GonError):
    """The rational function vanishes or is undefined on the whole curve."""


class LabelingAmbiguous(X1GonError):
    """Cusp places could not be matched to labels unambiguously."""


class OrbitInconsistency(X1GonError):
    """Places in one Galois orbit received different valuations."""


class NotADiamond(X1GonError):
    """The diamond index is not coprime to the level."""


class NotInLattice(X1GonError):
    """The divisor is not an integer combination of the unit divisors."""

    def __init__(self, message, rational_solution=None):
        super().__init__(message)
        self.rational_solution = rational_solution


class RankDeficient(X1GonError):
    """Lattice basis rows are linearly dependent."""


class EnumerationBudgetExceeded(X1GonError):
    """Short vector enumeration would exceed the configured cap."""


class Undecided(X1GonError):
    """A census question could not be settled within the budget."""


class RoundingTie(X1GonError):
    """Nearest-integer rounding hit an exact half."""


class BadPrime(X1GonError):
    """The chosen prime divides the level."""


class EmptyTarget(X1GonError):
    """The target degree is already below the lower bound."""


class MalformedDivisor(X1GonError):
    """A divisor description has a zero coefficient or bad shape."""


class Inconsistency(X1GonError):
    """Two computed bounds contradict each other."""
