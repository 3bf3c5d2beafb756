"""Exception hierarchy.

Every error belongs to one of three families, which the command line maps
to exit codes: input errors (2), algorithm failures (3) and precision
failures (4).
"""


class MforgeError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class InputError(MforgeError, ValueError):
    exit_code = 2


class AlgorithmError(MforgeError, ArithmeticError):
    exit_code = 3


class PrecisionError(MforgeError, ArithmeticError):
    exit_code = 4


class ParseError(InputError):
    pass


class NotIrreducible(InputError):
    """Raised by make_prime; ``factor`` is a proper monic factor."""

    def __init__(self, poly, factor):
        super().__init__(f"{poly} is reducible: divisible by {factor}")
        self.poly = poly
        self.factor = factor


class NotAndersonModule(InputError):
    pass


class NotLocalUnit(InputError):
    pass


class NotSeparating(InputError):
    pass


class BranchInvalid(InputError):
    pass


class DivisionByZero(AlgorithmError, ZeroDivisionError):
    pass


class PrecisionExhausted(PrecisionError):
    pass


class Indeterminate(PrecisionError):
    """A zero test could not be decided at the working precision."""


class NoContraction(AlgorithmError):
    pass


class SingularInput(AlgorithmError):
    pass


class NonIntegralRank(AlgorithmError):
    pass


class Divergent(AlgorithmError):
    pass


class DegenerateTorsion(AlgorithmError):
    pass


class SingularTrivialization(AlgorithmError):
    pass


class NotFreeAtPrime(AlgorithmError):
    pass
