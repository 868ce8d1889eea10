"""Exception types raised across the package."""


class CircuitError(ValueError):
    """Base class for malformed circuits and invalid builder arguments."""


class OperandClash(CircuitError):
    pass


class WireOutOfRange(CircuitError):
    pass


class NotABijection(CircuitError):
    pass


class UnsupportedGate(CircuitError):
    pass


class NonClassicalGate(CircuitError):
    pass


class WidthTooLarge(CircuitError):
    pass


class WireGroupOverlap(CircuitError):
    pass


class InsufficientAncilla(CircuitError):
    pass


class AncillaNotClean(CircuitError):
    pass


class SingularMatrix(ValueError):
    pass


class NotAPowerOfTwo(ValueError):
    pass


class BadKeyLength(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class IsStoredWord(ValueError):
    pass


class PairCountMismatch(ValueError):
    pass


class DomainError(ValueError):
    pass


class NonUniqueKey(ValueError):
    pass


class BadFlagCombination(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Mismatch(AssertionError):
    pass
