"""Exception hierarchy shared by all modules."""


class QoshorError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QoshorError, ValueError):
    """An operand is outside the domain of the operation."""


class CapacityError(QoshorError):
    """A register layout exceeds the configured qubit budget."""


class PovmValidationError(QoshorError, ValueError):
    """Effects do not form a valid POVM."""


class SelectionImpossibleError(QoshorError):
    """State selection cannot reach the requested register value."""


class ClassificationError(DomainError):
    """The integer to factor is even, prime or a prime power."""
