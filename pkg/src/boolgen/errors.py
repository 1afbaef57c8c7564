"""Exception hierarchy shared by all boolgen modules.

Domain errors are violations of an operation's preconditions; capacity
errors mean the input is well-formed but too large for an exhaustive
method. The CLI maps the two families to exit codes 1 and 2.
"""


class BoolgenError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BoolgenError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(DomainError):
    """Lattice elements of different widths were combined."""


class UnsupportedWidthError(DomainError):
    """Generation questions are only posed for widths n >= 2."""


class CapacityError(BoolgenError):
    """The requested exhaustive computation exceeds its size guard."""


class TermSyntaxError(DomainError):
    """Malformed term text. ``position`` is a character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class GenerationError(BoolgenError):
    """Random generation ran out of retries."""


class ProtocolError(DomainError):
    """Base class for rejections raised by a protocol party."""


class UnknownSessionError(ProtocolError):
    pass


class TamperError(ProtocolError):
    """The term vector in a bundle differs from the one issued."""


class InvalidPlaintextError(ProtocolError):
    """Decryption produced text that fails the validity predicate."""


class ContractError(DomainError):
    """A claimed solution does not satisfy its equation system."""
