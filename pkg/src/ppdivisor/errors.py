"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`DomainError`,
so callers (and the CLI) can report the error name and exit with status 1.
"""


class DomainError(Exception):
    """Base class for failures of a mathematical precondition."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotInjective(DomainError):
    pass


class TorsionCokernel(DomainError):
    pass


class ZeroVector(DomainError):
    pass


class RankMismatch(DomainError):
    pass


class TailMismatch(DomainError):
    pass


class NotPointed(DomainError):
    pass


class EmptyPolyhedron(DomainError):
    pass


class UnknownLabel(DomainError):
    pass


class NonIntegral(DomainError):
    pass


class UnknownFunction(DomainError):
    pass


class OutsideWeightCone(DomainError):
    pass


class TailViolation(DomainError):
    pass


class ChainMismatch(DomainError):
    pass


class MissingLabel(DomainError):
    pass


class EmptyInterval(DomainError):
    pass


class EmptyFiber(DomainError):
    pass


class NotInvariant(DomainError):
    pass


class MixedRamification(DomainError):
    pass


class NotDivisible(DomainError):
    pass


class InvalidParameters(DomainError):
    pass


class NoBezoutWithDivisibility(DomainError):
    pass


class SessionParseError(Exception):
    """Malformed session file or command-line literal (CLI exit status 2)."""
