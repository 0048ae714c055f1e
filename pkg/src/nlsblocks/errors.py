"""Exception types raised across the package."""


class NlsBlocksError(Exception):
    """Base class for every error raised by this package."""


class InconsistentBinding(NlsBlocksError):
    pass


class VariableCollision(NlsBlocksError):
    pass


class DegreeZero(NlsBlocksError):
    pass


class NotMonic(NlsBlocksError):
    pass


class DegreeTooLarge(NlsBlocksError):
    pass


class ParseError(NlsBlocksError):
    pass


class NotAPath(NlsBlocksError):
    pass


class Disconnected(NlsBlocksError):
    pass


class DuplicateL(NlsBlocksError):
    pass


class IncompatibleGraph(NlsBlocksError):
    pass


class NotEmbedded(NlsBlocksError):
    pass


class NotARelation(NlsBlocksError):
    pass


class SingularSystem(NlsBlocksError):
    pass


class AmbiguousEdge(NlsBlocksError):
    pass


class LiftObstruction(NlsBlocksError):
    pass


class NoRealization(NlsBlocksError):
    pass


class SubsetTooSmall(NlsBlocksError):
    pass


class BoundsTooSmall(NlsBlocksError):
    pass


class InconclusiveDimension(NlsBlocksError):
    """Raised for blocks beyond dimension 3; carries a weak-separation report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class CertificateError(NlsBlocksError):
    """A certificate file is malformed or its evidence does not replay."""
