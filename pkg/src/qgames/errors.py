"""Exception hierarchy shared by all modules."""


class QGamesError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(QGamesError, ValueError):
    """A numeric precondition (Hermitian, unitary, normalized, ...) does not hold."""


class DimensionError(PreconditionError):
    """Operand dimensions are inconsistent."""


class UndefinedCollapseError(PreconditionError):
    """Selective measurement on an outcome whose probability is (numerically) zero."""


class NotCompletelyPositiveError(PreconditionError):
    """A Choi matrix has a negative eigenvalue beyond tolerance."""


class UnsupportedSearchError(QGamesError):
    """The requested equilibrium search is not available for this strategy space."""


class NoInteriorEquilibriumError(QGamesError):
    """A 2x2 bimatrix game has no fully mixed equilibrium."""
