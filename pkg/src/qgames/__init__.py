"""Finite-dimensional quantum mechanics toolkit and quantum game protocols."""
from . import channels, games, linalg, measurement, protocols, states
from .errors import (
    DimensionError,
    NoInteriorEquilibriumError,
    NotCompletelyPositiveError,
    PreconditionError,
    QGamesError,
    UndefinedCollapseError,
    UnsupportedSearchError,
)

__version__ = "0.1.0"

__all__ = [
    "channels", "games", "linalg", "measurement", "protocols", "states",
    "QGamesError", "PreconditionError", "DimensionError", "UndefinedCollapseError",
    "NotCompletelyPositiveError", "UnsupportedSearchError", "NoInteriorEquilibriumError",
]
