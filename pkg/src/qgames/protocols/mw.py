"""Mixtures of identity and flip on a shared initial state, measured directly."""
from __future__ import annotations

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from .. import linalg as la
from ..games import Mixture, MixtureSpace, QuantumGameSpec, outcome_probabilities
from ..measurement import OutcomeDistribution, computational_pvm
from ..errors import PreconditionError

LABELS = ("00", "01", "10", "11")


def _table(v) -> list[list[float]]:
    a = np.asarray(v, dtype=float)
    if a.shape != (2, 2):
        raise ValueError("payoff tables must be 2x2")
    return a.tolist()


class MWConfig(BaseModel):
    """Amplitudes ``c = (c00, c01, c10, c11)`` and payoff tables indexed ``[i][j]``."""

    amplitudes: list[complex]
    alpha: list[list[float]]
    beta: list[list[float]]
    accept: bool = True

    @field_validator("alpha", "beta")
    @classmethod
    def _two_by_two(cls, v):
        return _table(v)

    @model_validator(mode="after")
    def _normalized(self):
        c = np.asarray(self.amplitudes, dtype=complex)
        if c.size != 4:
            raise ValueError("amplitudes need four entries c00, c01, c10, c11")
        if abs(np.vdot(c, c).real - 1) > 1e-9:
            raise ValueError("amplitudes are not normalized")
        return self

    def coefficients(self) -> np.ndarray:
        """Effective 2x2 amplitude matrix; declining the shared state means ``|00>``."""
        if not self.accept:
            return np.array([[1, 0], [0, 0]], dtype=complex)
        return np.asarray(self.amplitudes, dtype=complex).reshape(2, 2)


def bos_tables(alpha: float, beta: float, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    return (np.array([[alpha, gamma], [gamma, beta]], dtype=float),
            np.array([[beta, gamma], [gamma, alpha]], dtype=float))


def ultimatum_tables() -> tuple[np.ndarray, np.ndarray]:
    """Rows: unfair / fair offer.  Columns: accept / reject."""
    return (np.array([[99, 0], [50, 0]], dtype=float), np.array([[1, 0], [50, 0]], dtype=float))


def entangled_amplitudes(a: complex, b: complex) -> list[complex]:
    """``a|00> + b|11>``."""
    return [complex(a), 0j, 0j, complex(b)]


def bos_config(alpha: float, beta: float, gamma: float, a: complex = 1.0, b: complex = 0.0, accept=True) -> MWConfig:
    ta, tb = bos_tables(alpha, beta, gamma)
    return MWConfig(amplitudes=entangled_amplitudes(a, b), alpha=ta, beta=tb, accept=accept)


def ultimatum_spec(a: complex = 1.0, b: complex = 0.0, accept: bool = True) -> MWConfig:
    ta, tb = ultimatum_tables()
    return MWConfig(amplitudes=entangled_amplitudes(a, b), alpha=ta, beta=tb, accept=accept)


def _check_prob(x: float, name: str) -> None:
    if not 0.0 <= x <= 1.0:
        raise PreconditionError(f"{name} must lie in [0, 1]")


def mw_final_probabilities(cfg: MWConfig, p: float, q: float) -> OutcomeDistribution:
    """Closed form; ``p`` and ``q`` are the weights on the identity."""
    _check_prob(p, "p")
    _check_prob(q, "q")
    w = np.abs(cfg.coefficients()) ** 2
    out = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            out[i, j] = (p * q * w[i, j] + (1 - p) * q * w[1 - i, j]
                         + p * (1 - q) * w[i, 1 - j] + (1 - p) * (1 - q) * w[1 - i, 1 - j])
    return OutcomeDistribution(LABELS, out.reshape(-1))


def mw_spec(cfg: MWConfig) -> QuantumGameSpec:
    psi = cfg.coefficients().reshape(-1)
    povm = computational_pvm([2, 2])
    payoffs = np.column_stack([np.asarray(cfg.alpha).reshape(-1), np.asarray(cfg.beta).reshape(-1)])
    space = MixtureSpace((la.I2, la.SIGMA_X), ("I", "F"))
    return QuantumGameSpec((2, 2), np.outer(psi, psi.conj()), povm, payoffs, (space, space), "mw")


def mw_pipeline_probabilities(cfg: MWConfig, p: float, q: float) -> OutcomeDistribution:
    """Same distribution through the density-matrix dressing of the game engine."""
    spec = mw_spec(cfg)
    probs = outcome_probabilities(spec, [Mixture((p, 1 - p)), Mixture((q, 1 - q))])
    return OutcomeDistribution(LABELS, probs)


def mw_transformed_tables(cfg: MWConfig) -> tuple[np.ndarray, np.ndarray]:
    """Classical tables in the players' own actions (row/column 0 = identity, 1 = flip).

    ``tilde[a][b] = sum_ij table[i][j] |c_{i xor a, j xor b}|^2``.
    """
    w = np.abs(cfg.coefficients()) ** 2
    alpha = np.asarray(cfg.alpha)
    beta = np.asarray(cfg.beta)
    at = np.zeros((2, 2))
    bt = np.zeros((2, 2))
    for a in range(2):
        for b in range(2):
            for i in range(2):
                for j in range(2):
                    at[a, b] += alpha[i, j] * w[i ^ a, j ^ b]
                    bt[a, b] += beta[i, j] * w[i ^ a, j ^ b]
    return at, bt


def pure_equilibria_2x2(alpha, beta, tol: float = 1e-12) -> list[tuple[int, int]]:
    a = np.asarray(alpha)
    b = np.asarray(beta)
    out = []
    for i in range(2):
        for j in range(2):
            if a[i, j] >= a[1 - i, j] - tol and b[i, j] >= b[i, 1 - j] - tol:
                out.append((i, j))
    return out
