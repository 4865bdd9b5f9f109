"""Penny flip: Q moves with a unitary, P flips or not, Q moves again."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import linalg as la
from ..games import MixtureSpace, ParametricSpace, QuantumGameSpec
from ..measurement import POVM
from ..errors import PreconditionError

HEADS = np.array([1, 0], dtype=complex)
NOT_FLIP = la.I2
FLIP = la.SIGMA_X


def meyer_unitary(u: complex, v: complex, tol: float = 1e-9) -> np.ndarray:
    """``[[u, conj(v)], [v, -conj(u)]]`` with ``|u|^2 + |v|^2 = 1``."""
    if abs(abs(u) ** 2 + abs(v) ** 2 - 1) > tol:
        raise PreconditionError("(u, v) must be normalized")
    return np.array([[u, np.conj(v)], [v, -np.conj(u)]], dtype=complex)


def hadamard_move() -> np.ndarray:
    r = 1 / np.sqrt(2)
    return meyer_unitary(r, r)


def coin_povm() -> POVM:
    return POVM(("H", "T"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)))


@dataclass(frozen=True)
class MeyerOutcome:
    final_state: np.ndarray
    payoff_p: float

    @property
    def payoff_q(self) -> float:
        return -self.payoff_p


def meyer_play(q_first, p: float, q_second) -> MeyerOutcome:
    """Run the three moves from heads; P flips with probability ``p``.

    P wins on tails, so ``payoff_p = prob(T) - prob(H)``.
    """
    a = la.require_unitary(q_first, what="Q's first move")
    b = la.require_unitary(q_second, what="Q's second move")
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise PreconditionError("coin moves are 2x2")
    if not 0.0 <= p <= 1.0:
        raise PreconditionError("flip probability outside [0, 1]")
    rho = np.outer(HEADS, HEADS.conj())
    rho = a @ rho @ a.conj().T
    rho = p * FLIP @ rho @ FLIP + (1 - p) * rho
    rho = b @ rho @ b.conj().T
    return MeyerOutcome(rho, float(np.real(rho[1, 1] - rho[0, 0])))


def meyer_midgame_value(u: complex, v: complex, p: float, tol: float = 1e-9) -> float:
    """P's payoff when the game stops after Q's first move and P's move."""
    if abs(abs(u) ** 2 + abs(v) ** 2 - 1) > tol:
        raise PreconditionError("(u, v) must be normalized")
    return float((2 * p - 1) * (abs(u) ** 2 - abs(v) ** 2))


@dataclass(frozen=True)
class SaddleCertificate:
    p: float
    u: complex
    v: complex
    value: float
    p_gain: float
    q_gain: float


def midgame_saddle_certificate(points: int = 200, p_star: float = 0.5, a_star: float = np.pi / 4) -> SaddleCertificate:
    """Check that ``(p*, u = cos a*, v = sin a*)`` is a saddle point of the mid-game value.

    P maximizes over a ``points`` grid of flip probabilities with Q fixed; Q
    minimizes over a ``points`` grid of ``(u, v) = (cos a, e^{ib} sin a)`` with
    P fixed.  Both gains should vanish.
    """
    u0, v0 = np.cos(a_star), np.sin(a_star)
    value = meyer_midgame_value(u0, v0, p_star)
    ps = np.linspace(0.0, 1.0, points)
    p_best = max(meyer_midgame_value(u0, v0, p) for p in ps)
    aa = np.linspace(0.0, np.pi / 2, points)
    bb = np.linspace(-np.pi, np.pi, points)
    q_best = min(meyer_midgame_value(np.cos(a), np.exp(1j * b) * np.sin(a), p_star) for a in aa for b in bb)
    return SaddleCertificate(p_star, complex(u0), complex(v0), value, p_best - value, value - q_best)


def meyer_spec(q_first, q_second) -> QuantumGameSpec:
    """Two-player spec with Q's fixed moves folded into the state and the measurement.

    Q owns a one-dimensional factor (no further choice); P chooses a mixture
    of not-flip and flip on the coin.
    """
    a = la.require_unitary(q_first)
    b = la.require_unitary(q_second)
    rho = a @ np.outer(HEADS, HEADS.conj()) @ a.conj().T
    povm = coin_povm().conjugated(b.conj().T)
    # columns: Q, P
    payoffs = np.array([[1.0, -1.0], [-1.0, 1.0]])
    spaces = (ParametricSpace(lambda: np.eye(1, dtype=complex), (), "fixed"),
              MixtureSpace((NOT_FLIP, FLIP), ("N", "F")))
    return QuantumGameSpec((1, 2), rho, povm, payoffs, spaces, "meyer")
