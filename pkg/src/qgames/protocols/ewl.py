"""Entangle, play local unitaries, disentangle, measure.

Outcome labels are bit strings with player 1 leftmost; 0 is cooperate and
1 is defect (or choice 0 / choice 1 in the minority game).
"""
from __future__ import annotations

import itertools
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from scipy.linalg import expm

from .. import linalg as la
from ..channels import EWL_D, ewl_strategy, pd3_strategy, su2
from ..errors import PreconditionError
from ..games import ParametricSpace, QuantumGameSpec, full_unitary_space
from ..measurement import computational_pvm
from ..states import basis_state

FlipConvention = Literal["Dhat", "sigmaX"]
StrategyBox = Literal["ewl", "pd3", "full"]


def outcome_labels(n: int) -> list[str]:
    return ["".join(b) for b in itertools.product("01", repeat=n)]


class EWLConfig(BaseModel):
    players: int = Field(2, ge=2, le=6)
    gamma: float = Field(..., ge=0.0, le=np.pi / 2 + 1e-12)
    flip: FlipConvention = "Dhat"
    payoffs: dict[str, list[float]]
    strategy_box: StrategyBox = "ewl"
    disentangle: bool = True

    @field_validator("payoffs")
    @classmethod
    def _labels_are_bits(cls, v):
        for k in v:
            if set(k) - {"0", "1"}:
                raise ValueError(f"outcome label {k!r} is not a bit string")
        return v

    @model_validator(mode="after")
    def _covers_outcomes(self):
        need = outcome_labels(self.players)
        missing = [k for k in need if k not in self.payoffs]
        if missing:
            raise ValueError(f"payoffs missing outcomes {missing}")
        bad = [k for k in need if len(self.payoffs[k]) != self.players]
        if bad:
            raise ValueError(f"payoff rows need {self.players} entries: {bad}")
        return self


def pd_table(r: float = 3, s: float = 0, t: float = 5, p: float = 1) -> dict[str, list[float]]:
    """Two-player table with reward, sucker, temptation, punishment."""
    return {"00": [r, r], "01": [s, t], "10": [t, s], "11": [p, p]}


def pd3_table() -> dict[str, list[float]]:
    return {
        "000": [3, 3, 3], "010": [2, 5, 2], "100": [5, 2, 2], "110": [4, 4, 0],
        "001": [2, 2, 5], "011": [0, 4, 4], "101": [4, 0, 4], "111": [1, 1, 1],
    }


def symmetric3_table(r3c, r3d, r1d, r2c, r2d, r1c) -> dict[str, list[float]]:
    """Three-player symmetric table from its six distinct entries."""
    out = {}
    for bits in outcome_labels(3):
        k = bits.count("1")
        row = []
        for b in bits:
            if k == 0:
                row.append(r3c)
            elif k == 3:
                row.append(r3d)
            elif k == 1:
                row.append(r1d if b == "1" else r2c)
            else:
                row.append(r2d if b == "1" else r1c)
        out[bits] = row
    return out


def minority_table(n: int) -> dict[str, list[float]]:
    """One point to each player whose choice is held by a strict minority."""
    out = {}
    for bits in outcome_labels(n):
        counts = {"0": bits.count("0"), "1": bits.count("1")}
        out[bits] = [1.0 if counts[b] < n - counts[b] else 0.0 for b in bits]
    return out


def flip_operator(flip: FlipConvention) -> np.ndarray:
    return EWL_D if flip == "Dhat" else la.SIGMA_X


def entangler(n: int, gamma: float, flip: FlipConvention = "Dhat") -> np.ndarray:
    """``J = exp(i gamma/2 F^{(x)n})``."""
    g = la.tensor_power(flip_operator(flip), n)
    return expm(0.5j * gamma * g)


def strategy_space(box: StrategyBox) -> ParametricSpace:
    if box == "ewl":
        return ParametricSpace(ewl_strategy, ((0.0, np.pi), (0.0, np.pi / 2)), "ewl")
    if box == "pd3":
        return ParametricSpace(pd3_strategy, ((0.0, np.pi / 2), (0.0, np.pi / 2)), "pd3")
    return full_unitary_space()


def ewl_spec(cfg: EWLConfig) -> QuantumGameSpec:
    """Initial state ``J|0...0>``; effects conjugated by ``J`` stand in for the final ``J^*``."""
    n = cfg.players
    j = entangler(n, cfg.gamma, cfg.flip)
    psi = j @ basis_state("0" * n)
    povm = computational_pvm([2] * n)
    if cfg.disentangle:
        povm = povm.conjugated(j)
    space = strategy_space(cfg.strategy_box)
    return QuantumGameSpec.from_payoff_map(
        [2] * n, np.outer(psi, psi.conj()), povm, cfg.payoffs, [space] * n, name=f"ewl{n}")


def ewl_final_state(n: int, gamma: float, unitaries, flip: FlipConvention = "Dhat",
                    disentangle: bool = True) -> np.ndarray:
    j = entangler(n, gamma, flip)
    psi = la.tensor_product(*unitaries) @ (j @ basis_state("0" * n))
    return j.conj().T @ psi if disentangle else psi


def pd_config(gamma: float, box: StrategyBox = "ewl") -> EWLConfig:
    return EWLConfig(players=2, gamma=gamma, payoffs=pd_table(), strategy_box=box)


def pd3_config(gamma: float) -> EWLConfig:
    return EWLConfig(players=3, gamma=gamma, flip="sigmaX", payoffs=pd3_table(), strategy_box="pd3")


def minority_config(n: int, disentangle: bool = True) -> EWLConfig:
    if n < 3:
        raise PreconditionError("the minority game needs at least three players")
    return EWLConfig(players=n, gamma=np.pi / 2, flip="sigmaX", payoffs=minority_table(n),
                     strategy_box="full", disentangle=disentangle)


# closed-form amplitudes for the maximally entangled sigma_x protocol


def _amp2(a, b):
    (t1, f1, s1), (t2, f2, s2) = a, b
    c1, n1, c2, n2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
    x00 = c1 * c2 * np.cos(f1 + f2) - n1 * n2 * np.sin(s1 + s2)
    x11 = n1 * n2 * np.cos(s1 + s2) + c1 * c2 * np.sin(f1 + f2)
    x01 = 1j * c1 * n2 * np.sin(s2 - f1) + 1j * n1 * c2 * np.cos(f2 - s1)
    x10 = 1j * c2 * n1 * np.sin(s1 - f2) + 1j * n2 * c1 * np.cos(f1 - s2)
    return {"00": x00, "01": x01, "10": x10, "11": x11}


def _xi000(a, b, c):
    (t1, f1, s1), (t2, f2, s2), (t3, f3, s3) = a, b, c
    return (np.cos(t1) * np.cos(t2) * np.cos(t3) * np.cos(f1 + f2 + f3)
            + 1j * np.sin(t1) * np.sin(t2) * np.sin(t3) * np.cos(s1 + s2 + s3))


def _xi111(a, b, c):
    (t1, f1, s1), (t2, f2, s2), (t3, f3, s3) = a, b, c
    return (1j * np.sin(t1) * np.sin(t2) * np.sin(t3) * np.sin(s1 + s2 + s3)
            + np.cos(t1) * np.cos(t2) * np.cos(t3) * np.sin(f1 + f2 + f3))


def _xi001(a, b, c):
    # the player holding the 1 is the third argument
    (t1, f1, s1), (t2, f2, s2), (t3, f3, s3) = a, b, c
    return (1j * np.cos(t1) * np.cos(t2) * np.sin(t3) * np.sin(s3 - f1 - f2)
            + np.sin(t1) * np.sin(t2) * np.cos(t3) * np.sin(f3 - s1 - s2))


def _xi011(a, b, c):
    # the player holding the 0 is the first argument
    (t1, f1, s1), (t2, f2, s2), (t3, f3, s3) = a, b, c
    return (np.cos(t1) * np.sin(t2) * np.sin(t3) * np.cos(s2 + s3 - f1)
            + 1j * np.sin(t1) * np.cos(t2) * np.cos(t3) * np.cos(f3 + f2 - s1))


def _amp3(a, b, c):
    return {
        "000": _xi000(a, b, c),
        "111": _xi111(a, b, c),
        "001": _xi001(a, b, c),
        "010": _xi001(a, c, b),
        "100": _xi001(c, b, a),
        "011": _xi011(a, b, c),
        "101": _xi011(b, a, c),
        "110": _xi011(c, b, a),
    }


def ewl_amplitudes_n(angles) -> dict[str, complex]:
    """Final amplitudes for strategies ``su2(theta, phi, psi)`` under ``J = (I + i sx^{(x)N})/sqrt(2)``."""
    angles = [tuple(float(x) for x in a) for a in angles]
    if len(angles) == 2:
        return _amp2(*angles)
    if len(angles) == 3:
        return _amp3(*angles)
    raise PreconditionError("closed-form amplitudes exist for two or three players only")


def ewl_amplitudes_pipeline(angles) -> dict[str, complex]:
    n = len(angles)
    psi = ewl_final_state(n, np.pi / 2, [su2(*a) for a in angles], flip="sigmaX")
    return dict(zip(outcome_labels(n), psi))


# two-player deviations


def cooperation_deviation(theta2: float, phi2: float, psi2: float) -> tuple[float, float, float]:
    """Angles that send the two-player sigma_x protocol to outcome 00 whatever the opponent plays."""
    return -theta2, -phi2, np.pi / 2 - psi2


def forcing_deviation(opponent, target: str, player: int = 0, gamma: float = np.pi / 2,
                      flip: FlipConvention = "sigmaX") -> np.ndarray:
    """SU(2) move for ``player`` that produces outcome ``target`` with certainty.

    Writing ``J|00>`` as a 2x2 amplitude matrix ``S`` (rows: player 0), the
    state before ``J^*`` is ``A S B^T``.  Hitting ``J|target>`` (matrix ``T``)
    means ``A = T (S B^T)^{-1}`` or ``B^T = (A S)^{-1} T``.  This is unitary
    only for a maximally entangling ``J``.
    """
    j = entangler(2, gamma, flip)
    s = (j @ basis_state("00")).reshape(2, 2)
    t = (j @ basis_state(target)).reshape(2, 2)
    o = la.as_matrix(opponent)
    m = t @ np.linalg.inv(s @ o.T) if player == 0 else (np.linalg.inv(o @ s) @ t).T
    if not la.is_unitary(m, 1e-8):
        raise PreconditionError("no unitary forcing move; the entangler is not maximal")
    return m / np.sqrt(np.linalg.det(m))


# minority game


def minority_payoff(unitaries, disentangle: bool = True) -> np.ndarray:
    n = len(unitaries)
    if n < 3:
        raise PreconditionError("the minority game needs at least three players")
    psi = ewl_final_state(n, np.pi / 2, unitaries, flip="sigmaX", disentangle=disentangle)
    probs = np.abs(psi) ** 2
    table = minority_table(n)
    return sum(p * np.array(table[k]) for k, p in zip(outcome_labels(n), probs))


def minority3_classical(thetas) -> np.ndarray:
    """Chance of being in the minority when player j picks 0 with probability ``cos^2 theta_j``."""
    c = np.cos(np.asarray(thetas, dtype=float)) ** 2
    s = 1 - c
    out = []
    for j in range(3):
        o = [k for k in range(3) if k != j]
        out.append(c[j] * s[o[0]] * s[o[1]] + s[j] * c[o[0]] * c[o[1]])
    return np.array(out)


def minority4_quoted_profile() -> np.ndarray:
    """``cos(pi/16)(I + i sx)/sqrt(2) + sin(pi/16)(i sy - i sz)/sqrt(2)``."""
    c, s = np.cos(np.pi / 16), np.sin(np.pi / 16)
    return (c * (la.I2 + 1j * la.SIGMA_X) + s * (1j * la.SIGMA_Y - 1j * la.SIGMA_Z)) / np.sqrt(2)


def minority4_transposed_profile() -> np.ndarray:
    """Transpose of the quoted move (sign of the sigma_y part flipped)."""
    return minority4_quoted_profile().T
