"""Guess an n-bit number with one query to a sign oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .. import linalg as la

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class BVInstance(BaseModel):
    n: int = Field(..., ge=1, le=10)
    a: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _in_range(self):
        if self.a >= 2 ** self.n:
            raise ValueError(f"a must be below 2**n = {2 ** self.n}")
        return self


def walsh_hadamard(n: int) -> np.ndarray:
    return la.tensor_power(HADAMARD, n)


def parity(x: int) -> int:
    return bin(x).count("1") & 1


class SignOracle:
    """``|x> -> (-1)^{a.x} |x>``; counts how often it is applied."""

    def __init__(self, n: int, a: int):
        self.n = n
        self._signs = np.array([(-1) ** parity(a & x) for x in range(2 ** n)], dtype=complex)
        self.calls = 0

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        self.calls += 1
        return self._signs * psi


@dataclass(frozen=True)
class BVRun:
    guessed: int
    oracle_calls: int
    amplitude: complex
    uniform_stage: np.ndarray


def bv_protocol(inst: BVInstance) -> BVRun:
    n = inst.n
    w = walsh_hadamard(n)
    oracle = SignOracle(n, inst.a)
    start = np.zeros(2 ** n, dtype=complex)
    start[0] = 1.0
    uniform = w @ start
    final = w @ oracle(uniform)
    k = int(np.argmax(np.abs(final)))
    return BVRun(k, oracle.calls, complex(final[k]), uniform)


def bv_guess(inst: BVInstance) -> int:
    return bv_protocol(inst).guessed
