"""Quantum operations: Kraus channels, Choi matrices, dilations and the named unitary families."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import null_space

from . import linalg as la
from .errors import DimensionError, NotCompletelyPositiveError, PreconditionError

CP_TOL = 1e-9
KRAUS_CUT = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """``T(X) = sum_k V_k X V_k^*`` with every ``V_k`` of shape (out_dim, in_dim)."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.operators:
            raise PreconditionError("a channel needs at least one Kraus operator")
        shape = self.operators[0].shape
        if any(v.shape != shape for v in self.operators):
            raise DimensionError("Kraus operators must share one shape")
        if la.operator_norm(self.gram()) > 1 + la.DEFAULT_TOL:
            raise PreconditionError("sum of V_k^* V_k exceeds the identity")

    @classmethod
    def of(cls, operators: Sequence) -> "KrausChannel":
        return cls(tuple(la.as_matrix(v) for v in operators))

    @property
    def in_dim(self) -> int:
        return self.operators[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.operators[0].shape[0]

    def gram(self) -> np.ndarray:
        return sum(v.conj().T @ v for v in self.operators)

    def is_trace_preserving(self, tol: float = la.DEFAULT_TOL) -> bool:
        return bool(np.allclose(self.gram(), np.eye(self.in_dim), atol=tol, rtol=0))

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True)
class ChoiMatrix:
    """Entry ``[(j, l), (i, k)]`` holds ``<e_k| T(|e_i><e_j|) |e_l>``; no ``1/d`` factor."""

    matrix: np.ndarray
    in_dim: int
    out_dim: int


@dataclass(frozen=True)
class AntiUnitaryOp:
    """``v -> U conj(v)``."""

    linear_part: np.ndarray

    def __post_init__(self):
        la.require_unitary(self.linear_part, what="anti-unitary linear part")

    def __call__(self, v) -> np.ndarray:
        return self.linear_part @ np.conj(np.asarray(v, dtype=complex))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    r = la.as_matrix(rho)
    if r.shape != (ch.in_dim, ch.in_dim):
        raise DimensionError(f"channel expects dim {ch.in_dim}, got {r.shape}")
    return sum(v @ r @ v.conj().T for v in ch.operators)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second o first``."""
    if first.out_dim != second.in_dim:
        raise DimensionError("channel dimensions do not chain")
    return KrausChannel.of([b @ a for b in second.operators for a in first.operators])


def tensor_channels(channels: Sequence[KrausChannel]) -> KrausChannel:
    ops = [np.eye(1, dtype=complex)]
    for ch in channels:
        ops = [np.kron(a, b) for a in ops for b in ch.operators]
    return KrausChannel.of(ops)


def unitary_channel(u) -> KrausChannel:
    return KrausChannel.of([la.require_unitary(u, what="unitary strategy")])


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel.of([np.eye(dim)])


def partial_trace(a, keep: int | Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``."""
    m = la.as_matrix(a)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
    keep = [keep] if isinstance(keep, (int, np.integer)) else list(keep)
    if any(not 0 <= k < len(dims) for k in keep):
        raise DimensionError("keep index out of range")
    n = len(dims)
    t = m.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # trace the highest axes first so lower axis numbers stay valid
    for k in sorted(traced, reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + cur)
    kd = int(np.prod([dims[k] for k in sorted(keep)])) if keep else 1
    return t.reshape(kd, kd)


def choi_from_map(fn: Callable[[np.ndarray], np.ndarray], in_dim: int, out_dim: int) -> ChoiMatrix:
    """Choi matrix of an arbitrary linear map given as a function on matrices."""
    n, m = in_dim, out_dim
    c = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            out = la.as_matrix(fn(e))
            if out.shape != (m, m):
                raise DimensionError("map output has the wrong dimension")
            for k in range(m):
                for l in range(m):
                    c[j * m + l, i * m + k] = out[k, l]
    return ChoiMatrix(c, n, m)


def choi(ch: KrausChannel) -> ChoiMatrix:
    n, m = ch.in_dim, ch.out_dim
    # vec_k[(i, k)] = V[k, i]; the matrix is sum conj(vec) vec^T
    w = np.array([v.T.reshape(-1) for v in ch.operators])
    return ChoiMatrix(w.conj().T @ w, n, m)


def is_cp(c: ChoiMatrix, tol: float = CP_TOL) -> bool:
    if not la.is_hermitian(c.matrix, tol):
        return False
    return bool(np.linalg.eigvalsh(c.matrix).min() >= -tol)


def kraus_from_choi(c: ChoiMatrix, tol: float = CP_TOL) -> KrausChannel:
    """Kraus operators from the scaled eigenvectors of a positive Choi matrix."""
    if not is_cp(c, tol):
        raise NotCompletelyPositiveError("Choi matrix is not positive semidefinite")
    dec = la.hermitian_eig(c.matrix, tol)
    ops = []
    for lam, v in zip(dec.eigenvalues, dec.eigenvectors.T):
        if lam <= KRAUS_CUT:
            continue
        y = np.sqrt(lam) * np.conj(v)
        ops.append(la.normalize_phase(y.reshape(c.in_dim, c.out_dim).T))
    if not ops:
        ops = [np.zeros((c.out_dim, c.in_dim), dtype=complex)]
    return KrausChannel.of(ops)


def stinespring(ch: KrausChannel, tol: float = la.DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Unitary ``U`` on ``H (x) C^K`` and ancilla state ``omega = |0><0|``.

    ``U (x (x) e_0) = sum_k V_k x (x) e_k`` and the remaining columns are an
    orthonormal completion, so ``tr_anc[U (rho (x) omega) U^*] = T(rho)``.
    """
    if ch.in_dim != ch.out_dim:
        raise DimensionError("dilation is implemented for channels on one space")
    if not ch.is_trace_preserving(tol):
        raise PreconditionError("Stinespring dilation needs a trace-preserving channel")
    n, k = ch.in_dim, len(ch.operators)
    f = np.zeros((n * k, n), dtype=complex)
    for idx, v in enumerate(ch.operators):
        f += np.kron(v, la.ket_column(idx, k))
    u = np.zeros((n * k, n * k), dtype=complex)
    fixed = [i * k for i in range(n)]
    u[:, fixed] = f
    rest = [c for c in range(n * k) if c not in fixed]
    if rest:
        u[:, rest] = null_space(f.conj().T)
    omega = np.zeros((k, k), dtype=complex)
    omega[0, 0] = 1.0
    return u, omega


def dilation_apply(u: np.ndarray, omega: np.ndarray, rho) -> np.ndarray:
    r = la.as_matrix(rho)
    big = u @ np.kron(r, omega) @ u.conj().T
    return partial_trace(big, 0, [r.shape[0], omega.shape[0]])


def antiunitary_dress(a: AntiUnitaryOp, rho) -> np.ndarray:
    """``rho -> U conj(rho) U^*``, the conjugation of ``rho`` by ``v -> U conj(v)``."""
    r = la.as_matrix(rho)
    u = a.linear_part
    if r.shape != u.shape:
        raise DimensionError("state and anti-unitary dimensions differ")
    return u @ np.conj(r) @ u.conj().T


def unitary_dress(u, rho) -> np.ndarray:
    u = la.as_matrix(u)
    return u @ la.as_matrix(rho) @ u.conj().T


def stokes_affine_map(fn: Callable[[np.ndarray], np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """``(M, t)`` with ``fn((I + x.s)/2) = (I + (Mx + t).s)/2`` for a qubit map ``fn``."""
    paulis = la.PAULIS[1:]
    t = np.array([np.real(np.trace(fn(la.I2 / 2) @ s)) for s in paulis])
    m = np.array([[np.real(np.trace(fn(sj / 2) @ si)) for sj in paulis] for si in paulis])
    return m, t


def transpose_map(rho) -> np.ndarray:
    return np.asarray(rho).T.copy()


def pure_collapse_map(b, psi) -> Callable[[np.ndarray], np.ndarray]:
    """``rho -> tr(rho B) |psi><psi|``."""
    b = la.as_matrix(b)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    proj = np.outer(psi, psi.conj())
    return lambda rho: np.trace(la.as_matrix(rho) @ b) * proj


# unitary families


def su2(theta: float, phi: float, psi: float) -> np.ndarray:
    """``cos(phi)cos(theta) I + i sin(psi)sin(theta) sx + i cos(psi)sin(theta) sy + i sin(phi)cos(theta) sz``."""
    return la.su2_from_quaternion([
        np.cos(phi) * np.cos(theta),
        np.sin(psi) * np.sin(theta),
        np.cos(psi) * np.sin(theta),
        np.sin(phi) * np.cos(theta),
    ])


def su2_angles(u) -> tuple[float, float, float]:
    """Angles ``(theta, phi, psi)`` with ``su2(theta, phi, psi) == u`` for ``u`` in SU(2)."""
    u0, u1, u2, u3 = la.quaternion_from_su2(u)
    theta = float(np.arctan2(np.hypot(u1, u2), np.hypot(u0, u3)))
    phi = float(np.arctan2(u3, u0))
    psi = float(np.arctan2(u1, u2))
    return theta, phi, psi


EWL_THETA_RANGE = (0.0, np.pi)
EWL_PHI_RANGE = (0.0, np.pi / 2)


def _check_range(name: str, x: float, lo: float, hi: float, tol: float = 1e-12) -> None:
    if not lo - tol <= x <= hi + tol:
        raise PreconditionError(f"{name}={x} outside [{lo}, {hi}]")


def ewl_strategy(theta: float, phi: float, strict: bool = True) -> np.ndarray:
    """Two-parameter strategy set; ``(0, 0)`` is cooperate, ``(pi, 0)`` defect."""
    if strict:
        _check_range("theta", theta, *EWL_THETA_RANGE)
        _check_range("phi", phi, *EWL_PHI_RANGE)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[np.exp(1j * phi) * c, s], [-s, np.exp(-1j * phi) * c]], dtype=complex)


EWL_C = np.eye(2, dtype=complex)
EWL_D = np.array([[0, 1], [-1, 0]], dtype=complex)
EWL_Q = 1j * la.SIGMA_Z


def pd3_strategy(theta: float, phi: float) -> np.ndarray:
    """``[[cos t, e^{i p} sin t], [-e^{-i p} sin t, cos t]]`` used in the three-player tables."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, np.exp(1j * phi) * s], [-np.exp(-1j * phi) * s, c]], dtype=complex)


def cartan(b: float, c: float, d: float) -> np.ndarray:
    """``e^{ibZ} e^{icY} e^{idZ}`` multiplied out."""
    return la.pauli_exp(b, la.SIGMA_Z) @ la.pauli_exp(c, la.SIGMA_Y) @ la.pauli_exp(d, la.SIGMA_Z)


def su2_polar_form(theta: float, phi: float, psi: float) -> np.ndarray:
    """``[[e^{i phi} cos t, e^{i psi} sin t], [-e^{-i psi} sin t, e^{-i phi} cos t]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[np.exp(1j * phi) * c, np.exp(1j * psi) * s],
                     [-np.exp(-1j * psi) * s, np.exp(-1j * phi) * c]], dtype=complex)


def beam_splitter() -> np.ndarray:
    return (la.I2 + 1j * la.SIGMA_X) / np.sqrt(2)


def mirror() -> np.ndarray:
    return -1j * la.SIGMA_X


def phase_right(phi: float) -> np.ndarray:
    return np.diag([np.exp(1j * phi), 1.0]).astype(complex)


def phase_left(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phi)]).astype(complex)


def mach_zender(theta1: float, theta2: float, phi1: float, phi2: float) -> np.ndarray:
    bs = beam_splitter()
    return phase_right(theta2) @ bs @ phase_right(phi1) @ phase_left(phi2) @ mirror() @ bs @ phase_right(theta1)


def _plate(theta: float, retard: float) -> np.ndarray:
    r = la.pauli_exp(-theta, la.SIGMA_Y)
    return r @ la.pauli_exp(-retard, la.SIGMA_Z) @ r


def qwp(theta: float) -> np.ndarray:
    return _plate(theta, np.pi / 4)


def hwp(theta: float) -> np.ndarray:
    return _plate(theta, np.pi / 2)


def _check_distribution(p: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)) or p.min() < -tol or abs(p.sum() - 1) > tol:
        raise PreconditionError("invalid probability vector")
    return np.clip(p, 0.0, None)


def pauli_channel(p: Sequence[float]) -> KrausChannel:
    """Kraus operators ``sqrt(p_j) sigma_j`` for ``j = 0..3``."""
    p = _check_distribution(np.asarray(p, dtype=float).reshape(-1))
    if p.size != 4:
        raise DimensionError("Pauli channel needs four probabilities")
    ops = [np.sqrt(pj) * s for pj, s in zip(p, la.PAULIS) if pj > 0]
    return KrausChannel.of(ops)


def shift_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    """``X e_j = e_{j-1 mod d}`` and ``Z e_j = exp(-2 pi i j / d) e_j``."""
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j - 1) % d, j] = 1.0
    z = np.diag(np.exp(-2j * np.pi * np.arange(d) / d))
    return x, z


def generalized_pauli(d: int, p) -> KrausChannel:
    """``rho -> sum p_kj (X^k Z^j)^* rho (X^k Z^j)``."""
    p = _check_distribution(np.asarray(p, dtype=float))
    if p.shape != (d, d):
        raise DimensionError(f"probability table must be {d}x{d}")
    x, z = shift_clock(d)
    ops = []
    for k in range(d):
        for j in range(d):
            if p[k, j] > 0:
                w = np.linalg.matrix_power(x, k) @ np.linalg.matrix_power(z, j)
                ops.append(np.sqrt(p[k, j]) * w.conj().T)
    return KrausChannel.of(ops)
