"""Dense complex linear algebra for small quantum systems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor products
use the "left factor most significant" index convention throughout, so the
two-qubit basis vector ``|jk>`` sits at index ``2*j + k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import PreconditionError

DEFAULT_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise PreconditionError(f"expected a matrix, got array with shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def tensor_product(*factors) -> np.ndarray:
    """Kronecker product of any number of vectors or matrices, left factor most significant."""
    if not factors:
        raise PreconditionError("tensor_product needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def tensor_power(a, n: int) -> np.ndarray:
    if n < 1:
        raise PreconditionError("tensor power must be >= 1")
    return tensor_product(*([a] * n))


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and bool(np.allclose(a, a.conj().T, atol=tol, rtol=0))


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.allclose(a @ a.conj().T, np.eye(a.shape[0]), atol=tol, rtol=0))


def is_psd(a, tol: float = DEFAULT_TOL) -> bool:
    if not is_hermitian(a, tol):
        return False
    return bool(np.linalg.eigvalsh(np.asarray(a)).min() >= -tol)


def is_projector(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return is_hermitian(a, tol) and bool(np.allclose(a @ a, a, atol=tol, rtol=0))


def require_hermitian(a, tol: float = DEFAULT_TOL, what: str = "matrix") -> np.ndarray:
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        raise PreconditionError(f"{what} is not Hermitian within {tol:g}")
    return m


def require_unitary(a, tol: float = DEFAULT_TOL, what: str = "matrix") -> np.ndarray:
    m = as_matrix(a)
    if not is_unitary(m, tol):
        raise PreconditionError(f"{what} is not unitary within {tol:g}")
    return m


def normalize_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Multiply by a unit scalar so the first non-negligible entry is real and positive."""
    v = np.asarray(v, dtype=complex)
    flat = v.reshape(-1)
    idx = np.flatnonzero(np.abs(flat) > tol)
    if idx.size == 0:
        return v.copy()
    z = flat[idx[0]]
    return v * (abs(z) / z)


def hermitian_eig(a, tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues come out descending; each eigenvector column has its first
    nonzero component made real and positive so results are reproducible.
    """
    m = require_hermitian(a, tol)
    m = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = np.column_stack([normalize_phase(v[:, j]) for j in range(v.shape[1])])
    return SpectralDecomposition(w, v)


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular decomposition ``A = U D V^T`` (transpose on ``V``, not adjoint).

    ``U`` (rows x rows) and ``V`` (cols x cols) are unitary; ``singulars`` has
    ``min(rows, cols)`` non-negative entries in descending order.  With this
    convention column ``j`` of ``U`` and column ``j`` of ``V`` are the Schmidt
    vectors of the bipartite vector whose amplitude matrix is ``A``.
    """
    m = as_matrix(a)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    return u, s, vh.T


def svd_reconstruct(u: np.ndarray, singulars: np.ndarray, v: np.ndarray) -> np.ndarray:
    k = len(singulars)
    return (u[:, :k] * singulars) @ v[:, :k].T


def trace_norm(a, tol: float = DEFAULT_TOL) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = require_hermitian(a, tol)
    return float(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2)).sum())


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(a), 2))


def trace_norm_maximizer(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``B = V sign(D) V*`` with ``||B|| = 1`` and ``tr(AB) = ||A||_tr``."""
    dec = hermitian_eig(a, tol)
    signs = np.where(dec.eigenvalues >= 0, 1.0, -1.0)
    v = dec.eigenvectors
    return (v * signs) @ v.conj().T


def operator_norm_maximizer(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rank-one projector on an eigenvector of largest ``|eigenvalue|``; trace norm one."""
    dec = hermitian_eig(a, tol)
    j = int(np.argmax(np.abs(dec.eigenvalues)))
    x = dec.eigenvectors[:, j]
    return np.outer(x, x.conj())


def pauli_exp(angle: float, generator: np.ndarray) -> np.ndarray:
    """``exp(i * angle * A)`` for an involution ``A`` (``A @ A = I``)."""
    g = np.asarray(generator, dtype=complex)
    return np.cos(angle) * np.eye(g.shape[0]) + 1j * np.sin(angle) * g


def su2_from_quaternion(u: Sequence[float]) -> np.ndarray:
    """``u0 I + i u1 sx + i u2 sy + i u3 sz`` for a real unit 4-vector."""
    u0, u1, u2, u3 = u
    return u0 * I2 + 1j * (u1 * SIGMA_X + u2 * SIGMA_Y + u3 * SIGMA_Z)


def quaternion_from_su2(u: np.ndarray) -> np.ndarray:
    """Inverse of :func:`su2_from_quaternion` (input must lie in SU(2))."""
    u = np.asarray(u, dtype=complex)
    return np.array([
        np.real(np.trace(u)) / 2,
        np.imag(np.trace(u @ SIGMA_X)) / 2,
        np.imag(np.trace(u @ SIGMA_Y)) / 2,
        np.imag(np.trace(u @ SIGMA_Z)) / 2,
    ])


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_su2(seed) -> np.ndarray:
    """Haar-distributed SU(2) element: a uniform point on the unit 3-sphere of quaternions."""
    rng = _rng(seed)
    x = rng.standard_normal(4)
    return su2_from_quaternion(x / np.linalg.norm(x))


def haar_random_unitary(dim: int, seed) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with the phase fix."""
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, seed) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (z + z.conj().T) / 2


def random_density(dim: int, seed, rank: int | None = None) -> np.ndarray:
    rng = _rng(seed)
    k = dim if rank is None else rank
    z = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_pure(dim: int, seed) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def ket_column(index: int, dim: int) -> np.ndarray:
    """Standard basis vector as a ``dim x 1`` column."""
    e = np.zeros((dim, 1), dtype=complex)
    e[index, 0] = 1.0
    return e
