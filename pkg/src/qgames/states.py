"""Pure and mixed states, standard bases, Schmidt form, purification and fidelity.

Pure states are 1-D complex arrays and density matrices are 2-D arrays.  A
``dims`` tuple, where needed, lists the factor dimensions left to right.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionError, PreconditionError

ENTANGLEMENT_CUT = 1e-7


@dataclass(frozen=True)
class StokesVector:
    x1: float
    x2: float
    x3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class SchmidtForm:
    """``psi = sum_j coefficients[j] * left[j] (x) right[j]``."""

    coefficients: np.ndarray
    left: tuple[np.ndarray, ...]
    right: tuple[np.ndarray, ...]

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > ENTANGLEMENT_CUT))

    @property
    def entangled(self) -> bool:
        return self.rank > 1

    def reconstruct(self) -> np.ndarray:
        out = 0
        for c, u, v in zip(self.coefficients, self.left, self.right):
            out = out + c * np.kron(u, v)
        return out


def ket(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise PreconditionError(f"basis index {index} outside [0, {dim})")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def basis_state(bits: Sequence[int] | str, dims: Sequence[int] | None = None) -> np.ndarray:
    """Computational basis vector ``|x_0 x_1 ...>`` with the leftmost digit most significant."""
    digits = [int(b) for b in bits]
    dims = [2] * len(digits) if dims is None else list(dims)
    if len(dims) != len(digits):
        raise DimensionError("digit count does not match dims")
    return la.tensor_product(*(ket(d, n) for d, n in zip(digits, dims)))


def as_pure(psi, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise PreconditionError("state has non-finite amplitudes")
    if abs(np.vdot(v, v).real - 1.0) > tol:
        raise PreconditionError("pure state is not normalized")
    return v


def normalize(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise PreconditionError("cannot normalize the zero vector")
    return v / n


def density_from_pure(psi, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    v = as_pure(psi, tol)
    return np.outer(v, v.conj())


def validate_density(rho, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    """Return ``rho`` as an array after checking Hermitian, PSD and unit trace."""
    m = la.as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("density matrix must be square")
    if not la.is_hermitian(m, tol):
        raise PreconditionError("density matrix is not Hermitian")
    if abs(np.trace(m).real - 1.0) > tol:
        raise PreconditionError("density matrix trace is not one")
    if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -tol:
        raise PreconditionError("density matrix has a negative eigenvalue")
    return m


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def bloch_density(x) -> np.ndarray:
    """``(I + x1 s1 + x2 s2 + x3 s3) / 2``."""
    x1, x2, x3 = (float(t) for t in (x.as_array() if isinstance(x, StokesVector) else x))
    if x1 * x1 + x2 * x2 + x3 * x3 > 1 + la.DEFAULT_TOL:
        raise PreconditionError("Stokes vector lies outside the unit ball")
    return 0.5 * (la.I2 + x1 * la.SIGMA_X + x2 * la.SIGMA_Y + x3 * la.SIGMA_Z)


def stokes(rho, tol: float = la.DEFAULT_TOL) -> StokesVector:
    m = la.as_matrix(rho)
    if m.shape != (2, 2):
        raise DimensionError("Stokes parameters need a qubit density matrix")
    validate_density(m, tol)
    return StokesVector(*(float(np.trace(m @ s).real) for s in la.PAULIS[1:]))


def entropy(rho) -> float:
    """Von Neumann entropy with natural log, ``0 ln 0 = 0``."""
    w = np.linalg.eigvalsh(validate_density(rho))
    w = w[w > 1e-15]
    return float(max(0.0, -np.sum(w * np.log(w))))


def purity(rho) -> float:
    m = validate_density(rho)
    return float(np.real(np.trace(m @ m)))


def schmidt(psi, split: tuple[int, int], tol: float = la.DEFAULT_TOL) -> SchmidtForm:
    n, m = split
    v = as_pure(psi, tol)
    if v.size != n * m:
        raise DimensionError(f"{v.size} amplitudes cannot be split as {n}x{m}")
    u, s, vv = la.svd(v.reshape(n, m))
    k = len(s)
    return SchmidtForm(
        coefficients=s,
        left=tuple(u[:, j] for j in range(k)),
        right=tuple(vv[:, j] for j in range(k)),
    )


def is_product_two_qubit(psi, tol: float = la.DEFAULT_TOL) -> bool:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != 4:
        raise DimensionError("two-qubit test needs 4 amplitudes")
    return bool(abs(v[0] * v[3] - v[2] * v[1]) <= tol)


def qubit_basis(beta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors of the spin component along polar angle ``beta`` and azimuth ``phi``."""
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    e0 = np.array([c, np.exp(1j * phi) * s], dtype=complex)
    e1 = np.array([-np.exp(-1j * phi) * s, c], dtype=complex)
    return e0, e1


def spin_component(beta: float, phi: float) -> np.ndarray:
    return (np.sin(beta) * np.cos(phi) * la.SIGMA_X
            + np.sin(beta) * np.sin(phi) * la.SIGMA_Y
            + np.cos(beta) * la.SIGMA_Z)


def bell_basis() -> dict[str, np.ndarray]:
    r = 1 / np.sqrt(2)
    return {
        "phi+": r * np.array([1, 0, 0, 1], dtype=complex),
        "phi-": r * np.array([1, 0, 0, -1], dtype=complex),
        "psi+": r * np.array([0, 1, 1, 0], dtype=complex),
        "psi-": r * np.array([0, 1, -1, 0], dtype=complex),
    }


def singlet() -> np.ndarray:
    return bell_basis()["psi-"]


def singlet_invariance_check(u, tol: float = la.DEFAULT_TOL) -> float:
    """``||(u (x) u) s - det(u) s||`` for the singlet ``s``."""
    u = la.require_unitary(u, tol, "u")
    if u.shape != (2, 2):
        raise DimensionError("singlet check needs a 2x2 unitary")
    s = singlet()
    return float(np.linalg.norm(np.kron(u, u) @ s - np.linalg.det(u) * s))


def purify(rho, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    """Pure state on ``H (x) C^r`` whose ancilla marginal is ``rho``, with ``r = rank(rho)``."""
    m = validate_density(rho, tol)
    dec = la.hermitian_eig(m, tol)
    keep = dec.eigenvalues > ENTANGLEMENT_CUT
    lam = dec.eigenvalues[keep]
    vecs = dec.eigenvectors[:, keep]
    r = len(lam)
    amp = vecs * np.sqrt(lam)
    psi = amp.reshape(-1) if r > 0 else np.zeros(m.shape[0], dtype=complex)
    return la.normalize_phase(normalize(psi))


def _purification_matrix(rho, ancilla_dim: int) -> np.ndarray:
    # amplitude matrix X with X X^* = rho, padded to ancilla_dim columns
    dec = la.hermitian_eig(validate_density(rho))
    lam = np.clip(dec.eigenvalues, 0.0, None)
    x = dec.eigenvectors * np.sqrt(lam)
    return x[:, :ancilla_dim]


def _align(x: np.ndarray, y: np.ndarray, max_iter: int = 20) -> tuple[float, np.ndarray]:
    """Maximize ``|<x|(1 (x) U) y>| = |tr(X^* Y U^T)|`` over ancilla unitaries ``U``.

    Each pass replaces ``U`` by the polar factor that aligns the current
    overlap matrix.  For this bilinear objective the first pass already lands
    on the optimum; later passes only confirm it.
    """
    d = y.shape[1]
    u = np.eye(d, dtype=complex)
    best = -1.0
    for _ in range(max_iter):
        m = x.conj().T @ y @ u.T
        w, s, vh = np.linalg.svd(m)
        # U^T <- U^T (w vh)^*, making the overlap matrix positive
        u = (u.T @ (w @ vh).conj().T).T
        val = float(s.sum())
        if val <= best + 1e-14:
            break
        best = val
    return max(best, 0.0), u


def fidelity(rho, gamma) -> float:
    """Largest overlap between purifications of ``rho`` and ``gamma``."""
    a = validate_density(rho)
    b = validate_density(gamma)
    if a.shape != b.shape:
        raise DimensionError("fidelity needs states of equal dimension")
    n = a.shape[0]
    val, _ = _align(_purification_matrix(a, n), _purification_matrix(b, n))
    return float(min(1.0, val))


def fidelity_distance(rho, gamma) -> float:
    """Smallest distance between purifications, ``sqrt(2 - 2F)`` (experimental)."""
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * fidelity(rho, gamma))))
