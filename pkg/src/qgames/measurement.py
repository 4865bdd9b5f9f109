"""Observables, POVMs, outcome probabilities, collapse and pinching."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import DimensionError, PreconditionError, UndefinedCollapseError

COLLAPSE_THRESHOLD = 1e-12
DEGENERACY_GAP = 1e-7


def format_label(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class POVM:
    """Labeled positive effects summing to the identity."""

    labels: tuple[str, ...]
    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.effects) or not self.effects:
            raise PreconditionError("POVM needs one label per effect and at least one effect")
        if len(set(self.labels)) != len(self.labels):
            raise PreconditionError("POVM labels must be unique")

    @classmethod
    def from_effects(cls, labels: Sequence[str], effects: Sequence, tol: float = la.DEFAULT_TOL) -> "POVM":
        mats = tuple(la.as_matrix(e) for e in effects)
        d = mats[0].shape[0]
        for e in mats:
            if e.shape != (d, d):
                raise DimensionError("POVM effects must share one square shape")
            if not la.is_psd(e, tol):
                raise PreconditionError("POVM effect is not positive semidefinite")
        if not np.allclose(sum(mats), np.eye(d), atol=tol, rtol=0):
            raise PreconditionError("POVM effects do not sum to the identity")
        return cls(tuple(str(x) for x in labels), mats)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def is_projective(self, tol: float = la.DEFAULT_TOL) -> bool:
        return all(la.is_projector(e, tol) for e in self.effects)

    def conjugated(self, v: np.ndarray) -> "POVM":
        """Effects ``V M V^*``; pairs with dressing every strategy by ``V``."""
        v = np.asarray(v, dtype=complex)
        return POVM(self.labels, tuple(v @ e @ v.conj().T for e in self.effects))


@dataclass(frozen=True)
class OutcomeDistribution:
    labels: tuple[str, ...]
    probabilities: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return {k: float(p) for k, p in zip(self.labels, self.probabilities)}

    def __getitem__(self, label: str) -> float:
        return float(self.probabilities[self.labels.index(label)])


def pvm_from_observable(a, tol: float = la.DEFAULT_TOL) -> POVM:
    """Spectral projectors, one per distinct eigenvalue, labeled by the eigenvalue."""
    dec = la.hermitian_eig(a, tol)
    w, v = dec.eigenvalues, dec.eigenvectors
    scale = max(float(np.abs(w).max()), 1.0) if w.size else 1.0
    groups: list[list[int]] = []
    for j in range(len(w)):
        if groups and abs(w[groups[-1][0]] - w[j]) <= DEGENERACY_GAP * scale:
            groups[-1].append(j)
        else:
            groups.append([j])
    labels, effects = [], []
    for g in groups:
        cols = v[:, g]
        effects.append(cols @ cols.conj().T)
        labels.append(format_label(float(np.mean(w[g]))))
    return POVM(tuple(labels), tuple(effects))


def computational_pvm(dims: Sequence[int], labels: Sequence[str] | None = None) -> POVM:
    """Rank-one projectors on product basis vectors; default labels are digit strings."""
    dims = list(dims)
    total = int(np.prod(dims))
    if labels is None:
        labels = ["".join(str(d) for d in idx) for idx in itertools.product(*(range(n) for n in dims))]
    if len(labels) != total:
        raise DimensionError("need one label per basis vector")
    effects = []
    for k in range(total):
        e = np.zeros((total, total), dtype=complex)
        e[k, k] = 1.0
        effects.append(e)
    return POVM(tuple(labels), tuple(effects))


def local_pvm(projectors: Sequence, factor: int, dims: Sequence[int], labels: Sequence[str]) -> POVM:
    """Lift projectors on one factor to the full product space."""
    dims = list(dims)
    left = int(np.prod(dims[:factor])) if factor else 1
    right = int(np.prod(dims[factor + 1:])) if factor + 1 < len(dims) else 1
    effects = [np.kron(np.kron(np.eye(left), la.as_matrix(p)), np.eye(right)) for p in projectors]
    return POVM.from_effects(labels, effects)


def probabilities(rho, m: POVM, tol: float = la.DEFAULT_TOL) -> OutcomeDistribution:
    r = la.as_matrix(rho)
    if r.shape != (m.dim, m.dim):
        raise DimensionError(f"state of dim {r.shape[0]} measured with POVM of dim {m.dim}")
    p = np.array([np.real(np.trace(r @ e)) for e in m.effects])
    if p.min() < -tol or abs(p.sum() - 1) > tol:
        raise PreconditionError("outcome probabilities are not a distribution")
    p = np.clip(p, 0.0, None)
    return OutcomeDistribution(m.labels, p / p.sum())


def collapse(rho, effect, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    """Selective update ``P rho P / tr(rho P)`` for a projector ``P``."""
    r = la.as_matrix(rho)
    p = la.as_matrix(effect)
    if r.shape != p.shape:
        raise DimensionError("state and projector dimensions differ")
    if not la.is_projector(p, tol):
        raise PreconditionError("collapse needs a projector")
    prob = float(np.real(np.trace(r @ p)))
    if prob <= COLLAPSE_THRESHOLD:
        raise UndefinedCollapseError(f"outcome probability {prob:.3g} is below {COLLAPSE_THRESHOLD:g}")
    return p @ r @ p / prob


def pinch(b, m: POVM, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    """Non-selective measurement ``B -> sum_j P_j B P_j``."""
    if not m.is_projective(tol):
        raise PreconditionError("pinching needs a projection-valued measure")
    x = la.as_matrix(b)
    if x.shape != (m.dim, m.dim):
        raise DimensionError("operand and measure dimensions differ")
    return sum(p @ x @ p for p in m.effects)


def sample(dist: OutcomeDistribution, seed) -> str:
    """Inverse-CDF draw of one outcome label."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    cdf = np.cumsum(dist.probabilities)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return dist.labels[min(idx, len(dist.labels) - 1)]
