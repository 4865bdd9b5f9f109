"""General quantum games: payoff evaluation and equilibrium certification.

A game fixes per-player Hilbert spaces, an initial state, an outcome POVM and
per-player payoffs on outcomes.  Each player applies a local operation to
their own factor; expected payoffs follow from the outcome distribution.

Every strategy is reduced to a list of Kraus operators on the player's factor.
A finite mixture of unitaries with weights ``w_k`` is the channel with Kraus
operators ``sqrt(w_k) U_k``, so payoffs are affine in mixture weights by
construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import linalg as la
from .channels import KrausChannel, su2, su2_angles
from .errors import DimensionError, NoInteriorEquilibriumError, PreconditionError, UnsupportedSearchError
from .measurement import POVM

UnitaryFactory = Callable[..., np.ndarray]

DEFAULT_GRID = {1: 200, 2: 60, 3: 24}
_CHUNK = 4096


# strategy spaces


@dataclass(frozen=True)
class ParametricSpace:
    """Unitaries ``factory(*x)`` for ``x`` in a box.

    ``chart``, when given, maps any SU(2) element back to box parameters; the
    search then finishes with a local ascent on the group itself, which avoids
    the coordinate singularities of the angle box.
    """

    factory: UnitaryFactory
    bounds: tuple[tuple[float, float], ...]
    name: str = "parametric"
    chart: Optional[Callable[[np.ndarray], Sequence[float]]] = None

    def __post_init__(self):
        for lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise PreconditionError("parameter boxes need finite ordered bounds")

    @property
    def n_params(self) -> int:
        return len(self.bounds)

    def contains(self, x: Sequence[float], tol: float = 1e-9) -> bool:
        return len(x) == self.n_params and all(lo - tol <= v <= hi + tol for v, (lo, hi) in zip(x, self.bounds))


def full_unitary_space() -> ParametricSpace:
    """All of SU(2) through ``su2(theta, phi, psi)``."""
    return ParametricSpace(su2, ((0.0, np.pi / 2), (-np.pi, np.pi), (-np.pi, np.pi)), "full-su2", su2_angles)


@dataclass(frozen=True)
class ChannelSpace:
    """Any CP-TP map on the player's factor; no search is offered over it."""

    dim: int
    name: str = "channel"


@dataclass(frozen=True)
class MixtureSpace:
    """Classical mixtures of a finite set of unitaries."""

    unitaries: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()
    name: str = "mixture"

    def __post_init__(self):
        if not self.unitaries:
            raise PreconditionError("mixture sets must be nonempty")
        for u in self.unitaries:
            la.require_unitary(u, what="mixture component")


StrategySpace = Union[ParametricSpace, ChannelSpace, MixtureSpace]


# strategies


@dataclass(frozen=True)
class Params:
    values: tuple[float, ...]

    def __init__(self, *values):
        if len(values) == 1 and not np.isscalar(values[0]):
            values = tuple(values[0])
        object.__setattr__(self, "values", tuple(float(v) for v in values))


@dataclass(frozen=True)
class Mixture:
    weights: tuple[float, ...]

    def __init__(self, weights):
        object.__setattr__(self, "weights", tuple(float(w) for w in weights))


Strategy = Union[Params, Mixture, KrausChannel, np.ndarray]


@dataclass(frozen=True)
class QuantumGameSpec:
    """Players, initial state, outcome POVM and payoff table.

    ``payoffs[w, j]`` is player ``j``'s payoff on outcome ``povm.labels[w]``.
    """

    player_dims: tuple[int, ...]
    initial_state: np.ndarray
    povm: POVM
    payoffs: np.ndarray
    strategy_spaces: tuple[StrategySpace, ...]
    name: str = "game"
    observables: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.player_dims)
        object.__setattr__(self, "player_dims", dims)
        total = int(np.prod(dims))
        rho = la.as_matrix(self.initial_state)
        if rho.shape != (total, total):
            raise DimensionError("initial state dimension differs from the product of player dims")
        if self.povm.dim != total:
            raise DimensionError("POVM dimension differs from the product of player dims")
        pay = np.asarray(self.payoffs, dtype=float)
        if pay.shape != (len(self.povm.labels), len(dims)):
            raise DimensionError("payoffs need one row per outcome and one column per player")
        if len(self.strategy_spaces) != len(dims):
            raise DimensionError("one strategy space per player")
        object.__setattr__(self, "initial_state", rho)
        object.__setattr__(self, "payoffs", pay)
        obs = tuple(sum(pay[w, j] * e for w, e in enumerate(self.povm.effects)) for j in range(len(dims)))
        object.__setattr__(self, "observables", obs)

    @classmethod
    def from_payoff_map(cls, player_dims, initial_state, povm: POVM, payoff_map: dict, strategy_spaces, name="game"):
        missing = [lab for lab in povm.labels if lab not in payoff_map]
        if missing:
            raise PreconditionError(f"payoffs missing for outcomes {missing}")
        table = np.array([payoff_map[lab] for lab in povm.labels], dtype=float)
        return cls(tuple(player_dims), initial_state, povm, table, tuple(strategy_spaces), name)

    @property
    def n_players(self) -> int:
        return len(self.player_dims)


@dataclass(frozen=True)
class EquilibriumReport:
    profile: tuple
    payoffs: np.ndarray
    epsilon: float
    gains: np.ndarray
    deviations: tuple
    method: str
    grid: tuple[int, ...]

    def is_epsilon_nash(self, threshold: float) -> bool:
        return self.epsilon <= threshold


# evaluation


def strategy_kraus(space: StrategySpace, s: Strategy, dim: int, tol: float = la.DEFAULT_TOL) -> list[np.ndarray]:
    """Kraus operators of one player's strategy after checking it fits the space."""
    if isinstance(s, Params):
        if not isinstance(space, ParametricSpace):
            raise PreconditionError("parameter point given for a non-parametric space")
        if not space.contains(s.values):
            raise PreconditionError(f"parameters {s.values} outside the strategy box")
        return [space.factory(*s.values)]
    if isinstance(s, Mixture):
        if not isinstance(space, MixtureSpace):
            raise PreconditionError("mixture weights given for a non-mixture space")
        w = np.asarray(s.weights)
        if w.size != len(space.unitaries) or w.min() < -1e-9 or abs(w.sum() - 1) > 1e-9:
            raise PreconditionError("mixture weights are not on the simplex")
        return [np.sqrt(max(wk, 0.0)) * u for wk, u in zip(w, space.unitaries) if wk > 0]
    if isinstance(s, KrausChannel):
        if not s.is_trace_preserving(tol):
            raise PreconditionError("strategies must be trace preserving")
        ops = list(s.operators)
    else:
        ops = [la.require_unitary(s, tol, "strategy")]
    if ops[0].shape != (dim, dim):
        raise DimensionError("strategy acts on the wrong dimension")
    if isinstance(space, MixtureSpace) and not isinstance(s, KrausChannel):
        if not any(np.allclose(ops[0], u, atol=tol) for u in space.unitaries):
            raise PreconditionError("unitary is not in the mixture set")
    return ops


def _profile_kraus(spec: QuantumGameSpec, profile: Sequence[Strategy]) -> list[list[np.ndarray]]:
    if len(profile) != spec.n_players:
        raise PreconditionError("profile needs one strategy per player")
    return [strategy_kraus(sp, s, d) for sp, s, d in zip(spec.strategy_spaces, profile, spec.player_dims)]


def _apply_local(rho: np.ndarray, dims: Sequence[int], player: int, ops: Sequence[np.ndarray]) -> np.ndarray:
    left = int(np.prod(dims[:player]))
    d = dims[player]
    right = int(np.prod(dims[player + 1:]))
    t = rho.reshape(left, d, right, left, d, right)
    out = 0
    for v in ops:
        out = out + np.einsum("xy,aycAzC,wz->axcAwC", v, t, v.conj(), optimize=True)
    n = left * d * right
    return np.asarray(out).reshape(n, n)


def final_state(spec: QuantumGameSpec, profile: Sequence[Strategy]) -> np.ndarray:
    rho = spec.initial_state
    for j, ops in enumerate(_profile_kraus(spec, profile)):
        rho = _apply_local(rho, spec.player_dims, j, ops)
    return rho


def outcome_probabilities(spec: QuantumGameSpec, profile: Sequence[Strategy]) -> np.ndarray:
    rho = final_state(spec, profile)
    return np.array([np.real(np.trace(e @ rho)) for e in spec.povm.effects])


def evaluate(spec: QuantumGameSpec, profile: Sequence[Strategy]) -> np.ndarray:
    """Expected payoff of every player."""
    rho = final_state(spec, profile)
    return np.array([np.real(np.trace(o @ rho)) for o in spec.observables])


def deviation_payoffs(spec: QuantumGameSpec, profile: Sequence[Strategy], player: int, unitaries: np.ndarray) -> np.ndarray:
    """Payoffs ``(B, N)`` when ``player`` swaps in each of ``B`` unitaries."""
    kraus = _profile_kraus(spec, profile)
    dims = spec.player_dims
    rho = spec.initial_state
    for j, ops in enumerate(kraus):
        if j != player:
            rho = _apply_local(rho, dims, j, ops)
    left = int(np.prod(dims[:player]))
    d = dims[player]
    right = int(np.prod(dims[player + 1:]))
    t = rho.reshape(left, d, right, left, d, right)
    obs = np.stack(spec.observables).reshape(len(dims), left, d, right, left, d, right)
    # tr(O U rho U^*) = sum O[A z C, a x c] U[x y] rho[a y c, A w C] conj(U[z w])
    out = np.empty((len(unitaries), len(dims)))
    for s in range(0, len(unitaries), _CHUNK):
        u = np.asarray(unitaries[s:s + _CHUNK])
        # contract rho with U and conj(U) first, then with the observables
        sig = np.einsum("bxy,aycAwC,bzw->baxcAzC", u, t, u.conj(), optimize=True)
        out[s:s + len(u)] = np.real(np.einsum("baxcAzC,kAzCaxc->bk", sig, obs, optimize=True))
    return out


# best response and certification


def _grid_axes(space: ParametricSpace, grid) -> list[np.ndarray]:
    k = space.n_params
    if grid is None:
        grid = DEFAULT_GRID.get(k, 12)
    res = [int(grid)] * k if np.isscalar(grid) else [int(g) for g in grid]
    if len(res) != k or min(res) < 1:
        raise PreconditionError("grid needs one positive resolution per parameter")
    return [np.linspace(lo, hi, r) if r > 1 else np.array([(lo + hi) / 2]) for (lo, hi), r in zip(space.bounds, res)]


@dataclass(frozen=True)
class BestResponse:
    strategy: Strategy
    payoff: float
    gain: float


def best_response(spec: QuantumGameSpec, profile: Sequence[Strategy], player: int, grid=None,
                  refine_passes: int = 1, tie_tol: float = 1e-12) -> BestResponse:
    """Best deviation for ``player`` found by grid scan plus coordinate refinement.

    The grid is the Cartesian product of ``linspace`` axes over the parameter
    box and is scanned in lexicographic order, the first point within
    ``tie_tol`` of the maximum winning.  Refinement runs bounded Brent
    searches, one coordinate at a time, inside one grid step of the winner.
    The current strategy is always a candidate, so the gain is never negative;
    gains within ``tie_tol`` are reported as zero.
    """
    if not 0 <= player < spec.n_players:
        raise PreconditionError("player index out of range")
    space = spec.strategy_spaces[player]
    current = float(evaluate(spec, profile)[player])
    profile = list(profile)

    if isinstance(space, ChannelSpace):
        raise UnsupportedSearchError("no search over unparametrized channel spaces")

    if isinstance(space, MixtureSpace):
        vals = deviation_payoffs(spec, profile, player, np.stack(space.unitaries))[:, player]
        k = int(np.flatnonzero(vals >= vals.max() - tie_tol)[0])
        if vals[k] <= current + tie_tol:
            return BestResponse(profile[player], current, 0.0)
        w = np.zeros(len(space.unitaries))
        w[k] = 1.0
        return BestResponse(Mixture(w), float(vals[k]), float(vals[k] - current))

    axes = _grid_axes(space, grid)
    points = np.array(list(itertools.product(*axes)))
    units = np.array([space.factory(*p) for p in points])
    vals = deviation_payoffs(spec, profile, player, units)[:, player]
    k = int(np.flatnonzero(vals >= vals.max() - tie_tol)[0])
    x = points[k].copy()
    best = float(vals[k])

    steps = [(ax[1] - ax[0]) if len(ax) > 1 else 0.0 for ax in axes]

    def payoff_at(y):
        return float(deviation_payoffs(spec, profile, player, space.factory(*y)[None])[0, player])

    for _ in range(refine_passes):
        improved = False
        for i, ((lo, hi), h) in enumerate(zip(space.bounds, steps)):
            if h == 0.0:
                continue
            a, b = max(lo, x[i] - h), min(hi, x[i] + h)

            def neg(t, i=i):
                y = x.copy()
                y[i] = t
                return -payoff_at(y)

            r = minimize_scalar(neg, bounds=(a, b), method="bounded", options={"xatol": 1e-10})
            if -r.fun > best + tie_tol:
                x[i] = r.x
                best = -r.fun
                improved = True
        if not improved:
            break

    if space.chart is not None and refine_passes > 0:
        x, best = _group_polish(space, payoff_at, x, best, tie_tol)

    if best <= current + tie_tol:
        return BestResponse(profile[player], current, 0.0)
    return BestResponse(Params(x), best, best - current)


def _su2_exp(t: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(t))
    if n == 0.0:
        return np.eye(2, dtype=complex)
    gen = (t[0] * la.SIGMA_X + t[1] * la.SIGMA_Y + t[2] * la.SIGMA_Z) / n
    return np.cos(n) * np.eye(2) + 1j * np.sin(n) * gen


def _group_polish(space: ParametricSpace, payoff_at, x, best, tie_tol):
    """Maximize over ``U exp(i t.sigma)`` near the current winner, then map back through the chart."""
    u0 = space.factory(*x)

    def neg(t):
        return -payoff_at(space.chart(u0 @ _su2_exp(t)))

    r = minimize(neg, np.zeros(3), method="BFGS", options={"gtol": 1e-10})
    y = np.array(space.chart(u0 @ _su2_exp(r.x)), dtype=float)
    val = payoff_at(y)
    if val > best + tie_tol and space.contains(y):
        return y, val
    return x, best


def verify_epsilon_nash(spec: QuantumGameSpec, profile: Sequence[Strategy], grid=None,
                        refine_passes: int = 1) -> EquilibriumReport:
    payoffs = evaluate(spec, profile)
    brs = [best_response(spec, profile, j, grid, refine_passes) for j in range(spec.n_players)]
    gains = np.array([b.gain for b in brs])
    res = tuple(len(_grid_axes(sp, grid)[0]) if isinstance(sp, ParametricSpace) else len(getattr(sp, "unitaries", ()))
                for sp in spec.strategy_spaces)
    return EquilibriumReport(tuple(profile), payoffs, float(gains.max()), gains,
                             tuple(b.strategy for b in brs), "grid+coordinate-refinement", res)


def nash_search(spec: QuantumGameSpec, start: Sequence[Strategy], grid=None, max_rounds: int = 20,
                tol: float = 1e-9) -> EquilibriumReport:
    """Round-robin best-response dynamics from ``start``, then a certificate of the end point."""
    profile = list(start)
    for _ in range(max_rounds):
        moved = False
        for j in range(spec.n_players):
            br = best_response(spec, profile, j, grid)
            if br.gain > tol:
                profile[j] = br.strategy
                moved = True
        if not moved:
            break
    rep = verify_epsilon_nash(spec, profile, grid)
    return EquilibriumReport(rep.profile, rep.payoffs, rep.epsilon, rep.gains, rep.deviations,
                             "best-response-dynamics", rep.grid)


def pure_equilibria(spec: QuantumGameSpec, strategies: Sequence[Sequence[np.ndarray]], eps: float = 1e-9):
    """Enumerate profiles over finite unitary sets; return those where no unilateral switch gains more than ``eps``."""
    sizes = [len(s) for s in strategies]
    table = {}
    for idx in itertools.product(*(range(n) for n in sizes)):
        table[idx] = evaluate(spec, [strategies[j][i] for j, i in enumerate(idx)])
    found = []
    for idx, pay in table.items():
        ok = True
        for j in range(len(sizes)):
            for alt in range(sizes[j]):
                other = idx[:j] + (alt,) + idx[j + 1:]
                if table[other][j] > pay[j] + eps:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(idx)
    return found, table


# classical 2x2 games and mixed unitary play


@dataclass(frozen=True)
class MixedEquilibrium:
    p: float
    q: float
    payoffs: tuple[float, float]


def mixed_equilibrium_2x2(alpha, beta, tol: float = 1e-12) -> MixedEquilibrium:
    """Fully mixed equilibrium of a bimatrix game.

    ``p`` is the row player's weight on row 0 and ``q`` the column player's
    weight on column 0; each makes the other indifferent.
    """
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError("tables must be 2x2")
    den_q = a[0, 0] - a[0, 1] - a[1, 0] + a[1, 1]
    den_p = b[0, 0] - b[1, 0] - b[0, 1] + b[1, 1]
    if abs(den_p) < tol or abs(den_q) < tol:
        raise NoInteriorEquilibriumError("indifference system is singular")
    q = (a[1, 1] - a[0, 1]) / den_q
    p = (b[1, 1] - b[1, 0]) / den_p
    if not (tol < p < 1 - tol and tol < q < 1 - tol):
        raise NoInteriorEquilibriumError(f"indifference point (p={p:.6g}, q={q:.6g}) is not interior")
    x = np.array([p, 1 - p])
    y = np.array([q, 1 - q])
    return MixedEquilibrium(float(p), float(q), (float(x @ a @ y), float(x @ b @ y)))


def sample_mixed_unitary(rho, unitaries: Sequence[np.ndarray], weights: Sequence[float]) -> np.ndarray:
    """``sum_k w_k U_k rho U_k^*`` for weights on the simplex."""
    w = np.asarray(weights, dtype=float)
    if w.size != len(unitaries) or w.size == 0 or w.min() < -1e-9 or abs(w.sum() - 1) > 1e-9:
        raise PreconditionError("invalid mixture weights")
    r = la.as_matrix(rho)
    return sum(wk * u @ r @ u.conj().T for wk, u in zip(w, unitaries))


def haar_twirl(rho, dims: Sequence[int], samples: int, seed) -> np.ndarray:
    """Monte-Carlo average of ``(U_1 (x) ... (x) U_N) rho (...)^*`` with independent Haar factors."""
    rng = np.random.default_rng(seed)
    r = la.as_matrix(rho)
    acc = np.zeros_like(r)
    for _ in range(samples):
        u = la.tensor_product(*(la.haar_random_unitary(d, rng) for d in dims))
        acc += u @ r @ u.conj().T
    return acc / samples
