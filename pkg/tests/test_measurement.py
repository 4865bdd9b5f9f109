import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgames import linalg as la
from qgames import measurement as M
from qgames import states as S
from qgames.errors import DimensionError, PreconditionError, UndefinedCollapseError

seeds = st.integers(0, 2**32 - 1)


def _sums_to_identity(m):
    return np.abs(sum(m.effects) - np.eye(m.dim)).max() <= 1e-10


def test_pvm_sigma_z():
    m = M.pvm_from_observable(la.SIGMA_Z)
    assert m.labels == ("1", "-1")
    assert np.allclose(m.effects[0], np.diag([1, 0]))
    assert np.allclose(m.effects[1], np.diag([0, 1]))
    assert _sums_to_identity(m)


def test_pvm_identity_is_single_projector():
    m = M.pvm_from_observable(np.eye(3))
    assert m.labels == ("1",)
    assert np.allclose(m.effects[0], np.eye(3))


def test_pvm_merges_near_degenerate_eigenvalues():
    m = M.pvm_from_observable(np.diag([2.0, 2.0 + 1e-9, -1.0]))
    assert len(m.effects) == 2
    assert np.allclose(m.effects[0], np.diag([1, 1, 0]))


def test_pvm_spin_component_matches_qubit_basis():
    beta, phi = 1.1, -0.4
    m = M.pvm_from_observable(S.spin_component(beta, phi))
    e0, e1 = S.qubit_basis(beta, phi)
    assert np.allclose(m.effects[0], np.outer(e0, e0.conj()), atol=1e-12)
    assert np.allclose(m.effects[1], np.outer(e1, e1.conj()), atol=1e-12)


def test_pvm_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        M.pvm_from_observable(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_pvm_projectors_are_orthogonal(seed, d):
    a = la.random_hermitian(d, seed)
    m = M.pvm_from_observable(a)
    for i, p in enumerate(m.effects):
        for j, q in enumerate(m.effects):
            assert np.abs(p @ q - (p if i == j else 0)).max() <= 1e-9
    lam = [float(x) for x in m.labels]
    assert np.allclose(sum(l * p for l, p in zip(lam, m.effects)), a, atol=1e-9)
    assert _sums_to_identity(m)


def test_probabilities_qubit(rng):
    rho = la.random_density(2, rng)
    p = M.probabilities(rho, M.pvm_from_observable(la.SIGMA_Z))
    assert np.allclose(p.probabilities, [rho[0, 0].real, rho[1, 1].real])


def test_probabilities_product_state(rng):
    ra, rb = la.random_density(2, rng), la.random_density(3, rng)
    dist = M.probabilities(np.kron(ra, rb), M.computational_pvm([2, 3]))
    for i in range(2):
        for j in range(3):
            assert dist[f"{i}{j}"] == pytest.approx(ra[i, i].real * rb[j, j].real, abs=1e-12)


def test_probabilities_pure_state(rng):
    psi = la.random_pure(6, rng)
    dist = M.probabilities(S.density_from_pure(psi), M.computational_pvm([3, 2]))
    assert np.allclose(dist.probabilities, np.abs(psi) ** 2, atol=1e-12)


def test_probabilities_dimension_mismatch():
    with pytest.raises(DimensionError):
        M.probabilities(np.eye(2) / 2, M.computational_pvm([3]))


def test_probabilities_sum_to_one_on_random_pairs():
    for seed in range(100):
        r = np.random.default_rng(seed)
        d = int(r.integers(1, 7))
        m = M.pvm_from_observable(la.random_hermitian(d, r))
        p = M.probabilities(la.random_density(d, r), m)
        assert abs(p.probabilities.sum() - 1) <= 1e-10
        assert p.probabilities.min() >= 0


def test_povm_validation():
    with pytest.raises(PreconditionError):
        M.POVM.from_effects(["a", "b"], [np.diag([1, 0]), np.diag([0, 0.5])])
    with pytest.raises(PreconditionError):
        M.POVM.from_effects(["a", "b"], [np.diag([1.5, 0]), np.diag([-0.5, 1])])
    trine = [2 / 3 * np.outer(v, v) for v in
             ([1, 0], [-0.5, np.sqrt(3) / 2], [-0.5, -np.sqrt(3) / 2])]
    m = M.POVM.from_effects(["0", "1", "2"], trine)
    assert _sums_to_identity(m)
    assert not m.is_projective()


def test_collapse_examples():
    p0 = np.diag([1.0, 0.0])
    assert np.allclose(M.collapse(p0, p0), p0)
    assert np.allclose(M.collapse(np.eye(2) / 2, np.diag([0.0, 1.0])), np.diag([0, 1]))


def test_collapse_bell_state_on_first_qubit():
    bell = S.density_from_pure(S.bell_basis()["phi+"])
    for beta in np.linspace(0, np.pi, 7):
        e0, _ = S.qubit_basis(beta, 0)
        proj = np.kron(np.outer(e0, e0.conj()), np.eye(2))
        post = M.collapse(bell, proj)
        expected = S.density_from_pure(np.kron(e0, e0.conj()))
        assert np.abs(post - expected).max() <= 1e-12


def test_collapse_keeps_pure_states_pure(rng):
    rho = S.density_from_pure(la.random_pure(4, rng))
    post = M.collapse(rho, M.computational_pvm([2, 2]).effects[1])
    assert S.purity(post) == pytest.approx(1)


def test_collapse_below_threshold_is_an_error():
    with pytest.raises(UndefinedCollapseError):
        M.collapse(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


def test_pinch_zeroes_off_diagonal(rng):
    rho = la.random_density(2, rng)
    out = M.pinch(rho, M.computational_pvm([2]))
    assert np.allclose(out, np.diag(np.diag(rho)))


def test_pinch_needs_projectors():
    trine = [2 / 3 * np.outer(v, v) for v in
             ([1, 0], [-0.5, np.sqrt(3) / 2], [-0.5, -np.sqrt(3) / 2])]
    with pytest.raises(PreconditionError):
        M.pinch(np.eye(2) / 2, M.POVM.from_effects("abc", trine))


def _block_pvm():
    return M.pvm_from_observable(np.diag([1.0, 1.0, -1.0, 2.0]))


def _commutant_element(r):
    a = r.standard_normal((2, 2)) + 1j * r.standard_normal((2, 2))
    x = np.zeros((4, 4), dtype=complex)
    x[:2, :2] = a
    x[2, 2], x[3, 3] = r.standard_normal(2) + 1j * r.standard_normal(2)
    return x


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_pinch_properties(seed):
    r = np.random.default_rng(seed)
    m = _block_pvm()
    b = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    e = M.pinch(b, m)
    assert np.allclose(M.pinch(b.conj().T, m), e.conj().T, atol=1e-12)
    assert np.allclose(M.pinch(e, m), e, atol=1e-12)
    rho = la.random_density(4, r)
    assert np.linalg.eigvalsh(M.pinch(rho, m)).min() >= -1e-9
    assert np.trace(M.pinch(rho, m)).real == pytest.approx(1, abs=1e-12)
    x1, x2 = _commutant_element(r), _commutant_element(r)
    assert np.allclose(M.pinch(x1, m), x1, atol=1e-12)
    assert np.allclose(M.pinch(x1 @ b @ x2, m), x1 @ e @ x2, atol=1e-10)


def test_sample_point_mass_and_determinism():
    dist = M.OutcomeDistribution(("H", "T"), np.array([1.0, 0.0]))
    assert all(M.sample(dist, s) == "H" for s in range(20))
    fair = M.OutcomeDistribution(("H", "T"), np.array([0.5, 0.5]))
    assert [M.sample(fair, 42) for _ in range(5)] == [M.sample(fair, 42)] * 5


def test_sample_law_of_large_numbers():
    dist = M.OutcomeDistribution(("a", "b"), np.array([0.25, 0.75]))
    rng = np.random.default_rng(3)
    draws = [M.sample(dist, rng) for _ in range(100_000)]
    assert draws.count("a") / len(draws) == pytest.approx(0.25, abs=0.01)


def test_epr_correlation():
    bell = S.density_from_pure(S.bell_basis()["phi+"])
    for beta in np.linspace(0, np.pi, 9):
        e0, e1 = S.qubit_basis(beta, 0.0)
        filt = [np.outer(e, e.conj()) for e in (e0, e1)]
        m = M.POVM.from_effects(["++", "+-", "-+", "--"], [np.kron(a, b) for a in filt for b in filt])
        p = M.probabilities(bell, m)
        assert p["++"] + p["--"] == pytest.approx(1, abs=1e-12)


def test_local_pvm_lifts_projectors():
    m = M.local_pvm([np.diag([1, 0]), np.diag([0, 1])], 1, [3, 2, 2], ["0", "1"])
    assert m.dim == 12
    assert _sums_to_identity(m)
    assert np.allclose(m.effects[0], np.kron(np.kron(np.eye(3), np.diag([1, 0])), np.eye(2)))


def test_eigenvalue_labels_use_twelve_digits():
    m = M.pvm_from_observable(np.diag([np.pi, 1 / 3]))
    assert m.labels == ("3.14159265359", "0.333333333333")
