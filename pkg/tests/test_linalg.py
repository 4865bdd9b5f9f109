import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgames import linalg as la
from qgames.errors import PreconditionError

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)


def test_tensor_basis_product():
    e0 = np.array([1, 0], dtype=complex)
    assert np.array_equal(la.tensor_product(e0, e0), [1, 0, 0, 0])


def test_tensor_flips_both_qubits():
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    out = la.tensor_product(la.SIGMA_X, la.SIGMA_X) @ ket00
    assert np.allclose(out, [0, 0, 0, 1])


def test_tensor_left_factor_is_most_significant():
    a = np.arange(4).reshape(2, 2)
    b = np.arange(9).reshape(3, 3) + 10
    k = la.tensor_product(a, b)
    for i in range(2):
        for j in range(2):
            for r in range(3):
                for c in range(3):
                    assert k[i * 3 + r, j * 3 + c] == a[i, j] * b[r, c]


def test_tensor_mixed_product(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    lhs = la.tensor_product(np.eye(2), a) @ la.tensor_product(b, np.eye(2))
    # entry-by-entry oracle for B (x) A
    oracle = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    oracle[2 * i + k, 2 * j + l] = b[i, j] * a[k, l]
    assert np.allclose(lhs, oracle, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_tensor_bilinear_and_associative(seed):
    r = np.random.default_rng(seed)
    a, a2, b, c = (r.standard_normal((2, 3)) + 1j * r.standard_normal((2, 3)) for _ in range(4))
    s = complex(r.standard_normal(), r.standard_normal())
    assert np.allclose(la.tensor_product(a + s * a2, b),
                       la.tensor_product(a, b) + s * la.tensor_product(a2, b), atol=1e-12)
    assert np.allclose(la.tensor_product(la.tensor_product(a, b), c),
                       la.tensor_product(a, la.tensor_product(b, c)), atol=1e-12)
    assert np.allclose(la.tensor_product(a, b, c), la.tensor_product(a, la.tensor_product(b, c)), atol=1e-12)


def test_trace_norm_examples():
    assert la.trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    assert la.trace_norm(la.random_density(4, 3)) == pytest.approx(1.0, abs=1e-12)


def test_trace_norm_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        la.trace_norm(np.array([[0, 1], [0, 0]]))


def test_operator_norm_examples():
    assert la.operator_norm(np.eye(5)) == pytest.approx(1.0)
    assert la.operator_norm(np.diag([1.0, -2.0])) == pytest.approx(2.0)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_norm_duality_maximizers(seed, d):
    a = la.random_hermitian(d, seed)
    b = la.trace_norm_maximizer(a)
    assert la.operator_norm(b) == pytest.approx(1.0, abs=1e-9)
    assert abs(np.trace(a @ b)) == pytest.approx(la.trace_norm(a), abs=1e-9)
    p = la.operator_norm_maximizer(a)
    assert la.trace_norm(p) == pytest.approx(1.0, abs=1e-9)
    assert abs(np.trace(a @ p)) == pytest.approx(la.operator_norm(a), abs=1e-9)


def test_operator_norm_dominates_sampled_trace_norm_one(rng):
    a = la.random_hermitian(5, rng)
    best = max(abs(np.trace(a @ la.random_density(5, rng, rank=1))) for _ in range(300))
    assert best <= la.operator_norm(a) + 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_norm_ordering_homogeneity_triangle(seed, d):
    r = np.random.default_rng(seed)
    a, b = la.random_hermitian(d, r), la.random_hermitian(d, r)
    s = float(r.standard_normal())
    assert la.trace_norm(a) >= la.operator_norm(a) - 1e-12 >= -1e-12
    assert la.trace_norm(s * a) == pytest.approx(abs(s) * la.trace_norm(a), rel=1e-9, abs=1e-12)
    assert la.operator_norm(s * a) == pytest.approx(abs(s) * la.operator_norm(a), rel=1e-9, abs=1e-12)
    assert la.trace_norm(a + b) <= la.trace_norm(a) + la.trace_norm(b) + 1e-9
    assert la.operator_norm(a + b) <= la.operator_norm(a) + la.operator_norm(b) + 1e-9


def test_hermitian_eig_paulis():
    z = la.hermitian_eig(la.SIGMA_Z)
    assert np.allclose(z.eigenvalues, [1, -1])
    assert np.allclose(z.eigenvectors, np.eye(2))
    x = la.hermitian_eig(la.SIGMA_X)
    assert np.allclose(x.eigenvalues, [1, -1])
    assert np.allclose(x.eigenvectors[:, 0], np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(x.eigenvectors[:, 1], np.array([1, -1]) / np.sqrt(2))


def test_hermitian_eig_trace_and_order(rng):
    a = la.random_hermitian(8, rng)
    dec = la.hermitian_eig(a)
    assert np.sum(dec.eigenvalues) == pytest.approx(np.trace(a).real, abs=1e-10)
    assert np.all(np.diff(dec.eigenvalues) <= 0)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        la.hermitian_eig(np.array([[1, 2], [0, 1]]))


@pytest.mark.parametrize("d", [1, 2, 7, 16, 64])
def test_eig_reconstruction_and_orthonormality(d):
    a = la.random_hermitian(d, d)
    dec = la.hermitian_eig(a)
    assert np.abs(dec.reconstruct() - a).max() <= 1e-9
    v = dec.eigenvectors
    assert np.abs(v.conj().T @ v - np.eye(d)).max() <= 1e-9


def test_eigenvector_phase_is_normalized(rng):
    dec = la.hermitian_eig(la.random_hermitian(5, rng))
    for j in range(5):
        col = dec.eigenvectors[:, j]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(first.imag) < 1e-12 and first.real > 0


def test_svd_examples():
    _, s, _ = la.svd(np.diag([3.0, 4.0]))
    assert np.allclose(s, [4, 3])
    u = np.array([1, 2j, 0])
    v = np.array([1, -1])
    _, s, _ = la.svd(np.outer(u, v.conj()))
    assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v))
    assert np.allclose(s[1:], 0, atol=1e-12)


def test_svd_singulars_match_gram_eigenvalues(rng):
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    _, s, _ = la.svd(a)
    w = la.hermitian_eig(a.conj().T @ a).eigenvalues
    assert np.allclose(s ** 2, w[:2], atol=1e-10)
    assert abs(w[2]) < 1e-10


@pytest.mark.parametrize("shape", [(2, 2), (3, 5), (8, 2), (64, 64)])
def test_svd_transpose_convention(shape):
    r = np.random.default_rng(sum(shape))
    a = r.standard_normal(shape) + 1j * r.standard_normal(shape)
    u, s, v = la.svd(a)
    assert la.is_unitary(u) and la.is_unitary(v)
    assert np.abs(la.svd_reconstruct(u, s, v) - a).max() <= 1e-9
    d = np.zeros(shape)
    d[: len(s), : len(s)] = np.diag(s)
    assert np.allclose(u @ d @ v.T, a, atol=1e-9)


def test_haar_su2_is_special_unitary():
    for seed in range(50):
        u = la.haar_random_su2(seed)
        assert np.abs(u @ u.conj().T - np.eye(2)).max() <= 1e-12
        assert abs(np.linalg.det(u) - 1) <= 1e-12


def test_haar_su2_deterministic_per_seed():
    assert np.array_equal(la.haar_random_su2(11), la.haar_random_su2(11))
    assert not np.array_equal(la.haar_random_su2(11), la.haar_random_su2(12))


def test_haar_su2_moment():
    rng = np.random.default_rng(5)
    u0 = np.array([la.quaternion_from_su2(la.haar_random_su2(rng))[0] for _ in range(10_000)])
    assert np.mean(u0 ** 2) == pytest.approx(0.25, abs=0.02)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_trace_is_cyclic(seed, d):
    r = np.random.default_rng(seed)
    a = r.standard_normal((d, d)) + 1j * r.standard_normal((d, d))
    b = r.standard_normal((d, d)) + 1j * r.standard_normal((d, d))
    assert abs(np.trace(a @ b) - np.trace(b @ a)) <= 1e-10


def test_matrix_validation():
    with pytest.raises(PreconditionError):
        la.as_matrix([[1, np.nan], [0, 1]])
    assert not la.is_unitary(np.diag([1, 2]))
    assert la.is_projector(np.diag([1, 0]))


def test_quaternion_round_trip(rng):
    u = la.haar_random_su2(rng)
    assert np.allclose(la.su2_from_quaternion(la.quaternion_from_su2(u)), u, atol=1e-12)
