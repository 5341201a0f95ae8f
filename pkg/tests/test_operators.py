import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SX, SY, SZ, rand_herm
from rhoengine import (
    IndexOutOfRange,
    NonFinite,
    NotHermitian,
    DimensionMismatch,
    c_operator,
    hermitian_from_matrix,
    jacobi_eigh,
    spectral_decompose,
    spectral_projector,
    spin_operators,
    unitary_exp,
)


def test_pauli_x_accepted():
    A = hermitian_from_matrix(SX)
    assert np.array_equal(A.matrix, SX)
    assert A.residual == 0.0


def test_upper_triangular_rejected():
    with pytest.raises(NotHermitian):
        hermitian_from_matrix([[0, 1j], [0, 0]])


@pytest.mark.parametrize("bad", [np.nan, np.inf])
def test_nonfinite_rejected(bad):
    with pytest.raises(NonFinite):
        hermitian_from_matrix([[0, bad], [bad, 0]])


def test_small_skew_is_symmetrized_and_reported(rng):
    A = rand_herm(4, rng).matrix
    K = rng.standard_normal((4, 4))
    K = 1e-13 * (K - K.T) / np.abs(K - K.T).sum(axis=1).max()
    H = hermitian_from_matrix(A + K)
    # residual is computed directly from the removed anti-Hermitian part
    expected = np.abs(K).sum(axis=1).max()
    assert H.residual == pytest.approx(expected, rel=1e-6)
    assert np.array_equal(H.matrix, H.matrix.conj().T)


def test_stored_matrix_is_readonly():
    A = hermitian_from_matrix(SX)
    with pytest.raises(ValueError):
        A.matrix[0, 0] = 1.0


def test_pauli_z_spectrum():
    D = spectral_decompose(hermitian_from_matrix(SZ))
    assert np.allclose(D.eigenvalues, [-1, 1])
    assert [g.degeneracy for g in D.groups] == [1, 1]


def test_degenerate_grouping():
    D = spectral_decompose(hermitian_from_matrix(np.diag([2.0, 1.0, 1.0])))
    assert [(g.value, g.degeneracy) for g in D.groups] == [(1.0, 2), (2.0, 1)]


def test_pauli_x_eigenvectors():
    D = spectral_decompose(hermitian_from_matrix(SX))
    s = 1 / np.sqrt(2)
    # phase convention: largest component real positive; ties resolve to the first
    assert np.allclose(np.abs(D.eigenvectors[:, 0]), [s, s])
    assert abs(np.vdot(D.eigenvectors[:, 0], [s, -s])) == pytest.approx(1.0)
    assert abs(np.vdot(D.eigenvectors[:, 1], [s, s])) == pytest.approx(1.0)


def test_transitive_chaining():
    vals = np.array([0.0, 0.6e-8, 1.2e-8, 1.0])
    D = spectral_decompose(hermitian_from_matrix(np.diag(vals)))
    assert [g.degeneracy for g in D.groups] == [3, 1]


@pytest.mark.parametrize("dim", [2, 3, 5, 8, 17, 33, 64])
def test_jacobi_matches_lapack(dim, rng):
    A = rand_herm(dim, rng)
    D = spectral_decompose(A, method="jacobi")
    ref = np.linalg.eigvalsh(A.matrix)
    assert np.allclose(D.eigenvalues, ref, atol=1e-11 * max(1, np.abs(ref).max()))
    V = D.eigenvectors
    assert np.linalg.norm(V.conj().T @ V - np.eye(dim)) <= 1e-10
    assert np.linalg.norm(D.reconstruct() - A.matrix) <= 1e-9 * np.linalg.norm(A.matrix)


def test_jacobi_real_input_and_sweeps(rng):
    M = rng.standard_normal((10, 10))
    w, V, sweeps = jacobi_eigh(M + M.T)
    assert sweeps <= 15
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(M + M.T))


def test_phase_convention_reproducible(rng):
    A = rand_herm(6, rng)
    V1 = spectral_decompose(A, method="jacobi").eigenvectors
    V2 = spectral_decompose(A, method="lapack").eigenvectors
    assert np.allclose(V1, V2, atol=1e-9)
    idx = np.argmax(np.abs(V1), axis=0)
    lead = V1[idx, np.arange(6)]
    assert np.allclose(lead.imag, 0) and np.all(lead.real > 0)


def test_projectors_diag():
    D = spectral_decompose(hermitian_from_matrix(np.diag([1.0, 1.0, 2.0])))
    assert np.allclose(spectral_projector(D, 0).matrix, np.diag([1, 1, 0]))


def test_projector_pauli_x_plus():
    D = spectral_decompose(hermitian_from_matrix(SX))
    P = spectral_projector(D, D.group_of(1.0)).matrix
    assert np.allclose(P, 0.5 * np.ones((2, 2)))


def test_projector_index_out_of_range():
    D = spectral_decompose(hermitian_from_matrix(SX))
    with pytest.raises(IndexOutOfRange):
        spectral_projector(D, 2)


@pytest.mark.parametrize("dim", [2, 4, 7])
def test_projectors_complete_orthogonal_idempotent(dim, rng):
    # degenerate spectrum via a rotated diagonal
    Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    vals = np.round(rng.uniform(-2, 2, dim))
    A = hermitian_from_matrix((Q * vals) @ Q.conj().T)
    D = spectral_decompose(A)
    Ps = [spectral_projector(D, k).matrix for k in range(len(D.groups))]
    assert np.linalg.norm(sum(Ps) - np.eye(dim)) <= 1e-10
    for i, P in enumerate(Ps):
        for j, R in enumerate(Ps):
            target = P if i == j else np.zeros_like(P)
            assert np.linalg.norm(P @ R - target) <= 1e-10


def test_c_operator_commuting_zero():
    A = hermitian_from_matrix(np.diag([1.0, 2.0]))
    B = hermitian_from_matrix(np.diag([3.0, -1.0]))
    assert np.allclose(c_operator(A, B).matrix, 0)


def test_c_operator_paulis(paulis):
    sx, sy, sz = paulis
    assert np.allclose(c_operator(sx, sy).matrix, 2 * SZ)


def test_c_operator_spin_half():
    Jx, Jy, Jz = spin_operators(1)
    assert np.allclose(c_operator(Jx, Jy).matrix, Jz.matrix, atol=1e-15)


def test_c_operator_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        c_operator(rand_herm(2, rng), rand_herm(3, rng))


@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_c_operator_hermitian_property(dim, seed):
    r = np.random.default_rng(seed)
    C = c_operator(rand_herm(dim, r), rand_herm(dim, r)).matrix
    assert np.allclose(C, C.conj().T, atol=1e-12)


def test_unitary_exp_zero_time(rng):
    U = unitary_exp(rand_herm(5, rng), 0.0)
    assert np.array_equal(U.matrix, np.eye(5))


def test_unitary_exp_sigma_z_pi():
    U = unitary_exp(hermitian_from_matrix(SZ), np.pi)
    assert np.allclose(U.matrix, -np.eye(2), atol=1e-15)


def test_unitary_exp_unitarity_and_group(rng):
    H = rand_herm(6, rng)
    U = unitary_exp(H, 0.8, hbar=1.3).matrix
    assert np.linalg.norm(U.conj().T @ U - np.eye(6)) <= 1e-10
    Us = unitary_exp(H, 0.5, 1.3).matrix
    Ut = unitary_exp(H, 0.3, 1.3).matrix
    assert np.linalg.norm(Us @ Ut - U) <= 1e-9


def test_unitary_exp_matches_scipy(rng):
    from scipy.linalg import expm

    H = rand_herm(5, rng)
    assert np.allclose(unitary_exp(H, 1.7, 0.5).matrix, expm(-1j * 1.7 / 0.5 * H.matrix), atol=1e-12)
