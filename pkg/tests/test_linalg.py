import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_hermitian, random_matrix
from mubkit.errors import DomainError, ShapeError
from mubkit.linalg import (
    dagger,
    hermitian_eigenvalues,
    hs_norm_sq,
    kron,
    matmul,
    partial_trace,
    unitary_from_gaussian,
)
from mubkit.mub import OrthonormalBasis, verify_orthonormal
from mubkit.rng import RandomStream

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
I2 = np.eye(2)


def test_matmul_examples():
    assert np.array_equal(matmul(I2, X), X)
    assert np.array_equal(matmul(X, X), I2)
    assert np.array_equal(matmul(np.diag([2, 3]), np.diag([5, 7])), np.diag([10, 21]))


def test_matmul_shape_error():
    with pytest.raises(ShapeError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_as_matrix_rejects_nan():
    with pytest.raises(DomainError):
        matmul(np.array([[np.nan]]), np.array([[1.0]]))


def test_dagger_examples():
    assert np.array_equal(dagger(Y), Y)
    assert np.array_equal(dagger([[0, 1], [0, 0]]), [[0, 0], [1, 0]])
    sym = np.array([[1.0, 2.0], [2.0, -3.0]])
    assert np.array_equal(dagger(sym), sym)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_dagger_involution_bitwise(r, c, seed):
    a = random_matrix(np.random.default_rng(seed), r, c)
    assert np.array_equal(dagger(dagger(a)), a)


def test_kron_examples():
    assert np.array_equal(kron(I2, I2), np.eye(4))
    assert np.array_equal(kron(np.diag([1, 0]), np.diag([1, 0])), np.diag([1, 0, 0, 0]))


def test_kron_index_convention():
    a, b = np.arange(4).reshape(2, 2), np.arange(9).reshape(3, 3)
    k = kron(a, b)
    for ia, ja, ib, jb in np.ndindex(2, 2, 3, 3):
        assert k[ia * 3 + ib, ja * 3 + jb] == a[ia, ja] * b[ib, jb]


@given(st.integers(0, 2**32 - 1))
def test_kron_trace_and_associativity(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_matrix(rng, 2) for _ in range(3))
    assert np.trace(kron(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)
    assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) <= 1e-12


def _partial_trace_loops(m, dA, dB, keep):
    """Direct index-sum oracle."""
    if keep == "A":
        out = np.zeros((dA, dA), dtype=complex)
        for i, j, k in np.ndindex(dA, dA, dB):
            out[i, j] += m[i * dB + k, j * dB + k]
    else:
        out = np.zeros((dB, dB), dtype=complex)
        for i, j, k in np.ndindex(dB, dB, dA):
            out[i, j] += m[k * dB + i, k * dB + j]
    return out


@pytest.mark.parametrize("dA,dB", [(2, 2), (2, 3), (3, 2), (4, 3)])
@pytest.mark.parametrize("keep", ["A", "B"])
def test_partial_trace_matches_loops(dA, dB, keep):
    m = random_matrix(np.random.default_rng(dA * 10 + dB), dA * dB)
    assert np.allclose(partial_trace(m, dA, dB, keep), _partial_trace_loops(m, dA, dB, keep), atol=1e-13)


def test_partial_trace_examples():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(partial_trace(np.outer(phi, phi), 2, 2, "B"), I2 / 2, atol=1e-15)
    assert np.allclose(partial_trace(np.eye(4) / 4, 2, 2, "A"), I2 / 2, atol=1e-15)


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_of_product(dA, dB, seed):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, dA), random_matrix(rng, dB)
    k = kron(a, b)
    assert np.max(np.abs(partial_trace(k, dA, dB, "A") - a * np.trace(b))) <= 1e-12 * (1 + np.abs(a).max() * np.abs(b).max() * dB)
    assert np.trace(partial_trace(k, dA, dB, "B")) == pytest.approx(np.trace(k), abs=1e-11)


def test_partial_trace_errors():
    with pytest.raises(ShapeError):
        partial_trace(np.eye(5), 2, 2, "A")
    with pytest.raises(DomainError):
        partial_trace(np.eye(4), 2, 2, "C")


def test_hs_norm_sq_examples():
    assert hs_norm_sq(np.zeros((3, 3))) == 0
    assert hs_norm_sq(np.eye(5)) == 5
    assert hs_norm_sq([[1, 1j], [0, 1]]) == 3


def test_eigenvalue_examples():
    assert np.allclose(hermitian_eigenvalues(I2 / 2), [0.5, 0.5], atol=1e-15)
    assert np.allclose(hermitian_eigenvalues(X), [-1, 1], atol=1e-14)
    assert np.allclose(hermitian_eigenvalues(np.diag([0.75, 0.25])), [0.25, 0.75], atol=0)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(DomainError):
        hermitian_eigenvalues([[0, 1], [0, 0]])
    with pytest.raises(ShapeError):
        hermitian_eigenvalues(np.ones((2, 3)))


@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_eigenvalues_against_lapack(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    lam = hermitian_eigenvalues(a)
    assert np.all(np.diff(lam) >= 0)
    assert np.max(np.abs(lam - np.linalg.eigvalsh(a))) <= 1e-12 * max(1.0, np.abs(a).max()) * n
    assert abs(lam.sum() - np.trace(a).real) <= 1e-10 * n
    assert abs(np.sum(lam**2) - hs_norm_sq(a)) <= 1e-10 * n * max(1.0, hs_norm_sq(a))


@pytest.mark.parametrize("n", [16, 49, 81])
def test_eigenvalues_larger_and_degenerate(n):
    rng = np.random.default_rng(n)
    q, _ = np.linalg.qr(random_matrix(rng, n))
    spectrum = np.repeat(np.linspace(0, 1, n // 4 + 1), 4)[:n]
    a = q @ np.diag(spectrum) @ q.conj().T
    a = 0.5 * (a + a.conj().T)
    assert np.allclose(hermitian_eigenvalues(a), np.sort(spectrum), atol=1e-12)


@given(st.integers(1, 12), st.integers(0, 2**64 - 1))
def test_unitary_contract(d, seed):
    u = unitary_from_gaussian(d, RandomStream(seed))
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-12
    assert verify_orthonormal(u.T) <= 1e-12


def test_unitary_examples():
    u = unitary_from_gaussian(1, RandomStream(3))
    assert abs(abs(u[0, 0]) - 1) <= 1e-15
    OrthonormalBasis(unitary_from_gaussian(5, RandomStream(4)).T, label="haar")
    with pytest.raises(DomainError):
        unitary_from_gaussian(0, RandomStream(0))


def test_unitary_first_moment_is_haar():
    # E|U_ij|^2 = 1/d for Haar unitaries; the QR sign fix matters for E[U_11].
    d, n = 3, 4000
    rng = RandomStream(11)
    us = np.array([unitary_from_gaussian(d, rng) for _ in range(n)])
    assert np.allclose(np.mean(np.abs(us) ** 2, axis=0), 1 / d, atol=0.03)
    assert abs(np.mean(us[:, 0, 0])) < 0.05
