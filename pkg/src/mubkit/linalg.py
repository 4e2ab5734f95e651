"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite
indices follow a single convention everywhere in the package: the row of
``|i_A> (x) |i_B>`` is ``i_A * d_B + i_B``, which is what ``numpy.kron`` and a
C-order reshape to ``(d_A, d_B, d_A, d_B)`` both produce.
"""

import numpy as np

from .errors import ConvergenceError, DomainError, ShapeError
from .rng import RandomStream

__all__ = [
    "as_matrix",
    "matmul",
    "dagger",
    "kron",
    "partial_trace",
    "hs_norm_sq",
    "hermitian_eigenvalues",
    "unitary_from_gaussian",
]

JACOBI_REL_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(a):
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _square(a):
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a):
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dA, dB, keep):
    """Trace out one factor of a ``dA*dB`` square matrix.

    Parameters
    ----------
    m : array_like
        Square matrix on the composite space.
    dA, dB : int
        Local dimensions.
    keep : {"A", "B"}
        The factor that survives.
    """
    m = _square(m)
    if m.shape[0] != dA * dB:
        raise ShapeError(f"side {m.shape[0]} does not equal dA*dB = {dA * dB}")
    t = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


def hs_norm_sq(a):
    """Squared Hilbert-Schmidt norm, ``tr(a^dagger a)``."""
    m = as_matrix(a)
    return float(np.sum(m.real**2 + m.imag**2))


def _round_robin(n):
    """Disjoint index pairs covering every (p, q) once per sweep.

    Circle-method tournament schedule; for odd ``n`` a phantom index is
    added and its pairs dropped.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return np.sqrt(np.sum(off.real**2 + off.imag**2))


def hermitian_eigenvalues(a, tol=1e-12):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in a round-robin order
    that groups disjoint pairs so they can be rotated together. Iteration
    stops when the off-diagonal Frobenius norm falls to ``1e-14`` times the
    norm of the matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian to within ``tol`` entrywise.
    tol : float
        Largest tolerated ``|a - a^dagger|`` entry.

    Returns
    -------
    numpy.ndarray
        Real eigenvalues in ascending order.
    """
    a = _square(a)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > tol:
        raise DomainError(f"matrix is not Hermitian: max |a - a^dagger| = {dev:.3e} > {tol:.1e}")
    A = 0.5 * (a + a.conj().T)
    n = A.shape[0]
    norm = np.sqrt(hs_norm_sq(A))
    if n == 1 or norm == 0.0:
        return np.sort(np.diag(A).real)
    threshold = JACOBI_REL_THRESHOLD * norm
    rounds = _round_robin(n)
    eye = np.eye(n, dtype=np.complex128)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(A) <= threshold:
            break
        for p, q in rounds:
            apq = A[p, q]
            r = np.abs(apq)
            live = r > 0.0
            if not live.any():
                continue
            p, q, apq, r = p[live], q[live], apq[live], r[live]
            phase = apq / r
            tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            J = eye.copy()
            J[p, p] = c
            J[q, q] = c
            J[p, q] = s * phase
            J[q, p] = -s * phase.conj()
            A = J.conj().T @ A @ J
            A[p, q] = 0.0
            A[q, p] = 0.0
    else:
        if _off_norm(A) > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return np.sort(np.diag(A).real)


def unitary_from_gaussian(d, rng: RandomStream):
    """Haar-random unitary from the QR factorisation of a complex Ginibre matrix.

    The columns of ``Q`` are rephased so that ``R`` has a positive real
    diagonal; without this the distribution is not Haar.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    z = rng.complex_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))
