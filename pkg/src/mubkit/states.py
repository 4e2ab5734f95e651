"""Single-system and bipartite density matrices, named and random."""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError, IntegrityError, ShapeError
from .linalg import as_matrix, hermitian_eigenvalues, kron, partial_trace
from .rng import RandomStream

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

__all__ = [
    "DensityMatrix",
    "BipartiteState",
    "RandomStream",
    "random_pure",
    "random_density",
    "random_bipartite",
    "maximally_entangled",
    "product_state",
    "classical_correlated",
    "marginals",
    "save_state",
    "load_state",
]


def _hermitize(m):
    return 0.5 * (m + m.conj().T)


def invariant_violations(mat, full=True):
    """Names and values of the density-matrix invariants ``mat`` breaks.

    The cheap checks (Hermiticity, unit trace) always run; the eigenvalue
    check for positivity only when ``full`` is set.
    """
    problems = []
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    if herm > HERMITIAN_TOL:
        problems.append(f"hermitian: max |rho - rho^dagger| = {herm:.3e} > {HERMITIAN_TOL:.0e}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > TRACE_TOL:
        problems.append(f"trace: tr(rho) = {tr.real:.12g}{tr.imag:+.3g}j, expected 1 within {TRACE_TOL:.0e}")
    if full and not problems:
        lam_min = hermitian_eigenvalues(mat, tol=HERMITIAN_TOL)[0]
        if lam_min < -PSD_TOL:
            problems.append(f"positive: min eigenvalue {lam_min:.3e} < -{PSD_TOL:.0e}")
    return problems


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one Hermitian operator on a ``d``-dimensional space.

    Construction checks shape, finiteness, Hermiticity and trace. Positivity
    needs an eigen-decomposition and is checked by :meth:`validate` or by the
    file loader; the generators in this module are positive by construction.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.mat))
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)
        problems = invariant_violations(m, full=False)
        if problems:
            raise IntegrityError("; ".join(problems))

    @property
    def side(self):
        return self.mat.shape[0]

    @property
    def d(self):
        return self.side

    def purity(self):
        return float(np.real(np.vdot(self.mat, self.mat)))

    def validate(self):
        """Run every invariant check, including positivity; raise on failure."""
        problems = invariant_violations(self.mat, full=True)
        if problems:
            raise IntegrityError("; ".join(problems))
        return self


@dataclass(frozen=True, eq=False)
class BipartiteState(DensityMatrix):
    """Density matrix on ``C^d (x) C^d``, composite index ``i_A * d + i_B``."""

    def __post_init__(self):
        super().__post_init__()
        d = math.isqrt(self.side)
        if d * d != self.side:
            raise ShapeError(f"bipartite side {self.side} is not a perfect square")

    @property
    def d(self):
        return math.isqrt(self.side)


def _check_dim(d, minimum=2):
    if not isinstance(d, (int, np.integer)) or d < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {d}")


def _induced(side, rank, rng):
    if not isinstance(rank, (int, np.integer)) or not 1 <= rank <= side:
        raise DomainError(f"rank must lie in [1, {side}], got {rank}")
    g = rng.complex_normal((side, rank))
    m = g @ g.conj().T
    return _hermitize(m / np.trace(m).real)


def random_pure(d, rng):
    """Projector onto a normalised vector of i.i.d. complex Gaussians."""
    _check_dim(d)
    psi = rng.complex_normal(d)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(_hermitize(np.outer(psi, psi.conj())))


def random_density(d, rank, rng):
    """``G G^dagger / tr(G G^dagger)`` with ``G`` a ``d x rank`` Ginibre matrix."""
    _check_dim(d)
    return DensityMatrix(_induced(d, rank, rng))


def random_bipartite(d, rank, rng):
    """As :func:`random_density` on the ``d**2``-dimensional composite space."""
    _check_dim(d)
    return BipartiteState(_induced(d * d, rank, rng))


def maximally_entangled(d):
    _check_dim(d)
    phi = np.zeros(d * d, dtype=np.complex128)
    phi[[i * d + i for i in range(d)]] = 1.0 / math.sqrt(d)
    return BipartiteState(np.outer(phi, phi))


def product_state(a, b):
    if a.side != b.side:
        raise ShapeError(f"factor dimensions differ: {a.side} vs {b.side}")
    return BipartiteState(kron(a.mat, b.mat))


def classical_correlated(d):
    """``(1/d) sum_i |ii><ii|``."""
    _check_dim(d)
    diag = np.zeros(d * d)
    diag[[i * d + i for i in range(d)]] = 1.0 / d
    return BipartiteState(np.diag(diag))


def marginals(s):
    """Reduced states ``(rho_A, rho_B)``."""
    d = s.d
    rho_a = _hermitize(partial_trace(s.mat, d, d, keep="A"))
    rho_b = _hermitize(partial_trace(s.mat, d, d, keep="B"))
    return DensityMatrix(rho_a), DensityMatrix(rho_b)


def state_to_dict(s):
    bipartite = isinstance(s, BipartiteState)
    return {
        "d": s.d,
        "bipartite": bipartite,
        "rho": [[[float(z.real), float(z.imag)] for z in row] for row in s.mat],
    }


def save_state(s, path):
    Path(path).write_text(json.dumps(state_to_dict(s)) + "\n", encoding="utf-8")


def state_from_dict(data, source="<dict>"):
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise FormatError(f"{source}: field 'd' must be a positive integer, got {d!r}")
    bipartite = data.get("bipartite")
    if not isinstance(bipartite, bool):
        raise FormatError(f"{source}: field 'bipartite' must be true or false")
    side = d * d if bipartite else d
    rows = data.get("rho")
    if not isinstance(rows, list) or len(rows) != side:
        raise FormatError(f"{source}: field 'rho' must have {side} rows for d={d}, bipartite={bipartite}")
    mat = np.empty((side, side), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise FormatError(f"{source}: rho[{i}] must have {side} entries")
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise FormatError(f"{source}: rho[{i}][{j}] must be [re, im], got {z!r}")
            mat[i, j] = complex(z[0], z[1])
    if not np.all(np.isfinite(mat)):
        raise IntegrityError(f"{source}: finite: rho has non-finite entries")
    problems = invariant_violations(mat, full=True)
    if problems:
        raise IntegrityError(f"{source}: " + "; ".join(problems))
    return BipartiteState(mat) if bipartite else DensityMatrix(mat)


def load_state(path):
    """Load a state file and enforce every density-matrix invariant."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return state_from_dict(data, source=str(path))
