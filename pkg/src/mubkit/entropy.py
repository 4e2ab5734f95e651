"""Linear-entropy and mutual-information functionals on bipartite states.

For a local measurement of subsystem A in a basis ``{|i>}`` the
post-measurement state is ``sum_i |i><i| (x) B_i`` with blocks
``B_i = <i|rho_AB|i>``. The dense functions build that state explicitly; the
``post_*`` helpers compute the same numbers directly from the blocks, which
is what the ensemble sweeps use.
"""

import math

import numpy as np

from .errors import DomainError, ShapeError
from .linalg import hermitian_eigenvalues, hs_norm_sq, kron
from .mub import UNBIASED_TOL, verify_unbiased
from .states import BipartiteState, marginals

EIGEN_FLOOR = 1e-12
MARGINAL_TOL = 1e-10
SELF_CHECK_TOL = 1e-10

KINDS = ("linear", "linear-conditional", "linear-mutual-info", "von-neumann", "vn-conditional")


class EntropyValue(float):
    """A float tagged with the functional that produced it."""

    def __new__(cls, value, kind):
        if kind not in KINDS:
            raise ValueError(f"unknown entropy kind {kind!r}")
        obj = super().__new__(cls, value)
        obj.kind = kind
        return obj

    def __repr__(self):
        return f"EntropyValue({float(self)!r}, kind={self.kind!r})"


def linear_entropy(rho):
    """``side * (1 - tr rho^2)`` where ``side`` is the matrix dimension."""
    return EntropyValue(rho.side * (1.0 - rho.purity()), "linear")


def _check_basis(s, basis):
    if basis.d != s.d:
        raise ShapeError(f"basis dimension {basis.d} does not match local dimension {s.d}")


def measurement_blocks(s, basis):
    """Array ``B[i] = <i|rho_AB|i>`` of shape ``(d, d, d)``."""
    _check_basis(s, basis)
    d = s.d
    v = basis.vectors
    r = s.mat.reshape(d, d, d, d)
    return np.einsum("ia,abce,ic->ibe", v.conj(), r, v)


def measure_A(s, basis):
    """Post-measurement state ``sum_i |i><i| (x) <i|rho_AB|i>``."""
    blocks = measurement_blocks(s, basis)
    mat = sum(kron(proj, blk) for proj, blk in zip(basis.projectors(), blocks))
    return BipartiteState(0.5 * (mat + mat.conj().T))


def post_purity(s, basis):
    """``tr(rho_thetaB^2)`` as the sum of squared block norms."""
    return sum(hs_norm_sq(blk) for blk in measurement_blocks(s, basis))


def post_mutual_information(s, basis):
    """Linear mutual information of the post-measurement state, from its blocks.

    With ``p_i = tr B_i`` and ``rho_B = sum_i B_i`` this is
    ``sum_i tr B_i^2 - 2 sum_i p_i tr(B_i rho_B) + (sum_i p_i^2) tr rho_B^2``.
    """
    return block_stats(measurement_blocks(s, basis))[1]


def block_stats(blocks):
    """``(tr rho_thetaB^2, I_L(rho_thetaB))`` from measurement blocks."""
    probs = np.einsum("ibb->i", blocks).real
    rho_b = blocks.sum(axis=0)
    purity_post = float(np.sum(blocks.real**2 + blocks.imag**2))
    cross = float(np.einsum("i,ibc,cb->", probs, blocks, rho_b).real)
    mi = purity_post - 2.0 * cross + float(np.sum(probs**2)) * hs_norm_sq(rho_b)
    return purity_post, mi


def cond_linear_entropy_post(s_post, rho_b):
    """Conditional linear entropy of a post-measurement state given B.

    ``d tr rho_B^2 - d^2 tr rho_thetaB^2 + d^2 - d``, cross-checked against
    the difference of linear entropies.

    Raises
    ------
    DomainError
        If ``rho_b`` is not the B-marginal of ``s_post``.
    """
    d = s_post.d
    if rho_b.side != d:
        raise ShapeError(f"rho_B has side {rho_b.side}, expected {d}")
    actual_b = marginals(s_post)[1]
    gap = float(np.max(np.abs(actual_b.mat - rho_b.mat)))
    if gap > MARGINAL_TOL:
        raise DomainError(f"rho_B is not the B-marginal of the state (max deviation {gap:.3e})")
    value = d * rho_b.purity() - d * d * s_post.purity() + (d * d - d)
    definitional = linear_entropy(s_post) - linear_entropy(rho_b)
    if abs(value - definitional) > SELF_CHECK_TOL:
        raise ArithmeticError(f"closed forms disagree: {value!r} vs {definitional!r}")
    return EntropyValue(value, "linear-conditional")


def _cond_linear(d, purity_joint, purity_b):
    return d * purity_b - d * d * purity_joint + (d * d - d)


def cond_linear_entropy_AB(s):
    """``S_L(rho_AB) - S_L(rho_B)``; negative for sufficiently entangled states."""
    rho_b = marginals(s)[1]
    return EntropyValue(_cond_linear(s.d, s.purity(), rho_b.purity()), "linear-conditional")


def linear_mutual_information(s):
    """``tr((rho_AB - rho_A (x) rho_B)^2)``."""
    rho_a, rho_b = marginals(s)
    return EntropyValue(hs_norm_sq(s.mat - kron(rho_a.mat, rho_b.mat)), "linear-mutual-info")


def _shannon_bits(eigs):
    lam = np.asarray(eigs)
    lam = lam[lam > EIGEN_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho):
    """``-sum lambda log2 lambda`` over eigenvalues above ``1e-12``."""
    return EntropyValue(_shannon_bits(hermitian_eigenvalues(rho.mat)), "von-neumann")


def cond_vn(s):
    """``S(rho) - S(rho_B)`` in bits."""
    rho_b = marginals(s)[1]
    return EntropyValue(von_neumann_entropy(s) - von_neumann_entropy(rho_b), "vn-conditional")


def post_cond_vn(s, basis, rho_b=None):
    """Conditional von Neumann entropy of the post-measurement state.

    The post-measurement state is block diagonal, so its spectrum is the union
    of the block spectra.
    """
    blocks = measurement_blocks(s, basis)
    eigs = np.concatenate([hermitian_eigenvalues(0.5 * (b + b.conj().T)) for b in blocks])
    if rho_b is None:
        rho_b = marginals(s)[1]
    return EntropyValue(_shannon_bits(eigs) - von_neumann_entropy(rho_b), "vn-conditional")


def check_eq1_von_neumann(s, theta, tau):
    """Slack of ``S(theta|B) + S(tau|B) >= log2 d + S(A|B)``.

    Raises
    ------
    DomainError
        If ``theta`` and ``tau`` are not mutually unbiased.
    """
    dev = verify_unbiased(theta, tau)
    if dev > UNBIASED_TOL:
        raise DomainError(f"bases {theta.label!r} and {tau.label!r} are not unbiased (deviation {dev:.3e})")
    lhs, rhs = eq1_sides(s, theta, tau)
    return lhs - rhs


def eq1_sides(s, theta, tau):
    rho_b = marginals(s)[1]
    s_b = von_neumann_entropy(rho_b)
    s_ab = von_neumann_entropy(s) - s_b
    lhs = post_cond_vn(s, theta, rho_b) + post_cond_vn(s, tau, rho_b)
    return float(lhs), math.log2(s.d) + s_ab
