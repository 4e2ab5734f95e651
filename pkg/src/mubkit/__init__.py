"""Mutually unbiased bases and linear-entropy uncertainty relations."""

from .errors import (
    ConvergenceError,
    DomainError,
    FormatError,
    IntegrityError,
    MubkitError,
    NoConstructionError,
    ShapeError,
)
from .mub import MubSet, OrthonormalBasis, build_full_mub_set, computational_basis, load_bases, save_bases
from .rng import RandomStream
from .states import (
    BipartiteState,
    DensityMatrix,
    classical_correlated,
    load_state,
    marginals,
    maximally_entangled,
    product_state,
    random_bipartite,
    random_density,
    random_pure,
    save_state,
)
from .theorems import (
    SweepConfig,
    SweepReport,
    TheoremResult,
    check_eq1,
    check_t1_equality,
    check_t1_inequality,
    check_t2_conservation,
    run_sweep,
)

__version__ = "0.1.0"
