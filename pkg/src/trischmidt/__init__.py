"""Tripartite Schmidt decomposition toolkit.

Decides whether a pure tripartite state admits a single-sum Schmidt
decomposition via the partial-inner-product slice criterion, constructs
the decomposition when it exists, and reports the reduced-density
spectral diagnostics in either case.
"""

from .bipartite import (
    BipartiteSchmidt,
    entanglement_entropy,
    entropy_bits,
    schmidt_decompose,
    schmidt_rank,
)
from .bipartite import reconstruct as reconstruct_bipartite
from .exceptions import (
    BadDims,
    BadWeights,
    DimensionMismatch,
    Indeterminate,
    NoConvergence,
    NotHermitian,
    NotNormalized,
    NotUnitaryError,
    RankNotOne,
    TrischmidtError,
    ZeroVector,
)
from .generate import ghz_state, haar_state, haar_unitary, product_state, schmidt_state, w_state
from .linalg import (
    DEFAULT_TOL,
    HermitianEigenResult,
    SvdResult,
    Tolerances,
    hermitian_eigendecompose,
    is_unitary,
    numerical_rank,
    svd,
)
from .states import (
    DensityMatrix,
    PureState,
    apply_local_unitary,
    overlap,
    partial_inner_product,
    reduced_density,
    validate,
)
from .tripartite import (
    SliceAnalysis,
    SpectrumReport,
    TripartiteSchmidt,
    Verdict,
    analyze,
    check,
    construct,
    degeneracy_groups,
    refine_degenerate,
    spectrum_report,
)
from .tripartite import reconstruct as reconstruct_tripartite

__version__ = "0.1.0"

__all__ = [
    "BadDims",
    "BadWeights",
    "BipartiteSchmidt",
    "DEFAULT_TOL",
    "DensityMatrix",
    "DimensionMismatch",
    "HermitianEigenResult",
    "Indeterminate",
    "NoConvergence",
    "NotHermitian",
    "NotNormalized",
    "NotUnitaryError",
    "PureState",
    "RankNotOne",
    "SliceAnalysis",
    "SpectrumReport",
    "SvdResult",
    "Tolerances",
    "TripartiteSchmidt",
    "TrischmidtError",
    "Verdict",
    "ZeroVector",
    "analyze",
    "apply_local_unitary",
    "check",
    "construct",
    "degeneracy_groups",
    "entanglement_entropy",
    "entropy_bits",
    "ghz_state",
    "haar_state",
    "haar_unitary",
    "hermitian_eigendecompose",
    "is_unitary",
    "numerical_rank",
    "overlap",
    "partial_inner_product",
    "product_state",
    "reconstruct_bipartite",
    "reconstruct_tripartite",
    "reduced_density",
    "refine_degenerate",
    "schmidt_decompose",
    "schmidt_rank",
    "schmidt_state",
    "spectrum_report",
    "svd",
    "validate",
    "w_state",
]
