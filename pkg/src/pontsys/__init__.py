"""Passive discrete-time systems with Pontryagin state spaces.

Operator colligations, generalized Schur transfer functions, cascade
products, Julia completions, Blaschke factorizations, defect functions
and stability classification, at finite dimension.
"""

from . import exceptions
from .indefinite import (
    DEFAULT_TOL,
    IndefiniteSubspace,
    MetricClass,
    SignatureSpace,
    SpectralRegion,
    SubspaceKind,
    Tolerances,
)
from .colligation import (
    BareRealization,
    Colligation,
    KrylovReport,
    SimilarityResult,
    SimpKarReport,
    SystemClass,
    SystemKind,
    adjoint_system,
    classify,
    krylov_report,
    markov,
    realize_from_taylor,
    simp_kar_check,
    state_change,
    system_operator,
    to_canonical,
    transfer_eval,
    unitary_similarity,
    weak_similarity,
)
from .julia import (
    JuliaParts,
    defect_operators,
    julia_embedding,
    julia_operator,
)
from .products import (
    FundamentalSplit,
    ObstructionReport,
    SplitKind,
    StabilityClass,
    SystemFactorization,
    cascade,
    invariant_fundamental_decompositions,
    kl_factorize_system,
    obstruction_controllable,
    obstruction_observable,
    stability_classify,
)
from .schur import (
    BoundaryReport,
    DefectResult,
    FactorizationResult,
    NegativeSquaresEstimate,
    TransferFunction,
    as_transfer,
    blaschke_potapov_factor,
    blaschke_product,
    boundary_behavior,
    canonical_coisometric_realization,
    defect,
    invert_system,
    kernel_gram,
    kl_factorize_function,
    negative_squares_estimate,
)
from .cli import load_system, save_system

__version__ = "0.1.0"
