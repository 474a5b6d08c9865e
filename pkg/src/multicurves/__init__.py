"""Exact invariants and local module computations for sheaves on ribbons C_n."""

from .campaigns import CampaignConfig, Formulas, VerificationReport, run_all, run_module_theorems, run_rank_crosschecks, run_symbolic_identities
from .canonical import canonical_morphism_report, filt1_identities
from .descriptors import (
    DEG_L,
    CompleteType,
    CurveContext,
    QFType,
    RigidParams,
    SecondInvariants,
    dual_type,
    end_invariants,
    euler_char,
    generalized_rank,
    kernel_descriptor,
    moduli_dim,
    qf_from_ranks,
    rank_deg_slope,
    ranks_from_qf,
    rigid_from_params,
    rigid_params_from,
    second_invariants,
    validate,
)
from .dvr import GF, QQ, InvariantFactors, Lattice, MatrixOverD, Scalar, SNFResult, normalize, smith_normal_form, valuation
from .errors import (
    AmbientTooSmall,
    ConfigError,
    EmptyType,
    IndexOutOfRange,
    MulticurveError,
    NotInLocalRing,
    NotMonotone,
    NotRigid,
    RankTooSmall,
    ResolutionBudgetExceeded,
    ZeroRank,
)
from .homological import bundle_cover_kernel, ext_module, resolution, tor_module, tor_over_ambient
from .modules import (
    FiltrationReport,
    LocalModule,
    ModuleMap,
    NotQuasiFree,
    detect_qf_type,
    dual_module,
    first_filtration,
    is_reflexive,
    is_surjective,
    make_quasi_free,
    quotient_module,
    random_twist,
    second_filtration,
    torsion_submodule,
)
from .truncated import AMatrix, RingElement, kernel_over_A

__all__ = [
    "CampaignConfig",
    "Formulas",
    "VerificationReport",
    "run_all",
    "run_module_theorems",
    "run_rank_crosschecks",
    "run_symbolic_identities",
    "canonical_morphism_report",
    "filt1_identities",
    "DEG_L",
    "CompleteType",
    "CurveContext",
    "QFType",
    "RigidParams",
    "SecondInvariants",
    "dual_type",
    "end_invariants",
    "euler_char",
    "generalized_rank",
    "kernel_descriptor",
    "moduli_dim",
    "qf_from_ranks",
    "rank_deg_slope",
    "ranks_from_qf",
    "rigid_from_params",
    "rigid_params_from",
    "second_invariants",
    "validate",
    "GF",
    "QQ",
    "InvariantFactors",
    "Lattice",
    "MatrixOverD",
    "Scalar",
    "SNFResult",
    "normalize",
    "smith_normal_form",
    "valuation",
    "AmbientTooSmall",
    "ConfigError",
    "EmptyType",
    "IndexOutOfRange",
    "MulticurveError",
    "NotInLocalRing",
    "NotMonotone",
    "NotRigid",
    "RankTooSmall",
    "ResolutionBudgetExceeded",
    "ZeroRank",
    "bundle_cover_kernel",
    "ext_module",
    "resolution",
    "tor_module",
    "tor_over_ambient",
    "FiltrationReport",
    "LocalModule",
    "ModuleMap",
    "NotQuasiFree",
    "detect_qf_type",
    "dual_module",
    "first_filtration",
    "is_reflexive",
    "is_surjective",
    "make_quasi_free",
    "quotient_module",
    "random_twist",
    "second_filtration",
    "torsion_submodule",
    "AMatrix",
    "RingElement",
    "kernel_over_A",
]

__version__ = "0.1.0"
