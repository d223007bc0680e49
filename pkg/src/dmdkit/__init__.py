"""Dynamic mode decomposition with control from compressed measurements.

Identify low-order linear input-output models from snapshot data, run the
same identification on compressed measurements, recover full-state modes and
actuation by sparse recovery, and check the algebraic identities tying the
two levels together.
"""

from .compressive import CompressiveInputs, CompressiveModel, cdmd, cdmdc
from .cosamp import SparseRecoveryConfig, cosamp, recover_full_vectors
from .dmd import (
    AugmentedSvd,
    DmdModel,
    SnapshotSet,
    augmented_factors,
    continuous_spectrum,
    dmdc_known_b,
    dmdc_unknown_b,
    exact_dmd,
    predict,
)
from .linalg import (
    dct_basis,
    dct_column,
    eig_sorted,
    normalize_modes,
    numerical_rank,
    pseudoinverse,
    rank_by_energy,
    truncated_svd,
)
from .measurement import (
    KINDS,
    MeasurementOperator,
    MeasurementSpec,
    build_measurement,
    compress,
    compress_with_spec,
    operator_from_matrix,
)
from .testbed import (
    LowRankPlant,
    SyntheticRun,
    add_noise,
    build_lifting_modes,
    default_plant,
    gaussian_forcing,
    load_matrix,
    load_snapshots,
    save_matrix,
    save_snapshots,
    simulate,
    toy_run,
)
from .util import ConsistencyError, NumericalError, derive_seed
from .verify import (
    TheoremReport,
    actuation_error,
    controllability,
    eig_errors,
    mode_error,
    pair_modes,
    run_theorem_suite,
    theorem_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedSvd",
    "CompressiveInputs",
    "CompressiveModel",
    "ConsistencyError",
    "DmdModel",
    "KINDS",
    "LowRankPlant",
    "MeasurementOperator",
    "MeasurementSpec",
    "NumericalError",
    "SnapshotSet",
    "SparseRecoveryConfig",
    "SyntheticRun",
    "TheoremReport",
    "actuation_error",
    "add_noise",
    "augmented_factors",
    "build_lifting_modes",
    "build_measurement",
    "cdmd",
    "cdmdc",
    "compress",
    "compress_with_spec",
    "continuous_spectrum",
    "controllability",
    "cosamp",
    "dct_basis",
    "dct_column",
    "default_plant",
    "derive_seed",
    "dmdc_known_b",
    "dmdc_unknown_b",
    "eig_errors",
    "eig_sorted",
    "exact_dmd",
    "gaussian_forcing",
    "load_matrix",
    "load_snapshots",
    "mode_error",
    "normalize_modes",
    "numerical_rank",
    "operator_from_matrix",
    "pair_modes",
    "predict",
    "pseudoinverse",
    "rank_by_energy",
    "recover_full_vectors",
    "run_theorem_suite",
    "save_matrix",
    "save_snapshots",
    "simulate",
    "theorem_suite",
    "toy_run",
    "truncated_svd",
]
