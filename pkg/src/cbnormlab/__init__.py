"""Numerical laboratory for matrix-level norms defined as suprema over
tuples of unitaries, phases, and contractions, with block unitary
dilations, truncated embeddings into products of matrix algebras, and
seeded gap experiments.
"""

from .dilation import Dilation, compress_12, dilate, dilate_blocks, four_unitaries
from .embedding import (
    AbelianEmbedding,
    BlockDiagonalOperator,
    EmbeddingSample,
    TraceClassTuple,
    abelian_embed,
    coefficient_function,
    default_sample,
    embed,
    pairing,
    preadjoint,
    truncated_sd_norm,
    tuple_stream,
)
from .errors import (
    CertificationError,
    DimensionError,
    DomainError,
    FormatError,
    NotContractionError,
    NotPSDError,
    PreconditionError,
)
from .experiments import (
    ExperimentReport,
    cb_gap_experiment,
    embedding_convergence_experiment,
    entangled_adversary,
    entangled_floor_value,
    recertify_report,
)
from .linalg import haar_unitary, kronecker, operator_norm, psd_sqrt
from .measures import AtomicMeasure, MatrixMeasure, NormEstimate, UnitaryTuple
from .norms import (
    ball_level_norm,
    certify,
    evaluate_contraction_witness,
    evaluate_phase_witness,
    evaluate_unitary_witness,
    kron_sum_objective,
    maxl1_level_norm,
    min_level_norm,
    phase_objective,
    pisier_bound,
    sd_norm,
    tmu_apply,
)
from .optimize import (
    AscentTrace,
    OptimizerConfig,
    ascend_ball,
    ascend_torus,
    ascend_unitary_product,
)

__all__ = [
    "AbelianEmbedding",
    "AscentTrace",
    "AtomicMeasure",
    "BlockDiagonalOperator",
    "CertificationError",
    "Dilation",
    "DimensionError",
    "DomainError",
    "EmbeddingSample",
    "ExperimentReport",
    "FormatError",
    "MatrixMeasure",
    "NormEstimate",
    "NotContractionError",
    "NotPSDError",
    "OptimizerConfig",
    "PreconditionError",
    "TraceClassTuple",
    "UnitaryTuple",
    "abelian_embed",
    "ascend_ball",
    "ascend_torus",
    "ascend_unitary_product",
    "ball_level_norm",
    "cb_gap_experiment",
    "certify",
    "coefficient_function",
    "compress_12",
    "default_sample",
    "dilate",
    "dilate_blocks",
    "embed",
    "embedding_convergence_experiment",
    "entangled_adversary",
    "entangled_floor_value",
    "evaluate_contraction_witness",
    "evaluate_phase_witness",
    "evaluate_unitary_witness",
    "four_unitaries",
    "haar_unitary",
    "kron_sum_objective",
    "kronecker",
    "maxl1_level_norm",
    "min_level_norm",
    "operator_norm",
    "pairing",
    "phase_objective",
    "pisier_bound",
    "preadjoint",
    "psd_sqrt",
    "recertify_report",
    "sd_norm",
    "tmu_apply",
    "truncated_sd_norm",
    "tuple_stream",
]

__version__ = "0.1.0"
