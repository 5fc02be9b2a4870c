"""Doubly d-regular 0/1 matrices: sampling, smallest singular values,
arithmetic structure of near-kernel vectors, switching-based conditional
resampling, and the Monte Carlo experiment harness tying them together."""

from .arithmetic import (
    ClcdParams,
    check_anticoncentration,
    check_clcd_stability,
    clcd,
    difference_vector,
    levy_estimate,
    oracle_clcd,
    qclcd,
    subset_sum_samples,
)
from .core import (
    RegularDigraphMatrix,
    ValidationError,
    complement,
    from_text,
    read_matrix_stream,
    switching_set,
    switching_weight,
    to_text,
    validate,
    write_matrix_stream,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    ParamPack,
    RunResult,
    TrialRecord,
    exact_singular,
    read_config,
    run_experiment,
    write_config,
    write_csv,
)
from .rerandom import (
    RevealedInformation,
    enumerate_extensions,
    extract_revealed,
    resample_conditional,
)
from .sampler import (
    SamplerConfig,
    derive_rng,
    enumerate_regular,
    sample_many,
    sample_uniform,
)
from .spectral import (
    restricted_smallest,
    row_distance_bound,
    smallest_singular,
    sumzero_basis,
)
from .structures import (
    QuasirandomParams,
    RobustFamily,
    SplitMatchPair,
    build_restriction_families,
    check_bispread_restrictions,
    check_quasirandom,
    generate_robust_family,
)
from .vectorclass import (
    bispread_constants,
    certified_spread_constants,
    dist_to_sparse,
    is_almost_constant,
    is_compressible,
    spread_count,
)

__version__ = "0.1.0"

__all__ = [
    "ClcdParams",
    "ConfigError",
    "ExperimentConfig",
    "ParamPack",
    "QuasirandomParams",
    "RegularDigraphMatrix",
    "RevealedInformation",
    "RobustFamily",
    "RunResult",
    "SamplerConfig",
    "SplitMatchPair",
    "TrialRecord",
    "ValidationError",
    "bispread_constants",
    "build_restriction_families",
    "certified_spread_constants",
    "check_anticoncentration",
    "check_bispread_restrictions",
    "check_clcd_stability",
    "check_quasirandom",
    "clcd",
    "complement",
    "derive_rng",
    "difference_vector",
    "dist_to_sparse",
    "enumerate_extensions",
    "enumerate_regular",
    "exact_singular",
    "extract_revealed",
    "from_text",
    "generate_robust_family",
    "is_almost_constant",
    "is_compressible",
    "levy_estimate",
    "oracle_clcd",
    "qclcd",
    "read_config",
    "read_matrix_stream",
    "resample_conditional",
    "restricted_smallest",
    "row_distance_bound",
    "run_experiment",
    "sample_many",
    "sample_uniform",
    "smallest_singular",
    "spread_count",
    "subset_sum_samples",
    "sumzero_basis",
    "switching_set",
    "switching_weight",
    "to_text",
    "validate",
    "write_config",
    "write_csv",
    "write_matrix_stream",
]
