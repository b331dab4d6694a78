"""latsum: norms of vector sequences, summing-type operator norms, and
positive tensor norms on finite-dimensional weighted coordinate lattices,
with exact polyhedral computation, deterministic multistart search, and
small brute-force oracles for cross-checking."""

from .lattice import (
    LatticeSpace,
    LatticeVector,
    VectorSequence,
    SpaceMismatchError,
    UnsupportedExponentError,
    conjugate_exponent,
    dual_pairing,
    positive_ball_extreme_points,
    sample_positive_sphere,
)
from .search import (
    SearchConfig,
    NormEstimate,
    DegenerateConstraintError,
    maximize_convex_over_positive_ball,
    maximize_linear_over_norm_body,
)
from .seqnorms import (
    SeqNormKind,
    strong_norm,
    weak_norm,
    positive_weak_norm,
    cohen_norm,
    positive_strong_norm,
    seq_norm,
    tail_profile,
    duality_pairing,
)
from .opnorms import (
    NormParams,
    LinearOperator,
    IdealKind,
    UnsupportedPairError,
    operator_norm,
    lambda_norm,
    dplus_norm,
    majorizing_norm,
    cohen_nuclear_norm,
    ideal_norm,
    induced_map_constant,
)
from .tensors import (
    TensorElement,
    PositiveBilinearForm,
    GrothendieckNorms,
    injective_cone_member,
    wittstock_norm,
    fremlin_norm,
    grothendieck_norms,
    induced_tensor_constant,
)
from .oracles import (
    GridSpec,
    DimensionTooLargeError,
    grid_max,
    bruteforce_seq_norm,
    bruteforce_ideal_norm,
)
from .serialize import (
    InputFormatError,
    load_exponent,
    load_space,
    load_sequence,
    load_operator,
    load_tensor,
    load_json_file,
    space_payload,
    estimate_payload,
    dump_json,
)
from .verify import (
    SuiteRow,
    SuiteReport,
    available_suites,
    run_suite,
    report_payload,
    report_csv,
)

__version__ = "0.1.0"

__all__ = [
    "LatticeSpace",
    "LatticeVector",
    "VectorSequence",
    "SpaceMismatchError",
    "UnsupportedExponentError",
    "conjugate_exponent",
    "dual_pairing",
    "positive_ball_extreme_points",
    "sample_positive_sphere",
    "SearchConfig",
    "NormEstimate",
    "DegenerateConstraintError",
    "maximize_convex_over_positive_ball",
    "maximize_linear_over_norm_body",
    "SeqNormKind",
    "strong_norm",
    "weak_norm",
    "positive_weak_norm",
    "cohen_norm",
    "positive_strong_norm",
    "seq_norm",
    "tail_profile",
    "duality_pairing",
    "NormParams",
    "LinearOperator",
    "IdealKind",
    "UnsupportedPairError",
    "operator_norm",
    "lambda_norm",
    "dplus_norm",
    "majorizing_norm",
    "cohen_nuclear_norm",
    "ideal_norm",
    "induced_map_constant",
    "TensorElement",
    "PositiveBilinearForm",
    "GrothendieckNorms",
    "injective_cone_member",
    "wittstock_norm",
    "fremlin_norm",
    "grothendieck_norms",
    "induced_tensor_constant",
    "GridSpec",
    "DimensionTooLargeError",
    "grid_max",
    "bruteforce_seq_norm",
    "bruteforce_ideal_norm",
    "InputFormatError",
    "load_exponent",
    "load_space",
    "load_sequence",
    "load_operator",
    "load_tensor",
    "load_json_file",
    "space_payload",
    "estimate_payload",
    "dump_json",
    "SuiteRow",
    "SuiteReport",
    "available_suites",
    "run_suite",
    "report_payload",
    "report_csv",
    "__version__",
]
