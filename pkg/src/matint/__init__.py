"""matint: certified approximation of multi-parametric matroid interdiction.

Element weights are affine functions of a parameter vector ranging over a
polytope. The solver decomposes the polytope into cells on which the weight
order is fixed, then certifies a small strategy set per cell whose best value
is within a (1-eps)*beta factor of the optimal interdicted basis weight
everywhere. All arithmetic is exact rational.
"""

from .affine import AffineForm, as_fraction, as_point
from .cellapprox import (
    CellSolution,
    StrategyEntry,
    approximate_cell,
    gamma,
    lift_cell,
)
from .errors import (
    DegeneratePolytopeError,
    DomainError,
    FingerprintMismatchError,
    InfeasibleRestrictionError,
    InputError,
    MatintError,
    OracleContractError,
    UnboundedPolytopeError,
    ValidationError,
)
from .geometry import (
    Cell,
    Hyperplane,
    Polytope,
    build_cells,
    separating_hyperplanes,
    split,
)
from .instance import (
    Instance,
    Strategy,
    ValidationReport,
    basis_value_form,
    min_weight_basis,
    validate_instance,
)
from .matroids import (
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
    is_independent,
    rank,
)
from .oracles import (
    OracleAnswer,
    OracleSpec,
    brute_force_oracle,
    partition_dp_oracle,
    synthetic_oracle,
)
from .serialization import (
    instance_fingerprint,
    load_instance,
    load_result,
    save_instance,
    save_result,
)
from .solver import (
    ApproximationResult,
    InterdictionApproximator,
    QueryAnswer,
    envelope_export,
    query,
    solve,
)
from .verify import VerificationReport, certify, exact_value

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "ApproximationResult",
    "Cell",
    "CellSolution",
    "DegeneratePolytopeError",
    "DomainError",
    "FingerprintMismatchError",
    "GraphicMatroid",
    "Hyperplane",
    "InfeasibleRestrictionError",
    "InputError",
    "Instance",
    "InterdictionApproximator",
    "MatintError",
    "OracleAnswer",
    "OracleContractError",
    "OracleSpec",
    "PartitionMatroid",
    "Polytope",
    "QueryAnswer",
    "Strategy",
    "StrategyEntry",
    "UnboundedPolytopeError",
    "UniformMatroid",
    "ValidationError",
    "ValidationReport",
    "VerificationReport",
    "approximate_cell",
    "as_fraction",
    "as_point",
    "basis_value_form",
    "brute_force_oracle",
    "build_cells",
    "certify",
    "envelope_export",
    "exact_value",
    "gamma",
    "instance_fingerprint",
    "is_independent",
    "lift_cell",
    "load_instance",
    "load_result",
    "min_weight_basis",
    "partition_dp_oracle",
    "query",
    "rank",
    "save_instance",
    "save_result",
    "separating_hyperplanes",
    "solve",
    "split",
    "synthetic_oracle",
    "validate_instance",
]
