"""Mutually unbiased bases, commuting operator classes, and tomography."""

from .matcore import (
    DEFAULT_TOL,
    CheckResult,
    VerificationReport,
    matrix_from_json,
    matrix_to_json,
    read_matrix,
    root_of_unity,
    write_matrix,
)
from .mub import (
    BUILTIN_DIMS,
    Basis,
    BasisTransform,
    MubFamily,
    UnsupportedDimensionError,
    builtin_family,
    canonical_basis,
    check_family,
    check_unbiased,
    fourier_basis,
    odd_prime_family,
    one_axis_twist,
    unitary_between,
)
from .classes import (
    CoefficientVectors,
    CommutingClass,
    OperatorSet,
    build_class,
    build_set,
    coefficient_vectors,
    conjugate_class,
    verify_set,
)
from .tensors import (
    angular_momentum,
    clebsch_gordan,
    rank3_tensor_polynomial,
    spherical_tensor,
    tensor_diagonal,
    weyl_tensor,
)
from .tomography import (
    MeasurementRecord,
    ReconstructionReport,
    coefficients,
    coefficients_from_probabilities,
    fidelity,
    probabilities,
    project_psd,
    random_density,
    read_record,
    reconstruct,
    reconstruct_from_record,
    record_from_json,
    record_to_json,
    sample_shots,
    trace_distance,
    write_record,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "CheckResult",
    "VerificationReport",
    "matrix_from_json",
    "matrix_to_json",
    "read_matrix",
    "write_matrix",
    "root_of_unity",
    "BUILTIN_DIMS",
    "Basis",
    "BasisTransform",
    "MubFamily",
    "UnsupportedDimensionError",
    "builtin_family",
    "canonical_basis",
    "check_family",
    "check_unbiased",
    "fourier_basis",
    "odd_prime_family",
    "one_axis_twist",
    "unitary_between",
    "CoefficientVectors",
    "CommutingClass",
    "OperatorSet",
    "build_class",
    "build_set",
    "coefficient_vectors",
    "conjugate_class",
    "verify_set",
    "angular_momentum",
    "clebsch_gordan",
    "rank3_tensor_polynomial",
    "spherical_tensor",
    "tensor_diagonal",
    "weyl_tensor",
    "MeasurementRecord",
    "ReconstructionReport",
    "coefficients",
    "coefficients_from_probabilities",
    "fidelity",
    "probabilities",
    "project_psd",
    "random_density",
    "read_record",
    "reconstruct",
    "reconstruct_from_record",
    "record_from_json",
    "record_to_json",
    "sample_shots",
    "trace_distance",
    "write_record",
    "__version__",
]
