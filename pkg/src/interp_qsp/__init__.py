"""Angle-free quantum signal processing by Laurent interpolation.

Dense-matrix construction and verification of the interpolation-based QSP
circuit, its use for functions of block-encoded Hermitian matrices and for
singular value transformation, and the approximation-error instrumentation
around it.
"""
from .analysis import (
    BestErrorBound,
    JacksonBound,
    abs_power_scaling_experiment,
    akf_constant,
    fourier_truncation_upper_bound,
    hamiltonian_simulation_budget,
    jackson_bound,
)
from .encoding import (
    BlockEncoding,
    DiagonalEncoding,
    build_diagonal_encoding,
    build_quantized_diagonal_encoding,
    verify_block_encoding,
)
from .functions import (
    CATALOG_NAMES,
    IntervalFunction,
    SupNormGrid,
    UnitCircleFunction,
    catalog_function,
    catalog_interval_function,
    lift_interval_function,
    modulus_of_continuity,
    sup_norm_difference,
)
from .interpolation import (
    ChebyshevPolynomial,
    LaurentPolynomial,
    NodeSet,
    averaged_interpolant_fd,
    chebyshev_form_gd,
    consistency_fd_gd,
    evaluate_laurent,
    reconstruct_laurent,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .numerics import matrix_function_oracle, operator_norm, principal_log_unitary
from .qsp import (
    QspCircuit,
    QueryLedger,
    assemble_sqrt_d1_encoding,
    assemble_qsp_block_encoding,
    assemble_qsp_circuit,
    build_indexed_power,
    build_qft,
    build_shift_spectrum_operator,
    circuit_structure_report,
)
from .transforms import (
    HermitianBlockEncoding,
    SingularValueProblem,
    fhm_block_encode,
    qsvt,
    self_inverse_block_encoding,
    verify_arccos_lemma,
)

__version__ = "0.1.0"
