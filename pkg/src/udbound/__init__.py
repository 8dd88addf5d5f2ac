"""Unambiguous discrimination of multipartite state ensembles.

Computes the optimal unambiguous-discrimination success probability of an
ensemble together with a dual certificate, an upper bound on what local
protocols can achieve via finitely generated separable no-error cones, and
independent verification of every optimality and tightness condition,
including a witness for nonlocality without entanglement.
"""

from .cones import (
    ConeGenerators,
    ProductRayCertificate,
    certify_unique_product_ray,
    conclusive_subspace,
    cones_from_dict,
    cones_to_dict,
    example_cone_generators,
    in_conclusive_dual,
    in_generated_dual,
    is_product_state,
    load_cones,
    ppt_check,
    save_cones,
)
from .ensembles import (
    Ensemble,
    ExampleFixtures,
    LoccProtocol,
    Measurement,
    SeparableDecomposition,
    ValidationReport,
    build_example1,
    build_example2,
    build_two_pure,
    load_ensemble,
    load_measurement,
    save_ensemble,
    save_measurement,
    validate_ensemble,
    validate_measurement,
)
from .jsonio import SchemaError, load_certificate, save_certificate
from .operators import (
    DimVector,
    HermitianOperator,
    StateVector,
    basis_state,
    compress,
    eig_hermitian,
    hs_inner,
    identity,
    is_psd,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    product_state,
    support_projector,
    tensor,
)
from .programs import solve_global, solve_global_certificate, solve_separable_bound
from .solver import Block, ConicProgram, Constraint, SolveReport, solve
from .verify import (
    NlweReport,
    PrecheckError,
    ProtocolError,
    VerificationReport,
    check_no_error,
    nlwe_witness,
    verify_locc_equality,
    verify_optimality,
    verify_separable_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "ConeGenerators",
    "ConicProgram",
    "Constraint",
    "DimVector",
    "Ensemble",
    "ExampleFixtures",
    "HermitianOperator",
    "LoccProtocol",
    "Measurement",
    "NlweReport",
    "PrecheckError",
    "ProductRayCertificate",
    "ProtocolError",
    "SchemaError",
    "SeparableDecomposition",
    "SolveReport",
    "StateVector",
    "ValidationReport",
    "VerificationReport",
    "basis_state",
    "build_example1",
    "build_example2",
    "build_two_pure",
    "certify_unique_product_ray",
    "check_no_error",
    "compress",
    "conclusive_subspace",
    "cones_from_dict",
    "cones_to_dict",
    "eig_hermitian",
    "example_cone_generators",
    "hs_inner",
    "identity",
    "in_conclusive_dual",
    "in_generated_dual",
    "is_product_state",
    "is_psd",
    "load_certificate",
    "load_cones",
    "load_ensemble",
    "load_measurement",
    "min_eigenvalue",
    "nlwe_witness",
    "partial_trace",
    "partial_transpose",
    "ppt_check",
    "product_state",
    "save_certificate",
    "save_cones",
    "save_ensemble",
    "save_measurement",
    "solve",
    "solve_global",
    "solve_global_certificate",
    "solve_separable_bound",
    "support_projector",
    "tensor",
    "validate_ensemble",
    "validate_measurement",
    "verify_locc_equality",
    "verify_optimality",
    "verify_separable_certificate",
]
