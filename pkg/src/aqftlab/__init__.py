"""Exact finite-scale workbench for algebraic quantum field theories."""

from .algebra import (
    PresentedAlgebra,
    RationalAlgebra,
    RightModule,
    clifford_algebra,
    exterior_algebra,
    field_algebra,
    make_algebra,
)
from .aqft import AQFT, check_aqft, circle_theory, constant_theory, from_prefactorization, pfa_roundtrip, to_prefactorization
from .exactlin import Matrix, Subspace
from .fincat import FinCategory, OrthogonalCategory, Report, build_circle_model
from .fredenhagen import (
    DescentObject,
    ThetaObject,
    count_simple_loop_objects,
    descent_check,
    descent_hom,
    factorization_right_adjoint,
    loop_category_check,
    module_to_descent,
    theta_to_coaction,
    universal_algebra,
)
from .gauging import (
    EquivariantAQFT,
    gauge,
    is_hopf_galois,
    is_truncated,
    orbifold_invariants,
    phi_psi_check,
    truncate,
)
from .grouprep import FiniteGroup, GroupAction, Representation, builtin_group, cyclic_group, symmetric_group
from .operad import check_operad_axioms, envelope_functor, monoidal_envelope

__version__ = "0.1.0"

__all__ = [
    "AQFT",
    "DescentObject",
    "EquivariantAQFT",
    "FinCategory",
    "FiniteGroup",
    "GroupAction",
    "Matrix",
    "OrthogonalCategory",
    "PresentedAlgebra",
    "RationalAlgebra",
    "Report",
    "Representation",
    "RightModule",
    "Subspace",
    "ThetaObject",
    "build_circle_model",
    "builtin_group",
    "check_aqft",
    "check_operad_axioms",
    "circle_theory",
    "clifford_algebra",
    "constant_theory",
    "count_simple_loop_objects",
    "cyclic_group",
    "descent_check",
    "descent_hom",
    "envelope_functor",
    "exterior_algebra",
    "factorization_right_adjoint",
    "field_algebra",
    "from_prefactorization",
    "gauge",
    "is_hopf_galois",
    "is_truncated",
    "loop_category_check",
    "make_algebra",
    "module_to_descent",
    "monoidal_envelope",
    "orbifold_invariants",
    "pfa_roundtrip",
    "phi_psi_check",
    "symmetric_group",
    "theta_to_coaction",
    "to_prefactorization",
    "truncate",
    "universal_algebra",
]
