"""Exact Clifford-analytic operator calculus."""

from .clifford import Multivector, Signature, clifford_inner, geometric_product, grade_project, involution
from .dsl import IdentityReport, builtin_suite, check_identity_zero, parse, to_text
from .fock import (
    ck_extension,
    fischer_decompose,
    fischer_inner,
    hermite_report,
    hermite_sequence,
    weyl_states,
)
from .maxwell import MaxwellSolution, eigen_residual, maxwell_solution, pde_residual
from .opcalc import apply, exp_truncated, hamiltonian, ladder_pair
from .polyfun import CliffordPolynomial, WeightedFunction
from .scalars import LAMBDA, Scalar, rational

__all__ = [
    "CliffordPolynomial",
    "IdentityReport",
    "LAMBDA",
    "MaxwellSolution",
    "Multivector",
    "Scalar",
    "Signature",
    "WeightedFunction",
    "apply",
    "builtin_suite",
    "check_identity_zero",
    "ck_extension",
    "clifford_inner",
    "eigen_residual",
    "exp_truncated",
    "fischer_decompose",
    "fischer_inner",
    "geometric_product",
    "grade_project",
    "hamiltonian",
    "hermite_report",
    "hermite_sequence",
    "involution",
    "ladder_pair",
    "maxwell_solution",
    "parse",
    "pde_residual",
    "rational",
    "to_text",
    "weyl_states",
]
