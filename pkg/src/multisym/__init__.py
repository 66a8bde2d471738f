"""Exact multisymplectic calculus for Maxwell theory, with a finite-difference companion."""
from .symalg import Chart, Form, Multivector, Poly, Relation, contract, dext, wedge
from .maxwell_space import FLAVORS, build_chart, omega, theta
from .legendre import DegeneracyError, functional_det, hamiltonian, pseudofiber_classify
from .hamilton import derive
from .observables import (
    copolar_obstruction, is_algebraic, is_dynamical, jacobi_defect, lift_zeta, make_P_phi,
    make_Q_psi, poisson,
)

__all__ = [
    "Chart", "Form", "Multivector", "Poly", "Relation", "contract", "dext", "wedge",
    "FLAVORS", "build_chart", "omega", "theta",
    "DegeneracyError", "functional_det", "hamiltonian", "pseudofiber_classify",
    "derive",
    "copolar_obstruction", "is_algebraic", "is_dynamical", "jacobi_defect", "lift_zeta",
    "make_P_phi", "make_Q_psi", "poisson",
]
__version__ = "0.1.0"
