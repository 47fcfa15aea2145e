"""Exact computations with Jacobi structures, their Schouten-Jacobi brackets and
the L-infinity algebras of coisotropic submanifolds, over rational polynomials."""

from .catalog import darboux_contact, flowout_patch, legendrian_patch, poisson_as_jacobi
from .deformation import (
    FormalSeries,
    GaugeFamily,
    cocycle_basis,
    delta_mc,
    kuranishi,
    mc_series,
    prolong_order_two,
    verify_formal_mc,
    verify_gauge,
)
from .operators import JacobiStructure, MultiOperator, Patch, Section, apply, jacobi_check, sj_bracket
from .poissonization import MultiVector, poissonize, sn_bracket, tilde_op
from .presymplectic import PreSympData, ohpark_mk, thickening_poisson
from .ring import Polynomial, parse
from .vdata import NormalMultiSection, VData, derived_mk, oracle_mk, project_P

__all__ = [
    "FormalSeries", "GaugeFamily", "JacobiStructure", "MultiOperator", "MultiVector", "NormalMultiSection",
    "Patch", "Polynomial", "PreSympData", "Section", "VData", "apply", "cocycle_basis", "darboux_contact",
    "delta_mc", "derived_mk", "flowout_patch", "jacobi_check", "kuranishi", "legendrian_patch", "mc_series",
    "ohpark_mk", "oracle_mk", "parse", "poisson_as_jacobi", "poissonize", "project_P", "prolong_order_two",
    "sj_bracket", "sn_bracket", "thickening_poisson", "tilde_op", "verify_formal_mc", "verify_gauge",
]
