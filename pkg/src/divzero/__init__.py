"""Exact arithmetic for divergence-zero vector-field Lie algebras on the
torus, the Virasoro-like algebra, and their rank-one Omega modules."""

from __future__ import annotations

__version__ = "0.1.0"

from ._backend import BACKEND
from .classify import (
    GeneratorAssignment,
    InvariantTuple,
    check_rank1_consistency,
    extract_parameters,
    isomorphic,
    perturb_assignment,
    solve_sigma_invariant,
    submodule_closure_check,
    submodule_membership,
)
from .errors import (
    AxisError,
    DimensionError,
    DivzeroError,
    ExcludedExponentError,
    MembershipError,
    NotRank1Error,
    PreconditionError,
    UnreachableError,
)
from .omega import (
    ModuleSpec,
    act_general,
    act_sbar,
    act_stilde,
    act_w,
    check_module_axiom,
    closed_form_dij,
    closed_form_lr,
    generator_recursion,
    restriction_compare,
    twisted_action_identity,
)
from .poly import LaurentPoly, Poly, evaluate, partial_degree, sigma_shift, translate
from .reduction import Trace, simple_reduce
from .scalar import ONE, ZERO, Scalar, as_scalar
from .serialize import ParseError
from .vfield import (
    AlgebraTag,
    VectorField,
    basis_element,
    bracket,
    cartan,
    check_generation_identities,
    div,
    div_classical,
    divergence_cocycle_probe,
    is_member,
)
from .vlike import VLElement, phi, phi_ij, vl_bracket

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
