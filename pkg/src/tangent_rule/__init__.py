"""Limit-free symbolic differentiation built on the double-root tangency criterion."""

from .analysis import (
    Corner,
    Differentiable,
    DomainBoundary,
    OutsideDomain,
    Tolerances,
    VerticalTangent,
    check_circle_orthogonality,
    check_exp_tangency,
    diagnose,
    fd_oracle,
    one_sided_slopes,
    remainder_profile,
)
from .expr import TangentLine, canonicalize, equiv, eval_exact, eval_float
from .parser import parse, unparse
from .poly import Polynomial, deflate, derivative_poly, is_tangent, tangent_slope
from .rules import DerivationTrace, RuleId, derive_base_table, derivative, differentiate, inverse_rule

__all__ = [
    "Corner", "Differentiable", "DomainBoundary", "OutsideDomain", "Tolerances", "VerticalTangent",
    "check_circle_orthogonality", "check_exp_tangency", "diagnose", "fd_oracle", "one_sided_slopes",
    "remainder_profile", "TangentLine", "canonicalize", "equiv", "eval_exact", "eval_float", "parse",
    "unparse", "Polynomial", "deflate", "derivative_poly", "is_tangent", "tangent_slope",
    "DerivationTrace", "RuleId", "derive_base_table", "derivative", "differentiate", "inverse_rule",
]
