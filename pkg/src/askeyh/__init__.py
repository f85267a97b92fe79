"""Orthogonal polynomial sequences from generalized first-order difference operators.

The sequences (g, h, x) define u_n through gamma u_n + phi u_n = h_n u_n in a
Newton basis; for parameters in one of three recurrence classes the u_n are
orthogonal and their three-term recurrence coefficients have closed forms.
"""
from .class_forms import ClosedFormRecurrence, closed_recurrence, moment_factor, ode_residual_h1
from .core import (
    HCollisionError,
    OperatorSpec,
    Route,
    build_u,
    c_inverse,
    c_matrix,
    eigen_residual,
    extract_recurrence,
    l_build,
    solve_g34,
    three_term_polynomials,
    verify_l_recurrences,
)
from .moments import discrete_weights, generalized_moments, hankel_check, standard_moments
from .numerics import EXACT, FLOAT, Backend, Field, ToleranceContext, format_scalar, parse_scalar
from .presets import get_family, instantiate, list_families
from .sequences import ClassSpec, ClassTag, SequenceParams, g_sequence, h_x_sequence, validate_spectrum
from .suite import run_suite

__all__ = [
    "Backend", "ClassSpec", "ClassTag", "ClosedFormRecurrence", "EXACT", "FLOAT", "Field",
    "HCollisionError", "OperatorSpec", "Route", "SequenceParams", "ToleranceContext",
    "build_u", "c_inverse", "c_matrix", "closed_recurrence", "discrete_weights",
    "eigen_residual", "extract_recurrence", "format_scalar", "g_sequence",
    "generalized_moments", "get_family", "h_x_sequence", "hankel_check", "instantiate",
    "l_build", "list_families", "moment_factor", "ode_residual_h1", "parse_scalar",
    "run_suite", "solve_g34", "standard_moments", "three_term_polynomials",
    "validate_spectrum", "verify_l_recurrences",
]
