"""Holomorphic Lagrangian fibrations of toric hyperkähler quotients.

Exact combinatorics of the residual complex moment map (walls, regular
values, shrinking strata, extended core) plus numerical certification of the
Lagrangian and free-action properties on sampled fibers.
"""

__version__ = "0.1.0"

from .arrangement import (
    active_walls,
    chambers,
    fixed_points,
    hyperplanes,
    is_regular_value,
    solution_space,
    strata,
    walls,
)
from .fiber_classifier import classify_fiber, extended_core, isotropy_rank
from .hypertoric_data import HypertoricData, build, check_parameter_regularity
from .numeric_verifier import (
    sample_fiber,
    verify_generic_fiber,
    verify_lagrangian,
    verify_shrinking,
)

__all__ = [
    "HypertoricData",
    "build",
    "check_parameter_regularity",
    "solution_space",
    "hyperplanes",
    "walls",
    "is_regular_value",
    "active_walls",
    "strata",
    "chambers",
    "fixed_points",
    "classify_fiber",
    "extended_core",
    "isotropy_rank",
    "sample_fiber",
    "verify_lagrangian",
    "verify_generic_fiber",
    "verify_shrinking",
]
