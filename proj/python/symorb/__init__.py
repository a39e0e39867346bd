"""Symmetric periodic orbits of perturbed power-law central forces.

Thin bindings over the C++ solver. A ``Problem`` is built from the same JSON
schema the ``symorb`` command line tool reads.
"""

from ._core import (
    BoundaryHypothesisFailure,
    BracketFailure,
    DomainExit,
    InvalidArgument,
    NoBoundedMotion,
    NonConvergence,
    Problem,
    SymorbError,
    apsidal_angle,
    apsidal_limit,
    circular_speed,
    linspace,
    miss,
    radial_accel_at_launch,
    sign_table,
    solve,
    sweep,
    zero_set_scan,
)

__all__ = [
    "BoundaryHypothesisFailure",
    "BracketFailure",
    "DomainExit",
    "InvalidArgument",
    "NoBoundedMotion",
    "NonConvergence",
    "Problem",
    "SymorbError",
    "apsidal_angle",
    "apsidal_limit",
    "circular_speed",
    "linspace",
    "miss",
    "radial_accel_at_launch",
    "sign_table",
    "solve",
    "sweep",
    "zero_set_scan",
]
