"""Exact recoupling coefficients and the small-spin 12j asymptotics.

Exact 3j/6j/9j/12j symbols with half-integer spins, tetrahedron geometry,
Wigner small-d matrices, Ponzano-Regge phases and the asymptotic formula
for the 12j symbol of the first kind with one small spin, plus a sweep
harness comparing the two.
"""

from .asymptotics import Asym12jResult, PRPhase, RegionError, asym12j, pr_6j, pr_phase
from .dmatrix import d_matrix, little_d
from .exact import (
    ExactValue,
    Symbol12Args,
    special_A8,
    special_A9,
    wigner3j,
    wigner6j,
    wigner9j,
    wigner12j_first,
)
from .geometry import (
    CausticError,
    EdgeSet,
    ForbiddenError,
    Orientation,
    butterfly_config,
    classically_allowed,
    embed_tetrahedron,
)
from .spin import Spin, parse_spin

__version__ = "0.1.0"

__all__ = [
    "Asym12jResult",
    "CausticError",
    "EdgeSet",
    "ExactValue",
    "ForbiddenError",
    "Orientation",
    "PRPhase",
    "RegionError",
    "Spin",
    "Symbol12Args",
    "asym12j",
    "butterfly_config",
    "classically_allowed",
    "d_matrix",
    "embed_tetrahedron",
    "little_d",
    "parse_spin",
    "pr_6j",
    "pr_phase",
    "special_A8",
    "special_A9",
    "wigner3j",
    "wigner6j",
    "wigner9j",
    "wigner12j_first",
]
