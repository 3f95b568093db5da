"""Ponzano-Regge phases and the asymptotic 12j formula with one small spin.

The 12j symbol with a small spin ``s`` (slot s2) is approximated by two
interfering Ponzano-Regge waves, one per orientation class of the two
tetrahedra sharing the (J3, J346, J135) face::

    {12j} ~ P / (4 pi sqrt|V135 V346| sqrt([j1][j4]))
            * [ d^s_{nu mu}(theta1) cos(S1 + S2 + mu phi1_1 + nu phi4_1 + pi/2)
                + (-1)^{2s} d^s_{nu mu}(theta2) cos(S1 - S2 - mu phi1_2 + nu phi4_2) ]

    P = (-1)^(j1 + 2 j3 + j4 + j346 + j135 + j5 + j6 + s + mu)
    mu = j12 - j1,  nu = j24 - j4

For half-integer ``s`` the angles ``phi1`` and ``phi4`` matter modulo 4 pi
jointly, not just modulo 2 pi: shifting one of them by 2 pi flips the sign
of its cosine.  They are therefore read off an SU(2) element, the spinor
transport from the J1 frame to the J4 frame around the shared J3 edge,
rather than from unsigned dihedral angles.  ``|phi|`` reduced to [0, pi]
agrees with the usual ``pi - arccos`` plane-angle formulas and ``theta`` is
the angle between J1 and J4 in the corresponding vector configuration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dmatrix import little_d
from .exact import Symbol12Args, _as_args
from .geometry import (
    CAUSTIC_TOL,
    EDGE_PAIRS,
    NEAR_CAUSTIC,
    CausticError,
    EdgeSet,
    ForbiddenError,
    TetraGeometry,
    classically_allowed,
    embed_tetrahedron,
    exterior_dihedrals,
)
from .spin import as_twice, format_twice

__all__ = [
    "RegionError",
    "PRPhase",
    "Asym12jResult",
    "pr_phase",
    "pr_6j",
    "sixj_edges",
    "edge_set",
    "asym12j",
]


class RegionError(ValueError):
    """The semiclassical formula does not apply (forbidden or caustic).

    ``margins`` holds the dimensionless margins of the (346, 135)
    tetrahedra; ``caustic`` distinguishes flat from forbidden geometry.
    """

    def __init__(self, msg, margins=(math.nan, math.nan), caustic=False):
        super().__init__(msg)
        self.margins = tuple(margins)
        self.caustic = caustic


@dataclass(frozen=True)
class PRPhase:
    """``S = sum_e J_e psi_e`` over the six edges of one tetrahedron."""

    S: float
    terms: tuple  # ((J, psi), ...) in EDGE_PAIRS order

    def __float__(self) -> float:
        return self.S


def _length(spin) -> float:
    return (as_twice(spin) + 1) / 2


def pr_phase(t: TetraGeometry, spins: dict) -> PRPhase:
    """Ponzano-Regge phase of an embedded tetrahedron.

    ``spins`` maps each vertex pair to the spin on that edge; the lengths
    used are ``j + 1/2`` whatever lengths ``t`` was built from.
    """
    if t.caustic:
        raise CausticError("Ponzano-Regge phase of a flat tetrahedron")
    psi = exterior_dihedrals(t)
    terms = tuple((_length(spins[e]), psi[e]) for e in EDGE_PAIRS)
    return PRPhase(math.fsum(J * p for J, p in terms), terms)


def sixj_edges(a, b, c, d, e, f) -> dict:
    """Tetrahedron edges for {a b c; d e f}; columns are opposite edges."""
    return {(0, 1): a, (0, 2): b, (1, 2): c, (2, 3): d, (1, 3): e, (0, 3): f}


def pr_6j(a, b, c, d, e, f) -> float:
    """Ponzano-Regge approximation cos(S + pi/4) / sqrt(2 pi |V|).

    ``V`` is the triple product of the edge vectors at one vertex (six
    times the volume) and ``S`` the phase of :func:`pr_phase`.
    """
    spins = sixj_edges(a, b, c, d, e, f)
    lengths = {k: _length(v) for k, v in spins.items()}
    try:
        t = embed_tetrahedron(lengths)
    except ForbiddenError as exc:
        raise RegionError(f"6j outside the classical region: {exc}") from exc
    if t.caustic:
        raise RegionError("6j on the caustic", margins=(t.margin, t.margin), caustic=True)
    S = pr_phase(t, spins).S
    return math.cos(S + math.pi / 4) / math.sqrt(2 * math.pi * abs(t.V))


@dataclass(frozen=True)
class Asym12jResult:
    value: float
    term1: float
    term2: float
    prefactor: float
    theta1: float
    theta2: float
    phi1_1: float
    phi1_2: float
    phi4_1: float
    phi4_2: float
    S1: float
    S2: float
    margin1: float  # 346 tetrahedron
    margin2: float  # 135 tetrahedron
    near_caustic: bool

    def __float__(self) -> float:
        return self.value


def edge_set(p: Symbol12Args) -> EdgeSet:
    L = lambda t: (t + 1) / 2  # noqa: E731
    return EdgeSet(L(p.j1), L(p.j3), L(p.j4), L(p.j5), L(p.j6),
                   L(p.j34), L(p.j346), L(p.j13), L(p.j135))


def _edge_angle(B: float, C: float, A: float) -> float:
    """Angle opposite-complement in a triangle: arccos((B^2+C^2-A^2)/2BC)."""
    c = (B * B + C * C - A * A) / (2 * B * C)
    return math.acos(max(-1.0, min(1.0, c)))


def _su2_y(beta: float) -> np.ndarray:
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _su2_z(alpha: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * alpha), cmath.exp(0.5j * alpha)])


def _zyz(U: np.ndarray) -> tuple[float, float, float]:
    """Euler angles with U = Rz(a) Ry(b) Rz(g) in SU(2).

    (a, g) is fixed up to the lattice generated by (2pi, 2pi) and
    (2pi, -2pi); any member gives the same D^s matrix elements.
    """
    b = 2 * math.atan2(abs(U[1, 0]), abs(U[0, 0]))
    p = -2 * cmath.phase(U[0, 0]) if abs(U[0, 0]) > 1e-15 else 0.0  # a + g
    q = 2 * cmath.phase(U[1, 0]) if abs(U[1, 0]) > 1e-15 else 0.0  # a - g
    return (p + q) / 2, b, (p - q) / 2


def _wrap(x: float, period: float) -> float:
    """x shifted by a multiple of ``period`` into (-period/2, period/2]."""
    return x + period * math.floor((period / 2 - x) / period)


def _reduce(f1: float, f4: float) -> tuple[float, float]:
    """Bring f1 into (-pi, pi] and f4 into (-2pi, 2pi] by lattice moves."""
    g1 = _wrap(f1, 2 * math.pi)
    return g1, _wrap(f4 + (g1 - f1), 4 * math.pi)


def asym12j(args) -> Asym12jResult:
    """Asymptotic value of the 12j symbol with small spin in slot s2.

    ``args`` is a :class:`Symbol12Args`, a 12-sequence of spins or a
    mapping.  Raises ``ValueError`` when |mu| or |nu| exceeds s or a triad
    is broken, and :class:`RegionError` outside the classically allowed
    region of either tetrahedron.
    """
    p = _as_args(args)
    ts = p.s2
    tmu, tnu = p.j12 - p.j1, p.j24 - p.j4
    if abs(tmu) > ts or abs(tnu) > ts:
        raise ValueError(
            f"|mu| = {format_twice(abs(tmu))} and |nu| = {format_twice(abs(tnu))} "
            f"must not exceed s = {format_twice(ts)}"
        )
    if not p.admissible():
        raise ValueError(f"12j arguments break a triangle condition: {p}")

    E = edge_set(p)
    allowed, margins = classically_allowed(E)
    if not allowed:
        caustic = all(m > -CAUSTIC_TOL for m in margins)
        what = "caustic" if caustic else "classically forbidden"
        raise RegionError(
            f"{what}: margins (346, 135) = ({margins[0]:.3g}, {margins[1]:.3g})",
            margins, caustic,
        )

    t346 = embed_tetrahedron(E.tetra_346())
    t135 = embed_tetrahedron(E.tetra_135())
    lab346 = {(0, 1): p.j3, (0, 2): p.j346, (1, 2): p.j135, (0, 3): p.j34, (1, 3): p.j4, (2, 3): p.j6}
    lab135 = {(0, 1): p.j3, (0, 2): p.j346, (1, 2): p.j135, (0, 3): p.j1, (1, 3): p.j13, (2, 3): p.j5}
    tw = lambda d: {k: format_twice(v) for k, v in d.items()}  # noqa: E731
    ph1 = pr_phase(t346, tw(lab346))
    ph2 = pr_phase(t135, tw(lab135))
    S1, S2 = ph1.S, ph2.S
    psi346 = dict(zip(EDGE_PAIRS, (q for _, q in ph1.terms)))
    psi135 = dict(zip(EDGE_PAIRS, (q for _, q in ph2.terms)))
    psi3_a, psi4 = psi346[(0, 1)], psi346[(1, 3)]
    psi3_b, psi1 = psi135[(0, 1)], psi135[(0, 3)]

    # spinor transport J1 -> J3 -> J4; the rotation about J3 is by the sum
    # (opposite sides) or difference (same side) of the two dihedral angles
    th13 = _edge_angle(E.J1, E.J3, E.J13)
    th34 = _edge_angle(E.J4, E.J3, E.J34)
    angles = []
    for sgn in (1, -1):
        U = _su2_y(-th13) @ _su2_z(-(psi3_a + sgn * psi3_b + math.pi)) @ _su2_y(th34)
        a, beta, g = _zyz(U)
        f1, f4 = _reduce(sgn * psi1 - a - math.pi, psi4 - g)
        angles.append((beta, f1, f4))
    (th1, f11, f41), (th2, f12, f42) = angles
    # the second cosine is printed with -mu phi1; flipping phi1 and moving
    # phi4 by 2 pi produces the (-1)^{2s} that sits in front of it
    f12 = -f12
    f42 = _wrap(f42 + 2 * math.pi, 4 * math.pi)

    mu, nu = tmu / 2, tnu / 2
    sign2 = -1 if ts % 2 else 1
    term1 = little_d(ts / 2, tnu, tmu, th1) * math.cos(S1 + S2 + mu * f11 + nu * f41 + math.pi / 2)
    term2 = little_d(ts / 2, tnu, tmu, th2) * math.cos(S1 - S2 - mu * f12 + nu * f42)

    expo = p.j1 + 2 * p.j3 + p.j4 + p.j346 + p.j135 + p.j5 + p.j6 + ts + tmu
    phase = -1 if (expo // 2) % 2 else 1
    pref = phase / (4 * math.pi * math.sqrt(abs(t135.V * t346.V)) * math.sqrt((p.j1 + 1) * (p.j4 + 1)))
    value = pref * (term1 + sign2 * term2)
    return Asym12jResult(
        value=value, term1=term1, term2=term2, prefactor=pref,
        theta1=th1, theta2=th2, phi1_1=f11, phi1_2=f12, phi4_1=f41, phi4_2=f42,
        S1=S1, S2=S2, margin1=margins[0], margin2=margins[1],
        near_caustic=min(margins) < NEAR_CAUSTIC,
    )
