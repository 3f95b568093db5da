"""Tetrahedra from edge lengths and the two-tetrahedra vector configuration.

Conventions
-----------
A tetrahedron is given by its four vertices ``P0..P3``; edges are keyed by
vertex pairs ``(i, j)`` with ``i < j``.  The signed volume quantity used
throughout is the triple product of the three edge vectors leaving ``P0``,
which is six times the volume.

The butterfly configuration lives in one frame with the shared face
``(O, A, D)`` in the xz-plane::

    O = 0,  A = J3,  D = J3 + J4 + J6 = -(J1 + J5)
    C = J3 + J4            (apex of the 3-4-6 tetrahedron)
    Q = -J1                (apex of the 1-3-5 tetrahedron)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeometryError",
    "ForbiddenError",
    "CausticError",
    "CAUSTIC_TOL",
    "NEAR_CAUSTIC",
    "EDGE_PAIRS",
    "TetraGeometry",
    "EdgeSet",
    "Orientation",
    "VectorConfig",
    "triple_product",
    "gram_determinant",
    "tetra_margin",
    "embed_tetrahedron",
    "exterior_dihedrals",
    "solve_J4",
    "butterfly_config",
    "angles_theta_phi",
    "classically_allowed",
]

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# dimensionless margins below CAUSTIC_TOL are treated as flat
CAUSTIC_TOL = 1e-12
NEAR_CAUSTIC = 1e-3


class GeometryError(ValueError):
    pass


class ForbiddenError(GeometryError):
    """Edge lengths cannot be realised in Euclidean 3-space."""

    def __init__(self, msg, determinant=None):
        super().__init__(msg)
        self.determinant = determinant


class CausticError(GeometryError):
    """Configuration is degenerate (flat tetrahedron, collinear vectors)."""


def triple_product(a, b, c) -> float:
    """a . (b x c)"""
    return float(np.dot(a, np.cross(b, c)))


def _edge_lengths(edges) -> dict:
    out = {}
    for i, j in EDGE_PAIRS:
        if (i, j) in edges:
            v = edges[(i, j)]
        elif (j, i) in edges:
            v = edges[(j, i)]
        else:
            raise KeyError(f"missing edge {(i, j)}")
        v = float(v)
        if not v > 0:
            raise GeometryError(f"edge {(i, j)} has nonpositive length {v}")
        out[(i, j)] = v
    return out


def _gram(L) -> np.ndarray:
    """Gram matrix of the edge vectors P1-P0, P2-P0, P3-P0."""
    d = {k: v * v for k, v in L.items()}
    sq = [None, d[(0, 1)], d[(0, 2)], d[(0, 3)]]

    def dist2(i, j):
        return d[(min(i, j), max(i, j))]

    G = np.empty((3, 3))
    for a in range(1, 4):
        for b in range(1, 4):
            G[a - 1, b - 1] = sq[a] if a == b else 0.5 * (sq[a] + sq[b] - dist2(a, b))
    return G


def gram_determinant(edges) -> float:
    """det of the edge-vector Gram matrix, equal to (6 * volume)**2.

    This is the Cayley-Menger determinant up to the factor 288/36 = 8.
    """
    return float(np.linalg.det(_gram(_edge_lengths(edges))))


def tetra_margin(edges) -> float:
    """Scale-free caustic margin: Gram determinant over the product of edges.

    Both numerator and denominator scale as length**6.  The regular
    tetrahedron gives 1/2; flat tetrahedra give 0 and unrealisable edge sets
    are negative.
    """
    L = _edge_lengths(edges)
    return gram_determinant(L) / math.prod(L.values())


def _faces_ok(L) -> bool:
    for tri in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        a = L[(tri[0], tri[1])]
        b = L[(tri[0], tri[2])]
        c = L[(tri[1], tri[2])]
        tol = 1e-12 * (a + b + c)
        if a > b + c + tol or b > a + c + tol or c > a + b + tol:
            return False
    return True


@dataclass
class TetraGeometry:
    """An embedded tetrahedron.

    ``vertices`` is 4x3; ``V`` is the triple product of the edge vectors
    leaving vertex 0 (nonnegative in the canonical orientation).
    """

    lengths: dict
    vertices: np.ndarray
    V: float
    margin: float
    caustic: bool = False
    labels: dict = field(default_factory=dict)

    @property
    def edge_vectors(self) -> np.ndarray:
        return self.vertices[1:] - self.vertices[0]

    def distances(self) -> dict:
        P = self.vertices
        return {(i, j): float(np.linalg.norm(P[j] - P[i])) for i, j in EDGE_PAIRS}


def embed_tetrahedron(edges, labels=None) -> TetraGeometry:
    """Place a tetrahedron with the given six edge lengths.

    ``P0`` sits at the origin, ``P1`` on +z, ``P2`` in the xz-plane with
    x > 0 and ``P3`` on the y > 0 side, so ``V >= 0``.

    Raises :class:`ForbiddenError` when a face violates the triangle
    inequality or the Gram determinant is negative.  A determinant within
    tolerance of zero returns a flat geometry with ``caustic=True``.
    """
    L = _edge_lengths(edges)
    if not _faces_ok(L):
        raise ForbiddenError("a face violates the triangle inequality")
    G = _gram(L)
    det = float(np.linalg.det(G))
    margin = det / math.prod(L.values())
    if margin < -CAUSTIC_TOL:
        raise ForbiddenError(f"negative Gram determinant {det:.6g}", determinant=det)

    a = math.sqrt(G[0, 0])
    # P2: v.u = G01 -> vz, |v|^2 = G11
    vz = G[0, 1] / a
    vx = math.sqrt(max(G[1, 1] - vz * vz, 0.0))
    wz = G[0, 2] / a
    wx = (G[1, 2] - vz * wz) / vx if vx > 0 else 0.0
    wy2 = G[2, 2] - wz * wz - wx * wx
    caustic = abs(margin) <= CAUSTIC_TOL or vx == 0
    wy = 0.0 if caustic else math.sqrt(max(wy2, 0.0))
    P = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, a], [vx, 0.0, vz], [wx, wy, wz]])
    V = 0.0 if caustic else triple_product(P[1], P[2], P[3])
    return TetraGeometry(L, P, V, margin, caustic, dict(labels or {}))


def exterior_dihedrals(t: TetraGeometry) -> dict:
    """Exterior dihedral angle (pi minus the interior one) at each edge."""
    if t.caustic:
        raise CausticError("dihedral angles are undefined on a flat tetrahedron")
    P = t.vertices
    out = {}
    for i, j in EDGE_PAIRS:
        k, l = (n for n in range(4) if n not in (i, j))
        e = P[j] - P[i]
        e = e / np.linalg.norm(e)
        a = P[k] - P[i]
        b = P[l] - P[i]
        a = a - np.dot(a, e) * e
        b = b - np.dot(b, e) * e
        c = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
        out[(i, j)] = math.pi - math.acos(max(-1.0, min(1.0, c)))
    return out


# ---------------------------------------------------------------------------
# two tetrahedra sharing a face


@dataclass(frozen=True)
class EdgeSet:
    """Semiclassical lengths (j + 1/2) of the nine butterfly edges.

    ``J346`` doubles as the length of J1 + J5.
    """

    J1: float
    J3: float
    J4: float
    J5: float
    J6: float
    J34: float
    J346: float
    J13: float
    J135: float

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if not getattr(self, name) > 0:
                raise GeometryError(f"{name} must be positive")

    def scaled(self, k: float) -> "EdgeSet":
        return EdgeSet(*(k * getattr(self, n) for n in self.__dataclass_fields__))

    def tetra_346(self) -> dict:
        """Edges of the J3-J4-J6 tetrahedron on vertices (O, A, D, C)."""
        return {(0, 1): self.J3, (0, 2): self.J346, (1, 2): self.J135,
                (0, 3): self.J34, (1, 3): self.J4, (2, 3): self.J6}

    def tetra_135(self) -> dict:
        """Edges of the J1-J3-J5 tetrahedron on vertices (O, A, D, Q)."""
        return {(0, 1): self.J3, (0, 2): self.J346, (1, 2): self.J135,
                (0, 3): self.J1, (1, 3): self.J13, (2, 3): self.J5}


class Orientation(enum.Enum):
    OPPOSITE = "opposite"  # tetrahedra on opposite sides of the shared face
    SAME = "same"


@dataclass
class VectorConfig:
    J1: np.ndarray
    J3: np.ndarray
    J4: np.ndarray
    J5: np.ndarray
    J6: np.ndarray
    orientation: Orientation

    @property
    def J13(self):
        return self.J1 + self.J3

    @property
    def J34(self):
        return self.J3 + self.J4

    @property
    def J135(self):
        return self.J1 + self.J3 + self.J5

    @property
    def J346(self):
        return self.J3 + self.J4 + self.J6

    def vectors(self):
        return self.J1, self.J3, self.J4, self.J5, self.J6

    def rotated(self, R) -> "VectorConfig":
        R = np.asarray(R)
        return VectorConfig(*(R @ v for v in self.vectors()), self.orientation)


def solve_J4(J3vec, J135vec, J4: float, J34: float, J6: float, tol: float = 1e-12):
    """Both solutions of the dot-product conditions fixing ``J4``.

    ``J135vec`` here is ``J4 + J6`` (the shared edge opposite the origin),
    so the conditions read ``J4.J3 = (J34^2 - J4^2 - J3^2)/2`` and
    ``J4.J135 = (J4^2 + J135^2 - J6^2)/2``.  Returns ``(plus, minus)``, the
    branches with positive and negative component along ``J3 x J135``.
    """
    a = np.asarray(J3vec, dtype=float)
    b = np.asarray(J135vec, dtype=float)
    n = np.cross(a, b)
    nn = float(np.dot(n, n))
    if nn <= tol * tol * float(np.dot(a, a) * np.dot(b, b)):
        raise CausticError("J3 and J135 are parallel")
    r1 = 0.5 * (J34 * J34 - J4 * J4 - float(np.dot(a, a)))
    r2 = 0.5 * (J4 * J4 + float(np.dot(b, b)) - J6 * J6)
    g = np.array([[np.dot(a, a), np.dot(a, b)], [np.dot(a, b), np.dot(b, b)]])
    alpha, beta = np.linalg.solve(g, [r1, r2])
    inplane = alpha * a + beta * b
    gamma2 = (J4 * J4 - float(np.dot(inplane, inplane))) / nn
    scale = J4 * J4 / nn
    if gamma2 < -tol * scale:
        raise ForbiddenError(f"no real J4 (gamma^2 = {gamma2:.3g})", determinant=gamma2)
    if gamma2 <= tol * scale:
        raise CausticError("the two J4 solutions coincide")
    gamma = math.sqrt(gamma2)
    return inplane + gamma * n, inplane - gamma * n


def butterfly_config(edges: EdgeSet, orientation: Orientation) -> VectorConfig:
    """Vector configuration for one orientation class.

    The 1-3-5 tetrahedron is embedded first (J3 on +z, shared face in the
    xz-plane, apex on the +y side); J4 then comes from :func:`solve_J4`,
    choosing the branch whose apex lies on the requested side.
    """
    t2 = embed_tetrahedron(edges.tetra_135())
    if t2.caustic:
        raise CausticError("the J1-J3-J5 tetrahedron is flat")
    _, A, D, Q = t2.vertices
    sols = solve_J4(A, D - A, edges.J4, edges.J34, edges.J6)
    want_opposite = orientation is Orientation.OPPOSITE
    J4 = None
    for cand in sols:
        apex_y = (A + cand)[1]
        if (apex_y * Q[1] < 0) == want_opposite:
            J4 = cand
            break
    if J4 is None:  # pragma: no cover - both branches on one side cannot happen
        raise CausticError("could not separate orientation branches")
    C = A + J4
    return VectorConfig(J1=-Q, J3=A.copy(), J4=J4, J5=Q - D, J6=D - C, orientation=orientation)


def _angle(u, v) -> float:
    c = float(np.dot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(max(-1.0, min(1.0, c)))


def _plane_angle(axis, p, q, names) -> float:
    a = np.cross(axis, p)
    b = np.cross(axis, q)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    scale = np.linalg.norm(axis)
    if na <= 1e-12 * scale * np.linalg.norm(p):
        raise CausticError(f"{names[0]} is parallel to {names[1]}")
    if nb <= 1e-12 * scale * np.linalg.norm(q):
        raise CausticError(f"{names[0]} is parallel to {names[2]}")
    return math.pi - _angle(a, b)


def angles_theta_phi(cfg: VectorConfig) -> tuple[float, float, float]:
    """(theta, phi1, phi4) for one vector configuration.

    phi1 = pi - angle between J1 x J4 and J1 x J5,
    phi4 = pi - angle between J4 x J1 and J4 x J6,
    theta = angle between J1 and J4.
    """
    theta = _angle(cfg.J1, cfg.J4)
    phi1 = _plane_angle(cfg.J1, cfg.J4, cfg.J5, ("J1", "J4", "J5"))
    phi4 = _plane_angle(cfg.J4, cfg.J1, cfg.J6, ("J4", "J1", "J6"))
    return theta, phi1, phi4


def classically_allowed(edges: EdgeSet) -> tuple[bool, tuple[float, float]]:
    """Whether both tetrahedra embed, with their dimensionless margins.

    Margins are ``(346 tetrahedron, 135 tetrahedron)``.  A face that breaks
    the triangle inequality reports a margin of ``-inf``.
    """
    margins = []
    for e in (edges.tetra_346(), edges.tetra_135()):
        L = _edge_lengths(e)
        margins.append(tetra_margin(L) if _faces_ok(L) else -math.inf)
    allowed = all(m > CAUSTIC_TOL for m in margins)
    return allowed, (margins[0], margins[1])
