"""Identity suites used by ``validate`` and the tests.

Each check draws random admissible spins from a ``random.Random`` so runs
are reproducible from a seed.  Spins are handled as twice-values.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from .exact import (
    DEFAULT_DIGITS,
    ExactValue,
    Symbol12Args,
    _phase,
    _sixj_ok,
    _sum_of_sixj_products,
    _x_range,
    special_A8,
    special_A9,
    wigner3j,
    wigner6j,
    wigner12j_first,
)
from .asymptotics import pr_6j, pr_phase, sixj_edges
from .dmatrix import d_matrix
from .geometry import (
    CausticError,
    EdgeSet,
    ForbiddenError,
    Orientation,
    angles_theta_phi,
    butterfly_config,
    classically_allowed,
    embed_tetrahedron,
    solve_J4,
    triple_product,
)
from .spin import Spin

__all__ = [
    "SuiteResult",
    "agree",
    "random_triad_partner",
    "random_a8_args",
    "random_a9_args",
    "check_a8",
    "check_a9",
    "sixj_by_contraction",
    "check_orthogonality",
    "check_pentagon",
    "random_edge_set",
    "check_geometry",
    "sixj_symmetries",
    "random_sixj",
    "check_flat_inputs",
    "check_contraction",
    "pr_calibration",
    "check_dmatrix",
]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, good: bool, detail=None) -> None:
        if good:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(detail)

    def __str__(self) -> str:
        state = "PASS" if self.ok else "FAIL"
        return f"{state} {self.name}: {self.passed} passed, {self.failed} failed"


def agree(x: ExactValue, y: ExactValue, sig: int = 25) -> bool:
    """Exact equality, or agreement to ``sig`` significant digits."""
    if x.is_exact and y.is_exact:
        return x == y
    dx, dy = x.to_decimal(), y.to_decimal()
    with localcontext() as ctx:
        ctx.prec = max(x.digits, y.digits) + 5
        scale = max(abs(dx), abs(dy))
        if scale == 0:
            return True
        return abs(dx - dy) <= scale * Decimal(10) ** (-sig)


def random_triad_partner(rng: random.Random, ta: int, tb: int) -> int:
    """A twice-value c with (a, b, c) a valid triad."""
    lo, hi = abs(ta - tb), ta + tb
    return lo + 2 * rng.randint(0, (hi - lo) // 2)


def _spin(rng, tmax):
    return rng.randint(0, tmax)


def random_a8_args(rng: random.Random, jmax: int = 30, tries: int = 10_000) -> Symbol12Args:
    """Admissible 12j arguments with s2 = 0, all spins <= jmax."""
    tmax = 2 * jmax
    for _ in range(tries):
        t1, t3, t4, t6 = (_spin(rng, tmax) for _ in range(4))
        t34 = random_triad_partner(rng, t3, t4)
        t346 = random_triad_partner(rng, t34, t6)
        t13 = random_triad_partner(rng, t1, t3)
        t135 = random_triad_partner(rng, t4, t6)
        t5 = random_triad_partner(rng, t1, t346)
        p = Symbol12Args(t1, 0, t1, t346, t3, t4, t34, t135, t13, t4, t5, t6)
        if max(p.as_tuple()) <= tmax and p.admissible():
            return p
    raise RuntimeError("could not draw an admissible tuple")


def random_a9_args(rng: random.Random, jmax: int = 30, tries: int = 10_000) -> Symbol12Args:
    """Admissible 12j arguments with j5 = 0, all spins <= jmax."""
    tmax = 2 * jmax
    for _ in range(tries):
        t1, ts, t3, t4, t6 = (_spin(rng, tmax) for _ in range(5))
        t12 = random_triad_partner(rng, t1, ts)
        t34 = random_triad_partner(rng, t3, t4)
        t13 = random_triad_partner(rng, t1, t3)
        t24 = random_triad_partner(rng, ts, t4)
        p = Symbol12Args(t1, ts, t12, t12, t3, t4, t34, t13, t13, t24, 0, t6)
        if max(p.as_tuple()) <= tmax and p.admissible():
            return p
    raise RuntimeError("could not draw an admissible tuple")


def check_a8(rng: random.Random, n: int, jmax: int = 30, sig: int = 25,
             digits: int = DEFAULT_DIGITS) -> SuiteResult:
    res = SuiteResult("A8 identity (s2 = 0)")
    for _ in range(n):
        p = random_a8_args(rng, jmax)
        lhs = wigner12j_first(p, digits)
        rhs = special_A8(p, digits)
        res.record(agree(lhs, rhs, sig), str(p))
    return res


def check_a9(rng: random.Random, n: int, jmax: int = 30, sig: int = 25,
             digits: int = DEFAULT_DIGITS) -> SuiteResult:
    res = SuiteResult("A9 identity (j5 = 0)")
    for _ in range(n):
        p = random_a9_args(rng, jmax)
        lhs = wigner12j_first(p, digits)
        rhs = special_A9(p, digits)
        res.record(agree(lhs, rhs, sig), str(p))
    return res


# ---------------------------------------------------------------------------
# 6j from four 3j symbols


@lru_cache(maxsize=None)
def _w3_dec(t1, t2, t3, m1, m2, m3, digits):
    return wigner3j(Spin(t1), Spin(t2), Spin(t3), m1, m2, m3, digits).to_decimal(digits + 10)


def sixj_by_contraction(ta, tb, tc, td, te, tf, digits: int = DEFAULT_DIGITS) -> Decimal:
    """{a b c; d e f} as a sum over projections of four 3j symbols.

    sum (-1)^{sum (j - m)} (a b c; -ma -mb -mc)(a e f; ma -me mf)
                          (d b f; md mb -mf)(d e c; -md me mc)

    summed over all six projections; three of them are fixed by the
    others through the zero-sum rule.
    """
    total = Decimal(0)
    if not _sixj_ok(ta, tb, tc, td, te, tf):
        return total
    with localcontext() as ctx:
        ctx.prec = digits + 10
        for ma in range(-ta, ta + 1, 2):
            for mb in range(-tb, tb + 1, 2):
                mc = -ma - mb
                if abs(mc) > tc:
                    continue
                for me in range(-te, te + 1, 2):
                    mf = me - ma
                    if abs(mf) > tf:
                        continue
                    md = mf - mb
                    if abs(md) > td:
                        continue
                    w = _w3_dec(ta, tb, tc, -ma, -mb, -mc, digits)
                    if not w:
                        continue
                    w *= _w3_dec(ta, te, tf, ma, -me, mf, digits)
                    if not w:
                        continue
                    w *= _w3_dec(td, tb, tf, md, mb, -mf, digits)
                    w *= _w3_dec(td, te, tc, -md, me, mc, digits)
                    expo = (ta + tb + tc + td + te + tf) - (ma + mb + mc + md + me + mf)
                    total += w if _phase(expo) > 0 else -w
        ctx.prec = digits
        return +total


def sixj_symmetries(t):
    """All 24 argument orders equal for a 6j (twice-value 6-tuple)."""
    a, b, c, d, e, f = t
    cols = [(a, d), (b, e), (c, f)]
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    out = []
    for pc in perms:
        c0, c1, c2 = (cols[i] for i in pc)
        # swap upper and lower in any two columns (or none)
        for flip in ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            cs = [col[::-1] if fl else col for col, fl in zip((c0, c1, c2), flip)]
            out.append((cs[0][0], cs[1][0], cs[2][0], cs[0][1], cs[1][1], cs[2][1]))
    return out


def random_sixj(rng: random.Random, jmax: int) -> tuple:
    """An admissible 6j as a twice-value tuple, spins <= jmax."""
    tmax = 2 * jmax
    while True:
        ta, tb = rng.randint(0, tmax), rng.randint(0, tmax)
        tc = random_triad_partner(rng, ta, tb)
        td = rng.randint(0, tmax)
        te = random_triad_partner(rng, td, tc)
        lo = max(abs(ta - te), abs(td - tb))
        hi = min(ta + te, td + tb)
        if (ta + te + lo) % 2:
            lo += 1
        if lo > hi or (td + tb + lo) % 2:
            continue
        tf = lo + 2 * rng.randint(0, (hi - lo) // 2)
        if max(tc, te, tf) <= tmax:
            return ta, tb, tc, td, te, tf


def check_orthogonality(rng: random.Random, n: int, jmax: int = 6) -> SuiteResult:
    """sum_x [x][f] {a b x; c d f}{a b x; c d g} = delta_fg, exactly."""
    res = SuiteResult("6j orthogonality")
    tmax = 2 * jmax
    for _ in range(n):
        while True:
            ta, tb, tc, td = (rng.randint(0, tmax) for _ in range(4))
            fs = [tf for tf in _x_range((ta, td), (tc, tb)) if tf <= tmax]
            xs = list(_x_range((ta, tb), (tc, td)))
            if fs and xs:
                break
        tf, tg = rng.choice(fs), rng.choice(fs)
        terms = [((tx + 1) * (tf + 1), [(ta, tb, tx, tc, td, tf), (ta, tb, tx, tc, td, tg)])
                 for tx in xs]
        val = _sum_of_sixj_products(terms, DEFAULT_DIGITS)
        want = ExactValue.surd(1 if tf == tg else 0)
        res.record(val == want, (ta, tb, tc, td, tf, tg))
    return res


def check_pentagon(rng: random.Random, n: int, jmax: int = 6) -> SuiteResult:
    """Biedenharn-Elliott identity

    sum_x (-1)^{S + x} [x] {a b x; c d p}{c d x; e f q}{e f x; b a r}
        = {p q r; e a d}{p q r; f b c},   S = a+b+c+d+e+f+p+q+r.
    """
    res = SuiteResult("Biedenharn-Elliott pentagon")
    tmax = 2 * jmax
    done = 0
    while done < n:
        ta, tb, tc, td, te, tf = (rng.randint(0, tmax) for _ in range(6))
        ps = [t for t in _x_range((ta, td), (tc, tb)) if t <= tmax]
        qs = [t for t in _x_range((tc, tf), (te, td)) if t <= tmax]
        rs = [t for t in _x_range((te, ta), (tb, tf)) if t <= tmax]
        if not (ps and qs and rs):
            continue
        tp, tq, tr = rng.choice(ps), rng.choice(qs), rng.choice(rs)
        S = ta + tb + tc + td + te + tf + tp + tq + tr
        terms = []
        for tx in _x_range((ta, tb), (tc, td), (te, tf)):
            if (S + tx) % 2:
                continue
            terms.append(((tx + 1) * _phase(S + tx),
                          [(ta, tb, tx, tc, td, tp), (tc, td, tx, te, tf, tq), (te, tf, tx, tb, ta, tr)]))
        if not terms:
            continue
        lhs = _sum_of_sixj_products(terms, DEFAULT_DIGITS)
        sp = lambda *t: [Spin(x) for x in t]  # noqa: E731
        rhs = wigner6j(*sp(tp, tq, tr, te, ta, td)) * wigner6j(*sp(tp, tq, tr, tf, tb, tc))
        res.record(agree(lhs, rhs, 40), (ta, tb, tc, td, te, tf, tp, tq, tr))
        done += 1
    return res


# ---------------------------------------------------------------------------
# geometry


def random_edge_set(rng: random.Random, scale: float = 50.0, tries: int = 10_000) -> EdgeSet:
    """Edge lengths of a classically allowed butterfly, from random vectors."""
    for _ in range(tries):
        v = [np.array([rng.gauss(0, 1) for _ in range(3)]) * scale for _ in range(4)]
        J1, J3, J4, J6 = v
        J5 = -(J1 + J3 + J4 + J6)
        n = np.linalg.norm
        E = EdgeSet(n(J1), n(J3), n(J4), n(J5), n(J6), n(J3 + J4), n(J3 + J4 + J6),
                    n(J1 + J3), n(J1 + J3 + J5))
        ok, margins = classically_allowed(E)
        if ok and min(margins) > 1e-3:
            return E
    raise RuntimeError("could not draw an allowed edge set")


def _random_rotation(rng):
    q = np.array([rng.gauss(0, 1) for _ in range(4)])
    w, x, y, z = q / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def _config_ok(E: EdgeSet, cfg, tol: float) -> bool:
    n = np.linalg.norm
    J1, J3, J4, J5, J6 = cfg.vectors()
    scale = max(E.J1, E.J3, E.J4, E.J5, E.J6)
    checks = [
        n(J1 + J3 + J4 + J5 + J6) <= tol * scale,
        abs(n(J1) - E.J1) <= tol * scale,
        abs(n(J3) - E.J3) <= tol * scale,
        abs(n(J4) - E.J4) <= tol * scale,
        abs(n(J5) - E.J5) <= tol * scale,
        abs(n(J6) - E.J6) <= tol * scale,
        abs(n(J3 + J4) - E.J34) <= tol * scale,
        abs(n(J3 + J4 + J6) - E.J346) <= tol * scale,
        abs(n(J1 + J3) - E.J13) <= tol * scale,
        abs(n(J1 + J3 + J5) - E.J135) <= tol * scale,
        # shared face (J3, J346, J135) closes: J3 + (J4 + J6) = J346
        abs(triple_product(J3, J3 + J4 + J6, J1 + J3 + J5)) <= tol * scale ** 3,
    ]
    return all(checks)


def check_geometry(rng: random.Random, n: int, tol: float = 1e-10) -> SuiteResult:
    """Closure, lengths, coplanar shared face, rotation invariance, mirror branches."""
    res = SuiteResult("butterfly geometry invariants")
    for _ in range(n):
        E = random_edge_set(rng, scale=rng.uniform(5, 100))
        good = True
        try:
            for o in (Orientation.OPPOSITE, Orientation.SAME):
                cfg = butterfly_config(E, o)
                good &= _config_ok(E, cfg, tol)
                a0 = angles_theta_phi(cfg)
                R = _random_rotation(rng)
                a1 = angles_theta_phi(cfg.rotated(R))
                good &= all(abs(x - y) <= 1e-9 for x, y in zip(a0, a1))
            t = embed_tetrahedron(E.tetra_135())
            _, A, D, _ = t.vertices
            p, m = solve_J4(A, D - A, E.J4, E.J34, E.J6)
            nrm = np.cross(A, D - A)
            nrm = nrm / np.linalg.norm(nrm)
            mirror = p - 2 * np.dot(p, nrm) * nrm
            good &= np.linalg.norm(mirror - m) <= tol * E.J4
            good &= np.dot(p, nrm) > 0 > np.dot(m, nrm)
        except (CausticError, ForbiddenError) as exc:
            good = False
            E = (E, exc)
        res.record(bool(good), E)
    return res


def check_flat_inputs(rng: random.Random, n: int) -> SuiteResult:
    """Coplanar butterflies must be flagged caustic, with finite margins."""
    res = SuiteResult("flat inputs flagged caustic")
    for _ in range(n):
        scale = rng.uniform(5, 100)
        v = [np.array([rng.gauss(0, 1), rng.gauss(0, 1), 0.0]) * scale for _ in range(4)]
        J1, J3, J4, J6 = v
        J5 = -(J1 + J3 + J4 + J6)
        nrm = np.linalg.norm
        E = EdgeSet(nrm(J1), nrm(J3), nrm(J4), nrm(J5), nrm(J6), nrm(J3 + J4),
                    nrm(J3 + J4 + J6), nrm(J1 + J3), nrm(J1 + J3 + J5))
        allowed, margins = classically_allowed(E)
        good = not allowed and all(math.isfinite(m) and abs(m) <= 1e-9 for m in margins)
        for tet in (E.tetra_346(), E.tetra_135()):
            try:
                t = embed_tetrahedron(tet)
            except ForbiddenError:
                # roundoff may push a flat determinant just below zero
                continue
            good &= t.caustic and bool(np.all(np.isfinite(t.vertices))) and t.V == 0.0
        res.record(bool(good), (E, margins))
    return res


def check_contraction(jmax: int = 4, digits: int = DEFAULT_DIGITS, sig: int = 40) -> SuiteResult:
    """Racah 6j against the four-3j contraction on every admissible tuple."""
    res = SuiteResult(f"6j Racah sum vs 3j contraction (spins <= {jmax})")
    tmax = 2 * jmax
    for t in itertools.product(range(tmax + 1), repeat=6):
        if not _sixj_ok(*t):
            continue
        racah = wigner6j(*(Spin(x) for x in t), digits=digits)
        brute = sixj_by_contraction(*t, digits=digits)
        if racah.is_zero():
            # the 3j sum cancels to roundoff; ask for sig digits absolutely
            good = abs(brute) <= Decimal(10) ** (-sig)
        else:
            good = agree(racah, ExactValue.approx(brute, digits), sig)
        res.record(good, t)
    return res


# ---------------------------------------------------------------------------
# Ponzano-Regge calibration


def pr_calibration(j: int, trim: float = 0.1) -> tuple[float, int, int]:
    """Median relative error of :func:`pr_6j` on the family {j j j; j j x}.

    x runs over every integer value whose tetrahedron is classically
    allowed.  The ``trim`` fraction of points closest to an oscillation node
    (smallest |cos(S + pi/4)|) is dropped, and likewise the fraction closest
    to the caustic (smallest margin).  Returns (median, points kept, points
    in the allowed range).
    """
    pts = []
    for x in range(0, 2 * j + 1):
        spins = [Spin(2 * j)] * 5 + [Spin(2 * x)]
        edges = sixj_edges(*spins)
        try:
            t = embed_tetrahedron({k: v.length for k, v in edges.items()})
        except ForbiddenError:
            continue
        if t.caustic:
            continue
        approx = pr_6j(*spins)
        exact = float(wigner6j(*spins))
        S = pr_phase(t, edges).S
        rel = abs(approx - exact) / abs(exact) if exact else math.inf
        pts.append((rel, abs(math.cos(S + math.pi / 4)), t.margin))
    n = len(pts)
    k = math.ceil(trim * n)
    near_node = sorted(range(n), key=lambda i: pts[i][1])[:k]
    near_caustic = sorted(range(n), key=lambda i: pts[i][2])[:k]
    drop = set(near_node) | set(near_caustic)
    kept = [pts[i][0] for i in range(n) if i not in drop]
    return statistics.median(kept), len(kept), n


# ---------------------------------------------------------------------------
# d-matrix


def check_dmatrix(smax: float = 5, n_theta: int = 50, tol: float = 1e-10) -> SuiteResult:
    """Orthogonality, index symmetry and composition on a theta grid.

    Composition d(t1) d(t2) = d(t1 + t2) is checked on every grid pair with
    t1 + t2 <= pi.
    """
    res = SuiteResult(f"d-matrix properties (s <= {smax})")
    grid = np.linspace(0.0, math.pi, n_theta)
    for ts in range(0, int(2 * smax) + 1):
        s = ts / 2
        mats = [d_matrix(s, th) for th in grid]
        idx = list(range(ts, -ts - 1, -2))
        sign = np.array([[-1 if ((n - m) // 2) % 2 else 1 for m in idx] for n in idx])
        for th, d in zip(grid, mats):
            res.record(np.abs(d @ d.T - np.eye(ts + 1)).max() <= tol, ("orthogonality", s, th))
            res.record(np.abs(d - sign * d.T).max() <= tol, ("symmetry", s, th))
        for i, t1 in enumerate(grid):
            for j, t2 in enumerate(grid):
                if t1 + t2 <= math.pi:
                    err = np.abs(mats[i] @ mats[j] - d_matrix(s, t1 + t2)).max()
                    res.record(err <= tol, ("composition", s, t1, t2))
    return res
