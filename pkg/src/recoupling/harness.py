"""Sweeps of the exact 12j against its asymptotic form.

A sweep holds eleven spins fixed and steps j5 through its selection-rule
range.  Each row carries the exact value as a decimal string, the
asymptotic value where both tetrahedra are classically allowed, and the
caustic margins.  Rows are emitted as CSV and optionally drawn as an SVG
with the exact values as sticks and dots and the asymptotic curve as a line.
"""

from __future__ import annotations

import csv
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from .asymptotics import RegionError, asym12j
from .exact import DEFAULT_DIGITS, Symbol12Args, wigner12j_first
from .geometry import NEAR_CAUSTIC
from .identities import (
    check_a8,
    check_a9,
    check_contraction,
    check_flat_inputs,
    check_geometry,
    check_orthogonality,
    check_pentagon,
)
from .spin import _triangle_t, format_twice, parse_spin

__all__ = [
    "CSV_HEADER",
    "FIXED_KEYS",
    "FIG6",
    "FIG7",
    "ConfigError",
    "EmptyRangeError",
    "SweepConfig",
    "SweepRow",
    "SweepMetrics",
    "ValidationReport",
    "parse_config",
    "load_config",
    "j5_range",
    "run_sweep",
    "error_metrics",
    "emit_csv",
    "read_csv",
    "emit_plot",
    "validate",
]

CSV_HEADER = ("twice_j5", "exact", "asym", "abs_err", "rel_err", "allowed",
              "margin1", "margin2", "near_caustic")

FIXED_KEYS = ("j1", "s2", "j12", "j346", "j3", "j4", "j34", "j135", "j13", "j24", "j6")
_OPTION_KEYS = ("j5_min", "j5_max", "margin", "precision", "workers")


class ConfigError(ValueError):
    """Malformed sweep configuration."""


class EmptyRangeError(ValueError):
    """No admissible j5 for the fixed spins."""


@dataclass(frozen=True)
class SweepConfig:
    """Fixed spins (twice-values) and sweep options.

    ``j5_min``/``j5_max`` are twice-values or ``None`` for the full
    selection-rule range.  ``margin`` is the caustic margin below which
    allowed rows are flagged and left out of the metrics.
    """

    fixed: dict
    j5_min: int | None = None
    j5_max: int | None = None
    margin: float = NEAR_CAUSTIC
    precision: int = DEFAULT_DIGITS
    workers: int = 1
    out: Path | None = None
    plot: Path | None = None

    def __post_init__(self):
        missing = [k for k in FIXED_KEYS if k not in self.fixed]
        if missing:
            raise ConfigError(f"missing spins: {', '.join(missing)}")
        extra = set(self.fixed) - set(FIXED_KEYS)
        if extra:
            raise ConfigError(f"unknown spins: {', '.join(sorted(extra))}")
        for k, v in self.fixed.items():
            if not isinstance(v, int) or v < 0:
                raise ConfigError(f"{k} must be a nonnegative twice-value, got {v!r}")
        if not (self.margin >= 0):
            raise ConfigError(f"margin must be >= 0, got {self.margin}")
        if self.precision < 20:
            raise ConfigError(f"precision must be at least 20 digits, got {self.precision}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_spins(cls, spins: dict, **kw) -> "SweepConfig":
        """Fixed spins given as ``"n"``/``"n/2"`` strings."""
        return cls({k: parse_spin(str(v)) for k, v in spins.items()}, **kw)

    def args(self, twice_j5: int) -> Symbol12Args:
        return Symbol12Args(j5=twice_j5, **self.fixed)


FIG6 = {"j1": "35", "s2": "1", "j12": "34", "j346": "39", "j3": "36", "j4": "28",
        "j34": "38", "j135": "31", "j13": "27", "j24": "29", "j6": "36"}
FIG7 = {"j1": "177/2", "s2": "5/2", "j12": "88", "j346": "89", "j3": "181/2",
        "j4": "141/2", "j34": "87", "j135": "77", "j13": "75", "j24": "73", "j6": "91"}


def parse_config(text: str) -> SweepConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment.

    Spins use the ``"n"``/``"n/2"`` form; ``j5_min``/``j5_max`` may be
    ``auto``.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in FIXED_KEYS and key not in _OPTION_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    try:
        fixed = {k: parse_spin(raw[k]) for k in FIXED_KEYS if k in raw}
        opts = {}
        for k in ("j5_min", "j5_max"):
            if raw.get(k, "auto").lower() != "auto":
                opts[k] = parse_spin(raw[k])
        if "margin" in raw:
            opts["margin"] = float(raw["margin"])
        if "precision" in raw:
            opts["precision"] = int(raw["precision"])
        if "workers" in raw:
            opts["workers"] = int(raw["workers"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return SweepConfig(fixed, **opts)


def load_config(path) -> SweepConfig:
    return parse_config(Path(path).read_text())


def j5_range(cfg: SweepConfig) -> list[int]:
    """Admissible twice-values of j5, ascending.

    j5 enters the triads (j12, j346, j5) and (j13, j5, j135); every other
    triad must already hold.
    """
    f = cfg.fixed
    triads = cfg.args(0).triads()
    for i, tri in enumerate(triads):
        if i not in (3, 5) and not _triangle_t(*tri):
            raise EmptyRangeError(f"triad ({', '.join(format_twice(t) for t in tri)}) is broken")
    lo = max(abs(f["j12"] - f["j346"]), abs(f["j13"] - f["j135"]))
    hi = min(f["j12"] + f["j346"], f["j13"] + f["j135"])
    if (f["j12"] + f["j346"]) % 2 != (f["j13"] + f["j135"]) % 2:
        raise EmptyRangeError("the two j5 triads disagree on the parity of 2 j5")
    if cfg.j5_min is not None:
        lo = max(lo, cfg.j5_min)
    if cfg.j5_max is not None:
        hi = min(hi, cfg.j5_max)
    if (lo + f["j12"] + f["j346"]) % 2:
        lo += 1
    out = list(range(lo, hi + 1, 2))
    if not out:
        raise EmptyRangeError(f"no admissible j5 in [{format_twice(lo)}, {format_twice(hi)}]")
    return out


@dataclass(frozen=True)
class SweepRow:
    twice_j5: int
    exact: str
    asym: float | None
    abs_err: float | None
    rel_err: float | None
    allowed: bool
    margin1: float
    margin2: float
    near_caustic: bool

    @property
    def exact_float(self) -> float:
        return float(Decimal(self.exact))


def _evaluate(args: Symbol12Args, digits: int):
    exact = wigner12j_first(args, digits).to_decimal(digits)
    try:
        r = asym12j(args)
        return str(exact), r.value, (r.margin1, r.margin2), True
    except RegionError as exc:
        return str(exact), None, exc.margins, False


def _evaluate_star(job):
    return _evaluate(*job)


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """One row per admissible j5, ascending, independent of ``workers``."""
    f = cfg.fixed
    if abs(f["j12"] - f["j1"]) > f["s2"] or abs(f["j24"] - f["j4"]) > f["s2"]:
        raise ConfigError("|j12 - j1| and |j24 - j4| must not exceed s2")
    t5s = j5_range(cfg)
    jobs = [(cfg.args(t5), cfg.precision) for t5 in t5s]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_evaluate_star, jobs, chunksize=4))
    else:
        results = [_evaluate_star(j) for j in jobs]

    allowed_exact = [float(Decimal(e)) for e, _, _, ok in results if ok]
    rms = math.sqrt(math.fsum(x * x for x in allowed_exact) / len(allowed_exact)) if allowed_exact else 0.0
    rows = []
    for t5, (exact, asym, (m1, m2), ok) in zip(t5s, results):
        abs_err = rel_err = None
        if asym is not None:
            abs_err = abs(asym - float(Decimal(exact)))
            rel_err = abs_err / rms if rms > 0 else math.inf
        rows.append(SweepRow(t5, exact, asym, abs_err, rel_err, ok, m1, m2,
                             ok and min(m1, m2) < cfg.margin))
    return rows


@dataclass(frozen=True)
class SweepMetrics:
    n_rows: int
    n_allowed: int
    n_used: int
    rms_rel_err: float
    max_abs_err: float
    sign_agreement: float
    window: tuple  # (first, last) allowed twice_j5
    nodes: int

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["window"] = "-".join(format_twice(t) for t in self.window)
        return d


def error_metrics(rows: list[SweepRow]) -> SweepMetrics:
    """Summary over allowed rows that are not near a caustic.

    ``rms_rel_err`` is the rms of asym - exact over the rms of exact on the
    same rows.  ``sign_agreement`` counts rows where |exact| exceeds a
    quarter of that rms.  ``nodes`` is the number of sign changes of the
    exact values across the allowed window.
    """
    allowed = [r for r in rows if r.allowed]
    if not allowed:
        raise ValueError("no classically allowed rows")
    used = [r for r in allowed if not r.near_caustic]
    if not used:
        raise ValueError("every allowed row is near a caustic")
    ex = [r.exact_float for r in used]
    diff = [r.asym - x for r, x in zip(used, ex)]
    norm = math.fsum(x * x for x in ex)
    rms_ex = math.sqrt(norm / len(ex))
    rms_rel = math.sqrt(math.fsum(d * d for d in diff) / norm) if norm > 0 else math.inf
    big = [(r.asym, x) for r, x in zip(used, ex) if abs(x) > 0.25 * rms_ex]
    signs = sum(1 for a, x in big if (a > 0) == (x > 0)) / len(big) if big else math.nan
    nodes = 0
    prev = 0
    for r in allowed:
        s = (r.exact_float > 0) - (r.exact_float < 0)
        if s and prev and s != prev:
            nodes += 1
        prev = s or prev
    return SweepMetrics(
        n_rows=len(rows), n_allowed=len(allowed), n_used=len(used),
        rms_rel_err=rms_rel, max_abs_err=max(abs(d) for d in diff),
        sign_agreement=signs, window=(allowed[0].twice_j5, allowed[-1].twice_j5),
        nodes=nodes,
    )


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    return repr(float(x))


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write rows; ``path`` may be a filename or an open text stream."""
    if hasattr(path, "write"):
        _write_csv(rows, path)
        return
    with open(path, "w", newline="") as fh:
        _write_csv(rows, fh)


def _write_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.twice_j5, r.exact, _fmt(r.asym), _fmt(r.abs_err), _fmt(r.rel_err),
                    _fmt(r.allowed), _fmt(r.margin1), _fmt(r.margin2), _fmt(r.near_caustic)])


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header}")
        opt = lambda s: float(s) if s else None  # noqa: E731
        return [
            SweepRow(int(t5), exact, opt(asym), opt(ae), opt(re), a == "1",
                     float(m1), float(m2), nc == "1")
            for t5, exact, asym, ae, re, a, m1, m2, nc in reader
        ]


def emit_plot(rows: list[SweepRow], path, title: str | None = None) -> None:
    """Exact values as sticks and dots, the asymptotic formula as a line."""
    from . import plotting

    with plotting.style():
        fig, ax = plotting.new_figure()
        x = [r.twice_j5 / 2 for r in rows]
        y = [r.exact_float for r in rows]
        if rows:
            ax.vlines(x, 0, y, colors=plotting.EXACT_COLOR, linewidth=0.6)
            ax.plot(x, y, "o", color=plotting.EXACT_COLOR, label="exact")
            # break the curve wherever the formula does not apply
            ya = [r.asym if r.asym is not None and not r.near_caustic else math.nan for r in rows]
            ax.plot(x, ya, "-", color=plotting.ASYM_COLOR, label="asymptotic")
            ax.axhline(0, color="0.6", linewidth=0.5)
            ax.legend(frameon=False, loc="best")
        ax.set_xlabel(r"$j_5$")
        ax.set_ylabel("12j symbol")
        if title:
            ax.set_title(title)
        plotting.save(fig, path)


@dataclass
class ValidationReport:
    seed: int
    suites: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def __str__(self) -> str:
        return "\n".join(str(s) for s in self.suites)


def validate(seed: int = 0, tuples: int = 200, contraction_jmax: int = 4) -> ValidationReport:
    """Run every identity suite from one seed.

    ``tuples`` sets the size of the A8/A9 suites; orthogonality and the
    pentagon use half as many, the geometry suites five times as many.
    """
    rng = random.Random(seed)
    rep = ValidationReport(seed)
    rep.suites.append(check_a8(rng, tuples))
    rep.suites.append(check_a9(rng, tuples))
    rep.suites.append(check_contraction(contraction_jmax))
    rep.suites.append(check_orthogonality(rng, max(1, tuples // 2)))
    rep.suites.append(check_pentagon(rng, max(1, tuples // 2)))
    rep.suites.append(check_geometry(rng, 5 * tuples))
    rep.suites.append(check_flat_inputs(rng, max(1, tuples // 2)))
    return rep

