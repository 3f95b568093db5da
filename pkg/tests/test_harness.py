import io
import math
from dataclasses import replace
from decimal import Decimal

import pytest

from recoupling.harness import (
    CSV_HEADER,
    FIG6,
    FIG7,
    ConfigError,
    EmptyRangeError,
    SweepConfig,
    SweepRow,
    emit_csv,
    emit_plot,
    error_metrics,
    j5_range,
    load_config,
    parse_config,
    read_csv,
    run_sweep,
)
from recoupling.spin import parse_spin

FIG6_TEXT = "\n".join(f"{k} = {v}" for k, v in FIG6.items())


@pytest.fixture(scope="module")
def fig6_rows():
    return run_sweep(SweepConfig.from_spins(FIG6))


def test_parse_config():
    cfg = parse_config(FIG6_TEXT + "\n# comment\nj5_min = 10\nj5_max = auto\nmargin=0.01\nworkers = 2\n")
    assert cfg.fixed["j1"] == 70 and cfg.fixed["s2"] == 2
    assert cfg.j5_min == 20 and cfg.j5_max is None
    assert cfg.margin == 0.01 and cfg.workers == 2 and cfg.precision == 50


@pytest.mark.parametrize("extra,msg", [
    ("bogus = 1", "unknown key"),
    ("j1 = 3", "duplicate"),
    ("margin = -1", "margin"),
    ("workers = 0", "workers"),
    ("j5_min = 3/4", "not a spin"),
    ("no equals sign", "key=value"),
])
def test_parse_config_errors(extra, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(FIG6_TEXT + "\n" + extra)


def test_missing_spin():
    with pytest.raises(ConfigError, match="missing"):
        parse_config("j1 = 3")


def test_load_config_file(tmp_path):
    path = tmp_path / "fig6.cfg"
    path.write_text(FIG6_TEXT)
    assert load_config(path).fixed == SweepConfig.from_spins(FIG6).fixed


def test_j5_range():
    t5s = j5_range(SweepConfig.from_spins(FIG6))
    # (34, 39, j5) and (27, j5, 31): 5 <= j5 <= 58
    assert t5s[0] == 10 and t5s[-1] == 116 and all(b - a == 2 for a, b in zip(t5s, t5s[1:]))
    t7 = j5_range(SweepConfig.from_spins(FIG7))
    assert all(t % 2 == 0 for t in t7)
    narrowed = j5_range(SweepConfig.from_spins(FIG6, j5_min=parse_spin("20"), j5_max=parse_spin("25")))
    assert narrowed == list(range(40, 51, 2))


def test_empty_range():
    bad = dict(FIG6, j13="80")  # (35, 36, 80) breaks a triangle
    with pytest.raises(EmptyRangeError):
        j5_range(SweepConfig.from_spins(bad))
    with pytest.raises(EmptyRangeError):
        j5_range(SweepConfig.from_spins(FIG6, j5_min=parse_spin("70")))


def test_sweep_rows(fig6_rows):
    rows = fig6_rows
    assert [r.twice_j5 for r in rows] == j5_range(SweepConfig.from_spins(FIG6))
    allowed = [r for r in rows if r.allowed]
    assert 0 < len(allowed) < len(rows)
    assert all(r.asym is None and r.abs_err is None for r in rows if not r.allowed)
    assert all(min(r.margin1, r.margin2) < 0 for r in rows if not r.allowed)
    # allowed window is one contiguous block strictly inside the range
    idx = [i for i, r in enumerate(rows) if r.allowed]
    assert idx == list(range(idx[0], idx[-1] + 1))
    assert idx[-1] < len(rows) - 1
    rms = math.sqrt(sum(r.exact_float ** 2 for r in allowed) / len(allowed))
    for r in allowed:
        assert r.rel_err == pytest.approx(r.abs_err / rms)
        assert len(Decimal(r.exact).as_tuple().digits) >= 45 or Decimal(r.exact) == 0


def test_sweep_independent_of_workers(fig6_rows):
    cfg = SweepConfig.from_spins(FIG6, workers=2)
    assert run_sweep(cfg) == fig6_rows


def test_metrics(fig6_rows):
    m = error_metrics(fig6_rows)
    assert m.n_used <= m.n_allowed < m.n_rows
    assert 0 < m.rms_rel_err < 0.15
    assert m.window == (10, 108)
    assert m.nodes > 10


def _rows(exact, asym):
    return [SweepRow(2 * i, str(e), a, abs(a - e), None, True, 0.5, 0.5, False)
            for i, (e, a) in enumerate(zip(exact, asym))]


def test_metrics_trivial_cases():
    ex = [1.0, -2.0, 0.5, 3.0]
    assert error_metrics(_rows(ex, ex)).rms_rel_err == 0
    assert error_metrics(_rows(ex, [0.0] * 4)).rms_rel_err == pytest.approx(1.0)
    assert error_metrics(_rows(ex, ex)).nodes == 2
    with pytest.raises(ValueError):
        error_metrics([replace(r, allowed=False) for r in _rows(ex, ex)])
    with pytest.raises(ValueError):
        error_metrics([replace(r, near_caustic=True) for r in _rows(ex, ex)])


def test_csv_round_trip(fig6_rows, tmp_path):
    path = tmp_path / "rows.csv"
    emit_csv(fig6_rows, path)
    with open(path) as fh:
        assert fh.readline().strip() == "twice_j5,exact,asym,abs_err,rel_err,allowed,margin1,margin2,near_caustic"
    assert read_csv(path) == fig6_rows


def test_csv_empty_and_stream(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"
    assert read_csv(path) == []
    buf = io.StringIO()
    emit_csv([], buf)
    assert buf.getvalue() == path.read_text()


def test_csv_unwritable(tmp_path):
    with pytest.raises(OSError):
        emit_csv([], tmp_path / "missing" / "rows.csv")


def test_plot_svg(fig6_rows, tmp_path):
    path = tmp_path / "fig6.svg"
    emit_plot(fig6_rows, path, title="fig6")
    text = path.read_text()
    assert text.lstrip().startswith("<?xml") and "<svg" in text
    empty = tmp_path / "empty.svg"
    emit_plot([], empty)
    assert "<svg" in empty.read_text()
