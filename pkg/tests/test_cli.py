import csv

import pytest

from recoupling.cli import main

FIG6 = "35 1 34 39 36 28 38 31 27 29 40 36".split()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exact6j(capsys):
    code, out, _ = run(capsys, "exact6j", "1", "1", "1", "1", "1", "1")
    assert code == 0
    assert "surd    1/6" in out
    assert "decimal 0.1666666666" in out


def test_exact9j_and_12j(capsys):
    code, out, _ = run(capsys, "exact9j", *"1/2 1/2 1 1/2 1/2 0 1 1 1".split(), "--digits", "20")
    assert code == 0 and "decimal 0.13608276348795433879" in out
    code, out, _ = run(capsys, "exact12j", *FIG6, "--digits", "20")
    assert code == 0 and "decimal -1.4883479709157700245E-8" in out


def test_asym12j(capsys):
    code, out, _ = run(capsys, "asym12j", *FIG6, "--exact")
    assert code == 0
    fields = dict(line.split() for line in out.splitlines())
    assert float(fields["value"]) == pytest.approx(float(fields["exact"]), rel=0.02)
    assert fields["near_caustic"] == "False"


def test_asym12j_exit_codes(capsys):
    assert run(capsys, "asym12j", *FIG6[:10], "57", FIG6[11])[0] == 3  # forbidden
    assert run(capsys, "asym12j", *FIG6[:2], "37", *FIG6[3:])[0] == 2  # |mu| > s


def test_argument_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["exact6j", "1", "x", "1", "1", "1", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["exact6j", "1", "1"])
    assert info.value.code == 2


def _config(tmp_path, **over):
    spins = dict(zip(["j1", "s2", "j12", "j346", "j3", "j4", "j34", "j135", "j13", "j24"], FIG6[:10]))
    spins["j6"] = FIG6[11]
    spins.update(over)
    path = tmp_path / "sweep.cfg"
    path.write_text("".join(f"{k} = {v}\n" for k, v in spins.items()))
    return path


def test_sweep_outputs(capsys, tmp_path):
    cfg = _config(tmp_path)
    out_csv, out_svg = tmp_path / "rows.csv", tmp_path / "rows.svg"
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_csv), "--plot", str(out_svg))
    assert code == 0
    assert "rms_rel_err=" in out
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 54 and rows[0]["twice_j5"] == "10"
    assert "<svg" in out_svg.read_text()


def test_sweep_to_stdout(capsys, tmp_path):
    code, out, err = run(capsys, "sweep", "--config", str(_config(tmp_path)))
    assert code == 0
    assert out.splitlines()[0] == "twice_j5,exact,asym,abs_err,rel_err,allowed,margin1,margin2,near_caustic"
    assert "rms_rel_err=" in err


def test_sweep_errors(capsys, tmp_path):
    assert run(capsys, "sweep", "--config", str(_config(tmp_path, j13="80")))[0] == 3
    assert run(capsys, "sweep", "--config", str(_config(tmp_path, bogus="1")))[0] == 2
    assert run(capsys, "sweep", "--config", str(tmp_path / "nope.cfg"))[0] == 2


def test_sweep_no_allowed_rows(capsys, tmp_path):
    cfg = _config(tmp_path)
    cfg.write_text(cfg.read_text() + "j5_min = 56\n")
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv"))[0] == 3


def test_report(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--outdir", str(tmp_path))
    assert code == 0
    for name in ("fig6.csv", "fig6.svg", "fig7.csv", "fig7.svg", "metrics.csv"):
        assert (tmp_path / name).stat().st_size > 0
    with open(tmp_path / "metrics.csv") as fh:
        table = {r["config"]: r for r in csv.DictReader(fh)}
    assert float(table["fig7"]["rms_rel_err"]) < float(table["fig6"]["rms_rel_err"])


def test_validate(capsys, monkeypatch):
    import recoupling.cli as cli
    from recoupling.harness import validate

    monkeypatch.setattr(cli, "validate", lambda seed, tuples: validate(seed, tuples, contraction_jmax=1))
    code, out, _ = run(capsys, "validate", "--seed", "3", "--tuples", "6")
    assert code == 0
    assert out.count("PASS") == 7


def test_validate_failure_exit(capsys, monkeypatch):
    import recoupling.cli as cli
    import recoupling.exact as exact
    from recoupling.harness import validate
    from recoupling.spin import as_twice

    good = exact.wigner6j

    def bad(a, b, c, d, e, f, digits=exact.DEFAULT_DIGITS):
        v = good(a, b, c, d, e, f, digits=digits)
        return -v if as_twice(e) % 2 == 0 else v

    monkeypatch.setattr(exact, "wigner6j", bad)
    monkeypatch.setattr(cli, "validate", lambda seed, tuples: validate(seed, tuples, contraction_jmax=1))
    code, out, _ = run(capsys, "validate", "--tuples", "20")
    assert code == 1
    assert "FAIL A8" in out
