"""Command line interface.

    recoupling exact6j 1 1 1 1 1 1
    recoupling exact12j 35 1 34 39 36 28 38 31 27 29 40 36
    recoupling asym12j 35 1 34 39 36 28 38 31 27 29 40 36
    recoupling sweep --config fig6.cfg --out fig6.csv --plot fig6.svg
    recoupling report --outdir figures
    recoupling validate --seed 0 --tuples 200

Exit codes: 0 success, 1 validation failure, 2 argument error,
3 forbidden or empty region.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import replace
from pathlib import Path

from .asymptotics import RegionError, asym12j
from .exact import DEFAULT_DIGITS, Symbol12Args, wigner6j, wigner9j, wigner12j_first
from .harness import (
    FIG6,
    FIG7,
    ConfigError,
    EmptyRangeError,
    SweepConfig,
    emit_csv,
    emit_plot,
    error_metrics,
    load_config,
    run_sweep,
    validate,
)
from .spin import Spin

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_REGION = 0, 1, 2, 3


def _spin(text: str) -> Spin:
    try:
        return Spin.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _print_exact(value, digits: int) -> None:
    if value.is_exact:
        print(f"surd    {value.surd_str()}")
    print(f"decimal {value.to_decimal(digits)}")


def cmd_exact6j(args) -> int:
    _print_exact(wigner6j(*args.spins, digits=args.digits), args.digits)
    return EXIT_OK


def cmd_exact9j(args) -> int:
    _print_exact(wigner9j(*args.spins, digits=args.digits), args.digits)
    return EXIT_OK


def cmd_exact12j(args) -> int:
    _print_exact(wigner12j_first(Symbol12Args.from_spins(*args.spins), args.digits), args.digits)
    return EXIT_OK


def cmd_asym12j(args) -> int:
    p = Symbol12Args.from_spins(*args.spins)
    try:
        r = asym12j(p)
    except RegionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGION
    for name in ("value", "prefactor", "term1", "term2", "S1", "S2", "theta1", "theta2",
                 "phi1_1", "phi1_2", "phi4_1", "phi4_2", "margin1", "margin2"):
        print(f"{name:10s} {getattr(r, name):.12g}")
    print(f"{'near_caustic':10s} {r.near_caustic}")
    if args.exact:
        print(f"{'exact':10s} {float(wigner12j_first(p)):.12g}")
    return EXIT_OK


def _print_metrics(name: str, m, out=sys.stdout) -> None:
    print(f"{name}: {m.n_rows} rows, {m.n_allowed} allowed, {m.n_used} used; "
          f"rms_rel_err={m.rms_rel_err:.4f} sign_agreement={m.sign_agreement:.3f} "
          f"max_abs_err={m.max_abs_err:.3g} nodes={m.nodes}", file=out)


def _sweep(cfg: SweepConfig, name: str, csv_out, plot_out, title=None) -> int:
    rows = run_sweep(cfg)
    if csv_out is None:
        emit_csv(rows, sys.stdout)
    else:
        emit_csv(rows, csv_out)
    if plot_out is not None:
        emit_plot(rows, plot_out, title)
    try:
        m = error_metrics(rows)
    except ValueError as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_REGION
    _print_metrics(name, m, out=sys.stderr if csv_out is None else sys.stdout)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.workers:
        cfg = replace(cfg, workers=args.workers)
    return _sweep(cfg, Path(args.config).stem, args.out, args.plot, args.title)


def cmd_report(args) -> int:
    """Both figure configurations: CSV, SVG and a metrics table."""
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    table = []
    for name, spins in (("fig6", FIG6), ("fig7", FIG7)):
        cfg = SweepConfig.from_spins(spins, workers=args.workers or 1)
        t0 = time.perf_counter()
        rows = run_sweep(cfg)
        emit_csv(rows, outdir / f"{name}.csv")
        emit_plot(rows, outdir / f"{name}.svg", title=" ".join(f"{k}={v}" for k, v in spins.items()))
        m = error_metrics(rows)
        _print_metrics(name, m)
        table.append({"config": name, **m.as_dict(), "seconds": round(time.perf_counter() - t0, 3)})
    with open(outdir / "metrics.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(table[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(table)
    print(f"wrote {outdir}/fig6.csv fig6.svg fig7.csv fig7.svg metrics.csv")
    return EXIT_OK


def cmd_validate(args) -> int:
    rep = validate(seed=args.seed, tuples=args.tuples)
    print(rep)
    for s in rep.suites:
        for f in s.failures:
            print(f"  {s.name}: {f}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="recoupling", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, n, fn in (("exact6j", 6, cmd_exact6j), ("exact9j", 9, cmd_exact9j),
                        ("exact12j", 12, cmd_exact12j)):
        sp = sub.add_parser(name, help=f"exact {name[5:]} symbol from {n} spins")
        sp.add_argument("spins", nargs=n, type=_spin, metavar="j")
        sp.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("asym12j", help="asymptotic 12j with small spin s2")
    sp.add_argument("spins", nargs=12, type=_spin, metavar="j")
    sp.add_argument("--exact", action="store_true", help="also print the exact value")
    sp.set_defaults(func=cmd_asym12j)

    sp = sub.add_parser("sweep", help="sweep j5 from a key=value config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.add_argument("--plot", help="SVG path")
    sp.add_argument("--title")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("report", help="both figure sweeps to CSV and SVG")
    sp.add_argument("--outdir", default="figures")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("validate", help="run the identity suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tuples", type=int, default=200)
    sp.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EmptyRangeError, RegionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGION
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
