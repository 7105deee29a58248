"""Command-line front end.

    obmlc mi  --scenario gain2d --snr-db -10:1:20 --estimator gh --order 64 --out out/
    obmlc ber --snr-db 0:3:9 --symbols 100000 --seed 1 --out out/

Each run writes its CSV plus a ``*.manifest.json`` describing how to
reproduce it. Exit status: 0 success, 2 usage error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .channel import GENERATOR_INFO
from .experiments import (
    BerReport,
    Scenario,
    ScenarioName,
    parse_grid,
    run_ber_sweep,
    run_mi_sweep,
)
from .infotheory import EstimatorSpec

SCENARIOS = [s.value for s in ScenarioName]


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _manifest(argv: list[str], **extra) -> dict:
    return {
        "command": ["obmlc", *argv],
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "kernel_backend": kernels.BACKEND,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "rng": GENERATOR_INFO,
        **extra,
    }


def svg_plot(series: dict[str, tuple[list[float], list[float]]], xlabel: str, ylabel: str, width=640, height=420) -> str:
    """Plain polyline plot; no dependencies beyond string formatting."""
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    ml, mr, mt, mb = 60, 20, 20, 50
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
    ]
    for k in range(6):
        xv = x0 + k * (x1 - x0) / 5
        yv = y0 + k * (y1 - y0) / 5
        out.append(f'<text x="{px(xv):.1f}" y="{mt + ph + 16}" text-anchor="middle">{xv:g}</text>')
        out.append(f'<text x="{ml - 6}" y="{py(yv) + 4:.1f}" text-anchor="end">{yv:.3g}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{mt + ph / 2}" text-anchor="middle" transform="rotate(-90 14 {mt + ph / 2})">{ylabel}</text>')
    for i, (name, (xv, yv)) in enumerate(series.items()):
        c = colors[i % len(colors)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xv, yv))
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{ml + 10}" y="{mt + 16 + 14 * i}" fill="{c}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obmlc", description="OB-MLC mutual information and BER tools")
    sub = p.add_subparsers(dest="command", required=True)

    mi = sub.add_parser("mi", help="mutual-information sweep for one scenario")
    mi.add_argument("--scenario", required=True, choices=SCENARIOS)
    mi.add_argument("--snr-db", default="-10:1:20", help="start:step:stop (inclusive) or comma list")
    mi.add_argument("--estimator", choices=["gh", "mc"], default="gh")
    mi.add_argument("--order", type=int, default=64, help="Gauss-Hermite order")
    mi.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo samples per point")
    mi.add_argument("--seed", type=int, default=0)
    mi.add_argument("--out", default=".", help="output directory")
    mi.add_argument("--svg", action="store_true", help="also write <scenario>.svg")

    ber = sub.add_parser("ber", help="uncoded BER sweep with OB error propagation")
    ber.add_argument("--snr-db", default="0:3:9")
    ber.add_argument("--symbols", type=int, default=100_000)
    ber.add_argument("--seed", type=int, default=0)
    ber.add_argument("--out", default=".")
    ber.add_argument("--svg", action="store_true")
    return p


def _grid(parser, text):
    try:
        return parse_grid(text)
    except ValueError as exc:
        parser.error(f"--snr-db: {exc}")


def cmd_mi(args, parser, argv) -> int:
    grid = _grid(parser, args.snr_db)
    try:
        if args.estimator == "gh":
            est = EstimatorSpec.gauss_hermite(args.order)
        else:
            est = EstimatorSpec.monte_carlo(args.samples, args.seed)
        scenario = Scenario(ScenarioName(args.scenario), tuple(grid), est)
    except ValueError as exc:
        parser.error(str(exc))
    curve = run_mi_sweep(scenario)
    out = Path(args.out)
    _write_atomic(out / f"{args.scenario}.csv", curve.to_csv())
    if args.svg:
        svg = svg_plot({args.scenario: (list(curve.snr_db), list(curve.mi_bits))}, "SNR (dB)", "bits per channel use")
        _write_atomic(out / f"{args.scenario}.svg", svg)
    manifest = _manifest(argv, scenario=args.scenario, grid=list(grid), estimator=est.as_dict(), seed=args.seed)
    _write_atomic(out / f"{args.scenario}.manifest.json", json.dumps(manifest, indent=2) + "\n")
    return 0


def cmd_ber(args, parser, argv) -> int:
    grid = _grid(parser, args.snr_db)
    if args.symbols < 1000:
        parser.error("--symbols must be at least 1000")
    reports = run_ber_sweep(grid, args.symbols, args.seed)
    lines = [",".join(BerReport.CSV_HEADER)] + [",".join(r.csv_row()) for r in reports]
    out = Path(args.out)
    _write_atomic(out / "ber.csv", "\n".join(lines) + "\n")
    if args.svg:
        snr = [r.snr_db for r in reports]
        svg = svg_plot(
            {
                "OB": (snr, [r.ob_bit_error_rate for r in reports]),
                "CB genie": (snr, [r.cb_bit_error_rate_genie for r in reports]),
                "CB estimated": (snr, [r.cb_value_error_rate_estimated for r in reports]),
            },
            "SNR (dB)",
            "error rate",
        )
        _write_atomic(out / "ber.svg", svg)
    manifest = _manifest(argv, grid=list(grid), symbols=args.symbols, seed=args.seed)
    _write_atomic(out / "ber.manifest.json", json.dumps(manifest, indent=2) + "\n")
    return 0


def _join_grid_flag(argv: list[str]) -> list[str]:
    # "--snr-db -10:1:20" would otherwise be read as an unknown option
    out, k = [], 0
    while k < len(argv):
        if argv[k] == "--snr-db" and k + 1 < len(argv):
            out.append(f"--snr-db={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_grid_flag(argv))
    try:
        if args.command == "mi":
            return cmd_mi(args, parser, argv)
        return cmd_ber(args, parser, argv)
    except OSError as exc:
        print(f"obmlc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
