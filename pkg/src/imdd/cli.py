"""Command-line front end: optimize, analyze, spectrum, bandwidth, simulate, sweep.

Constellations are addressed either by a built-in name (``ook``, ``pam4``,
``qpsk-scm``, ``t-avg-3``, ``t-peak-3``, ``t-4``, ``t-avg-8``, ``t-peak-8``)
or by the path of a constellation JSON file.  Every run echoes a
reproducibility header (version, seed, parameters) on stderr.  CSV output
uses '.' decimals, UTF-8 and LF line endings, and always carries a header row.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .core import Constellation, ConstellationParseError, load_constellation, save_constellation
from .metrics import avg_power_gain_db, peak_power_gain_db
from .optimizer import DesignProblem, SolverSettings, solve
from .registry import format_names, get_format
from .simulator import ChannelConfig, run_vector, run_waveform
from .spectral import build_spectrum, fractional_bandwidth, spectral_efficiency, total_power


class CliError(Exception):
    """User-facing failure; printed to stderr with exit status 1."""


def _echo_header(args: argparse.Namespace) -> None:
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func",) and v is not None
    }
    fields = " ".join(f"{k}={v}" for k, v in params.items())
    print(f"# imdd {__version__} | {fields}", file=sys.stderr)


def _resolve(ref: str) -> Constellation:
    if ref.strip().lower() in format_names():
        return get_format(ref)
    if os.path.exists(ref):
        try:
            return load_constellation(ref)
        except ConstellationParseError as exc:
            raise CliError(f"{ref}: {exc}")
    raise CliError(
        f"{ref!r} is neither a built-in format ({', '.join(format_names())}) "
        f"nor an existing file"
    )


def _parse_k_list(text: str) -> list[float]:
    try:
        ks = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise CliError(f"--k expects comma-separated numbers, got {text!r}")
    if not ks or any(not 0.0 < k < 1.0 for k in ks):
        raise CliError("--k values must lie strictly between 0 and 1")
    return ks


def _write_csv(path: str | None, header: list[str], rows) -> None:
    out = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row]
            )
    finally:
        if path:
            out.close()


def _emit_json(path: str | None, doc) -> None:
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommand handlers ------------------------------------------------------


def _cmd_optimize(args) -> int:
    problem = DesignProblem(args.m, args.objective)
    settings = SolverSettings(restarts=args.restarts, seed=args.seed)
    report = solve(problem, settings, workers=args.workers)
    doc = {
        "objective_value": report.objective_value,
        "restarts_hitting_best": report.restarts_hitting_best,
        "constraint_violation": report.constraint_violation,
    }
    if args.out:
        save_constellation(report.best, args.out)
        print(json.dumps(doc, indent=2))
    else:
        from .core import constellation_to_dict

        doc["constellation"] = constellation_to_dict(report.best)
        _emit_json(None, doc)
    return 0


def _cmd_analyze(args) -> int:
    c = _resolve(args.constellation)
    ks = _parse_k_list(args.k)
    doc = {
        "name": c.name,
        "avg_gain_db": avg_power_gain_db(c),
        "peak_gain_db": peak_power_gain_db(c),
        "eta_at_K": {repr(k): spectral_efficiency(c, k) for k in ks},
    }
    if args.format == "csv":
        header = ["name", "avg_gain_db", "peak_gain_db"] + [f"eta_at_{k!r}" for k in ks]
        row = [c.name, doc["avg_gain_db"], doc["peak_gain_db"]] + list(doc["eta_at_K"].values())
        _write_csv(args.out, header, [row])
    else:
        _emit_json(args.out, doc)
    return 0


def _cmd_spectrum(args) -> int:
    c = _resolve(args.constellation)
    sp = build_spectrum(c)
    T = c.basis.symbol_period
    u = np.linspace(0.0, args.fmax, args.points)
    psd_T = sp.continuous_psd(u / T) * T
    _write_csv(args.out, ["f_T", "psd_T"], zip(u.tolist(), psd_T.tolist()))
    lines_path = _sibling(args.out, ".lines.csv") if args.out else None
    line_rows = [(f * T, w * T) for f, w in sp.lines]
    _write_csv(lines_path, ["f_T", "weight_T"], line_rows)
    return 0


def _sibling(path: str, suffix: str) -> str:
    stem, _ = os.path.splitext(path)
    return stem + suffix


def _cmd_bandwidth(args) -> int:
    c = _resolve(args.constellation)
    sp = build_spectrum(c)
    ks = _parse_k_list(args.k)
    T = c.basis.symbol_period
    rows = []
    for k in ks:
        w = fractional_bandwidth(sp, k)
        rows.append((k, w * T, w))
    if args.format == "json":
        doc = {
            "name": c.name,
            "total_power_T": total_power(sp) * T,
            "bandwidth": [{"K": k, "W_T": wt, "W": w} for k, wt, w in rows],
        }
        _emit_json(args.out, doc)
    else:
        _write_csv(args.out, ["K", "W_T", "W"], rows)
    return 0


def _cmd_simulate(args) -> int:
    c = _resolve(args.constellation)
    try:
        sigmas = [float(tok) for tok in args.sigma.split(",") if tok.strip()]
    except ValueError:
        raise CliError(f"--sigma expects comma-separated numbers, got {args.sigma!r}")
    if not sigmas or any(s <= 0 for s in sigmas):
        raise CliError("--sigma values must be positive")
    labeling = "gray" if args.ber else None
    rows = []
    for sigma in sigmas:
        ch = ChannelConfig(noise_sigma=sigma, n_symbols=args.symbols, seed=args.seed)
        if args.waveform:
            rep = run_waveform(
                c, ch, samples_per_symbol=args.sps, workers=args.workers, bit_labeling=labeling
            )
        else:
            rep = run_vector(c, ch, workers=args.workers, bit_labeling=labeling)
        row = (sigma, rep.ser, rep.std_error) + ((rep.ber,) if args.ber else ())
        rows.append(row)
    header = ["sigma", "ser", "std_error"] + (["ber"] if args.ber else [])
    _write_csv(args.out, header, rows)
    return 0


def _cmd_sweep(args) -> int:
    names = [tok.strip() for tok in args.formats.split(",") if tok.strip()]
    if not names:
        raise CliError("--formats expects a comma-separated list of format names")
    ks = _parse_k_list(args.k)
    if len(ks) != 1:
        raise CliError("sweep uses exactly one --k value")
    rows = []
    for name in names:
        c = _resolve(name)
        rows.append(
            (c.name, spectral_efficiency(c, ks[0]), avg_power_gain_db(c), peak_power_gain_db(c))
        )
    _write_csv(args.out, ["name", "eta", "avg_gain_db", "peak_gain_db"], rows)
    return 0


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imdd",
        description="Design and analysis of IM/DD modulation formats in the 2-D signal space.",
    )
    parser.add_argument("--version", action="version", version=f"imdd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="solve a constellation design problem")
    p.add_argument("--m", type=int, required=True, help="constellation size (2..64)")
    p.add_argument("--objective", choices=["avg", "peak"], required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the solution constellation JSON here")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("analyze", help="power gains and spectral efficiency of a format")
    p.add_argument("constellation", help="built-in name or constellation JSON path")
    p.add_argument("--k", default="0.9", help="comma-separated power fractions")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("spectrum", help="tabulate the continuous PSD and spectral lines")
    p.add_argument("constellation")
    p.add_argument("--fmax", type=float, default=8.0, help="maximum f*T of the grid")
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--out", help="CSV path; the line table goes to <stem>.lines.csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("bandwidth", help="fractional power bandwidth at given K")
    p.add_argument("constellation")
    p.add_argument("--k", default="0.9,0.99")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bandwidth)

    p = sub.add_parser("simulate", help="Monte Carlo symbol error rate")
    p.add_argument("constellation")
    p.add_argument("--sigma", required=True, help="comma-separated noise std values")
    p.add_argument("--symbols", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--waveform", action="store_true", help="simulate at waveform level")
    p.add_argument("--sps", type=int, default=16, help="samples per symbol (waveform mode)")
    p.add_argument("--ber", action="store_true",
                   help="also report Gray-labeled bit error rate (power-of-two sizes)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="gain/efficiency table across formats")
    p.add_argument("--formats", required=True)
    p.add_argument("--k", default="0.9")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    """Parse arguments and execute one subcommand; returns the exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    _echo_header(args)
    try:
        return args.func(args)
    except (CliError, ConstellationParseError, ValueError, KeyError, RuntimeError) as exc:
        print(f"imdd: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
