"""Command-line front end: ``locsample {interp,reconstruct,sweep,walter,bounds}``.

Curve data is written as CSV (header row, LF line endings, 17 significant
digits); reports as JSON.  Options may also come from a ``key = value`` file
given with ``--config``; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict
from typing import Sequence

import numpy as np

from . import bounds
from . import prefilter as pf
from . import sampling as sa
from . import spectrum as sp
from .errors import LocsampleError
from .experiments import ExperimentConfig, default_signal, interp_traces, run_reconstruction

FAMILIES = ("sinc", "gauss", "bspline", "bspline-nc")
WEIGHTS = ("monomial", "gaussexp", "sincscaled")
#: interp traces whose measured interpolation residual exceeds this are flagged
INTERP_WARN = 1e-6


# ---------------------------------------------------------------------------
# formatting helpers
# ---------------------------------------------------------------------------


def fmt(v) -> str:
    """Number with 17 significant digits (round-trips doubles)."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return format(float(v), ".17g")


def write_csv(out, header: Sequence[str], rows) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating, np.integer)):
        return _jsonable(v.item())
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def write_json(out, obj) -> None:
    out.write(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def spec_dict(obj) -> dict:
    return {"kind": type(obj).__name__, **asdict(obj)}


def config_dict(cfg: ExperimentConfig) -> dict:
    return {
        "prefilter": spec_dict(cfg.prefilter),
        "lambdas": list(cfg.lambdas),
        "weight": spec_dict(cfg.weight),
        "signal": spec_dict(cfg.signal),
        "window": list(cfg.window),
        "seed": cfg.seed,
        "limit_ell": cfg.limit_ell,
        "tolerances": dict(cfg.tolerances),
    }


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (p.strip() for p in line.split("=", 1))
            values[key.replace("-", "_")] = val.strip("\"'")
    return values


def parse_window(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("window must be x0:x1:n")
    x0, x1, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (x0 < x1 and n >= 2):
        raise ValueError("window needs x0 < x1 and n >= 2")
    return (x0, x1, n)


_DEFAULTS = {
    "prefilter": "gauss",
    "beta": None,
    "order": 3,
    "lambda_": None,
    "limit_ell": None,
    "weight": None,
    "s": 2.0,
    "a": None,
    "seed": 0,
    "window": "-5:5:1001",
    "freq_window": None,
    "format": "csv",
    "out": None,
    "report": None,
    "n": None,
    "signal_band": None,
    "signal_spread": None,
}

_FILE_CASTS = {
    "prefilter": str,
    "beta": float,
    "order": int,
    "lambda_": lambda v: [float(x) for x in v.split(",") if x.strip()],
    "limit_ell": int,
    "weight": str,
    "s": float,
    "a": float,
    "seed": int,
    "window": str,
    "freq_window": str,
    "format": str,
    "out": str,
    "report": str,
    "n": lambda v: [int(x) for x in v.split(",") if x.strip()],
    "signal_band": float,
    "signal_spread": float,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file with defaults for any flag")
    common.add_argument("--prefilter", choices=FAMILIES)
    common.add_argument("--beta", type=float, help="sinc/Gaussian parameter (default 4 / 2)")
    common.add_argument("--order", type=int, help="B-spline order m")
    common.add_argument("--lambda", dest="lambda_", type=float, action="append", help="sampling interval (repeatable)")
    common.add_argument("--limit-ell", type=int, help="limit interpolator at the resonance 1/ell")
    common.add_argument("--weight", choices=WEIGHTS)
    common.add_argument("--s", type=float, help="exponent of monomial / scaled-sinc weights")
    common.add_argument("--a", type=float, help="rate of the Gaussian weight (default 1/(2 beta^2))")
    common.add_argument("--seed", type=int)
    common.add_argument("--window", help="evaluation window x0:x1:n")
    common.add_argument("--freq-window", help="frequency window xi0:xi1:n for interp")
    common.add_argument("--signal-band", type=float, help="band of the random test signal")
    common.add_argument("--signal-spread", type=float, help="bump width of the random test signal")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--report", help="also write the JSON report here (reconstruct)")

    parser = argparse.ArgumentParser(prog="locsample", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("interp", parents=[common], help="interpolating function traces")
    sub.add_parser("reconstruct", parents=[common], help="reconstruct a seeded test signal")
    sub.add_parser("sweep", parents=[common], help="error and bound over a list of intervals")
    w = sub.add_parser("walter", parents=[common], help="signed denominator partial sums")
    w.add_argument("--n", type=int, action="append", help="number of terms N (repeatable)")
    sub.add_parser("bounds", parents=[common], help="bound report")
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge defaults, config file and flags (flags win)."""
    merged = dict(_DEFAULTS)
    if args.config:
        for key, val in read_config_file(args.config).items():
            key = "lambda_" if key == "lambda" else key
            if key not in _FILE_CASTS:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = _FILE_CASTS[key](val)
    for key in _DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    merged["command"] = args.command
    return argparse.Namespace(**merged)


def make_prefilter(opts) -> pf.PrefilterSpec:
    if opts.prefilter == "sinc":
        return pf.Sinc(opts.beta if opts.beta is not None else 4.0)
    if opts.prefilter == "gauss":
        return pf.Gaussian(opts.beta if opts.beta is not None else 2.0)
    if opts.prefilter == "bspline":
        return pf.BSplineCentered(opts.order)
    return pf.BSplineNonCentered(opts.order)


def make_weight(opts, spec: pf.PrefilterSpec) -> pf.WeightSpec | None:
    if opts.weight is None:
        return None
    if opts.weight == "monomial":
        return pf.Monomial(opts.s)
    if opts.weight == "gaussexp":
        if opts.a is not None:
            return pf.GaussExp(opts.a)
        beta = getattr(spec, "beta", None)
        if beta is None:
            raise ValueError("--a is required for the Gaussian weight on spline prefilters")
        return pf.GaussExp(0.5 / beta**2)
    beta = opts.beta if opts.beta is not None else getattr(spec, "beta", 4.0)
    return pf.SincScaled(opts.s, beta)


def make_config(opts) -> ExperimentConfig:
    spec = make_prefilter(opts)
    window = opts.window if isinstance(opts.window, tuple) else parse_window(opts.window)
    lambdas = opts.lambda_ if opts.lambda_ is not None else ([] if opts.command == "sweep" else [0.25])
    signal = None
    if opts.signal_band is not None or opts.signal_spread is not None:
        base = default_signal(spec, opts.seed)
        signal = sa.RandomSpectrum(
            seed=opts.seed,
            band=opts.signal_band if opts.signal_band is not None else base.band,
            spread=opts.signal_spread if opts.signal_spread is not None else base.spread,
        )
    return ExperimentConfig(
        prefilter=spec,
        lambdas=tuple(lambdas),
        weight=make_weight(opts, spec),
        signal=signal,
        window=window,
        seed=opts.seed,
        limit_ell=opts.limit_ell,
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_interp(cfg: ExperimentConfig, opts, out) -> int:
    xs = cfg.xs
    ref = min(cfg.lambdas) if cfg.lambdas else 1.0 / (cfg.limit_ell or 4)
    if opts.freq_window:
        f0, f1, fn = parse_window(opts.freq_window)
        xis = np.linspace(f0, f1, fn)
    else:
        half = 3.0 * math.pi / ref
        xis = np.linspace(-half, half, 1201)
    rows = []
    status = 0
    traces = [(f"lambda={lam!r}", lam, None) for lam in cfg.lambdas]
    if cfg.limit_ell is not None:
        traces.append((f"limit_ell={cfg.limit_ell}", 1.0 / cfg.limit_ell, cfg.limit_ell))
    for label, lam, ell in traces:
        try:
            t_vals, f_vals, residual = interp_traces(cfg.prefilter, lam, xs, xis, limit_ell=ell)
        except LocsampleError as exc:
            print(f"error: {label}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = 1
            continue
        if residual > INTERP_WARN:
            print(
                f"warning: {label}: interpolation residual {residual:.3g} "
                f"(interval is numerically close to a resonance)",
                file=sys.stderr,
            )
        rows.extend((label, lam, "time", x, v) for x, v in zip(xs, t_vals))
        rows.extend((label, lam, "freq", x, v) for x, v in zip(xis, f_vals))
    write_csv(out, ["trace", "lambda", "domain", "coordinate", "value"], rows)
    return status


def _report(cfg: ExperimentConfig, rep: bounds.BoundReport, result=None) -> dict:
    return {
        "config": config_dict(cfg),
        "lambda": rep.lam,
        "m_w": rep.M_w,
        "series_value": rep.series_value,
        "bound_sq": rep.bound_sq,
        "critical_lambda": rep.critical_lambda,
        "sup_rel": None if result is None else result.sup_rel,
        "lattice_mismatch_max": None if result is None else result.lattice_mismatch_max,
        "norm": None if result is None else result.norm,
        "terms_used": rep.terms_used,
        "remainder": rep.remainder,
    }


def cmd_reconstruct(cfg: ExperimentConfig, opts, out) -> int:
    reports, rows, status = [], [], 0
    for lam in cfg.lambdas:
        try:
            res = run_reconstruction(cfg.prefilter, lam, cfg.signal, weight=cfg.weight, xs=cfg.xs)
        except LocsampleError as exc:
            print(f"error: lambda={lam}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = 1
            continue
        reports.append(_report(cfg, res.bound, res))
        err = np.abs(res.g - res.g_tilde)
        rows.extend(
            (lam, x, g.real, gt.real, e) for x, g, gt, e in zip(res.xs, res.g, res.g_tilde, err)
        )
    payload = reports[0] if len(reports) == 1 else reports
    if opts.format == "json":
        write_json(out, payload)
    else:
        write_csv(out, ["lambda", "x", "re_g", "re_g_tilde", "abs_err"], rows)
    if opts.report:
        with open(opts.report, "w", encoding="utf-8", newline="\n") as fh:
            write_json(fh, payload)
    return status


def cmd_sweep(cfg: ExperimentConfig, opts, out) -> int:
    rows, status = [], 0
    for lam in cfg.lambdas:
        try:
            res = run_reconstruction(cfg.prefilter, lam, cfg.signal, weight=cfg.weight, xs=cfg.xs)
            rows.append((lam, res.sup_rel, math.sqrt(res.bound_sq), res.bound.critical_lambda, "ok"))
        except (LocsampleError, ValueError) as exc:
            rows.append((lam, math.nan, math.nan, math.nan, type(exc).__name__))
            status = 1
    write_csv(out, ["lambda", "sup_rel", "bound_sqrt", "critical_lambda", "status"], rows)
    return status


def cmd_walter(cfg: ExperimentConfig, opts, out) -> int:
    m = cfg.prefilter.m if pf.is_bspline(cfg.prefilter) else 3
    if m % 2 == 0 or m < 3:
        print(f"error: walter needs an odd order >= 3, got {m}", file=sys.stderr)
        return 2
    ns = opts.n or [10, 100, 1000, 10000]
    positive = float(
        np.asarray(sp.periodize(pf.BSplineCentered(m), 1.0, sp.FrequencyGrid(math.pi, 3)).values)[-1]
    )
    rows = []
    for n in ns:
        total, bound = sp.walter_denominator(m, n)
        rows.append((n, total.real, total.imag, abs(total), bound, positive))
    write_csv(
        out,
        ["N", "partial_sum_re", "partial_sum_im", "abs_partial_sum", "remainder_bound", "centered_denominator"],
        rows,
    )
    return 0


def cmd_bounds(cfg: ExperimentConfig, opts, out) -> int:
    reports = [_report(cfg, bounds.general_bound(cfg.prefilter, cfg.weight, lam)) for lam in cfg.lambdas]
    write_json(out, reports[0] if len(reports) == 1 else reports)
    return 0


COMMANDS = {
    "interp": cmd_interp,
    "reconstruct": cmd_reconstruct,
    "sweep": cmd_sweep,
    "walter": cmd_walter,
    "bounds": cmd_bounds,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        if opts.command == "walter" and opts.prefilter not in ("bspline", "bspline-nc"):
            opts.prefilter = "bspline-nc"
        cfg = make_config(opts)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    buf = io.StringIO(newline="\n")
    try:
        status = COMMANDS[opts.command](cfg, opts, buf)
    except (LocsampleError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = buf.getvalue()
    if opts.out:
        with open(opts.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
