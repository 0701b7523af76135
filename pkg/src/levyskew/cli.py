"""Command-line interface.

One binary, seven subcommands:

  coeffs     expansion coefficients for a model, as JSON bundles
  eval       evaluate an expansion quantity at t or over a t-grid
  mc         Monte Carlo digital, finite-difference skew, or smile
  compare    first/second order vs Monte Carlo on a log-spaced t-grid
  smile      Monte Carlo smile plus the expansion's ATM tangent line
  otm        out-of-the-money skew approximation at fixed log-moneyness
  calibrate  option-chain pipeline: skew series, power-law fit, Y estimates

Every run that writes artifacts also writes manifest.json next to them
with the resolved configuration, seed, and library versions; re-running
the same configuration reproduces the outputs byte for byte.

Exit codes: 2 usage, 3 domain (bad parameters, unattainable quantities),
4 data (malformed chains, insufficient quotes).
"""

from __future__ import annotations

import argparse
import glob
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from .errors import DataError, DomainError, UsageError
from .mixed import MixedBundle, build_mixed, eval_mixed, series_mixed
from .models import ModelSpec, model_to_json, parse_model_json
from .montecarlo import (
    McConfig,
    digital_price_mc,
    skew_fd_mc,
    smile_mc,
)
from .otm import OtmInputs, otm_skew, v1_correction
from .pipeline import calibrate_Y, fit_powerlaw, load_chain, skew_series
from .purejump import PureJumpBundle, build_purejump, eval_purejump, series_purejump
from .series import series_to_json

QUANTITIES = ("digital", "atm_vol", "skew", "delta")


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_grid(text: str, log_spaced: bool) -> np.ndarray:
    """Parse start:stop:count into a grid, geometric or linear."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid components in {text!r}") from None
    if n < 2:
        raise UsageError("grid needs at least 2 points")
    if log_spaced:
        if lo <= 0 or hi <= lo:
            raise UsageError("log grid needs 0 < start < stop")
        return np.geomspace(lo, hi, n)
    if hi <= lo:
        raise UsageError("grid needs start < stop")
    return np.linspace(lo, hi, n)


def _parse_count(text: str) -> int:
    # accept 1e6 style path counts
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None
    if value != int(value) or value <= 0:
        raise UsageError(f"expected a positive integer, got {text!r}")
    return int(value)


def _load_model(args: argparse.Namespace) -> ModelSpec:
    try:
        with open(args.params) as fh:
            payload = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read params file: {exc}")
    try:
        spec = parse_model_json(payload)
    except DataError as exc:
        raise DataError(f"{args.params}: {exc}") from exc
    if getattr(args, "model", None) and args.model != spec.kind:
        raise UsageError(
            f"--model {args.model} disagrees with params file kind {spec.kind}"
        )
    return spec


def _build_bundle(
    spec: ModelSpec, samples: int, seed: int
) -> PureJumpBundle | MixedBundle:
    if spec.kind == "ts":
        return build_purejump(spec.jumps, n_samples=samples, seed=seed)
    return build_mixed(spec.jumps, spec.stochvol())


def _eval_bundle(bundle, quantity: str, t: float, order: str) -> float:
    if isinstance(bundle, PureJumpBundle):
        return eval_purejump(bundle, quantity, t, order=order)
    return eval_mixed(bundle, quantity, t, order=order)


def _series_bundle(bundle, quantity: str):
    if isinstance(bundle, PureJumpBundle):
        return series_purejump(bundle, quantity)
    return series_mixed(bundle, quantity)


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row))
            fh.write("\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _versions() -> dict:
    import scipy

    try:
        from importlib.metadata import version

        own = version("levyskew")
    except Exception:
        own = "unknown"
    return {
        "levyskew": own,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": ".".join(map(str, sys.version_info[:3])),
    }


def _emit_manifest(
    args: argparse.Namespace, outputs: list[str], model: ModelSpec | None
) -> None:
    if not getattr(args, "out", None):
        return
    config = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func",) and not k.startswith("_")
    }
    manifest = {
        "subcommand": args.subcommand,
        "config": config,
        "model": model_to_json(model) if model is not None else None,
        "seed": getattr(args, "seed", None),
        "versions": _versions(),
        "outputs": [os.path.basename(p) for p in outputs],
    }
    _write_json(os.path.join(args.out, "manifest.json"), manifest)


def _ensure_out(args: argparse.Namespace) -> str:
    if not getattr(args, "out", None):
        raise UsageError("--out is required for this subcommand")
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _mc_config(args: argparse.Namespace) -> McConfig:
    return McConfig(
        n_paths=args.paths,
        seed=args.seed,
        n_steps=args.steps,
        n_workers=args.workers,
    )


def _cmd_coeffs(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    out = _ensure_out(args)
    bundle = _build_bundle(spec, args.samples, args.seed)
    quantities = QUANTITIES if args.quantity == "all" else (args.quantity,)
    payload = {"model": model_to_json(spec), "quantities": {}}
    for q in quantities:
        series = _series_bundle(bundle, q)
        payload["quantities"][q] = series_to_json(
            series, meta={"quantity": q, "order": "second"}
        )
    path = os.path.join(out, "coeffs.json")
    _write_json(path, payload)
    print(path)
    return [path]


def _cmd_eval(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    bundle = _build_bundle(spec, args.samples, args.seed)
    if args.t is None and args.t_grid is None:
        raise UsageError("provide --t or --t-grid")
    if args.t is not None:
        value = _eval_bundle(bundle, args.quantity, args.t, args.order)
        print(_fmt(value))
        rows = [(args.t, value)]
    else:
        grid = _parse_grid(args.t_grid, log_spaced=True)
        rows = [(float(t), _eval_bundle(bundle, args.quantity, float(t), args.order)) for t in grid]
    if args.out:
        out = _ensure_out(args)
        path = os.path.join(out, "eval.csv")
        _write_csv(path, ["t", args.quantity], rows)
        return [path]
    if args.t is None:
        for t, v in rows:
            print(f"{_fmt(t)},{_fmt(v)}")
    return []


def _cmd_mc(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    out = _ensure_out(args)
    cfg = _mc_config(args)
    outputs = []
    if args.quantity == "digital":
        est = digital_price_mc(spec, args.t, cfg)
        path = os.path.join(out, "mc.json")
        _write_json(
            path,
            {
                "quantity": "digital",
                "t": args.t,
                "value": est.value,
                "std_error": est.std_error,
                "n_paths": est.n_paths,
            },
        )
        print(f"{_fmt(est.value)} +/- {_fmt(est.std_error)}")
        outputs.append(path)
    elif args.quantity == "skew":
        est = skew_fd_mc(spec, args.t, cfg, dk=args.dk)
        path = os.path.join(out, "mc.json")
        _write_json(
            path,
            {
                "quantity": "skew",
                "t": args.t,
                "dk": args.dk,
                "value": est.value,
                "std_error": est.std_error,
                "n_paths": est.n_paths,
            },
        )
        print(f"{_fmt(est.value)} +/- {_fmt(est.std_error)}")
        outputs.append(path)
    else:  # smile
        grid = _parse_grid(args.kappa_grid, log_spaced=False)
        points = smile_mc(spec, args.t, grid, cfg)
        path = os.path.join(out, "smile.csv")
        _write_csv(
            path,
            ["kappa", "iv", "iv_stderr"],
            [(k, v, se) for k, v, se in points],
        )
        outputs.append(path)
    return outputs


def _cmd_compare(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    out = _ensure_out(args)
    cfg = _mc_config(args)
    bundle = _build_bundle(spec, args.samples, args.seed)
    grid = _parse_grid(args.t_grid, log_spaced=True)
    rows = []
    for t in grid:
        t = float(t)
        a1 = _eval_bundle(bundle, args.quantity, t, "first")
        a2 = _eval_bundle(bundle, args.quantity, t, "second")
        if args.quantity == "digital":
            est = digital_price_mc(spec, t, cfg)
        elif args.quantity == "skew":
            est = skew_fd_mc(spec, t, cfg, dk=args.dk)
        else:
            raise UsageError("compare supports --quantity digital or skew")
        rows.append((t, a1, a2, est.value, est.std_error))
    path = os.path.join(out, "compare.csv")
    _write_csv(path, ["t", "approx1", "approx2", "mc", "mc_stderr"], rows)
    print(path)
    return [path]


def _cmd_smile(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    out = _ensure_out(args)
    cfg = _mc_config(args)
    grid = _parse_grid(args.kappa_grid, log_spaced=False)
    points = smile_mc(spec, args.t, grid, cfg)
    csv_path = os.path.join(out, "smile.csv")
    _write_csv(csv_path, ["kappa", "iv", "iv_stderr"], list(points))
    bundle = _build_bundle(spec, args.samples, args.seed)
    tangent = {
        "t": args.t,
        "atm_vol": _eval_bundle(bundle, "atm_vol", args.t, "second"),
        "skew": _eval_bundle(bundle, "skew", args.t, "second"),
        "note": "tangent line: iv(kappa) ~ atm_vol + skew * kappa",
    }
    json_path = os.path.join(out, "tangent.json")
    _write_json(json_path, tangent)
    return [csv_path, json_path]


def _cmd_otm(args: argparse.Namespace) -> list[str]:
    spec = _load_model(args)
    inputs = OtmInputs(
        kappa=args.kappa,
        levy_measure=spec.jumps,
        sigma_bm=spec.spot_vol if spec.kind == "ts+bm" else 0.0,
    )
    if args.t is None and args.t_grid is None:
        raise UsageError("provide --t or --t-grid")
    if args.t is not None:
        skew = otm_skew(inputs, args.t)
        print(
            json.dumps(
                {
                    "t": args.t,
                    "kappa": args.kappa,
                    "skew": skew,
                    "v1": v1_correction(inputs, args.t),
                },
                sort_keys=True,
            )
        )
        rows = [(args.t, skew)]
    else:
        grid = _parse_grid(args.t_grid, log_spaced=True)
        rows = [(float(t), otm_skew(inputs, float(t))) for t in grid]
        for t, v in rows:
            print(f"{_fmt(t)},{_fmt(v)}")
    if args.out:
        out = _ensure_out(args)
        path = os.path.join(out, "otm.csv")
        _write_csv(path, ["t", "skew"], rows)
        return [path]
    return []


def _cmd_calibrate(args: argparse.Namespace) -> list[str]:
    out = _ensure_out(args)
    paths = sorted(glob.glob(os.path.join(args.chains, "*.csv")))
    if not paths:
        raise DataError(f"no chain CSVs under {args.chains}")
    snapshots = [load_chain(p) for p in paths]
    all_series = skew_series(snapshots, mode=args.delta_mode)

    csv_path = os.path.join(out, "skew_series.csv")
    rows = []
    pooled = []
    for series in all_series:
        for t, s in series.points:
            rows.append((str(series.quote_date), t, s))
            pooled.append((t, s))
    _write_csv(csv_path, ["quote_date", "t", "skew_norm"], rows)

    from .pipeline import SkewSeries as _SkewSeries

    pooled_series = _SkewSeries(
        quote_date=all_series[0].quote_date, points=tuple(sorted(pooled))
    )
    fit = fit_powerlaw(pooled_series, t_max=args.t_max)
    fit_path = os.path.join(out, "fit.json")
    _write_json(
        fit_path,
        {
            "slope": fit.slope_b,
            "intercept": fit.intercept,
            "r2": fit.r_squared,
            "n": fit.n_points,
            "window": {"t_min": 5.0 / 365.0, "t_max": args.t_max},
        },
    )
    report = calibrate_Y(fit, args.model)
    cal_path = os.path.join(out, "calibration.json")
    _write_json(
        cal_path,
        {
            "Y_purejump": report["Y_purejump"],
            "Y_mixed": report["Y_mixed"],
            "regime_flags": report["regime_flags"],
            "model_kind": report["model_kind"],
            "Y": report["Y"],
            "slope_b": report["slope_b"],
        },
    )
    print(f"b={_fmt(fit.slope_b)} Y_purejump={_fmt(report['Y_purejump'])} "
          f"Y_mixed={_fmt(report['Y_mixed'])}")
    return [csv_path, fit_path, cal_path]


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--params", required=True, help="model params JSON file")
    p.add_argument("--model", choices=["ts", "ts+bm", "ts+heston"], default=None,
                   help="assert the model kind in the params file")


def _add_mc_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--paths", type=_parse_count, default=1_000_000)
    p.add_argument("--seed", type=int, default=20260822)
    p.add_argument("--steps", type=int, default=200,
                   help="Euler steps per path for stochastic volatility")
    p.add_argument("--workers", type=int, default=1)


def _add_coeff_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=_parse_count, default=4_000_000,
                   help="samples for the one-sided functional estimators")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levyskew",
        description="Short-maturity expansions, Monte Carlo, and calibration "
                    "for tempered stable-like models.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("coeffs", help="expansion coefficient bundles as JSON")
    _add_model_args(p)
    _add_coeff_args(p)
    p.add_argument("--seed", type=int, default=20260822)
    p.add_argument("--quantity", choices=QUANTITIES + ("all",), default="all")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("eval", help="evaluate an expansion quantity")
    _add_model_args(p)
    _add_coeff_args(p)
    p.add_argument("--seed", type=int, default=20260822)
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--t-grid", default=None, help="start:stop:count, log-spaced")
    p.add_argument("--order", choices=["first", "second"], default="second")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("mc", help="Monte Carlo estimates")
    _add_model_args(p)
    _add_mc_args(p)
    p.add_argument("--quantity", choices=["digital", "skew", "smile"],
                   default="digital")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dk", type=float, default=0.01,
                   help="finite-difference half-width for skew")
    p.add_argument("--kappa-grid", default="-0.05:0.05:11",
                   help="start:stop:count, linear, for smile")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("compare", help="first/second order vs Monte Carlo")
    _add_model_args(p)
    _add_mc_args(p)
    _add_coeff_args(p)
    p.add_argument("--quantity", choices=["digital", "skew"], default="digital")
    p.add_argument("--t-grid", required=True, help="start:stop:count, log-spaced")
    p.add_argument("--dk", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("smile", help="Monte Carlo smile plus ATM tangent")
    _add_model_args(p)
    _add_mc_args(p)
    _add_coeff_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--kappa-grid", default="-0.05:0.05:11")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_smile)

    p = sub.add_parser("otm", help="out-of-the-money skew approximation")
    _add_model_args(p)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--t-grid", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_otm)

    p = sub.add_parser("calibrate", help="chain pipeline: skews, fit, Y")
    p.add_argument("--chains", required=True, help="directory of chain CSVs")
    p.add_argument("--t-max", type=float, default=0.25)
    p.add_argument("--model", choices=["purejump", "mixed"], default="mixed")
    p.add_argument("--delta-mode", choices=["interp", "nearest"],
                   default="interp")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    model = None
    try:
        outputs = args.func(args)
        if getattr(args, "params", None) and getattr(args, "out", None):
            model = _load_model(args)
        _emit_manifest(args, outputs, model)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
