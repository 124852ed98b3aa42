"""Command-line driver: ``sgqpt simulate | baseline | fit | plot``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .errors import ConfigError, FitDomainError, SGQPTError
from .harness import (
    PRESETS,
    ExperimentConfig,
    default_fit_window,
    emit_plot,
    export_results,
    fit_power_law,
    load_stats,
    run_ensemble,
)
from .measurement import NoiseModel
from .qpt import ESTIMATORS
from .spsa import GainSchedule

_SCHEDULE_KEYS = ("gamma", "alpha_exp", "delta0", "g0", "a_stability")


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config (a previous summary.json also works)")
    p.add_argument("--preset", choices=sorted(PRESETS), help="published schedule and ensemble size for one figure")
    p.add_argument("--trials", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--shots", type=int, help="photons per fidelity estimate (N)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha-exp", dest="alpha_exp", type=float)
    p.add_argument("--delta0", type=float)
    p.add_argument("--g0", type=float)
    p.add_argument("--A", dest="a_stability", type=float)
    p.add_argument("--noise", choices=("ideal", "jitter"))
    p.add_argument("--epsilon-deg", dest="epsilon", type=float)
    p.add_argument("--init", type=float, nargs=3, metavar=("ALPHA", "THETA", "PHI"))
    p.add_argument("--seed", type=int)
    p.add_argument("--stride", type=int, help="record every m-th iteration (default: automatic)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path, help="results directory")


def _flatten(d: dict) -> dict:
    """Accept both the nested summary layout and flat flag-style keys."""
    d = dict(d.get("config", d)) if isinstance(d.get("config"), dict) else dict(d)
    flat = {}
    for key, value in d.items():
        if key == "schedule" and isinstance(value, dict):
            flat.update(value)
        elif key == "noise" and isinstance(value, dict):
            flat["noise"] = value.get("kind")
            flat["epsilon"] = value.get("epsilon")
        else:
            flat[key] = value
    return flat


def build_config(args: argparse.Namespace, mode: str) -> ExperimentConfig:
    """Defaults < preset < config file < explicit flags."""
    merged: dict = {"gamma": 0.06, "alpha_exp": 0.85}
    if args.preset:
        merged.update(PRESETS[args.preset])
    if args.config:
        try:
            merged.update(_flatten(json.loads(args.config.read_text())))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key, value in vars(args).items():
        if key not in ("config", "preset", "func", "command", "no_plot") and value is not None:
            merged[key] = value
    merged["mode"] = mode

    schedule = GainSchedule(**{k: merged.pop(k) for k in _SCHEDULE_KEYS if k in merged})
    kind = merged.pop("noise", None) or "ideal"
    epsilon = merged.pop("epsilon", None)
    if kind == "ideal" and epsilon:
        raise ConfigError("--epsilon-deg requires --noise jitter")
    noise = NoiseModel.jitter(epsilon if epsilon is not None else 0.0) if kind == "jitter" else NoiseModel.ideal()
    if merged.get("out") is not None:
        merged["out"] = str(merged["out"])
    try:
        return ExperimentConfig.from_dict({**merged, "schedule": asdict(schedule), "noise": asdict(noise)})
    except SGQPTError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _run(cfg: ExperimentConfig, plot: bool) -> int:
    res = run_ensemble(cfg)
    fit = None
    if cfg.mode == "sgqpt":
        try:
            fit = fit_power_law(res.stats)
        except FitDomainError:
            pass
    out = Path(cfg.out or "results")
    files = export_results(res.stats, res.traces, fit, out, config=cfg, seeds=res.seeds)
    if plot and cfg.mode == "sgqpt":
        emit_plot(res.stats, fit, out / "plot.svg", title=f"SGQPT, {cfg.noise.label()}")
    med = res.stats.median[-1]
    print(f"{cfg.mode}: {cfg.trials} trials, final median infidelity {med:.4g} "
          f"(q25 {res.stats.q25[-1]:.4g}, q75 {res.stats.q75[-1]:.4g})")
    if fit is not None:
        print(f"power-law fit on k in [{fit.k_min}, {fit.k_max}]: c = {fit.c:.4g}, beta = {fit.beta:.4f}")
    print(f"wrote {', '.join(str(p) for p in files.values())}")
    return 0


def cmd_simulate(args) -> int:
    return _run(build_config(args, "sgqpt"), plot=not args.no_plot)


def cmd_baseline(args) -> int:
    return _run(build_config(args, "qpt"), plot=False)


def cmd_fit(args) -> int:
    stats = load_stats(args.results)
    window = default_fit_window(stats)
    window = (args.kmin or window[0], args.kmax or window[1])
    fit = fit_power_law(stats, window)
    text = json.dumps(asdict(fit), indent=2)
    print(text)
    if args.write:
        Path(args.write).write_text(text + "\n")
    return 0


def cmd_plot(args) -> int:
    labels = args.label or []
    if labels and len(labels) != len(args.results):
        raise ConfigError("give one --label per results path")
    curves = {}
    fits = {}
    for i, path in enumerate(args.results):
        label = labels[i] if labels else (Path(path).name if len(args.results) > 1 else None)
        stats = load_stats(path)
        curves[label] = stats
        if not args.no_fit:
            try:
                fits[label] = fit_power_law(stats)
            except FitDomainError:
                pass
    hlines = {}
    for item in args.hline or []:
        name, _, value = item.rpartition("=")
        try:
            hlines[name or item] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--hline expects LABEL=VALUE, got {item!r}") from exc
    if len(curves) == 1 and None in curves:
        path = emit_plot(curves[None], fits.get(None), args.out, hlines=hlines, title=args.title)
    else:
        path = emit_plot(curves, fits, args.out, hlines=hlines, title=args.title)
    print(f"wrote {path}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgqpt", description="Self-guided process tomography simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="SGQPT ensemble over Haar-random targets")
    _experiment_args(p)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("baseline", help="standard QPT ensemble over Haar-random targets")
    _experiment_args(p)
    p.add_argument("--photons", type=int, help="photons per tomogram (default 2*shots*iterations)")
    p.add_argument("--estimator", choices=ESTIMATORS)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("fit", help="power-law fit of stored statistics")
    p.add_argument("results", type=Path, help="results directory or stats.csv")
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--write", type=Path, help="also save the fit as JSON")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="render stored statistics")
    p.add_argument("results", type=Path, nargs="+")
    p.add_argument("--label", action="append")
    p.add_argument("--hline", action="append", metavar="LABEL=VALUE")
    p.add_argument("--title")
    p.add_argument("--no-fit", action="store_true")
    p.add_argument("--out", type=Path, default=Path("plot.svg"))
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SGQPTError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
