"""Ensembles over Haar-random targets, aggregation, fitting and persistence.

Per-trial random streams come from ``numpy.random.SeedSequence((seed, i))``
for trial ``i``; numpy documents this hashing as stable across platforms and
releases, so an ensemble is a pure function of its configuration whatever
the worker count. Each trial's stream first draws the Haar target, then
drives that trial's simulation.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigError, FitDomainError, SGQPTError
from .measurement import IDEAL, NoiseModel, check_shots
from .qpt import ESTIMATORS, qpt_trial
from .spsa import DEFAULT_INIT, GainSchedule, TrialTrace, run_learning
from .su2 import SU2Params, haar_random_su2

__all__ = [
    "PRESETS",
    "ExperimentConfig",
    "EnsembleStats",
    "EnsembleResult",
    "PowerLawFit",
    "trial_seed",
    "record_points",
    "run_trial",
    "run_ensemble",
    "aggregate",
    "default_fit_window",
    "fit_power_law",
    "export_results",
    "load_stats",
    "load_summary",
    "emit_plot",
]

STATS_HEADER = ("iteration", "median", "q25", "q75")
TRACES_HEADER = ("trial", "iteration", "shots", "infidelity")

# Schedule exponents reported for each experiment; delta0=0.2, g0=2, A=0.
PRESETS: dict[str, dict] = {
    "fig1": dict(gamma=0.42, alpha_exp=0.92, shots=1000, iterations=100_000, trials=100),
    "fig2": dict(gamma=0.21, alpha_exp=0.94, shots=1000, iterations=100_000, trials=100),
    "fig4": dict(gamma=0.06, alpha_exp=0.85, shots=100, iterations=50, trials=20),
    "fig5": dict(gamma=0.06, alpha_exp=0.85, shots=100, iterations=50, trials=20),
}


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "sgqpt"
    trials: int = 20
    iterations: int = 50
    shots: int = 100
    schedule: GainSchedule = field(default_factory=lambda: GainSchedule(0.06, 0.85))
    noise: NoiseModel = IDEAL
    init: SU2Params = DEFAULT_INIT
    seed: int = 0
    out: str | None = None
    # None: every iteration for runs up to 1000 long, else 20 log-spaced points per decade
    stride: int | None = None
    # QPT budget per trial; None matches the SGQPT budget 2 * shots * iterations
    photons: int | None = None
    estimator: str = "mle"
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("sgqpt", "qpt"):
            raise ConfigError(f"mode must be 'sgqpt' or 'qpt', got {self.mode!r}")
        for name in ("trials", "iterations", "workers"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        check_shots(self.shots)
        if self.stride is not None and (int(self.stride) != self.stride or self.stride < 1):
            raise ConfigError(f"stride must be >= 1, got {self.stride!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}")
        if self.photons is not None and self.photons < 18:
            raise ConfigError(f"photons must be >= 18, got {self.photons!r}")
        object.__setattr__(self, "init", SU2Params(*(float(x) for x in self.init)))

    @property
    def total_photons(self) -> int:
        return self.photons if self.photons is not None else 2 * self.shots * self.iterations

    @property
    def total_shots(self) -> int:
        if self.mode == "sgqpt":
            return 2 * self.shots * self.iterations * self.trials
        return self.total_photons * self.trials

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schedule"] = asdict(self.schedule)
        d["noise"] = {"kind": self.noise.kind, "epsilon": self.noise.epsilon}
        d["init"] = list(self.init)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExperimentConfig":
        d = dict(d)
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if isinstance(d.get("schedule"), Mapping):
            d["schedule"] = GainSchedule(**d["schedule"])
        if isinstance(d.get("noise"), Mapping):
            d["noise"] = NoiseModel(**d["noise"])
        if "init" in d:
            d["init"] = SU2Params(*d["init"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass
class EnsembleStats:
    iterations: np.ndarray
    median: np.ndarray
    q25: np.ndarray
    q75: np.ndarray

    def __len__(self) -> int:
        return len(self.iterations)

    def equals(self, other: "EnsembleStats") -> bool:
        return all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ("iterations", "median", "q25", "q75")
        )


@dataclass
class PowerLawFit:
    c: float
    beta: float
    k_min: int
    k_max: int
    residual: float

    def __call__(self, k):
        return self.c * np.asarray(k, dtype=float) ** self.beta


@dataclass
class EnsembleResult:
    config: ExperimentConfig
    stats: EnsembleStats
    traces: list[TrialTrace]
    seeds: list[list[int]]


def trial_seed(master_seed: int, i: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((int(master_seed), int(i)))


def record_points(iterations: int, stride: int | None = None) -> np.ndarray:
    """Iteration counts at which trial infidelities are stored."""
    if stride is not None:
        pts = np.arange(stride, iterations + 1, stride)
    elif iterations <= 1000:
        pts = np.arange(1, iterations + 1)
    else:
        decades = math.log10(iterations)
        pts = np.round(np.logspace(0, decades, int(round(20 * decades)) + 1)).astype(int)
    return np.unique(np.append(pts, iterations).astype(int))


def run_trial(cfg: ExperimentConfig, i: int) -> TrialTrace:
    rng = np.random.default_rng(trial_seed(cfg.seed, i))
    u = haar_random_su2(rng)
    if cfg.mode == "sgqpt":
        return run_learning(
            u, cfg.init, cfg.schedule, cfg.iterations, cfg.shots, cfg.noise, rng,
            record=record_points(cfg.iterations, cfg.stride),
        )
    value = qpt_trial(u, cfg.total_photons, cfg.noise, rng, cfg.estimator)
    return TrialTrace(
        iterations=np.array([1]),
        infidelity=np.array([value]),
        shots=np.array([cfg.total_photons]),
    )


def _run_trial_checked(args):
    cfg, i = args
    try:
        return run_trial(cfg, i)
    except SGQPTError as exc:
        raise SGQPTError(f"trial {i} (seed {cfg.seed}) failed: {exc}") from exc


def aggregate(traces: list[TrialTrace]) -> EnsembleStats:
    """Median and quartiles across trials (linear interpolation between order statistics)."""
    if not traces:
        raise ConfigError("no traces to aggregate")
    its = traces[0].iterations
    if any(not np.array_equal(t.iterations, its) for t in traces):
        raise ConfigError("traces were recorded at different iterations")
    data = np.stack([t.infidelity for t in traces])
    q25, med, q75 = np.percentile(data, [25, 50, 75], axis=0, method="linear")
    return EnsembleStats(np.asarray(its).copy(), med, q25, q75)


def run_ensemble(cfg: ExperimentConfig) -> EnsembleResult:
    """Run ``cfg.trials`` independent trials and aggregate them.

    Results are identical for any ``cfg.workers``; trials are collected in
    index order after all of them finish.
    """
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            traces = list(pool.map(_run_trial_checked, jobs))
    else:
        traces = [_run_trial_checked(j) for j in jobs]
    seeds = [list(trial_seed(cfg.seed, i).generate_state(2)) for i in range(cfg.trials)]
    return EnsembleResult(cfg, aggregate(traces), traces, [[int(s) for s in x] for x in seeds])


def default_fit_window(stats: EnsembleStats) -> tuple[int, int]:
    k_max = int(np.max(stats.iterations))
    return max(100, math.ceil(0.01 * k_max)), k_max


def fit_power_law(stats: EnsembleStats, window: tuple[int, int] | None = None) -> PowerLawFit:
    """Least-squares fit of ``log median = log c + beta log k`` inside ``window``."""
    k_min, k_max = window if window is not None else default_fit_window(stats)
    k = np.asarray(stats.iterations, dtype=float)
    sel = (k >= k_min) & (k <= k_max)
    if sel.sum() < 10:
        raise FitDomainError(f"need >= 10 points in window [{k_min}, {k_max}], have {int(sel.sum())}")
    y = np.asarray(stats.median, dtype=float)[sel]
    if np.any(y <= 0):
        raise FitDomainError("median infidelity must be positive inside the fit window")
    x = np.log(k[sel])
    ly = np.log(y)
    beta, intercept = np.polyfit(x, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (intercept + beta * x)) ** 2)))
    return PowerLawFit(float(math.exp(intercept)), float(beta), int(k_min), int(k_max), resid)


def export_results(
    stats: EnsembleStats,
    traces: list[TrialTrace],
    fit: PowerLawFit | None,
    path: str | os.PathLike,
    config: ExperimentConfig | None = None,
    seeds: list | None = None,
) -> dict[str, Path]:
    """Write ``summary.json``, ``stats.csv`` and ``traces.csv`` into directory ``path``.

    Floats are written with ``repr`` so they parse back bit-for-bit.
    """
    if len(stats) == 0 or not traces or any(len(t.iterations) == 0 for t in traces):
        raise ConfigError("refusing to export an empty ensemble")
    out = Path(path)
    files = {"summary": out / "summary.json", "stats": out / "stats.csv", "traces": out / "traces.csv"}
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(files["stats"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(STATS_HEADER)
            for row in zip(stats.iterations, stats.median, stats.q25, stats.q75):
                w.writerow([int(row[0])] + [repr(float(x)) for x in row[1:]])
        with open(files["traces"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRACES_HEADER)
            for i, t in enumerate(traces):
                for k, n, f in zip(t.iterations, t.shots, t.infidelity):
                    w.writerow([i, int(k), int(n), repr(float(f))])
        summary = {
            "config": config.to_dict() if config is not None else None,
            "master_seed": config.seed if config is not None else None,
            "trial_seeds": seeds,
            "trials": len(traces),
            "total_shots": config.total_shots if config is not None else None,
            "fit": asdict(fit) if fit is not None else None,
            "final": {
                "iteration": int(stats.iterations[-1]),
                "median": float(stats.median[-1]),
                "q25": float(stats.q25[-1]),
                "q75": float(stats.q75[-1]),
            },
        }
        files["summary"].write_text(json.dumps(summary, indent=2) + "\n")
    except OSError as exc:
        raise SGQPTError(f"could not write results to {out}: {exc}") from exc
    return files


def load_stats(path: str | os.PathLike) -> EnsembleStats:
    """Read a ``stats.csv`` (or a results directory containing one)."""
    p = Path(path)
    if p.is_dir():
        p = p / "stats.csv"
    try:
        with open(p, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SGQPTError(f"could not read {p}: {exc}") from exc
    if not rows or tuple(rows[0]) != STATS_HEADER:
        raise ConfigError(f"{p}: expected header {','.join(STATS_HEADER)}")
    body = rows[1:]
    return EnsembleStats(
        np.array([int(r[0]) for r in body]),
        np.array([float(r[1]) for r in body]),
        np.array([float(r[2]) for r in body]),
        np.array([float(r[3]) for r in body]),
    )


def load_summary(path: str | os.PathLike) -> dict:
    p = Path(path)
    if p.is_dir():
        p = p / "summary.json"
    return json.loads(p.read_text())


def emit_plot(
    stats: EnsembleStats | Mapping[str, EnsembleStats],
    fit: PowerLawFit | Mapping[str, PowerLawFit] | None,
    path: str | os.PathLike,
    hlines: Mapping[str, float] | None = None,
    title: str | None = None,
) -> Path:
    """Log-log median infidelity with interquartile band and fitted power law.

    ``stats`` may be a mapping of label to stats for multi-curve figures;
    ``hlines`` draws labelled horizontal reference levels (e.g. a QPT median).
    The output format follows the file suffix (svg by default).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves = dict(stats) if isinstance(stats, Mapping) else {None: stats}
    fits = dict(fit) if isinstance(fit, Mapping) else {None: fit} if fit is not None else {}
    path = Path(path)
    if not path.suffix:
        path = path.with_suffix(".svg")

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, st in curves.items():
        k = np.asarray(st.iterations, dtype=float)
        if len(k) == 1:
            (line,) = ax.plot(k, st.median, "o", label=label or "median")
            ax.errorbar(k, st.median, yerr=np.vstack([st.median - st.q25, st.q75 - st.median]), color=line.get_color())
            continue
        (line,) = ax.plot(k, st.median, label=label or "median")
        ax.fill_between(k, st.q25, st.q75, color=line.get_color(), alpha=0.25, linewidth=0)
        f = fits.get(label)
        if f is not None:
            kk = np.array([f.k_min, f.k_max], dtype=float)
            ax.plot(kk, f(kk), "--", color=line.get_color(), label=f"$\\beta$ = {f.beta:.2f}")
    for label, value in (hlines or {}).items():
        ax.axhline(value, linestyle=":", color="k", linewidth=1)
        ax.annotate(label, (1.0, value), xycoords=("axes fraction", "data"), ha="right", va="bottom", fontsize=8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("iteration $k$")
    ax.set_ylabel("infidelity")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, bbox_inches="tight")
    except OSError as exc:
        raise SGQPTError(f"could not write plot to {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
