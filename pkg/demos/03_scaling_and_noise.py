# coding: utf-8

# # Ensemble scaling and waveplate jitter
#
# Many Haar-random targets, median and interquartile range per iteration,
# then a straight-line fit in log-log coordinates. Sizes are kept small so
# the script finishes in well under a minute; the command-line `simulate`
# subcommand with `--preset fig1` runs the full-size version.

from pathlib import Path

import numpy as np

from sgqpt import ExperimentConfig, GainSchedule, NoiseModel, emit_plot, fit_power_law, run_ensemble

out = Path("demo_output")
out.mkdir(exist_ok=True)

cfg = ExperimentConfig(trials=20, iterations=3000, shots=1000, schedule=GainSchedule(0.42, 0.92), seed=0)
res = run_ensemble(cfg)
fit = fit_power_law(res.stats)
print(f"fit window {fit.k_min}..{fit.k_max}: infidelity ~ {fit.c:.3g} k^{fit.beta:.3f}")
print("final median", res.stats.median[-1])
emit_plot(res.stats, fit, out / "scaling.svg", title="noiseless learning")

# ## Adding jitter
#
# Each requested control is realized through waveplates that are off by a
# fresh uniform error of up to epsilon degrees. The learner cannot tell, so
# the curve flattens once the jitter dominates. The schedule matters a lot
# here: the slower-shrinking perturbation of the "fig2" preset keeps the
# finite-difference signal above the jitter for longer.

curves = {}
noisy_schedule = GainSchedule(0.21, 0.94)
for eps in (1.0, 6.0, 12.0):
    noisy = ExperimentConfig(
        **{**cfg.__dict__, "iterations": 1000, "schedule": noisy_schedule, "noise": NoiseModel.jitter(eps)}
    )
    curves[f"jitter {eps:g} deg"] = run_ensemble(noisy).stats
    print(f"eps = {eps:4.1f}  final median {curves[f'jitter {eps:g} deg'].median[-1]:.3e}")
print(emit_plot(curves, None, out / "jitter.svg"))
