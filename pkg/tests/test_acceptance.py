"""End-to-end acceptance checks, one test per criterion.

Every test appends a PASS/FAIL line to the terminal summary before asserting,
so a run always reports the full table even when some criteria fail. Seeds
are fixed in advance (master seed 0) and never tuned.
"""

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from sgqpt.harness import ExperimentConfig, export_results, fit_power_law, run_ensemble
from sgqpt.measurement import IDEAL, NoiseModel
from sgqpt.qpt import exact_frequencies, reconstruct_from_frequencies
from sgqpt.spsa import GainSchedule, exact_objective, sample_direction, spsa_gradient
from sgqpt.su2 import (
    bloch_rotation,
    decompose_to_waveplates,
    haar_random_su2,
    phase_distance,
    process_fidelity,
    so3_to_su2,
    waveplate_compose,
)

pytestmark = pytest.mark.slow

EXPERIMENT = dict(trials=20, iterations=50, shots=100, schedule=GainSchedule(0.06, 0.85), seed=0)
REFERENCE_SGQPT = {1.0: 4.4e-3, 6.0: 1.45e-2, 12.0: 8.23e-2}
REFERENCE_QPT = {1.0: 9.7e-3, 6.0: 5.82e-2, 12.0: 1.638e-1}


def report(tag, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    assert ok, detail


def final_median(**kw):
    return float(run_ensemble(ExperimentConfig(**{**EXPERIMENT, **kw})).stats.median[-1])


def test_c1_noiseless_scaling():
    cfg = ExperimentConfig(
        trials=50, iterations=10_000, shots=1000, schedule=GainSchedule(0.42, 0.92, 0.2, 2.0, 0.0), seed=0
    )
    fit = fit_power_law(run_ensemble(cfg).stats, (100, 10_000))
    report("C1 noiseless scaling", -1.2 <= fit.beta <= -0.8,
           f"beta = {fit.beta:.4f} on k in [100, 10000] (band [-1.2, -0.8]), c = {fit.c:.3g}")


def test_c2_ideal_fifty_iterations():
    med = final_median()
    report("C2 ideal 50-iteration benchmark", med <= 1e-2, f"median final infidelity {med:.3e} (bound 1e-2)")


def test_c3_qpt_baseline():
    med = final_median(mode="qpt", photons=10_000)
    report("C3 QPT baseline", 2e-3 <= med <= 1e-2, f"median infidelity {med:.4e} (band [2e-3, 1e-2])")


def test_c4_noise_robustness():
    sg, qpt = {}, {}
    for eps in (1.0, 6.0, 12.0):
        noise = NoiseModel.jitter(eps)
        sg[eps] = final_median(noise=noise)
        qpt[eps] = final_median(mode="qpt", photons=10_000, noise=noise)
    ordering = sg[6.0] < qpt[6.0] and sg[12.0] < qpt[12.0]
    monotone = sg[1.0] < sg[6.0] < sg[12.0] and qpt[1.0] < qpt[6.0] < qpt[12.0]
    band = all(1 / 3 <= sg[e] / REFERENCE_SGQPT[e] <= 3 and 1 / 3 <= qpt[e] / REFERENCE_QPT[e] <= 3 for e in sg)
    detail = (
        "SGQPT " + "/".join(f"{sg[e]:.3g}" for e in sg)
        + ", QPT " + "/".join(f"{qpt[e]:.3g}" for e in qpt)
        + f" at 1/6/12 deg; ordering {ordering}, monotone {monotone}, within 3x of reference {band}"
    )
    report("C4 noise robustness", ordering and monotone and band, detail)


def test_c5_gradient_estimator():
    rng = np.random.default_rng(0)
    delta, n_dir, h = 1e-3, 10_000, 1e-6
    worst = 0.0
    for _ in range(10):
        f = exact_objective(haar_random_su2(rng))
        x = rng.uniform([0, 0, 0], [np.pi, np.pi, 2 * np.pi])
        samples = np.array([spsa_gradient(f, x, delta, sample_direction(rng)) for _ in range(n_dir)])
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(n_dir)
        central = np.array([(f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(3)])
        worst = max(worst, float(np.max(np.abs(mean - central) / np.maximum(se, 1e-12))))
    report("C5 gradient estimator", worst <= 3.0,
           f"largest |mean - central difference| = {worst:.2f} standard errors over 10 pairs (bound 3)")


def test_c6_round_trips():
    rng = np.random.default_rng(0)
    dec = lift = recon = 0.0
    for _ in range(100):
        u = haar_random_su2(rng)
        dec = max(dec, phase_distance(waveplate_compose(decompose_to_waveplates(u)), u))
        lift = max(lift, 1 - process_fidelity(so3_to_su2(bloch_rotation(u)), u))
        recon = max(recon, 1 - process_fidelity(reconstruct_from_frequencies(exact_frequencies(u)), u))
    ok = dec <= 1e-8 and lift <= 1e-10 and recon <= 1e-10
    report("C6 oracle round trips", ok,
           f"waveplate residual {dec:.1e}, lift infidelity {lift:.1e}, QPT exact-data infidelity {recon:.1e}")


def test_c7_determinism(tmp_path):
    configs = [
        ExperimentConfig(trials=6, iterations=200, shots=100, schedule=GainSchedule(0.06, 0.85),
                         noise=NoiseModel.jitter(6.0), seed=0),
        ExperimentConfig(mode="qpt", trials=6, photons=10_000, noise=NoiseModel.jitter(6.0), seed=0),
    ]
    same = True
    for n, cfg in enumerate(configs):
        blobs = []
        for workers in (1, 1, 2):
            res = run_ensemble(ExperimentConfig(**{**cfg.__dict__, "workers": workers}))
            files = export_results(res.stats, res.traces, None, tmp_path / f"{n}-{len(blobs)}", config=cfg, seeds=res.seeds)
            blobs.append(files["stats"].read_bytes() + files["traces"].read_bytes())
        same &= blobs[0] == blobs[1] == blobs[2]
    report("C7 determinism", same, "stats.csv and traces.csv byte-identical across repeats and 1 vs 2 workers")
