import math

import numpy as np
import pytest

from sgqpt.errors import InvalidParameterError
from sgqpt.measurement import IDEAL, NoiseModel, measure_overlap, realize_control
from sgqpt.su2 import IDENTITY, SIGMA_X, haar_random_su2, infidelity, phase_distance, su2_from_params


def test_noise_model_validation():
    assert NoiseModel.ideal().epsilon is None
    assert NoiseModel.jitter(0).epsilon == 0.0
    with pytest.raises(InvalidParameterError):
        NoiseModel("ideal", 3.0)
    with pytest.raises(InvalidParameterError):
        NoiseModel.jitter(-1)
    with pytest.raises(InvalidParameterError):
        NoiseModel("drift", 1.0)


def test_ideal_realization_is_exact(rng):
    v = haar_random_su2(rng)
    assert np.array_equal(realize_control(v, IDEAL, rng), v)


def test_zero_width_jitter_is_phase_equivalent(rng):
    for _ in range(20):
        v = haar_random_su2(rng)
        assert phase_distance(v, realize_control(v, NoiseModel.jitter(0.0), rng)) <= 1e-8


def test_jitter_degrades_monotonically(rng):
    v = haar_random_su2(rng)
    means = [
        np.mean([infidelity(v, realize_control(v, NoiseModel.jitter(eps), rng)) for _ in range(10_000)])
        for eps in (1.0, 6.0, 12.0)
    ]
    assert means[0] < means[1] < means[2]


def test_degenerate_probabilities(rng):
    u = haar_random_su2(rng)
    for n in (1, 10, 1000):
        assert measure_overlap(u, u, n, IDEAL, rng) == 1.0
    assert measure_overlap(IDENTITY, 1j * SIGMA_X, 100, IDEAL, rng) == 0.0


def test_binomial_statistics(rng):
    v = su2_from_params((math.pi / 4, 0, 0))  # fidelity with I is exactly 1/2
    n = 1000
    est = np.array([measure_overlap(IDENTITY, v, n, IDEAL, rng) for _ in range(10_000)])
    assert abs(est.mean() - 0.5) < 0.005
    assert est.var() == pytest.approx(0.25 / n, rel=0.05)
    assert np.all(np.isclose(est * n, np.round(est * n)))


def test_outputs_on_grid(rng):
    u, v = haar_random_su2(rng), haar_random_su2(rng)
    for n in (1, 7, 64):
        for _ in range(50):
            p = measure_overlap(u, v, n, NoiseModel.jitter(6), rng)
            assert 0 <= p <= 1 and abs(p * n - round(p * n)) < 1e-12


def test_unbiased_against_exact_probability(rng):
    u, v = haar_random_su2(rng), haar_random_su2(rng)
    p = 1 - infidelity(u, v)
    n, reps = 50, 20_000
    est = np.array([measure_overlap(u, v, n, NoiseModel.jitter(0.0), rng) for _ in range(reps)])
    se = math.sqrt(p * (1 - p) / n / reps)
    assert abs(est.mean() - p) < 3 * se


def test_deterministic():
    u, v = haar_random_su2(np.random.default_rng(1)), haar_random_su2(np.random.default_rng(2))
    a = [measure_overlap(u, v, 100, NoiseModel.jitter(5), np.random.default_rng(3)) for _ in range(3)]
    b = [measure_overlap(u, v, 100, NoiseModel.jitter(5), np.random.default_rng(3)) for _ in range(3)]
    assert a == b


def test_bad_shot_count(rng):
    with pytest.raises(InvalidParameterError):
        measure_overlap(IDENTITY, IDENTITY, 0, IDEAL, rng)
