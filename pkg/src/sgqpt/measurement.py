"""Simulated Bell-measurement experiment with finite shots and waveplate jitter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import InvalidParameterError
from .su2 import _fidelity, check_unitary, decompose_to_waveplates, waveplate_compose

__all__ = ["NoiseModel", "IDEAL", "realize_control", "measure_overlap", "check_shots"]


@dataclass(frozen=True)
class NoiseModel:
    """How a requested control is realized in the lab.

    ``kind`` is ``"ideal"`` or ``"jitter"``. For ``"jitter"`` every one of the
    three waveplates is rotated by an independent uniform(-epsilon, epsilon)
    error in degrees each time a control is set.
    """

    kind: str = "ideal"
    epsilon: float | None = None

    def __post_init__(self):
        if self.kind == "ideal":
            if self.epsilon not in (None, 0, 0.0):
                raise InvalidParameterError("ideal noise model carries no epsilon")
            object.__setattr__(self, "epsilon", None)
        elif self.kind == "jitter":
            if self.epsilon is None or not math.isfinite(self.epsilon) or self.epsilon < 0:
                raise InvalidParameterError(f"jitter epsilon must be finite and >= 0, got {self.epsilon!r}")
            object.__setattr__(self, "epsilon", float(self.epsilon))
        else:
            raise InvalidParameterError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def ideal(cls) -> "NoiseModel":
        return cls("ideal")

    @classmethod
    def jitter(cls, epsilon: float) -> "NoiseModel":
        return cls("jitter", epsilon)

    @property
    def is_ideal(self) -> bool:
        return self.kind == "ideal"

    def label(self) -> str:
        return "ideal" if self.is_ideal else f"jitter {self.epsilon:g} deg"


IDEAL = NoiseModel.ideal()


def check_shots(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameterError(f"shot count must be a positive integer, got {n!r}")
    return int(n)


def _realize(v: np.ndarray, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    if noise.is_ideal:
        return v
    triple = np.asarray(decompose_to_waveplates(v))
    return waveplate_compose(triple + rng.uniform(-noise.epsilon, noise.epsilon, size=3))


def realize_control(v_requested: ArrayLike, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Unitary actually applied when the learner asks for ``v_requested``.

    Under jitter the request is decomposed into waveplate angles, each angle
    is perturbed independently, and the perturbed plates are recomposed.
    The result is phase-equivalent to, not equal to, the request.
    """
    v = check_unitary(v_requested, name="v_requested")
    return _realize(v, noise, rng)


def measure_overlap(
    u_true: ArrayLike,
    v_requested: ArrayLike,
    shots: int,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> float:
    """Finite-shot estimate of the Bell-outcome probability.

    A fresh control realization is drawn per call and shared by all
    ``shots`` photons; the count is Binomial(shots, p). Returns ``k / shots``.
    """
    u = check_unitary(u_true, name="u_true")
    v = check_unitary(v_requested, name="v_requested")
    return _measure(u, v, check_shots(shots), noise, rng)


def _measure(u: np.ndarray, v: np.ndarray, shots: int, noise: NoiseModel, rng: np.random.Generator) -> float:
    p = _fidelity(u, _realize(v, noise, rng))
    return rng.binomial(shots, p) / shots
