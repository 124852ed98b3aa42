"""Self-guided process tomography: SPSA ascent on the measured Bell fidelity.

The learner lives in ``(alpha, theta, phi)`` coordinates. Each iteration
draws a Rademacher direction, measures the fidelity at the two perturbed
controls, and steps along the two-point gradient estimate::

    G_k = (f(x + d_k D) - f(x - d_k D)) / (2 d_k) * D
    x  <- x + g_k G_k

with ``d_k = delta0 / (k+1)**gamma`` and ``g_k = g0 / (k+1+A)**alpha_exp``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from numpy.typing import ArrayLike

from .errors import InvalidParameterError
from .measurement import NoiseModel, _measure, check_shots
from .su2 import SU2Params, _fidelity, _su2, check_unitary

__all__ = [
    "DEFAULT_INIT",
    "GainSchedule",
    "LearnerState",
    "TrialTrace",
    "gains_at",
    "sample_direction",
    "spsa_gradient",
    "exact_objective",
    "spsa_iteration",
    "run_learning",
]

DEFAULT_INIT = SU2Params(math.pi / 4, math.pi / 2, math.pi)


@dataclass(frozen=True)
class GainSchedule:
    gamma: float
    alpha_exp: float
    delta0: float = 0.2
    g0: float = 2.0
    a_stability: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "alpha_exp", "delta0", "g0", "a_stability"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.delta0 <= 0 or self.g0 <= 0:
            raise InvalidParameterError("delta0 and g0 must be positive")
        if self.a_stability < 0:
            raise InvalidParameterError("A must be non-negative")
        if not (0 < self.gamma <= 1 and 0 < self.alpha_exp <= 1):
            raise InvalidParameterError("gamma and alpha_exp must lie in (0, 1]")


@dataclass(frozen=True)
class LearnerState:
    k: int
    params: np.ndarray

    def __post_init__(self):
        if self.k < 0:
            raise InvalidParameterError(f"iteration index must be >= 0, got {self.k}")
        object.__setattr__(self, "params", np.asarray(self.params, dtype=float).reshape(3))


@dataclass
class TrialTrace:
    """True infidelity of the running estimate at the recorded iterations.

    ``iterations[i]`` counts completed updates; ``shots[i]`` is the number of
    photons spent to get there (``2 * N * iterations[i]``).
    """

    iterations: np.ndarray
    infidelity: np.ndarray
    shots: np.ndarray
    final_params: SU2Params = field(default=DEFAULT_INIT)


def gains_at(s: GainSchedule, k: int) -> tuple[float, float]:
    """Perturbation size and step size at iteration ``k`` (0-based)."""
    if k < 0:
        raise InvalidParameterError(f"iteration index must be >= 0, got {k}")
    return s.delta0 / (k + 1) ** s.gamma, s.g0 / (k + 1 + s.a_stability) ** s.alpha_exp


def sample_direction(rng: np.random.Generator) -> np.ndarray:
    """Three independent fair +/-1 entries."""
    return 2.0 * rng.integers(0, 2, size=3) - 1.0


def spsa_gradient(
    f: Callable[[np.ndarray], float], params: np.ndarray, delta: float, direction: np.ndarray
) -> np.ndarray:
    """Two-point simultaneous-perturbation gradient estimate of ``f``."""
    diff = f(params + delta * direction) - f(params - delta * direction)
    return (diff / (2.0 * delta)) * direction


def exact_objective(u_true: ArrayLike) -> Callable[[np.ndarray], float]:
    """Noise-free objective ``params -> |tr(V(params)^dag U)|^2 / 4``."""
    u = check_unitary(u_true, name="u_true")
    return lambda p: _fidelity(u, _su2(p[0], p[1], p[2]))


def _step(x, k, s, u, shots, noise, rng):
    delta, gain = gains_at(s, k)
    direction = sample_direction(rng)

    def measured(p):
        return _measure(u, _su2(p[0], p[1], p[2]), shots, noise, rng)

    return x + gain * spsa_gradient(measured, x, delta, direction)


def spsa_iteration(
    state: LearnerState,
    s: GainSchedule,
    u_true: ArrayLike,
    shots: int,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> LearnerState:
    """One SPSA update; spends exactly ``2 * shots`` photons."""
    u = check_unitary(u_true, name="u_true")
    x = _step(state.params, state.k, s, u, check_shots(shots), noise, rng)
    return LearnerState(state.k + 1, x)


def run_learning(
    u_true: ArrayLike,
    init: ArrayLike,
    s: GainSchedule,
    iterations: int,
    shots: int,
    noise: NoiseModel,
    rng: np.random.Generator,
    record: Iterable[int] | None = None,
) -> TrialTrace:
    """Learn ``u_true`` from scratch and trace the true infidelity.

    Parameters
    ----------
    record
        Iteration counts (1..iterations) at which to store the infidelity
        of the current estimate. Defaults to every iteration.

    The infidelity is scored against the requested control, using
    knowledge of ``u_true`` the learner itself never sees.
    """
    u = check_unitary(u_true, name="u_true")
    shots = check_shots(shots)
    if isinstance(iterations, bool) or int(iterations) != iterations or iterations < 1:
        raise InvalidParameterError(f"iterations must be a positive integer, got {iterations!r}")
    iterations = int(iterations)
    if record is None:
        rec = np.arange(1, iterations + 1)
    else:
        rec = np.unique(np.asarray(list(record), dtype=int))
        if rec.size == 0 or rec[0] < 1 or rec[-1] > iterations:
            raise InvalidParameterError("record points must lie in 1..iterations")

    x = np.asarray(init, dtype=float).reshape(3)
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("initial parameters must be finite")
    infid = np.empty(rec.size)
    j = 0
    for k in range(iterations):
        x = _step(x, k, s, u, shots, noise, rng)
        if j < rec.size and rec[j] == k + 1:
            infid[j] = 1.0 - _fidelity(u, _su2(x[0], x[1], x[2]))
            j += 1
    return TrialTrace(
        iterations=rec,
        infidelity=infid,
        shots=2 * shots * rec,
        final_params=SU2Params(*(float(v) for v in x)),
    )
