"""Standard process tomography baseline for a single-qubit unitary.

Six Pauli eigenstates are sent through the process; each output is measured
in the x, y and z bases (a basis change followed by a z projection), giving
18 settings that share the photon budget evenly.

Two estimators are provided:

* ``"mle"``: maximum-likelihood completely-positive trace-preserving
  process (a Choi matrix), scored by its process fidelity with the target.
  This is conventional process tomography and makes no unitarity
  assumption.
* ``"procrustes"``: the rotation best mapping the probes onto the estimated
  outputs (orthogonal Procrustes), lifted back to SU(2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import BudgetError, IllConditionedError, InvalidParameterError, ReconstructionError
from .measurement import NoiseModel, _realize
from .su2 import (
    IDENTITY,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    _fidelity,
    bloch_rotation,
    check_unitary,
    nearest_rotation,
    so3_to_su2,
)

__all__ = [
    "PROBES",
    "BASIS_CHANGES",
    "N_SETTINGS",
    "TomogramData",
    "exact_frequencies",
    "simulate_qpt_counts",
    "reconstruct_from_frequencies",
    "reconstruct_unitary",
    "choi_of_unitary",
    "channel_fidelity",
    "reconstruct_process_mle",
    "qpt_trial",
]

# +x, -x, +y, -y, +z, -z
PROBES = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float
)

_HADAMARD = (SIGMA_X + SIGMA_Z) / np.sqrt(2)
_S_DAG = np.diag([1, -1j])
# B_j sigma_j B_j^dag = sigma_z, so a z projection after B_j measures sigma_j
BASIS_CHANGES = (_HADAMARD, _HADAMARD @ _S_DAG, IDENTITY.copy())

N_SETTINGS = len(PROBES) * len(BASIS_CHANGES)


@dataclass(frozen=True)
class TomogramData:
    """+1-outcome counts ``counts[probe, basis]``, each out of ``n_setting``."""

    n_setting: int
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.shape != (len(PROBES), len(BASIS_CHANGES)):
            raise ReconstructionError(f"expected 6x3 counts, got shape {counts.shape}")
        if self.n_setting < 1 or counts.min() < 0 or counts.max() > self.n_setting:
            raise ReconstructionError("counts must lie in [0, n_setting]")

    @property
    def photons_used(self) -> int:
        return N_SETTINGS * self.n_setting

    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.n_setting


def exact_frequencies(u_true: ArrayLike) -> np.ndarray:
    """Infinite-photon limit of the +1 frequencies, shape (6, 3)."""
    r = bloch_rotation(check_unitary(u_true, name="u_true"))
    return 0.5 * (1.0 + PROBES @ r.T)


def simulate_qpt_counts(
    u_true: ArrayLike, total_photons: int, noise: NoiseModel, rng: np.random.Generator
) -> TomogramData:
    """Sample a full 18-setting tomogram.

    Under jitter, each basis change is realized through freshly perturbed
    waveplates for every setting; probe preparation is exact.
    """
    u = check_unitary(u_true, name="u_true")
    if int(total_photons) != total_photons or total_photons < N_SETTINGS:
        raise BudgetError(f"need at least {N_SETTINGS} photons, got {total_photons!r}")
    n = int(total_photons) // N_SETTINGS
    outputs = PROBES @ bloch_rotation(u).T
    counts = np.empty((len(PROBES), len(BASIS_CHANGES)), dtype=np.int64)
    for i, out in enumerate(outputs):
        for j, b in enumerate(BASIS_CHANGES):
            z = (bloch_rotation(_realize(b, noise, rng)) @ out)[2]
            counts[i, j] = rng.binomial(n, min(max(0.5 * (1.0 + z), 0.0), 1.0))
    return TomogramData(n, counts)


def reconstruct_from_frequencies(freqs: ArrayLike) -> np.ndarray:
    """SU(2) estimate from a (6, 3) array of +1 frequencies."""
    freqs = np.asarray(freqs, dtype=float)
    outputs = 2.0 * freqs - 1.0
    cross = outputs.T @ PROBES  # sum_i r_out,i r_in,i^T
    try:
        rot = nearest_rotation(cross)
    except IllConditionedError as exc:
        raise ReconstructionError(f"degenerate tomogram: {exc}") from exc
    return so3_to_su2(rot)


def reconstruct_unitary(data: TomogramData) -> np.ndarray:
    return reconstruct_from_frequencies(data.frequencies())


# Choi matrices live on in (x) out with J = sum_ab |a><b| (x) E(|a><b|), so
# E(rho) = tr_in[(rho^T (x) I) J] and trace preservation is tr_out J = I.
_PROBE_STATES = [0.5 * (IDENTITY + np.einsum("k,kab->ab", r, PAULIS)) for r in PROBES]
_PROJECTORS = [0.5 * (IDENTITY + s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
# one effect per (probe, basis, outcome), outcome +1 first
_EFFECTS = np.array(
    [
        np.kron(rho.T, proj)
        for rho in _PROBE_STATES
        for pi in _PROJECTORS
        for proj in (pi, IDENTITY - pi)
    ]
)


def choi_of_unitary(u: ArrayLike) -> np.ndarray:
    vec = np.asarray(u, dtype=complex).T.reshape(4)
    return np.outer(vec, vec.conj())


def channel_fidelity(u: ArrayLike, choi: ArrayLike) -> float:
    """Process fidelity ``<<U|J|U>> / 4`` between a unitary and a Choi matrix.

    Equals ``|tr(V^dag U)|^2 / 4`` when ``choi`` is the Choi matrix of ``V``.
    """
    vec = check_unitary(u, name="u").T.reshape(4)
    return float(np.real(vec.conj() @ np.asarray(choi) @ vec)) / 4.0


def _partial_trace_out(x: np.ndarray) -> np.ndarray:
    return np.einsum("aibi->ab", x.reshape(2, 2, 2, 2))


def reconstruct_process_mle(
    data: TomogramData, max_iter: int = 20_000, tol: float = 1e-12
) -> np.ndarray:
    """Maximum-likelihood CPTP process from an 18-setting tomogram.

    Fixed-point iteration ``J <- L K J K L`` with ``K = sum_e (f_e / p_e) E_e``
    and ``L = (tr_out KJK)^(-1/2) (x) I``, which keeps every iterate positive
    and trace preserving. Starts from the completely depolarizing channel and
    stops when no Choi entry moves by more than ``tol`` (or after
    ``max_iter`` sweeps).
    """
    f = data.frequencies()
    freqs = np.stack([f, 1.0 - f], axis=-1).reshape(-1)
    active = freqs > 0
    effects = _EFFECTS[active]
    freqs = freqs[active]
    eye2 = np.eye(2)
    choi = np.eye(4, dtype=complex) / 2.0
    for _ in range(max_iter):
        p = np.einsum("kab,ba->k", effects, choi).real
        if np.any(p <= 0):
            raise ReconstructionError("likelihood vanished on an observed outcome")
        k = np.einsum("k,kab->ab", freqs / p, effects)
        kjk = k @ choi @ k
        evals, evecs = np.linalg.eigh(_partial_trace_out(kjk))
        if evals[0] <= 0:
            raise ReconstructionError("fixed-point normalization became singular")
        inv_sqrt = np.kron((evecs / np.sqrt(evals)) @ evecs.conj().T, eye2)
        new = inv_sqrt @ kjk @ inv_sqrt
        new = 0.5 * (new + new.conj().T)
        done = np.max(np.abs(new - choi)) < tol
        choi = new
        if done:
            break
    return choi


ESTIMATORS = ("mle", "procrustes")


def qpt_trial(
    u_true: ArrayLike,
    total_photons: int,
    noise: NoiseModel,
    rng: np.random.Generator,
    estimator: str = "mle",
) -> float:
    """Infidelity of the QPT estimate of ``u_true`` for one simulated run."""
    if estimator not in ESTIMATORS:
        raise InvalidParameterError(f"unknown QPT estimator {estimator!r}")
    u = check_unitary(u_true, name="u_true")
    data = simulate_qpt_counts(u, total_photons, noise, rng)
    if estimator == "mle":
        return 1.0 - channel_fidelity(u, reconstruct_process_mle(data))
    return 1.0 - _fidelity(u, reconstruct_unitary(data))
