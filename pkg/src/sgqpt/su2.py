"""Linear-algebra kernel for single-qubit unitaries.

Unitaries are plain ``(2, 2)`` complex numpy arrays. Parameter triples
``(alpha, theta, phi)`` map to SU(2) through

    U = exp(i * alpha * n(theta, phi) . sigma)
      = cos(alpha) I + i sin(alpha) n . sigma,

with ``n = (sin theta cos phi, sin theta sin phi, cos theta)``. The map is
total and periodic, so parameters are never clamped.

Waveplate angles are in degrees throughout.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from .errors import (
    DecompositionError,
    IllConditionedError,
    InvalidInputError,
    InvalidParameterError,
)

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PAULIS",
    "SU2Params",
    "WaveplateTriple",
    "axis",
    "su2_from_params",
    "check_unitary",
    "process_fidelity",
    "infidelity",
    "haar_random_su2",
    "qwp_matrix",
    "hwp_matrix",
    "waveplate_compose",
    "decompose_to_waveplates",
    "phase_distance",
    "bloch_rotation",
    "nearest_rotation",
    "so3_to_su2",
]

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

UNITARY_TOL = 1e-8


class SU2Params(NamedTuple):
    """Axis-angle coordinates of an SU(2) element (radians)."""

    alpha: float
    theta: float
    phi: float


class WaveplateTriple(NamedTuple):
    """QWP-HWP-QWP angles in degrees; light meets ``q1`` first."""

    q1: float
    h: float
    q2: float


def axis(theta: float, phi: float) -> np.ndarray:
    """Unit rotation axis n(theta, phi)."""
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def su2_from_params(p: ArrayLike) -> np.ndarray:
    """Map ``(alpha, theta, phi)`` to its SU(2) matrix.

    Raises
    ------
    InvalidParameterError
        If any of the three parameters is not finite.
    """
    alpha, theta, phi = (float(x) for x in np.asarray(p, dtype=float).reshape(3))
    if not (math.isfinite(alpha) and math.isfinite(theta) and math.isfinite(phi)):
        raise InvalidParameterError(f"SU(2) parameters must be finite, got {(alpha, theta, phi)}")
    return _su2(alpha, theta, phi)


def _su2(alpha: float, theta: float, phi: float) -> np.ndarray:
    c = math.cos(alpha)
    s = math.sin(alpha)
    st = math.sin(theta)
    nx, ny, nz = st * math.cos(phi), st * math.sin(phi), math.cos(theta)
    # cos(a) I + i sin(a) (nx X + ny Y + nz Z)
    return np.array(
        [
            [complex(c, s * nz), complex(s * ny, s * nx)],
            [complex(-s * ny, s * nx), complex(c, -s * nz)],
        ]
    )


def check_unitary(u: ArrayLike, tol: float = UNITARY_TOL, name: str = "matrix") -> np.ndarray:
    """Return ``u`` as a complex array, raising unless it is a 2x2 unitary."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidInputError(f"{name} must be 2x2, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise InvalidInputError(f"{name} has non-finite entries")
    err = np.max(np.abs(u.conj().T @ u - IDENTITY))
    if err > tol:
        raise InvalidInputError(f"{name} is not unitary (max |U^dag U - I| = {err:.3e})")
    return u


def _fidelity(u: np.ndarray, v: np.ndarray) -> float:
    # tr(v^dag u) without forming the product
    t = np.vdot(v, u)
    f = (t.real * t.real + t.imag * t.imag) / 4.0
    return min(max(f, 0.0), 1.0)


def process_fidelity(u: ArrayLike, v: ArrayLike) -> float:
    """Bell-outcome probability ``|tr(v^dag u)|^2 / 4``.

    Symmetric in its arguments and blind to the global phase of either one.
    """
    u = check_unitary(u, name="u")
    v = check_unitary(v, name="v")
    return _fidelity(u, v)


def infidelity(u: ArrayLike, v: ArrayLike) -> float:
    """``1 - process_fidelity(u, v)``."""
    return 1.0 - process_fidelity(u, v)


def haar_random_su2(rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed SU(2) matrix.

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` folded
    back into ``Q`` gives Haar on U(2); dividing by ``sqrt(det)`` lands in
    SU(2) without biasing the distribution, because the sign ambiguity of
    the square root is independent of the SU(2) factor.
    """
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q / np.sqrt(np.linalg.det(q))


def _rot(rad: float) -> np.ndarray:
    c, s = math.cos(rad), math.sin(rad)
    return np.array([[c, -s], [s, c]])


_QWP_DIAG = np.diag([1.0, 1.0j])
_HWP_DIAG = np.diag([1.0, -1.0]).astype(complex)


def qwp_matrix(angle: float) -> np.ndarray:
    """Jones matrix of a quarter-wave plate with fast axis at ``angle`` degrees."""
    r = _rot(math.radians(angle))
    return r @ _QWP_DIAG @ r.T


def hwp_matrix(angle: float) -> np.ndarray:
    """Jones matrix of a half-wave plate with fast axis at ``angle`` degrees."""
    r = _rot(math.radians(angle))
    return r @ _HWP_DIAG @ r.T


def waveplate_compose(w: ArrayLike) -> np.ndarray:
    """Unitary of the QWP(q1) -> HWP(h) -> QWP(q2) sequence."""
    q1, h, q2 = (float(x) for x in np.asarray(w, dtype=float).reshape(3))
    return qwp_matrix(q2) @ hwp_matrix(h) @ qwp_matrix(q1)


def phase_distance(a: ArrayLike, b: ArrayLike) -> float:
    """``min_phi ||exp(i phi) a - b||_F``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    t = np.vdot(a, b)
    phase = t / abs(t) if abs(t) > 0 else 1.0
    return float(np.linalg.norm(phase * a - b))


# Deterministic multi-start grid; the first entries cover the common
# axis-aligned solutions, the rest are a fixed pseudo-random spread.
_STARTS = np.vstack(
    [
        [[0.0, 0.0, 0.0], [45.0, 22.5, 45.0], [0.0, 22.5, 0.0], [45.0, 0.0, -45.0]],
        np.random.default_rng(20190403).uniform(-90.0, 90.0, size=(28, 3)),
    ]
)


def _decompose(v: np.ndarray, tol: float) -> WaveplateTriple:
    def residual(x: np.ndarray) -> np.ndarray:
        d = np.exp(1j * x[3]) * v - waveplate_compose(x[:3])
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    best = math.inf
    for start in _STARTS:
        phase0 = np.angle(np.vdot(v, waveplate_compose(start)))
        sol = least_squares(
            residual, np.append(start, phase0), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        triple = WaveplateTriple(*(float(x) for x in sol.x[:3]))
        res = phase_distance(v, waveplate_compose(triple))
        if res <= tol:
            return triple
        best = min(best, res)
    raise DecompositionError("waveplate decomposition did not converge", best)


@lru_cache(maxsize=256)
def _decompose_cached(key: bytes, tol: float) -> WaveplateTriple:
    return _decompose(np.frombuffer(key, dtype=complex).reshape(2, 2), tol)


def decompose_to_waveplates(v: ArrayLike, tol: float = 1e-8) -> WaveplateTriple:
    """Find QWP-HWP-QWP angles reproducing ``v`` up to global phase.

    Solves a Levenberg-Marquardt least-squares problem over the three
    angles and a free phase, restarting from a fixed list of initial
    points until the phase-aligned Frobenius residual is below ``tol``.
    Identical inputs always give identical angles.

    Raises
    ------
    DecompositionError
        If no start reaches ``tol``; carries the best residual seen.
    """
    v = np.ascontiguousarray(check_unitary(v, name="v"))
    return _decompose_cached(v.tobytes(), float(tol))


def bloch_rotation(u: ArrayLike) -> np.ndarray:
    """SO(3) matrix ``r[j, k] = tr(sigma_j u sigma_k u^dag) / 2``."""
    u = np.asarray(u, dtype=complex)
    conj = np.einsum("ab,kbc,dc->kad", u, PAULIS, u.conj())
    return 0.5 * np.einsum("jba,kab->jk", PAULIS, conj).real


def nearest_rotation(m: ArrayLike, rank_tol: float = 1e-12) -> np.ndarray:
    """Closest proper rotation to ``m`` in Frobenius norm (orthogonal Procrustes).

    Raises
    ------
    IllConditionedError
        If ``m`` has rank below 2, where the answer is not unique.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise InvalidInputError(f"expected a finite 3x3 matrix, got shape {m.shape}")
    a, s, bt = np.linalg.svd(m)
    if s[0] == 0.0 or s[1] <= rank_tol * s[0]:
        raise IllConditionedError(f"matrix rank < 2 (singular values {s})")
    d = np.linalg.det(a @ bt)
    return a @ np.diag([1.0, 1.0, np.sign(d)]) @ bt


def so3_to_su2(r: ArrayLike, tol: float = 1e-8) -> np.ndarray:
    """Lift a Bloch-sphere rotation to one of its two SU(2) preimages.

    The returned sign has ``Re tr U >= 0``.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        raise InvalidInputError(f"expected a finite 3x3 matrix, got shape {r.shape}")
    if np.max(np.abs(r.T @ r - np.eye(3))) > tol or abs(np.linalg.det(r) - 1.0) > tol:
        raise InvalidInputError("matrix is not a proper rotation")
    x, y, z, w = Rotation.from_matrix(r).as_quat()
    if w < 0:
        x, y, z, w = -x, -y, -z, -w
    # exp(-i omega/2 n.sigma) rotates Bloch vectors by +omega about n
    return w * IDENTITY - 1j * (x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)
