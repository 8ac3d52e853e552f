"""Steering vectors, array factors and beamformer output power."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .geometry import LinkLayout, link_distances, phi_all


class Hypothesis(enum.Enum):
    PLANAR = "planar"
    NONPLANAR = "nonplanar"


@dataclass(frozen=True)
class SteeringVector:
    values: np.ndarray
    hypothesis: Hypothesis
    gamma: float


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(g > np.pi) or not np.all(np.isfinite(g)):
        raise ValueError("gamma must lie in [0, pi]")
    return g


def planar_matrix(layout: LinkLayout, gammas) -> np.ndarray:
    """Planar-wavefront steering vectors for many angles, shape ``(n, 2M+1)``."""
    g = _check_gamma(gammas)
    phase = layout.wavenumber * layout.da * np.multiply.outer(np.cos(g), layout.indices)
    return np.exp(1j * phase)


def nonplanar_matrix(layout: LinkLayout, gammas) -> np.ndarray:
    """Spherical-wavefront steering vectors for many angles, shape ``(n, 2M+1)``."""
    g = _check_gamma(gammas)
    m = layout.indices
    phi = phi_all(layout, g)
    g = g[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        skew = np.cos((g + phi) / 2) / np.cos((g - phi) / 2)
    skew = np.where(np.isfinite(skew), skew, 0.0)
    amplitude = layout.d0 / link_distances(layout)
    return amplitude * np.exp(1j * m * layout.wavenumber * layout.da * skew)


def steering_planar(layout: LinkLayout, gamma: float) -> SteeringVector:
    """``a_m = exp(j m k da cos gamma)``."""
    return SteeringVector(planar_matrix(layout, float(gamma)), Hypothesis.PLANAR, float(gamma))


def steering_nonplanar(layout: LinkLayout, gamma: float) -> SteeringVector:
    """Near-field steering vector.

    ``a_m = (d0/d_m) exp(j m k da cos((gamma+phi_m)/2) / cos((gamma-phi_m)/2))``
    with ``phi_m`` from :func:`dflarray.geometry.phi_m`.
    """
    return SteeringVector(nonplanar_matrix(layout, float(gamma)), Hypothesis.NONPLANAR, float(gamma))


def steering(layout: LinkLayout, gamma: float, hypothesis: Hypothesis) -> SteeringVector:
    if Hypothesis(hypothesis) is Hypothesis.PLANAR:
        return steering_planar(layout, gamma)
    return steering_nonplanar(layout, gamma)


def uniform_weights(layout: LinkLayout) -> np.ndarray:
    return np.full(layout.n_antennas, 1.0 / layout.n_antennas, dtype=complex)


def planar_weights(layout: LinkLayout, gamma: float) -> np.ndarray:
    """Beam steered to ``gamma`` under the planar hypothesis, scaled by ``1/(2M+1)``."""
    return steering_planar(layout, gamma).values / layout.n_antennas


def _check_weights(w, n):
    w = np.asarray(w, dtype=complex)
    if w.shape != (n,):
        raise ValueError(f"weights must have shape ({n},), got {w.shape}")
    if not np.all(np.isfinite(w)) or not np.any(w):
        raise ValueError("weights must be finite and not all zero")
    return w


def array_factor(layout: LinkLayout, gamma, hypothesis=Hypothesis.PLANAR, w=None):
    """Array response ``F_a = w^T a(gamma)``.

    Uniform ``1/(2M+1)`` weights by default. ``gamma`` may be an array, in
    which case an array of responses is returned.
    """
    w = uniform_weights(layout) if w is None else _check_weights(w, layout.n_antennas)
    if Hypothesis(hypothesis) is Hypothesis.PLANAR:
        a = planar_matrix(layout, gamma)
    else:
        a = nonplanar_matrix(layout, gamma)
    out = a @ w
    return complex(out) if np.ndim(out) == 0 else out


def align_phasors(s) -> np.ndarray:
    """Express a field vector in the phasor convention of the steering vectors.

    The field model carries free-space phase as ``exp(-jkr)`` while the
    steering vectors advance phase as ``exp(+jkr)`` (at broadside the
    near-field steering vector is the conjugate of the free-space field ratio).
    Switching conventions conjugates every phasor; powers are unchanged.
    """
    return np.conj(np.asarray(s, dtype=complex))


def correlation_matrix(s, sigma_n: float = 0.0) -> np.ndarray:
    """Analytic ``R = s s^H + sigma_n^2 I``."""
    s = np.asarray(getattr(s, "values", s), dtype=complex)
    if not np.all(np.isfinite(s)):
        raise ValueError("signal must be finite")
    if sigma_n < 0:
        raise ValueError("sigma_n must be >= 0")
    return np.outer(s, s.conj()) + sigma_n**2 * np.eye(len(s))


def sample_covariance(snaps: np.ndarray) -> np.ndarray:
    """``(1/T) sum_t r_t r_t^H`` over the rows of ``snaps``."""
    snaps = np.asarray(snaps, dtype=complex)
    return snaps.T @ snaps.conj() / snaps.shape[0]


def is_hermitian_psd(R: np.ndarray, herm_tol: float = 1e-12, psd_rel_tol: float = 1e-10) -> bool:
    R = np.asarray(R)
    if np.max(np.abs(R - R.conj().T)) >= herm_tol:
        return False
    trace = float(np.real(np.trace(R)))
    return float(np.linalg.eigvalsh(R).min()) >= -psd_rel_tol * max(trace, 0.0)


def beamform_power(R: np.ndarray, w) -> float:
    """Beamformer output power ``w^H R w``."""
    R = np.asarray(R, dtype=complex)
    n = R.shape[0]
    if R.shape != (n, n):
        raise ValueError("R must be square")
    w = np.asarray(w, dtype=complex)
    if w.shape != (n,):
        raise ValueError(f"dimension mismatch: R is {n}x{n}, w has shape {w.shape}")
    p = np.vdot(w, R @ w)
    return max(float(p.real), 0.0)


def beamform_output(w, r) -> complex:
    """Linear combiner output ``y = w^H r``."""
    return complex(np.vdot(np.asarray(w, dtype=complex), np.asarray(r, dtype=complex)))
