"""Direction-of-arrival and excess-attenuation estimation by beam scanning.

The occupied-link vector is computed once; the beam is then swept over a
grid of angles with planar-wavefront weights and the power at each angle is
compared with the empty-room power of the central antenna.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_processing import align_phasors, planar_matrix
from .em_model import FieldVector, signal_vector
from .geometry import LinkLayout, TargetSheet
from .quadrature import QuadratureSpec

DEFAULT_STEP = math.radians(0.1)


@dataclass(frozen=True)
class GammaGrid:
    start: float = 0.0
    stop: float = math.pi
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not (0.0 <= self.start < self.stop <= math.pi):
            raise ValueError("gamma grid needs 0 <= start < stop <= pi")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValueError("gamma grid step must be > 0")

    @property
    def size(self) -> int:
        # Snap to an integer number of steps so both endpoints are on the grid.
        return int(round((self.stop - self.start) / self.step)) + 1

    def values(self) -> np.ndarray:
        g = np.linspace(self.start, self.stop, max(self.size, 2))
        # Exact broadside where the grid passes within rounding of it.
        mid = np.abs(g - math.pi / 2) < 1e-12
        g[mid] = math.pi / 2
        return g


@dataclass(frozen=True)
class PowerRatioCurve:
    gammas: np.ndarray
    ratios: np.ndarray

    def __post_init__(self):
        if len(self.gammas) != len(self.ratios):
            raise ValueError("gammas and ratios differ in length")

    @property
    def degrees(self) -> np.ndarray:
        return np.degrees(self.gammas)


@dataclass(frozen=True)
class DoaEstimate:
    gamma_hat: float
    attenuation_db: float
    p0: float
    py: float
    curve: PowerRatioCurve
    index: int

    @property
    def gamma_hat_deg(self) -> float:
        return math.degrees(self.gamma_hat)


def reference_power_p0(sigma_n: float = 0.0) -> float:
    """Empty-room power at the central antenna, ``|E_R(0)|^2 + sigma_n^2`` with ``E_R(0) = 1``."""
    if sigma_n < 0:
        raise ValueError("sigma_n must be >= 0")
    return 1.0 + sigma_n**2


def scan_power(layout: LinkLayout, s, gammas, sigma_n: float = 0.0) -> np.ndarray:
    """``P_y(gamma) = w^H R w`` with ``w = a_planar(gamma)/(2M+1)`` and
    ``R = s s^H + sigma_n^2 I``, evaluated for every angle at once."""
    s = np.asarray(getattr(s, "values", s), dtype=complex)
    n = len(s)
    W = planar_matrix(layout, gammas) / n
    coherent = np.abs(W.conj() @ align_phasors(s)) ** 2
    return coherent + sigma_n**2 * np.sum(np.abs(W) ** 2, axis=-1)


def power_ratio_curve(layout: LinkLayout, sheet: TargetSheet | None, grid: GammaGrid | None = None,
                      sigma_n: float = 0.0, spec: QuadratureSpec | None = None,
                      signal: FieldVector | None = None) -> PowerRatioCurve:
    """Ratio ``P_y(occupied) / P_0(empty)`` over ``grid``.

    ``sheet=None`` scans the empty room. A precomputed ``signal`` skips the
    field computation.
    """
    grid = grid or GammaGrid()
    if signal is None:
        signal = signal_vector(layout, sheet, spec)
    gammas = grid.values()
    ratios = scan_power(layout, signal, gammas, sigma_n) / reference_power_p0(sigma_n)
    return PowerRatioCurve(gammas, ratios)


def argmax_first(values: np.ndarray) -> int:
    # np.argmax returns the first maximum, i.e. the smallest gamma on ties.
    return int(np.argmax(values))


def estimate_doa(layout: LinkLayout, sheet: TargetSheet | None, grid: GammaGrid | None = None,
                 sigma_n: float = 0.0, spec: QuadratureSpec | None = None,
                 signal: FieldVector | None = None) -> DoaEstimate:
    """Angle of maximum received power and the excess attenuation there.

    ``attenuation_db = 10 log10(P_0 / P_y(gamma_hat))``.
    """
    curve = power_ratio_curve(layout, sheet, grid, sigma_n, spec, signal)
    i = argmax_first(curve.ratios)
    p0 = reference_power_p0(sigma_n)
    ratio = float(curve.ratios[i])
    if ratio <= 0:
        raise ArithmeticError("beamformer output vanished at every angle")
    return DoaEstimate(
        gamma_hat=float(curve.gammas[i]),
        attenuation_db=-10 * math.log10(ratio),
        p0=p0,
        py=ratio * p0,
        curve=curve,
        index=i,
    )
