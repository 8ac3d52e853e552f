"""Field received by each array element with and without the target.

All fields are normalised to the free-space field at the central antenna,
``E_R(0) = 1``; only ratios are observable in the model, and the noise level
``sigma_n`` is expressed relative to that unit signal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import LinkLayout, TargetSheet, check_clearance, link_distance, link_distances, path_lengths
from .quadrature import QuadratureSpec, integrate_2d


class Occupancy(enum.Enum):
    EMPTY = 0
    OCCUPIED = 1


class FieldKind(enum.Enum):
    RATIO_PER_ANTENNA = "ratio_per_antenna"  # E(m) / E_R(m)
    RATIO_TO_CENTER = "ratio_to_center"  # E(m) / E_R(0) or E_R(m) / E_R(0)
    SNAPSHOT = "snapshot"  # r, noisy


@dataclass(frozen=True)
class FieldVector:
    """Complex per-antenna values ordered ``m = -M .. M``."""

    values: np.ndarray
    kind: FieldKind

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1 or len(values) % 2 != 1:
            raise ValueError("field vector must be 1-D with odd length")
        if not np.all(np.isfinite(values)):
            raise ValueError("field vector has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def M(self) -> int:
        return len(self.values) // 2

    def __len__(self):
        return len(self.values)

    def __getitem__(self, m: int) -> complex:
        """Entry for antenna index ``m`` (not the vector position)."""
        if abs(m) > self.M:
            raise IndexError(m)
        return complex(self.values[m + self.M])


@dataclass(frozen=True)
class NoiseModel:
    sigma_n: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sigma_n) and self.sigma_n >= 0):
            raise ValueError("sigma_n must be finite and >= 0")


class ModelError(ArithmeticError):
    """Numerical failure while evaluating the body model."""


def _default_spec(layout: LinkLayout, spec: QuadratureSpec | None) -> QuadratureSpec:
    return (spec or QuadratureSpec()).resolved(layout.wavelength)


def diffraction_integrand(layout: LinkLayout, sheet: TargetSheet, m: int):
    """Return ``f(xi2, xi3) = exp(-jk(r1 + r2 - d_m)) / (r1 r2)`` for antenna ``m``."""
    d_m = link_distance(layout, m)
    k = layout.wavenumber

    def f(xi2, xi3):
        r1, r2 = path_lengths(layout, sheet, m, xi2, xi3)
        return np.exp(-1j * k * (r1 + r2 - d_m)) / (r1 * r2)

    return f


def diffraction_integral(layout: LinkLayout, sheet: TargetSheet, m: int, spec: QuadratureSpec | None = None):
    """Quadrature result for the sheet integral seen by antenna ``m``."""
    check_clearance(layout, sheet, m)
    f = diffraction_integrand(layout, sheet, m)
    return integrate_2d(f, sheet.ay, sheet.az, _default_spec(layout, spec))


def perturbed_ratio(layout: LinkLayout, sheet: TargetSheet | None, m: int, spec: QuadratureSpec | None = None) -> complex:
    """``E(m) / E_R(m)``: field at antenna ``m`` with the sheet, relative to free space.

    ``1 - j (d_m / lambda) * integral``. ``sheet=None`` is the empty-integral
    limit and returns exactly ``1``.
    """
    if sheet is None:
        link_distance(layout, m)  # range check
        return 1 + 0j
    result = diffraction_integral(layout, sheet, m, spec)
    if not result.converged:
        raise ModelError(
            f"sheet integral for antenna {m} did not converge after {result.levels} levels "
            f"(last change {result.error_estimate:.3g})"
        )
    d_m = link_distance(layout, m)
    return 1 - 1j * (d_m / layout.wavelength) * result.value


def perturbed_ratios(layout: LinkLayout, sheet: TargetSheet | None, spec: QuadratureSpec | None = None) -> FieldVector:
    """The vector ``E_r`` of per-antenna perturbation ratios."""
    values = [perturbed_ratio(layout, sheet, int(m), spec) for m in layout.indices]
    return FieldVector(np.array(values), FieldKind.RATIO_PER_ANTENNA)


def reference_ratio(layout: LinkLayout, m: int) -> complex:
    """Free-space ``E_R(m) / E_R(0) = (d0/d_m) exp(-jk(d_m - d0))``."""
    d_m = link_distance(layout, m)
    return (layout.d0 / d_m) * complex(np.exp(-1j * layout.wavenumber * (d_m - layout.d0)))


def reference_vector(layout: LinkLayout) -> np.ndarray:
    d = link_distances(layout)
    return (layout.d0 / d) * np.exp(-1j * layout.wavenumber * (d - layout.d0))


def signal_vector(layout: LinkLayout, sheet: TargetSheet | None = None, spec: QuadratureSpec | None = None,
                  state: Occupancy | None = None) -> FieldVector:
    """Noiseless received vector ``s`` with ``E_R(0) = 1``.

    Empty room: ``s_m = E_R(m)/E_R(0)``. With a target the free-space vector is
    multiplied elementwise by the perturbation ratios.
    """
    if state is None:
        state = Occupancy.EMPTY if sheet is None else Occupancy.OCCUPIED
    ref = reference_vector(layout)
    if state is Occupancy.EMPTY:
        return FieldVector(ref, FieldKind.RATIO_TO_CENTER)
    if sheet is None:
        raise ValueError("an occupied link needs a target sheet")
    ratios = perturbed_ratios(layout, sheet, spec)
    return FieldVector(ref * ratios.values, FieldKind.RATIO_TO_CENTER)


def _noise_generator(seed: int, t_index: int) -> np.random.Generator:
    # Philox is counter based: stream t lives at counter (0, 0, 0, t), so
    # snapshots never share draws and can be produced in any order.
    bitgen = np.random.Philox(key=int(seed) & ((1 << 128) - 1), counter=[0, 0, 0, int(t_index) & ((1 << 64) - 1)])
    return np.random.Generator(bitgen)


def noise_vector(n_antennas: int, noise: NoiseModel, t_index: int) -> np.ndarray:
    """Circularly-symmetric complex Gaussian noise, ``E|n_m|^2 = sigma_n^2``.

    Entry ``m`` is drawn from positions ``2(m+M)`` and ``2(m+M)+1`` of the
    stream keyed by ``(seed, t_index)``.
    """
    if noise.sigma_n == 0:
        return np.zeros(n_antennas, dtype=complex)
    z = _noise_generator(noise.seed, t_index).standard_normal(2 * n_antennas)
    return (noise.sigma_n / math.sqrt(2)) * (z[0::2] + 1j * z[1::2])


def snapshot(signal: FieldVector, noise: NoiseModel, t_index: int) -> FieldVector:
    """One noisy observation ``r = s + n``."""
    if signal.kind is not FieldKind.RATIO_TO_CENTER:
        raise ValueError("snapshots are drawn around a noiseless ratio-to-center vector")
    r = signal.values + noise_vector(len(signal), noise, t_index)
    return FieldVector(r, FieldKind.SNAPSHOT)


def snapshots(signal: FieldVector, noise: NoiseModel, t_indices) -> np.ndarray:
    """Stack of snapshots, shape ``(len(t_indices), 2M+1)``; row ``i`` equals
    ``snapshot(signal, noise, t_indices[i]).values``."""
    t_indices = list(t_indices)
    out = np.empty((len(t_indices), len(signal)), dtype=complex)
    for i, t in enumerate(t_indices):
        out[i] = signal.values + noise_vector(len(signal), noise, t)
    return out


def excess_attenuation_db(perturbed: complex) -> float:
    """``10 log10 |E_R/E|^2``; positive when the target absorbs."""
    mag = abs(perturbed)
    if mag == 0:
        raise ModelError("zero received field: infinite excess attenuation")
    return -20 * math.log10(mag)

