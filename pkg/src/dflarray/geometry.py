"""Link, array and target-sheet geometry.

Coordinates: the transmitter sits at the origin, X runs along the central
line of sight, Y runs along the array axis and Z is vertical, measured from
the horizontal plane that contains every link. The floor is electromagnetically
inert, so the height ``h`` above it never enters a distance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


class GeometryError(ValueError):
    """Invalid layout, sheet or index."""


class SingularityError(GeometryError):
    """The target sheet comes closer than one wavelength to an antenna."""


class CouplingWarning(UserWarning):
    """Element spacing at or below a quarter wavelength."""


class Vec3(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class LinkLayout:
    """A transmitter facing a uniform linear array of ``2M+1`` receivers.

    Args:
        wavelength: carrier wavelength (m).
        d0: length of the central link TX -> RX_0 (m).
        da: spacing between neighbouring receivers (m).
        M: array half-size.
        h: height of the link plane above the floor (m).
    """

    wavelength: float
    d0: float
    da: float
    M: int
    h: float = 0.0

    def __post_init__(self):
        bad = []
        for name in ("wavelength", "d0", "da"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                bad.append(f"{name} must be finite and > 0 (got {value!r})")
        if not (math.isfinite(self.h) and self.h >= 0):
            bad.append(f"h must be finite and >= 0 (got {self.h!r})")
        if int(self.M) != self.M or self.M < 0:
            bad.append(f"M must be a non-negative integer (got {self.M!r})")
        if bad:
            raise GeometryError("; ".join(bad))
        if self.da <= self.wavelength / 4:
            warnings.warn(
                f"element spacing {self.da:g} m <= lambda/4 = {self.wavelength / 4:g} m; "
                "mutual coupling is no longer negligible",
                CouplingWarning,
                stacklevel=3,
            )

    @classmethod
    def from_frequency(cls, frequency_hz: float, d0: float, da: float, M: int, h: float = 0.0):
        return cls(SPEED_OF_LIGHT / frequency_hz, d0, da, M, h)

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength

    @property
    def n_antennas(self) -> int:
        return 2 * self.M + 1

    @property
    def indices(self) -> np.ndarray:
        """Antenna indices ``-M..M`` in vector order."""
        return np.arange(-self.M, self.M + 1)


@dataclass(frozen=True)
class TargetSheet:
    """Vertical, perfectly absorbing rectangle standing in for a body.

    The sheet is ``2*ay`` wide and ``2*az`` tall, centred on ``(x, y, 0)``.
    ``theta`` rotates it about the vertical axis through its barycenter;
    ``theta = 0`` puts it orthogonal to the line of sight and positive angles
    swing its ``+ay`` edge toward the transmitter.
    """

    ay: float
    az: float
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        bad = []
        if not (math.isfinite(self.ay) and self.ay > 0):
            bad.append(f"ay must be finite and > 0 (got {self.ay!r})")
        if not (math.isfinite(self.az) and self.az > 0):
            bad.append(f"az must be finite and > 0 (got {self.az!r})")
        if not (math.isfinite(self.theta) and abs(self.theta) <= math.pi / 2):
            bad.append(f"theta must lie in [-pi/2, pi/2] (got {self.theta!r})")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            bad.append("barycenter must be finite")
        if bad:
            raise GeometryError("; ".join(bad))

    @property
    def area(self) -> float:
        return 4 * self.ay * self.az


def _check_index(layout: LinkLayout, m: int) -> None:
    if abs(m) > layout.M:
        raise GeometryError(f"antenna index {m} outside [-{layout.M}, {layout.M}]")


def antenna_position(layout: LinkLayout, m: int) -> Vec3:
    _check_index(layout, m)
    return Vec3(layout.d0, m * layout.da, 0.0)


def link_distance(layout: LinkLayout, m: int) -> float:
    """Length ``d_m`` of the link from the transmitter to antenna ``m``."""
    _check_index(layout, m)
    return math.hypot(layout.d0, m * layout.da)


def link_distances(layout: LinkLayout) -> np.ndarray:
    return np.hypot(layout.d0, layout.indices * layout.da)


def sheet_point(sheet: TargetSheet, xi2, xi3):
    """Map local sheet coordinates to link coordinates.

    Accepts scalars (returns a :class:`Vec3`) or broadcastable arrays
    (returns a tuple of arrays).
    """
    scalar = np.isscalar(xi2) and np.isscalar(xi3)
    xi2 = np.asarray(xi2, dtype=float)
    xi3 = np.asarray(xi3, dtype=float)
    tol = 1e-12 * max(sheet.ay, sheet.az)
    if np.any(np.abs(xi2) > sheet.ay + tol) or np.any(np.abs(xi3) > sheet.az + tol):
        raise GeometryError("sheet coordinates outside the sheet domain")
    s, c = math.sin(sheet.theta), math.cos(sheet.theta)
    x = sheet.x - xi2 * s
    y = sheet.y + xi2 * c
    z = xi3
    if scalar:
        return Vec3(float(x), float(y), float(z))
    return tuple(np.broadcast_arrays(x, y, z))


def _rectangle_distance(sheet: TargetSheet, point: Vec3) -> float:
    # Closest point of the sheet rectangle: clamp the projection onto its axes.
    s, c = math.sin(sheet.theta), math.cos(sheet.theta)
    dx, dy = point.x - sheet.x, point.y - sheet.y
    along = -dx * s + dy * c
    normal = dx * c + dy * s
    u = min(max(along, -sheet.ay), sheet.ay)
    w = min(max(point.z, -sheet.az), sheet.az)
    return math.sqrt(normal**2 + (along - u) ** 2 + (point.z - w) ** 2)


def check_clearance(layout: LinkLayout, sheet: TargetSheet, m: int) -> None:
    """Raise :class:`SingularityError` if any sheet point is within a wavelength
    of the transmitter or of antenna ``m``."""
    tx = _rectangle_distance(sheet, Vec3(0.0, 0.0, 0.0))
    rx = _rectangle_distance(sheet, antenna_position(layout, m))
    if tx < layout.wavelength or rx < layout.wavelength:
        raise SingularityError(
            f"target sheet within one wavelength of {'TX' if tx < layout.wavelength else f'RX_{m}'} "
            f"(clearance {min(tx, rx):.4g} m < {layout.wavelength:.4g} m)"
        )


def path_lengths(layout: LinkLayout, sheet: TargetSheet, m: int, xi2, xi3):
    """Distances ``(r1, r2)`` from a sheet element to the TX and to RX_m."""
    _check_index(layout, m)
    x, y, z = sheet_point(sheet, xi2, xi3)
    r1 = np.sqrt(np.square(x) + np.square(y) + np.square(z))
    r2 = np.sqrt(np.square(x - layout.d0) + np.square(y - m * layout.da) + np.square(z))
    if np.any(r1 < layout.wavelength) or np.any(r2 < layout.wavelength):
        raise SingularityError("sheet element within one wavelength of an antenna")
    if r1.ndim == 0:
        return float(r1), float(r2)
    return r1, r2


def phi_m(layout: LinkLayout, gamma: float, m: int) -> float:
    """Angle between the line of sight of antenna ``m`` and the array axis.

    ``arcsin((d0/d_m) sin gamma)`` taken on the branch lying on the same side
    of broadside as ``gamma``, so that ``phi_0 == gamma`` over all of ``[0, pi]``.
    """
    if not 0.0 <= gamma <= math.pi:
        raise GeometryError(f"gamma must lie in [0, pi] (got {gamma!r})")
    ratio = layout.d0 / link_distance(layout, m)
    phi = math.asin(min(1.0, ratio * math.sin(gamma)))
    if gamma > math.pi / 2:
        phi = math.pi - phi
    return phi


def phi_all(layout: LinkLayout, gamma) -> np.ndarray:
    """Vectorised :func:`phi_m` over every antenna; ``gamma`` may be an array
    (result shape ``gamma.shape + (2M+1,)``)."""
    gamma = np.asarray(gamma, dtype=float)
    ratio = layout.d0 / link_distances(layout)
    phi = np.arcsin(np.minimum(1.0, ratio * np.sin(gamma)[..., None]))
    return np.where(gamma[..., None] > math.pi / 2, math.pi - phi, phi)


def fresnel_radius(wavelength: float, distance: float) -> float:
    """Minor semi-axis ``sqrt(lambda d) / 2`` of the first Fresnel ellipsoid."""
    return math.sqrt(wavelength * distance) / 2
