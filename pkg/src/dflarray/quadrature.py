"""Tensor-product Gauss-Legendre quadrature over the target rectangle.

The integrand of the body model oscillates a few radians per wavelength of
sheet travel, so the rectangle is cut into uniform panels no larger than a
fraction of a wavelength and a fixed Gauss rule is applied in each. Panels are
halved until two successive levels agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Upper bound on integrand samples held in memory at once.
_CHUNK_POINTS = 1 << 21
_ROUNDING = 1e3 * np.finfo(float).eps


class QuadratureError(ArithmeticError):
    """Non-finite integrand values or refinement that failed to converge."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel size, Gauss order and convergence target.

    ``panel_max_side`` of ``None`` means "a quarter of the carrier wavelength";
    callers that know the wavelength resolve it with :meth:`resolved`.
    """

    panel_max_side: float | None = None
    points_per_panel_per_axis: int = 4
    rel_tol: float = 1e-6
    max_levels: int = 8

    def __post_init__(self):
        if self.panel_max_side is not None and not self.panel_max_side > 0:
            raise ValueError("panel_max_side must be > 0")
        if int(self.points_per_panel_per_axis) != self.points_per_panel_per_axis or self.points_per_panel_per_axis < 2:
            raise ValueError("points_per_panel_per_axis must be an integer >= 2")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")

    def resolved(self, wavelength: float) -> "QuadratureSpec":
        if self.panel_max_side is not None:
            return self
        return QuadratureSpec(wavelength / 4, self.points_per_panel_per_axis, self.rel_tol, self.max_levels)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    levels: int
    n_points: int
    converged: bool
    history: tuple[complex, ...] = ()


@lru_cache(maxsize=32)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel_nodes(half: float, n_panels: int, order: int):
    """Nodes and weights of a composite Gauss rule on ``[-half, half]``."""
    x, w = _gauss(order)
    edges = np.linspace(-half, half, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    h = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + h[:, None] * x[None, :]).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def _tensor_sum(f, n2, w2, n3, w3):
    """Sum ``f(xi2, xi3) w2 w3`` over the tensor grid, chunked along xi2.

    Returns ``(integral, integral of |f|)``. Chunk partial sums are collected
    in a fixed order and reduced pairwise, so the result does not depend on
    chunk boundaries beyond rounding of a deterministic tree.
    """
    rows = max(1, _CHUNK_POINTS // len(n3))
    parts = []
    abs_parts = []
    for start in range(0, len(n2), rows):
        xi2 = n2[start:start + rows, None]
        vals = np.asarray(f(xi2, n3[None, :]), dtype=complex)
        if vals.shape != (len(xi2), len(n3)):
            vals = np.broadcast_to(vals, (len(xi2), len(n3)))
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("integrand returned NaN or Inf")
        weighted = vals * w2[start:start + rows, None] * w3[None, :]
        parts.append(weighted.sum())
        abs_parts.append(np.abs(weighted).sum())
    return complex(np.sum(np.array(parts))), float(np.sum(np.array(abs_parts)))


def integrate_2d(f, ay: float, az: float, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Integrate ``f(xi2, xi3)`` over ``[-ay, ay] x [-az, az]``.

    ``f`` must accept broadcasting arrays (a column of ``xi2`` against a row of
    ``xi3``). A zero-measure rectangle integrates to exactly zero.

    The first level uses ``ceil(2*ay / panel_max_side)`` by
    ``ceil(2*az / panel_max_side)`` panels; each further level halves the panel
    sides. Refinement stops once two consecutive levels differ by at most
    ``rel_tol`` relative to the finer value, or after ``max_levels`` levels, in
    which case the result is returned with ``converged=False``.
    """
    spec = spec or QuadratureSpec()
    if ay < 0 or az < 0:
        raise ValueError("half-sizes must be >= 0")
    if ay == 0 or az == 0:
        return QuadratureResult(0j, 0.0, 0, 0, True)
    side = spec.panel_max_side if spec.panel_max_side is not None else min(ay, az) / 4
    p2 = max(1, math.ceil(2 * ay / side))
    p3 = max(1, math.ceil(2 * az / side))
    order = int(spec.points_per_panel_per_axis)

    history = []
    previous = None
    err = math.inf
    n_points = 0
    for level in range(spec.max_levels):
        n2, w2 = _panel_nodes(ay, p2 << level, order)
        n3, w3 = _panel_nodes(az, p3 << level, order)
        value, abs_value = _tensor_sum(f, n2, w2, n3, w3)
        n_points = len(n2) * len(n3)
        history.append(value)
        if previous is not None:
            err = abs(value - previous)
            # Floor at summation rounding, reached only by integrals that cancel to ~0.
            if err <= max(spec.rel_tol * abs(value), _ROUNDING * abs_value):
                return QuadratureResult(value, err, level + 1, n_points, True, tuple(history))
        previous = value
    return QuadratureResult(previous, err, spec.max_levels, n_points, False, tuple(history))


def integrate_2d_oracle(f, ay: float, az: float, n_per_axis: int) -> complex:
    """Midpoint Riemann sum on an ``n x n`` grid. Test oracle only."""
    if n_per_axis < 10:
        raise ValueError("n_per_axis must be >= 10")
    h2 = 2 * ay / n_per_axis
    h3 = 2 * az / n_per_axis
    xi2 = -ay + h2 * (np.arange(n_per_axis) + 0.5)
    xi3 = -az + h3 * (np.arange(n_per_axis) + 0.5)
    total = 0j
    rows = max(1, _CHUNK_POINTS // n_per_axis)
    for start in range(0, n_per_axis, rows):
        vals = np.asarray(f(xi2[start:start + rows, None], xi3[None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (len(xi2[start:start + rows]), n_per_axis))
        total += vals.sum()
    return total * h2 * h3
