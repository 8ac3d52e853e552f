"""Scenario files, sweeps and the tabular records the CLI writes.

A scenario is a JSON document with SI units spelled out in its keys::

    {
      "frequency_hz": 2.4868e9,
      "d0_m": 5.0, "da_m": 0.0602767, "h_m": 0.9, "M": 2,
      "target": {"ay_m": 0.45, "az_m": 0.9, "theta_rad": 0.0, "x_m": 2.5, "y_m": 0.0},
      "sigma_n": 0.0,
      "gamma_grid": {"start_rad": 0.0, "stop_rad": 3.141592653589793, "step_rad": 0.0017453292519943296},
      "quadrature": {"panel_max_side_m": 0.03, "points_per_panel": 4, "rel_tol": 1e-6},
      "seed": 0,
      "sweep": {"axis": "target_y", "values": [-0.4, -0.2, 0.0, 0.2, 0.4]}
    }

``target`` may be omitted or ``null`` for an empty room; ``gamma_grid``,
``quadrature``, ``sigma_n``, ``seed`` and ``sweep`` are optional. ``da_wavelengths``
may replace ``da_m``.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .doa import GammaGrid, estimate_doa
from .em_model import excess_attenuation_db, perturbed_ratios, reference_vector, signal_vector
from .geometry import SPEED_OF_LIGHT, CouplingWarning, GeometryError, LinkLayout, TargetSheet
from .quadrature import QuadratureSpec

log = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Unreadable or invalid scenario. ``problems`` lists every failing field."""

    def __init__(self, problems, path=None):
        self.problems = list(problems)
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(where + "; ".join(self.problems))


class SweepAxis(enum.Enum):
    TARGET_Y = "target_y"
    TARGET_X = "target_x"
    THETA = "theta"

    @property
    def column(self) -> str:
        return {"target_y": "target_y_m", "target_x": "target_x_m", "theta": "theta_rad"}[self.value]


@dataclass(frozen=True)
class Scenario:
    frequency_hz: float
    layout: LinkLayout
    target: TargetSheet | None
    sigma_n: float = 0.0
    grid: GammaGrid = field(default_factory=GammaGrid)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 0
    sweep: "SweepSpec | None" = None

    @property
    def wavelength(self) -> float:
        return self.layout.wavelength

    def with_target(self, **changes) -> "Scenario":
        if self.target is None:
            raise ScenarioError(["target: a sweep needs a target"])
        return dataclasses.replace(self, target=dataclasses.replace(self.target, **changes))


@dataclass(frozen=True)
class SweepSpec:
    axis: SweepAxis
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise ScenarioError(["sweep.values: must be non-empty"])
        if not all(math.isfinite(v) for v in self.values):
            raise ScenarioError(["sweep.values: must be finite"])


# ---------------------------------------------------------------- loading


_MISSING = object()


class _Reader:
    """Pulls typed fields out of nested dicts, recording every problem."""

    def __init__(self):
        self.problems = []

    def number(self, block, key, prefix="", default=_MISSING, *, integer=False):
        name = prefix + key
        if not isinstance(block, dict) or key not in block:
            if default is _MISSING:
                self.problems.append(f"{name}: missing")
                return None
            return default
        value = block[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.problems.append(f"{name}: expected a number, got {value!r}")
            return None
        if not math.isfinite(value):
            self.problems.append(f"{name}: must be finite")
            return None
        if integer:
            if int(value) != value:
                self.problems.append(f"{name}: expected an integer, got {value!r}")
                return None
            return int(value)
        return float(value)

    def check(self, ok, message):
        if not ok:
            self.problems.append(message)
        return ok


def parse_scenario(doc, path=None) -> Scenario:
    """Validate a decoded scenario document."""
    rd = _Reader()
    if not isinstance(doc, dict):
        raise ScenarioError(["top level: expected a JSON object"], path)

    f = rd.number(doc, "frequency_hz")
    if f is not None:
        rd.check(f > 0, "frequency_hz: must be > 0")
    d0 = rd.number(doc, "d0_m")
    if d0 is not None:
        rd.check(d0 > 0, "d0_m: must be > 0")
    h = rd.number(doc, "h_m", default=0.0)
    if h is not None:
        rd.check(h >= 0, "h_m: must be >= 0")
    M = rd.number(doc, "M", integer=True)
    if M is not None:
        rd.check(M >= 0, "M: must be >= 0")

    wavelength = SPEED_OF_LIGHT / f if f and f > 0 else None
    if "da_m" in doc and "da_wavelengths" in doc:
        rd.problems.append("da_m: give either da_m or da_wavelengths, not both")
        da = None
    elif "da_wavelengths" in doc:
        da_wl = rd.number(doc, "da_wavelengths")
        da = da_wl * wavelength if (da_wl is not None and wavelength) else None
    else:
        da = rd.number(doc, "da_m")
    if da is not None:
        rd.check(da > 0, "da_m: must be > 0")

    target = None
    tdoc = doc.get("target")
    if tdoc is not None:
        if not isinstance(tdoc, dict):
            rd.problems.append("target: expected an object or null")
        else:
            ay = rd.number(tdoc, "ay_m", "target.")
            az = rd.number(tdoc, "az_m", "target.")
            theta = rd.number(tdoc, "theta_rad", "target.", default=0.0)
            x = rd.number(tdoc, "x_m", "target.")
            y = rd.number(tdoc, "y_m", "target.")
            if ay is not None:
                rd.check(ay > 0, "target.ay_m: must be > 0")
            if az is not None:
                rd.check(az > 0, "target.az_m: must be > 0")
            if theta is not None:
                rd.check(abs(theta) <= math.pi / 2, "target.theta_rad: must lie in [-pi/2, pi/2]")
            target = (ay, az, x, y, theta)

    sigma_n = rd.number(doc, "sigma_n", default=0.0)
    if sigma_n is not None:
        rd.check(sigma_n >= 0, "sigma_n: must be >= 0")
    seed = rd.number(doc, "seed", default=0, integer=True)
    if seed is not None:
        rd.check(0 <= seed < 2**64, "seed: must be an unsigned 64-bit integer")

    gdoc = doc.get("gamma_grid") or {}
    rd.check(isinstance(gdoc, dict), "gamma_grid: expected an object")
    g_start = rd.number(gdoc, "start_rad", "gamma_grid.", default=0.0)
    g_stop = rd.number(gdoc, "stop_rad", "gamma_grid.", default=math.pi)
    g_step = rd.number(gdoc, "step_rad", "gamma_grid.", default=math.radians(0.1))
    if None not in (g_start, g_stop):
        rd.check(0 <= g_start < g_stop <= math.pi + 1e-12, "gamma_grid: need 0 <= start_rad < stop_rad <= pi")
    if g_step is not None:
        rd.check(g_step > 0, "gamma_grid.step_rad: must be > 0")

    qdoc = doc.get("quadrature") or {}
    rd.check(isinstance(qdoc, dict), "quadrature: expected an object")
    q_side = rd.number(qdoc, "panel_max_side_m", "quadrature.", default=None)
    q_pts = rd.number(qdoc, "points_per_panel", "quadrature.", default=4, integer=True)
    q_tol = rd.number(qdoc, "rel_tol", "quadrature.", default=1e-6)
    if q_side is not None:
        rd.check(q_side > 0, "quadrature.panel_max_side_m: must be > 0")
    if q_pts is not None:
        rd.check(q_pts >= 2, "quadrature.points_per_panel: must be >= 2")
    if q_tol is not None:
        rd.check(q_tol > 0, "quadrature.rel_tol: must be > 0")

    sweep = None
    sdoc = doc.get("sweep")
    if sdoc is not None:
        try:
            sweep = parse_sweep(sdoc)
        except ScenarioError as exc:
            rd.problems.extend(exc.problems)

    if rd.problems:
        raise ScenarioError(rd.problems, path)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CouplingWarning)
        layout = LinkLayout(wavelength, d0, da, M, h)
    for w in caught:
        log.warning("%s", w.message)
    if target is not None:
        ay, az, x, y, theta = target
        target = TargetSheet(ay, az, x, y, theta)
    grid = GammaGrid(g_start, min(g_stop, math.pi), g_step)
    quad = QuadratureSpec(q_side, q_pts, q_tol).resolved(wavelength)
    return Scenario(f, layout, target, sigma_n, grid, quad, seed, sweep)


def parse_sweep(sdoc) -> SweepSpec:
    if not isinstance(sdoc, dict):
        raise ScenarioError(["sweep: expected an object"])
    problems = []
    try:
        axis = SweepAxis(sdoc.get("axis"))
    except ValueError:
        problems.append(f"sweep.axis: expected one of {[a.value for a in SweepAxis]}, got {sdoc.get('axis')!r}")
        axis = None
    values = sdoc.get("values")
    if "linspace" in sdoc:
        lo, hi, n = sdoc["linspace"]
        values = np.linspace(lo, hi, int(n)).tolist()
    if not isinstance(values, list) or not values:
        problems.append("sweep.values: expected a non-empty list of numbers")
    elif not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in values):
        problems.append("sweep.values: entries must be finite numbers")
    if problems:
        raise ScenarioError(problems)
    return SweepSpec(axis, tuple(float(v) for v in values))


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError([f"cannot read file: {exc.strerror}"], path) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"], path) from exc
    return parse_scenario(doc, path)


# ---------------------------------------------------------------- records


def row_seed(seed: int, value: float) -> int:
    """Seed owned by one sweep row; a pure function of the swept value."""
    bits = int(np.float64(value).view(np.uint64))
    return int(np.random.SeedSequence([seed, bits]).generate_state(2, np.uint64).view(np.uint64)[0])


@dataclass(frozen=True)
class SweepRow:
    value: float
    gamma_hat_rad: float = math.nan
    gamma_hat_deg: float = math.nan
    attenuation_db: float = math.nan
    p0: float = math.nan
    py_at_gamma_hat: float = math.nan
    antenna_attenuation_db: tuple[float, ...] = ()
    seed: int = 0
    error: str = ""


def evaluate(scenario: Scenario):
    """Run the estimator for one scenario: ``(estimate, per-antenna E_r or None)``."""
    ratios = None
    if scenario.target is None:
        signal = signal_vector(scenario.layout, None)
    else:
        ratios = perturbed_ratios(scenario.layout, scenario.target, scenario.quadrature)
        signal = reference_vector(scenario.layout) * ratios.values
    est = estimate_doa(scenario.layout, scenario.target, scenario.grid, scenario.sigma_n,
                       scenario.quadrature, signal=signal)
    return est, ratios


def sweep_row(base: Scenario, axis: SweepAxis, value: float) -> SweepRow:
    seed = row_seed(base.seed, value)
    try:
        if axis is SweepAxis.TARGET_Y:
            sc = base.with_target(y=value)
        elif axis is SweepAxis.TARGET_X:
            sc = base.with_target(x=value)
        else:
            sc = base.with_target(theta=value)
        est, ratios = evaluate(sc)
        per_antenna = tuple(excess_attenuation_db(r) for r in ratios.values)
    except (ArithmeticError, GeometryError) as exc:
        return SweepRow(value, seed=seed, antenna_attenuation_db=(math.nan,) * base.layout.n_antennas,
                        error=f"{type(exc).__name__}: {exc}")
    return SweepRow(value, est.gamma_hat, est.gamma_hat_deg, est.attenuation_db, est.p0, est.py,
                    per_antenna, seed)


def run_sweep(base: Scenario, sweep: SweepSpec, threads: int = 1) -> list[SweepRow]:
    """Evaluate every sweep value; rows come back in input order."""
    if base.target is None:
        raise ScenarioError(["target: a sweep needs a target"])
    # Reject invalid values before any row runs.
    problems = []
    for v in sweep.values:
        if sweep.axis is SweepAxis.THETA and abs(v) > math.pi / 2:
            problems.append(f"sweep.values: theta {v!r} outside [-pi/2, pi/2]")
    if problems:
        raise ScenarioError(problems)
    if threads <= 1:
        return [sweep_row(base, sweep.axis, v) for v in sweep.values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda v: sweep_row(base, sweep.axis, v), sweep.values))
