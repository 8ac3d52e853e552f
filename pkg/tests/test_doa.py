import math

import numpy as np
import pytest

from dflarray.array_processing import align_phasors, beamform_power, correlation_matrix, planar_weights
from dflarray.doa import GammaGrid, estimate_doa, power_ratio_curve, reference_power_p0, scan_power
from dflarray.em_model import NoiseModel, signal_vector, snapshots
from dflarray.geometry import TargetSheet

from conftest import body

STEP = math.radians(0.1)


def test_reference_power():
    assert reference_power_p0(0.0) == 1.0
    assert reference_power_p0(0.1) == pytest.approx(1.01)


def test_reference_power_monte_carlo(link5):
    T = 100_000
    r = snapshots(signal_vector(link5), NoiseModel(0.1, 5), range(T))
    assert np.mean(np.abs(r[:, link5.M]) ** 2) == pytest.approx(1.01, rel=0.01)


def test_grid_defaults():
    g = GammaGrid()
    v = g.values()
    assert len(v) == 1801
    assert v[0] == 0.0 and v[-1] == math.pi and v[900] == math.pi / 2
    with pytest.raises(ValueError):
        GammaGrid(1.0, 0.5)


def test_scan_matches_matrix_route(link5):
    s = signal_vector(link5, body(0.3))
    gam = np.linspace(0, math.pi, 25)
    fast = scan_power(link5, s, gam, 0.2)
    R = correlation_matrix(align_phasors(s.values), 0.2)
    slow = [beamform_power(R, planar_weights(link5, float(g))) for g in gam]
    assert np.allclose(fast, slow, rtol=1e-12, atol=1e-16)


def test_center_target_curve_symmetric(link5):
    c = power_ratio_curve(link5, body(0.0))
    assert np.allclose(c.ratios, c.ratios[::-1], rtol=1e-9, atol=0)


def test_left_target_peaks_left(link5):
    est = estimate_doa(link5, body(-0.4))
    assert est.gamma_hat > math.pi / 2


def test_far_target_flatter_than_near(link5):
    empty = power_ratio_curve(link5, None).ratios
    far = power_ratio_curve(link5, body(1.0)).ratios
    near = power_ratio_curve(link5, body(0.2)).ratios
    assert np.max(np.abs(far - empty)) < np.max(np.abs(near - empty))


def test_center_estimate(link5):
    est = estimate_doa(link5, body(0.0))
    assert est.gamma_hat == math.pi / 2
    assert est.gamma_hat_deg == 90.0
    assert est.index == 900


@pytest.mark.parametrize("y, side", [(0.2, -1), (-0.2, 1)])
def test_side(link5, y, side):
    est = estimate_doa(link5, body(y))
    assert np.sign(est.gamma_hat - math.pi / 2) == side


def test_far_target_attenuation_small(link5):
    assert estimate_doa(link5, body(-3.0)).attenuation_db < 0.2


def test_attenuation_definition(link5):
    est = estimate_doa(link5, body(0.25))
    assert est.attenuation_db == pytest.approx(10 * math.log10(est.p0 / est.py), rel=1e-14)
    assert est.curve.ratios[est.index] == est.curve.ratios.max()


def test_tie_breaks_to_smallest_gamma(link5, monkeypatch):
    from dflarray import doa

    flat = lambda *a, **k: np.ones(5)  # noqa: E731
    monkeypatch.setattr(doa, "scan_power", flat)
    est = estimate_doa(link5, None, GammaGrid(0.1, 0.5, 0.1))
    assert est.gamma_hat == pytest.approx(0.1)


def test_mirror_antisymmetry(link5):
    for y in (0.15, 0.35, 0.7):
        a = estimate_doa(link5, body(y)).gamma_hat
        b = estimate_doa(link5, body(-y)).gamma_hat
        assert abs(a + b - math.pi) <= STEP + 1e-12


def test_weight_scaling_leaves_argmax(link5):
    s = signal_vector(link5, body(0.3))
    gam = GammaGrid().values()
    p = scan_power(link5, s, gam)
    R = correlation_matrix(align_phasors(s.values))
    scaled = [beamform_power(R, 3.7 * planar_weights(link5, float(g))) for g in gam[::10]]
    assert np.argmax(scaled) == np.argmax(p[::10])


def test_zero_target_limit_is_empty_room(link5):
    empty = estimate_doa(link5, None).attenuation_db
    tiny = estimate_doa(link5, TargetSheet(1e-6, 1e-6, 2.5, 0.0)).attenuation_db
    assert abs(tiny - empty) < 1e-3
    # Without a target the residual is the spherical-wavefront loss of the
    # planar beam, not zero.
    assert empty == pytest.approx(0.005621602776922585, rel=1e-9)


def test_grid_refinement_stability(link5):
    for y in (-0.4, -0.2, 0.0, 0.2, 0.4):
        sheet = body(y)
        s = signal_vector(link5, sheet)
        coarse = estimate_doa(link5, sheet, GammaGrid(step=STEP), signal=s).gamma_hat
        fine = estimate_doa(link5, sheet, GammaGrid(step=STEP / 2), signal=s).gamma_hat
        assert abs(coarse - fine) <= STEP + 1e-12


def test_noise_raises_floor_not_argmax(link5):
    s = signal_vector(link5, body(0.2))
    a = estimate_doa(link5, None, sigma_n=0.0, signal=s)
    b = estimate_doa(link5, None, sigma_n=0.3, signal=s)
    assert a.gamma_hat == b.gamma_hat
    assert b.p0 == pytest.approx(1.09)
