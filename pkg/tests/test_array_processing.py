import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dflarray.array_processing import (
    Hypothesis,
    align_phasors,
    array_factor,
    beamform_output,
    beamform_power,
    correlation_matrix,
    is_hermitian_psd,
    planar_weights,
    sample_covariance,
    steering,
    steering_nonplanar,
    steering_planar,
    uniform_weights,
)
from dflarray.em_model import NoiseModel, reference_ratio, signal_vector, snapshots
from dflarray.geometry import LinkLayout

from conftest import LAMBDA, body

gammas = st.floats(0.0, math.pi)


def half_wave(M, d0=5.0):
    return LinkLayout(LAMBDA, d0, LAMBDA / 2, M)


def test_planar_examples():
    lay = half_wave(2)
    assert np.allclose(steering_planar(lay, math.pi / 2).values, 1, atol=1e-15)
    assert np.allclose(steering_planar(lay, 0.0).values, [(-1) ** m for m in range(-2, 3)], atol=1e-12)
    a = steering_planar(lay, math.pi / 3).values
    expected = np.exp(1j * np.array([-math.pi, -math.pi / 2, 0, math.pi / 2, math.pi]))
    assert np.allclose(a, expected, atol=1e-12)


@given(gammas)
def test_planar_unit_modulus_and_conjugate_symmetry(g):
    a = steering_planar(half_wave(3), g).values
    assert np.allclose(np.abs(a), 1, atol=1e-15)
    assert np.allclose(a, np.conj(a[::-1]), atol=1e-15)
    assert np.allclose(steering_planar(half_wave(3), math.pi - g).values, np.conj(a), atol=1e-12)


def test_nonplanar_single_antenna():
    assert steering_nonplanar(half_wave(0), 1.1).values.tolist() == [1 + 0j]


@given(gammas)
def test_nonplanar_norm(g):
    lay = half_wave(4, d0=4.0)
    a = steering_nonplanar(lay, g).values
    d = np.hypot(lay.d0, lay.indices * lay.da)
    assert abs(np.sum(np.abs(a) ** 2) - np.sum((lay.d0 / d) ** 2)) < 1e-12


@pytest.mark.parametrize("g", np.linspace(0, math.pi, 13))
def test_nonplanar_far_field_limit(g):
    lay = LinkLayout(LAMBDA, 1e6 * LAMBDA / 2, LAMBDA / 2, 3)
    diff = steering_nonplanar(lay, float(g)).values - steering_planar(lay, float(g)).values
    assert np.max(np.abs(diff)) < 1e-4


def test_nonplanar_broadside_magnitudes_match_free_space(link5):
    a = steering_nonplanar(link5, math.pi / 2).values
    ref = np.array([reference_ratio(link5, m) for m in range(-2, 3)])
    assert np.allclose(np.abs(a), np.abs(ref), rtol=1e-15)


def test_nonplanar_broadside_phase_orientation(link5):
    # For m >= 0 the near-field steering vector at broadside is the conjugate of
    # the free-space field ratio: the two use opposite phasor conventions.
    a = steering_nonplanar(link5, math.pi / 2).values
    for m in (1, 2):
        ref = reference_ratio(link5, m)
        assert abs(a[m + 2] - np.conj(ref)) < 1e-6
        assert abs(a[m + 2] - ref) > 1e-2
        assert abs(align_phasors([ref])[0] - a[m + 2]) < 1e-6


def test_nonplanar_mirror(link5):
    for g in (0.2, 1.0, 1.4):
        a = steering_nonplanar(link5, g).values
        b = steering_nonplanar(link5, math.pi - g).values
        assert np.allclose(b, np.conj(a), atol=1e-12)
    assert np.all(np.isfinite(steering_nonplanar(link5, math.pi).values))


def test_steering_dispatch(link5):
    assert steering(link5, 1.0, "planar").hypothesis is Hypothesis.PLANAR
    assert steering(link5, 1.0, Hypothesis.NONPLANAR).hypothesis is Hypothesis.NONPLANAR
    with pytest.raises(ValueError):
        steering_planar(link5, 3.5)


def test_array_factor_examples(ula9):
    assert array_factor(ula9, math.pi / 2) == pytest.approx(1 + 0j, abs=1e-15)
    null = math.acos(2 / 9)
    # Independent closed form: (1/N) sin(N x/2) / sin(x/2), x = pi cos(gamma).
    x = math.pi * math.cos(null)
    dirichlet = math.sin(9 * x / 2) / math.sin(x / 2) / 9
    assert abs(dirichlet) < 1e-15
    assert abs(array_factor(ula9, null)) < 1e-12
    nonplanar = abs(array_factor(ula9, math.pi / 2, Hypothesis.NONPLANAR))
    assert 0.5 < nonplanar < 1


@given(gammas)
@settings(max_examples=50)
def test_array_factor_matches_dirichlet(g):
    lay = half_wave(4, d0=4.0)
    x = math.pi * math.cos(g)
    if abs(math.sin(x / 2)) < 1e-9:
        expected = 1.0
    else:
        expected = abs(math.sin(9 * x / 2) / math.sin(x / 2) / 9)
    assert abs(abs(array_factor(lay, g)) - expected) < 1e-12


def test_array_factor_vectorised_and_general_weights(ula9):
    g = np.linspace(0, math.pi, 7)
    vec = array_factor(ula9, g, Hypothesis.NONPLANAR)
    assert vec.shape == (7,)
    assert vec[3] == pytest.approx(array_factor(ula9, g[3], Hypothesis.NONPLANAR), abs=1e-15)
    w = np.arange(1, 10, dtype=complex)
    assert array_factor(ula9, 0.7, w=w) == pytest.approx(np.dot(w, steering_planar(ula9, 0.7).values))
    with pytest.raises(ValueError):
        array_factor(ula9, 0.7, w=np.zeros(9))


def test_correlation_examples():
    s = np.array([1 + 1j, 0.5, -0.2j])
    R = correlation_matrix(s)
    assert np.linalg.matrix_rank(R) == 1
    assert np.trace(R).real == pytest.approx(np.sum(np.abs(s) ** 2))
    assert np.allclose(correlation_matrix(np.zeros(3), 0.3), 0.09 * np.eye(3))


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=1, max_size=9),
       st.floats(0, 2))
def test_correlation_hermitian_psd(vals, sigma):
    R = correlation_matrix(np.array(vals), sigma)
    assert np.max(np.abs(R - R.conj().T)) < 1e-12
    trace = np.trace(R).real
    assert np.linalg.eigvalsh(R).min() >= -1e-10 * trace
    assert is_hermitian_psd(R)


def test_monte_carlo_covariance_matches_analytic(link5):
    s = signal_vector(link5, body(0.2))
    sigma = 0.1
    snaps = snapshots(s, NoiseModel(sigma, 99), range(100_000))
    R_mc = sample_covariance(snaps)
    R = correlation_matrix(s, sigma)
    assert np.linalg.norm(R_mc - R) / np.linalg.norm(R) < 0.02


def test_beamform_power_examples():
    s = np.array([0.3 + 0.4j, 1.0, -0.5j])
    R = correlation_matrix(s)
    w = s / np.linalg.norm(s)
    assert beamform_power(R, w) == pytest.approx(np.sum(np.abs(s) ** 2))
    w_perp = np.array([1.0, 0.0, 0.0]) - np.vdot(w, [1.0, 0.0, 0.0]) * w
    assert beamform_power(R, w_perp) == pytest.approx(0.0, abs=1e-15)
    w3 = np.array([1, 2j, -1])
    assert beamform_power(correlation_matrix(np.zeros(3), 0.2), w3) == pytest.approx(0.04 * 6)
    with pytest.raises(ValueError):
        beamform_power(R, np.ones(2))


@given(gammas, st.floats(0, 1), st.floats(0.01, 100))
@settings(max_examples=40)
def test_beamform_power_identity_and_scaling(g, sigma, c):
    lay = half_wave(2)
    s = np.exp(1j * np.arange(5)) * np.linspace(0.5, 1, 5)
    w = planar_weights(lay, g)
    R = correlation_matrix(s, sigma)
    p = beamform_power(R, w)
    assert p == pytest.approx(abs(beamform_output(w, s)) ** 2 + sigma**2 * np.sum(np.abs(w) ** 2), rel=1e-12, abs=1e-15)
    assert beamform_power(R, c * w) == pytest.approx(c**2 * p, rel=1e-12, abs=1e-15)


def test_uniform_weights(link5):
    assert np.allclose(uniform_weights(link5), 0.2)
