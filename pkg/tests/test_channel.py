import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from swipt.channel import FadingModel, inverse_cdf, pdf, sample, upper_partial_mean, upper_tail


def quad_tail(f, a):
    """Oracle: adaptive quadrature to a cutoff plus a far tail piece."""
    vmax = max(a, 0.0) + 80.0
    head, _ = integrate.quad(f, a, vmax, epsabs=1e-14, epsrel=1e-13, limit=400)
    tail, _ = integrate.quad(f, vmax, np.inf, epsabs=1e-16)
    return head + tail


def test_rayleigh_pdf_values():
    rayleigh = FadingModel(1)
    assert pdf(rayleigh, 0.0) == 1.0
    assert pdf(rayleigh, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("m", [1, 2, 3, 7, 20])
def test_pdf_normalized_and_unit_mean(m):
    model = FadingModel(m)
    assert quad_tail(lambda v: pdf(model, v), 0.0) == pytest.approx(1.0, abs=1e-10)
    assert quad_tail(lambda v: v * pdf(model, v), 0.0) == pytest.approx(1.0, abs=1e-10)


def test_pdf_rejects_negative():
    with pytest.raises(ValueError):
        pdf(FadingModel(2), -0.1)


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_model_rejects_bad_m(bad):
    with pytest.raises(ValueError):
        FadingModel(bad)


def test_partial_mean_frozen_values():
    # mpmath quadrature, 30 digits
    expected = [0.998851518755137867577, 0.919698602928605803989, 0.676676416183063459470,
                0.238103305553544343818, 0.00276939571551157594367]
    got = upper_partial_mean(FadingModel(2), [0.1, 0.5, 1.0, 2.0, 5.0])
    np.testing.assert_allclose(got, expected, rtol=1e-13)


def test_rayleigh_partial_mean_at_one():
    assert upper_partial_mean(FadingModel(1), 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 10])
@pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_closed_forms_match_quadrature(m, a):
    model = FadingModel(m)
    assert upper_partial_mean(model, a) == pytest.approx(quad_tail(lambda v: v * pdf(model, v), a), abs=1e-10)
    assert upper_tail(model, a) == pytest.approx(quad_tail(lambda v: pdf(model, v), a), abs=1e-10)


def test_tail_values():
    assert upper_tail(FadingModel(1), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert upper_tail(FadingModel(4), 2.0) == pytest.approx(0.0423801119916839956, rel=1e-13)


@given(st.integers(min_value=1, max_value=30))
def test_zero_threshold_exact(m):
    model = FadingModel(m)
    assert upper_tail(model, 0.0) == 1.0
    assert upper_partial_mean(model, 0.0) == 1.0


@given(st.integers(1, 25), st.lists(st.floats(0, 30), min_size=2, max_size=20))
def test_tails_non_increasing(m, thresholds):
    a = np.sort(np.array(thresholds))
    model = FadingModel(m)
    assert np.all(np.diff(upper_tail(model, a)) <= 1e-15)
    assert np.all(np.diff(upper_partial_mean(model, a)) <= 1e-15)


def test_sample_moments():
    rng = np.random.default_rng(2024)
    v1 = sample(FadingModel(1), rng, 10**6)
    assert v1.mean() == pytest.approx(1.0, abs=0.005)
    v2 = sample(FadingModel(2), rng, 10**6)
    assert v2.var() == pytest.approx(0.5, abs=0.01)


def test_sample_tail_matches_closed_form():
    rng = np.random.default_rng(11)
    v = sample(FadingModel(3), rng, 10**6)
    assert np.mean(v > 1.0) == pytest.approx(upper_tail(FadingModel(3), 1.0), abs=0.005)


def test_sample_variance_shrinks_with_m():
    rng = np.random.default_rng(5)
    variances = [sample(FadingModel(m), rng, 200_000).var() for m in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(variances, variances[1:]))


def test_scalar_sample():
    assert isinstance(sample(FadingModel(2), np.random.default_rng(0)), float)


@pytest.mark.parametrize("m", [1, 3])
def test_inverse_cdf_consistent_with_tail(m):
    u = np.array([0.1, 0.5, 0.9, 0.999])
    v = inverse_cdf(FadingModel(m), u)
    np.testing.assert_allclose(1 - upper_tail(FadingModel(m), v), u, rtol=1e-10)
