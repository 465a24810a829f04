import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gausscap.capacity import (
    F_bound,
    OptimizerSettings,
    RateSource,
    convex_hull_rate,
    f_rate,
    gamma_threshold,
    nbar_threshold,
    rate_correlated,
    rate_correlated_numeric,
    rate_fraction,
)
from gausscap.entropy import g


def f_literal(eta, n_th, n, dps=50):
    """The closed form exactly as written, in 50-digit arithmetic."""
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(dps):
        eta, n_th, n = mpmath.mpf(eta), mpmath.mpf(n_th), mpmath.mpf(n)

        def gg(x):
            return mpmath.mpf(0) if x == 0 else (x + 1) * mpmath.log(x + 1, 2) - x * mpmath.log(x, 2)

        D = mpmath.sqrt(((1 + eta) * n + (1 - eta) * n_th + 1) ** 2 - 4 * eta * n * (n + 1))
        skew = (1 - eta) * (n - n_th)
        return float(gg(eta * n + (1 - eta) * n_th) - gg((D + skew - 1) / 2) - gg((D - skew - 1) / 2))


@pytest.mark.parametrize("eta", [0.0, 0.3, 0.81, 0.999, 1 - 1e-7, 1.0])
@pytest.mark.parametrize("n_th", [0.0, 0.1, 1.0, 5.0])
@pytest.mark.parametrize("n_bar", [0.0, 1e-6, 0.5, 1.0, 10.0, 1e4, 1e7])
def test_f_rate_against_high_precision(eta, n_th, n_bar):
    assert f_rate(eta, n_th, n_bar) == pytest.approx(f_literal(eta, n_th, n_bar), abs=1e-12)


def test_f_lossless():
    assert f_rate(1.0, 1.0, 1.0) == pytest.approx(2.0, abs=1e-14)
    for n in (0.3, 4.0):
        assert f_rate(1.0, 2.5, n) == pytest.approx(g(n), abs=1e-13)


@pytest.mark.parametrize("eta", np.linspace(0, 1, 11))
@pytest.mark.parametrize("n_th", [0.0, 0.3, 1.0, 7.0])
def test_f_vanishes_at_zero_photons(eta, n_th):
    assert abs(f_rate(eta, n_th, 0.0)) <= 1e-14


def test_f_vectorized():
    values = f_rate(0.81, 1.0, np.array([0.5, 1.0, 2.0]))
    assert_allclose(values, [f_rate(0.81, 1.0, n) for n in (0.5, 1.0, 2.0)])


def test_f_rejects_bad_params():
    with pytest.raises(ValueError):
        f_rate(1.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        f_rate(0.5, 0.0, -1.0)


def test_rate_correlated_full_rank():
    assert rate_correlated(0.7, 1.0, 3, 3, 0.8) == f_rate(0.7, 1.0, 0.8)


def test_rate_correlated_substitution():
    assert rate_correlated(0.7, 1.0, 1, 2, 1.0) == pytest.approx(f_rate(0.7, 1.0, 2.0) / 2, abs=1e-15)


@pytest.mark.parametrize("M,N", [(1, 2), (1, 3), (2, 3), (3, 5)])
@pytest.mark.parametrize("eta,n_th,n_bar", [(0.81, 1.0, 1.0), (0.6, 0.2, 0.5), (0.95, 2.0, 3.0)])
def test_rate_correlated_equals_entropy_difference(M, N, eta, n_th, n_bar):
    assert abs(rate_correlated(eta, n_th, M, N, n_bar) - rate_correlated_numeric(eta, n_th, M, N, n_bar)) <= 1e-9


@pytest.mark.parametrize("M,N", [(1, 2), (2, 5), (3, 7)])
def test_fraction_objective_ties_to_correlated_rate(M, N):
    assert rate_fraction(0.8, 0.5, 0.9, M / N) == pytest.approx(rate_correlated(0.8, 0.5, M, N, 0.9), rel=1e-14)


def test_F_lossless_is_single_mode():
    for n_bar in (0.2, 1.0, 5.0):
        point = F_bound(1.0, 1.0, n_bar)
        assert point.x_star == 1.0
        assert point.source is RateSource.SINGLE_MODE
        assert point.rate == pytest.approx(g(n_bar), abs=1e-12)
        xs = np.linspace(1e-3, 1, 20001)
        assert np.argmax(xs * g(n_bar / xs)) == xs.size - 1


def test_F_low_loss_single_mode():
    point = F_bound(0.9, 1.0, 1.0)
    assert point.source is RateSource.SINGLE_MODE
    assert point.x_star == 1.0
    assert point.rate == f_rate(0.9, 1.0, 1.0)


def test_F_correlated_region():
    point = F_bound(0.82, 1.0, 1.0)
    assert point.source is RateSource.CORRELATED
    assert point.x_star < 1
    assert point.rate > f_rate(0.82, 1.0, 1.0)
    xs = np.linspace(1e-3, 1, 200001)
    brute = xs * f_rate(0.82, 1.0, 1.0 / xs)
    assert point.rate >= brute.max() - 1e-12
    assert point.x_star == pytest.approx(xs[np.argmax(brute)], abs=1e-4)


def test_F_at_thirty_percent_loss_vanishes():
    # with one thermal environment photon no input gives a positive rate once gamma >= 0.2,
    # so only the signed values separate the two strategies here
    point = F_bound(0.7, 1.0, 1.0)
    assert point.source is RateSource.VANISHING
    assert point.rate == 0.0 and point.x_star == 0.0
    assert point.raw_rate > point.single_mode_rate
    assert point.raw_x < 1.0
    assert point.raw_rate == pytest.approx(-7.775531161e-5, rel=1e-6)


def test_F_positivity_edge_matches_asymptote():
    # large-photon limit of f is log2(eta / gamma) - g(n_th); at n_th = 1 it crosses zero at gamma = 0.2
    assert F_bound(0.81, 1.0, 1.0).rate > 0
    assert F_bound(0.79, 1.0, 1.0).rate == 0.0
    assert f_rate(0.8, 1.0, 1e9) == pytest.approx(math.log2(4) - g(1.0), abs=1e-6)


def test_F_zero_photons():
    point = F_bound(0.7, 1.0, 0.0)
    assert point.rate == 0.0
    assert point.source is RateSource.VANISHING


def test_optimizer_settings_validation():
    with pytest.raises(ValueError):
        OptimizerSettings(grid_size=32)
    grid = OptimizerSettings(grid_size=64).grid()
    assert grid[0] == pytest.approx(1e-4) and grid[-1] == 1.0


def test_F_coarse_grid_agrees():
    fine = F_bound(0.81, 1.0, 1.0)
    coarse = F_bound(0.81, 1.0, 1.0, OptimizerSettings(grid_size=64))
    assert coarse.rate == pytest.approx(fine.rate, abs=1e-12)


def test_F_dominates_single_mode(rng):
    for _ in range(300):
        eta, n_th, n_bar = rng.uniform(0, 1), rng.uniform(0, 5), rng.uniform(0, 10)
        point = F_bound(eta, n_th, n_bar)
        assert point.rate >= max(0.0, f_rate(eta, n_th, n_bar)) - 1e-12
        if point.source is RateSource.SINGLE_MODE:
            assert point.x_star == 1.0


@pytest.mark.parametrize("x", [1 / math.sqrt(2), 1 / math.pi, 0.1234567891])
def test_rational_approximants_converge(x):
    eta, n_th, n_bar = 0.82, 1.0, 1.0
    target = rate_fraction(eta, n_th, n_bar, x)
    for digits in range(1, 8):
        M, N = math.floor(x * 10**digits), 10**digits
        r_n = rate_correlated(eta, n_th, M, N, n_bar)
    assert abs(r_n - target) <= 1e-6


def test_convex_hull_single_component():
    assert convex_hull_rate([1.0], [2.0], 0.7, 1.0) == (2.0, pytest.approx(f_rate(0.7, 1.0, 2.0)))


def test_convex_hull_two_point_specialization():
    n_avg, rate = convex_hull_rate([0.5, 0.5], [0.0, 2.0], 0.7, 1.0)
    assert n_avg == 1.0
    assert rate == pytest.approx(f_rate(0.7, 1.0, 2.0) / 2, abs=1e-15)
    x = 0.37
    _, rate = convex_hull_rate([1 - x, x], [0.0, 1.3 / x], 0.85, 0.5)
    assert rate == pytest.approx(rate_fraction(0.85, 0.5, 1.3, x), abs=1e-14)


def test_convex_hull_rejects_bad_weights():
    with pytest.raises(ValueError):
        convex_hull_rate([0.7, 0.7], [1.0, 0.0], 0.5, 0.0)


@pytest.mark.parametrize("eta", [0.75, 0.81, 0.9, 0.95])
@pytest.mark.parametrize("n_th", [0.0, 0.5, 1.0])
def test_mixtures_never_beat_F(rng, eta, n_th):
    for _ in range(40):
        lambdas = rng.dirichlet(np.ones(3))
        n_bars = rng.uniform(0, 20, 3)
        n_avg, rate = convex_hull_rate(lambdas, n_bars, eta, n_th)
        assert rate <= F_bound(eta, n_th, n_avg).rate + 1e-9
    for x in (0.05, 0.3, 0.8):
        n_avg, rate = convex_hull_rate([1 - x, x], [0.0, 1.0 / x], eta, n_th)
        assert rate <= F_bound(eta, n_th, n_avg).rate + 1e-9


def test_f_convex_then_concave_in_photon_number():
    # the advantage region ends where the tangent from the origin touches f
    n = np.linspace(0.01, 10, 2000)
    curvature = np.diff(f_rate(0.81, 1.0, n), 2)
    signs = np.sign(curvature)
    assert signs[0] > 0 and signs[-1] < 0
    assert np.count_nonzero(np.diff(signs)) == 1


def test_gamma_threshold_paper_value():
    gamma_star = gamma_threshold(1.0, 1.0)
    assert abs(gamma_star - 0.1775) <= 5e-4
    assert not F_bound(1 - (gamma_star - 1e-3), 1.0, 1.0).has_advantage
    assert F_bound(1 - (gamma_star + 1e-3), 1.0, 1.0).has_advantage


def test_gamma_threshold_tangent_oracle():
    # crossover where the tangent to f at n_bar = 1 passes through the origin: f(1) = f'(1)
    from scipy.optimize import brentq

    def tangent_gap(gamma):
        eta, h = 1 - gamma, 1e-5
        slope = (f_rate(eta, 1.0, 1 + h) - f_rate(eta, 1.0, 1 - h)) / (2 * h)
        return f_rate(eta, 1.0, 1.0) - slope

    assert gamma_threshold(1.0, 1.0) == pytest.approx(brentq(tangent_gap, 0.1, 0.19), abs=1e-4)


def test_gamma_threshold_pure_loss_not_found():
    # frozen: without thermal noise a thermal input is never beaten before both rates vanish at gamma = 1/2
    assert gamma_threshold(0.0, 1.0) is None


def test_gamma_threshold_rises_with_photon_budget():
    values = [gamma_threshold(1.0, n) for n in (0.5, 1.0, 2.0, 10.0)]
    assert all(v is not None for v in values)
    assert values == sorted(values)
    assert values[-1] < 0.2


def test_gamma_threshold_rejects_zero_budget():
    with pytest.raises(ValueError):
        gamma_threshold(1.0, 0.0)


def test_nbar_threshold_paper_value():
    assert abs(nbar_threshold(0.81, 1.0) - 2.458) <= 5e-3


def test_nbar_threshold_lossless_not_found():
    assert nbar_threshold(1.0, 1.0) is None


def test_nbar_threshold_trend():
    # measured, not assumed: the advantage region grows with loss and with thermal noise
    by_noise = [nbar_threshold(0.81, n) for n in (0.25, 0.5, 1.0)]
    by_loss = [nbar_threshold(eta, 1.0) for eta in (0.9, 0.85, 0.81)]
    assert by_noise == sorted(by_noise)
    assert by_loss == sorted(by_loss)
