import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import digamma

from mgpmix import HueslerReiss, Logistic, factor_stdf
from mgpmix.generators import (eval_tilted_logdensity, factor_logpdf, open_uniform,
                               sample_factor_generator, sample_mixture_generator, sample_tilted,
                               tilt_weights, tilted_proposal)
from mgpmix.linalg import mvn_logpdf

from conftest import exchangeable_variogram


def test_open_uniform_bounds():
    u = open_uniform(np.random.default_rng(0), 100_000)
    assert u.min() > 0 and u.max() < 1
    assert stats.kstest(u, "uniform").pvalue > 1e-3


@pytest.mark.parametrize("fam", [Logistic(0.5), Logistic(0.2),
                                 HueslerReiss(exchangeable_variogram(3)),
                                 HueslerReiss(exchangeable_variogram(3), 2.0)],
                         ids=["logistic0.5", "logistic0.2", "hr", "hr-shift2"])
def test_exponential_mean_is_one(fam):
    rng = np.random.default_rng(1)
    eu = np.exp(sample_factor_generator(fam, rng, size=400_000, dim=3))
    se = eu.std(axis=0) / np.sqrt(len(eu))
    assert np.all(np.abs(eu.mean(axis=0) - 1.0) < 4 * se)


def test_logistic_generator_mean():
    rng = np.random.default_rng(2)
    u = sample_factor_generator(Logistic(0.5), rng, size=400_000, dim=2)
    expected = 0.5 * np.euler_gamma - np.log(np.sqrt(np.pi))
    assert expected == pytest.approx(-0.28375, abs=1e-5)
    se = u.std(axis=0) / np.sqrt(len(u))
    assert np.all(np.abs(u.mean(axis=0) - expected) < 4 * se)


def test_hr_generator_moments():
    fam = HueslerReiss(exchangeable_variogram(3))
    u = sample_factor_generator(fam, np.random.default_rng(3), size=200_000)
    cov = fam.covariance
    np.testing.assert_allclose(u.mean(axis=0), -0.5 * np.diag(cov), atol=0.02)
    np.testing.assert_allclose(np.cov(u.T), cov, atol=0.03)
    # pairwise differences carry the variogram
    assert np.var(u[:, 0] - u[:, 1]) == pytest.approx(1.38, abs=0.03)


def test_factor_logpdf_normalized_logistic():
    fam = Logistic(0.3)
    val, _ = integrate.quad(lambda t: np.exp(factor_logpdf(fam, [t])), -30, 30, limit=200)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_tilt_weights(logistic_model):
    np.testing.assert_allclose(tilt_weights(logistic_model, 0), [6 / 11, 3 / 11, 2 / 11], rtol=1e-14)
    np.testing.assert_allclose(tilt_weights(logistic_model, 1), [0.6, 0.4])
    np.testing.assert_allclose(tilt_weights(logistic_model, 2), [1.0])


def test_tilted_proposal_rejects_outside_signature(logistic_model):
    with pytest.raises(ValueError):
        tilted_proposal(logistic_model, 2, 0)


def test_tilted_logistic_mean(logistic_model):
    prop = tilted_proposal(logistic_model, 0, 1)
    q = sample_tilted(prop, np.random.default_rng(4), 400_000)
    a = np.array([1.0, 0.5, 1 / 3])
    m = 1 / 3
    tilted = -0.5 * digamma(0.5) + np.log(a[1] / (m * np.sqrt(np.pi)))
    plain = 0.5 * np.euler_gamma + np.log(a / (m * np.sqrt(np.pi)))
    expected = plain.copy()
    expected[1] = tilted
    se = q.std(axis=0) / np.sqrt(len(q))
    assert np.all(np.abs(q.mean(axis=0) - expected) < 4 * se)


def test_tilted_hr_moments(hr_model):
    prop = tilted_proposal(hr_model, 0, 2)
    q = sample_tilted(prop, np.random.default_rng(5), 200_000)
    cov = hr_model.families[0].covariance
    np.testing.assert_allclose(q.mean(axis=0), prop.mean, atol=0.02)
    np.testing.assert_allclose(np.cov(q.T), cov, atol=0.03)
    t = q[:50]
    np.testing.assert_allclose(eval_tilted_logdensity(prop, t), mvn_logpdf(t, prop.mean, cov),
                               rtol=1e-10, atol=1e-10)


def test_tilted_density_normalized(logistic_model):
    single = tilted_proposal(logistic_model, 2, 2)
    val, _ = integrate.quad(lambda t: np.exp(eval_tilted_logdensity(single, [t])), -30, 30, limit=200)
    assert val == pytest.approx(1.0, abs=1e-8)
    pair = tilted_proposal(logistic_model, 1, 2)
    val, _ = integrate.dblquad(lambda t2, t1: np.exp(eval_tilted_logdensity(pair, [t1, t2])),
                               -25, 25, -25, 25, epsabs=1e-9)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_tilted_coordinate_distribution(logistic_model):
    # KS of the tilted coordinate against its own numerically integrated cdf
    prop = tilted_proposal(logistic_model, 2, 2)
    grid = np.linspace(-30, 30, 60001)
    pdf = np.exp(eval_tilted_logdensity(prop, grid[:, None]))
    cdf = integrate.cumulative_trapezoid(pdf, grid, initial=0.0)
    cdf /= cdf[-1]
    q = sample_tilted(prop, np.random.default_rng(6), 50_000)[:, 0]
    stat = stats.kstest(q, lambda x: np.interp(x, grid, cdf)).statistic
    assert stat < stats.kstwobign.isf(1e-3) / np.sqrt(len(q))


@pytest.mark.parametrize("fam", [Logistic(0.5), HueslerReiss(exchangeable_variogram(3))],
                         ids=["logistic", "hr"])
def test_expected_max_is_stdf(fam):
    rng = np.random.default_rng(7)
    eu = np.exp(sample_factor_generator(fam, rng, size=400_000, dim=3))
    y = np.array([0.5, 1.0, 2.0])
    vals = np.max(y * eu, axis=1)
    se = vals.std() / np.sqrt(len(vals))
    assert abs(vals.mean() - factor_stdf(fam, y)) < 4 * se


def test_mixture_generator_support(logistic_model):
    cols, u = sample_mixture_generator(logistic_model, np.random.default_rng(8), 3000)
    for k, sig in enumerate(logistic_model.signatures):
        rows = u[cols == k]
        assert np.all(np.isfinite(rows[:, list(sig)]))
        off = [j for j in range(3) if j not in sig]
        assert np.all(rows[:, off] == -np.inf)
    # column frequencies follow the mass vector
    assert np.allclose(np.bincount(cols) / 3000, 1 / 3, atol=0.04)
