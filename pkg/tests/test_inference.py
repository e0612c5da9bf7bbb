import numpy as np
import pytest

import blockmax as bm
from blockmax import (
    FitResult,
    GevParams,
    OptResult,
    ProfileBracketError,
    Regularity,
    aic,
    delta_method,
    fit_gev,
    fit_gumbel,
    lrt,
    normal_ci,
    profile,
)
from blockmax.inference import smith_regularity
from blockmax.likelihood import gev_nllh_value, gumbel_nllh_value
from blockmax.returns import location_for_level, return_level

from conftest import central_gradient


def make_fit(model, nllh, params=None, se=None, cov=None):
    """Bare FitResult for arithmetic-only operations (aic, lrt)."""
    return FitResult(
        model=model,
        params=params or GevParams(0, 1, 0 if model == "gumbel" else 0.1),
        nllh=nllh,
        cov=cov,
        se=se,
        regularity=Regularity.REGULAR,
        opt=OptResult(np.zeros(2), nllh, 0, True, 0),
    )


class TestFits:
    def test_gumbel_recovery(self, std_gumbel_2k):
        fit = fit_gumbel(std_gumbel_2k)
        assert fit.model == "gumbel" and fit.opt.converged
        assert abs(fit.params.mu - 0.0) < 3 * fit.se[0]
        assert abs(fit.params.sigma - 1.0) < 3 * fit.se[1]

    def test_gev_recovery(self, gev_2k):
        fit = fit_gev(gev_2k)
        truth = (79.25, 22.12, -0.045)
        assert all(abs(fit.theta[i] - truth[i]) < 3 * fit.se[i] for i in range(3))
        assert fit.regularity is Regularity.REGULAR

    def test_shift_equivariance(self, std_gumbel_2k):
        base = fit_gumbel(std_gumbel_2k)
        shifted = fit_gumbel(std_gumbel_2k.values + 100.0)
        assert shifted.params.mu == pytest.approx(base.params.mu + 100.0, abs=1e-3)
        assert shifted.params.sigma == pytest.approx(base.params.sigma, abs=1e-3)

    def test_small_sample_rejected(self):
        with pytest.raises(ValueError):
            fit_gumbel(np.arange(9, dtype=float))
        with pytest.raises(ValueError):
            fit_gev(np.arange(9, dtype=float))

    def test_nllh_at_optimum_matches_surface(self, std_gumbel_2k):
        fit = fit_gumbel(std_gumbel_2k)
        direct = gumbel_nllh_value(std_gumbel_2k.values, fit.params.mu, fit.params.sigma)[0]
        assert fit.nllh == direct

    def test_compute_se_off(self, std_gumbel_2k):
        fit = fit_gumbel(std_gumbel_2k, compute_se=False)
        assert fit.se is None and fit.cov is None


class TestNormalCi:
    def test_standard_width(self):
        fit = make_fit("gumbel", 1.0, params=GevParams(0, 1, 0), se=np.array([1.0, 1.0]))
        lo, hi = normal_ci(fit, 0, tau=0.05)
        assert lo == pytest.approx(-1.959964, abs=1e-6)
        assert hi == pytest.approx(1.959964, abs=1e-6)

    def test_ten_percent_level(self):
        fit = make_fit(
            "gumbel", 1.0,
            params=GevParams(78.70124, 21.85684, 0),
            se=np.array([2.031079, 1.471843]),
        )
        lo, hi = normal_ci(fit, 0, tau=0.10)
        half = 1.644854 * 2.031079
        assert lo == pytest.approx(78.70124 - half, abs=1e-5)
        assert hi == pytest.approx(78.70124 + half, abs=1e-5)

    def test_degenerate_tau_one(self):
        fit = make_fit("gumbel", 1.0, params=GevParams(5, 1, 0), se=np.array([2.0, 1.0]))
        assert normal_ci(fit, 0, tau=1.0) == (5.0, 5.0)

    def test_width_scales_with_se(self):
        f1 = make_fit("gumbel", 1.0, se=np.array([1.0, 1.0]))
        f3 = make_fit("gumbel", 1.0, se=np.array([3.0, 1.0]))
        w1 = np.diff(normal_ci(f1, 0, 0.05))[0]
        w3 = np.diff(normal_ci(f3, 0, 0.05))[0]
        assert w3 == pytest.approx(3 * w1, rel=1e-12)

    def test_missing_se(self):
        with pytest.raises(ValueError):
            normal_ci(make_fit("gumbel", 1.0), 0, 0.05)


class TestModelSelection:
    def test_aic_published_values(self):
        assert aic(make_fit("gumbel", 599.0322)) == pytest.approx(1202.064, abs=5e-3)
        assert aic(make_fit("gev", 598.7072)) == pytest.approx(1203.414, abs=5e-3)
        assert aic(make_fit("gumbel", 0.0)) == 4.0

    def test_lrt_published_values(self):
        res = lrt(make_fit("gumbel", 599.0322), make_fit("gev", 598.7072))
        assert res.d == pytest.approx(0.650, abs=1e-3)
        assert res.df == 1
        assert not res.reject_at_5pct

    def test_lrt_identical_fits(self):
        res = lrt(make_fit("gumbel", 100.0), make_fit("gev", 100.0))
        assert res.d == 0.0 and not res.reject_at_5pct

    def test_lrt_rejects_non_nested(self):
        with pytest.raises(ValueError):
            lrt(make_fit("gev", 100.0), make_fit("gumbel", 99.0))
        with pytest.raises(ValueError):
            lrt(make_fit("gumbel", 100.0), make_fit("gev", 101.0))

    def test_aic_lrt_algebra(self):
        # AIC_gev - AIC_gumbel = 2 - D whenever both come from the same sample
        null, alt = make_fit("gumbel", 521.7), make_fit("gev", 521.2)
        res = lrt(null, alt)
        assert aic(alt) - aic(null) == pytest.approx(2.0 - res.d, abs=1e-10)

    def test_lrt_size_monte_carlo(self):
        # under the Gumbel null the 5% test should reject about 5% of the time
        rejections = 0
        for seed in range(500):
            s = bm.sample(GevParams(50.0, 10.0, 0.0), 100, seed=seed)
            null = fit_gumbel(s, compute_se=False)
            alt = fit_gev(s, compute_se=False)
            rejections += lrt(null, alt).reject_at_5pct
        assert 0.02 <= rejections / 500 <= 0.08


class TestDeltaMethod:
    def test_identity_cov(self):
        assert delta_method(np.eye(2), [1.0, 1.0]) == 2.0

    def test_diagonal(self):
        assert delta_method(np.diag([4.0, 9.0]), [1.0, -1.0]) == 13.0

    def test_fd_gradient_agrees_with_analytic(self):
        cov = np.array([[2.0, 0.3], [0.3, 1.0]])
        g = lambda t: t[0] + 2.0 * t[1]
        # dyadic step keeps the central difference of a linear map exact
        fd = central_gradient(g, np.array([1.0, 1.0]), h=2.0**-20)
        assert delta_method(cov, fd) == pytest.approx(delta_method(cov, [1.0, 2.0]), abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            delta_method(np.eye(3), [1.0, 2.0])
        with pytest.raises(ValueError):
            delta_method(np.ones((2, 3)), [1.0, 2.0])

    def test_asymmetric_cov_rejected(self):
        with pytest.raises(ValueError):
            delta_method(np.array([[1.0, 0.5], [0.0, 1.0]]), [1.0, 1.0])


class TestRegularity:
    @pytest.mark.parametrize(
        "xi,expected",
        [
            (0.1, Regularity.REGULAR),
            (-0.499, Regularity.REGULAR),
            (-0.5, Regularity.NON_STANDARD),
            (-0.99, Regularity.NON_STANDARD),
            (-1.0, Regularity.UNOBTAINABLE),
            (-1.5, Regularity.UNOBTAINABLE),
        ],
    )
    def test_thresholds(self, xi, expected):
        assert smith_regularity(xi) is expected


@pytest.fixture(scope="module")
def sample_200():
    return bm.sample(GevParams(80.0, 20.0, -0.1), 200, seed=23)


class TestProfile:

    def test_deviance_zero_at_mle(self, sample_200):
        fit = fit_gev(sample_200)
        curve = profile(sample_200, model="gev", which="xi", n_grid=21, fit=fit)
        assert curve.lp.max() == pytest.approx(-fit.nllh, abs=1e-6)
        dev_min = 2.0 * (-fit.nllh - curve.lp.max())
        assert abs(dev_min) <= 1e-6

    def test_ci_contains_mle_and_is_ordered(self, sample_200):
        fit = fit_gev(sample_200)
        curve = profile(sample_200, model="gev", which="xi", n_grid=21, fit=fit)
        lo, hi = curve.ci
        assert lo < fit.params.xi < hi

    def test_skewed_small_sample_interval_nonempty(self):
        s = bm.sample(GevParams(0.0, 1.0, 0.25), 50, seed=31)
        fit = fit_gev(s)
        curve = profile(s, model="gev", which="xi", n_grid=21, fit=fit)
        lo, hi = curve.ci
        assert lo < fit.params.xi < hi and hi > lo

    def test_reparameterization_identity(self, sample_200):
        # substituting the matching location reproduces the original nllh
        fit = fit_gev(sample_200)
        p = 0.1
        level = return_level(fit.params, p)
        mu_back = location_for_level(level, fit.params.sigma, fit.params.xi, p)
        direct = gev_nllh_value(sample_200.values, fit.params.mu, fit.params.sigma, fit.params.xi)[0]
        sub = gev_nllh_value(sample_200.values, mu_back, fit.params.sigma, fit.params.xi)[0]
        assert sub == pytest.approx(direct, abs=1e-9)
        # and the Gumbel branch of the substitution
        gfit = fit_gumbel(sample_200)
        glevel = return_level(gfit.params, p)
        gmu = location_for_level(glevel, gfit.params.sigma, 0.0, p)
        a = gumbel_nllh_value(sample_200.values, gfit.params.mu, gfit.params.sigma)[0]
        b = gumbel_nllh_value(sample_200.values, gmu, gfit.params.sigma)[0]
        assert b == pytest.approx(a, abs=1e-9)

    def test_profile_return_level(self, sample_200):
        fit = fit_gumbel(sample_200)
        curve = profile(sample_200, model="gumbel", which="return_level",
                        p=0.1, n_grid=15, fit=fit)
        level = return_level(fit.params, 0.1)
        lo, hi = curve.ci
        assert lo < level < hi

    def test_default_grid_expands_until_bracketing(self, sample_200):
        # at tau = 1e-5 the critical deviance (~19.5) exceeds the deviance at
        # the default +-4 SE grid edge (~16), forcing the expansion path
        fit = fit_gev(sample_200)
        curve = profile(sample_200, model="gev", which="xi", n_grid=21,
                        fit=fit, tau=1e-5)
        lo, hi = curve.ci
        se_xi = fit.se[2]
        assert lo < fit.params.xi - 4 * se_xi or hi > fit.params.xi + 4 * se_xi
        assert lo < fit.params.xi < hi

    def test_bracket_failure_names_side(self, sample_200):
        fit = fit_gev(sample_200)
        xi_hat = fit.params.xi
        with pytest.raises(ProfileBracketError) as err:
            profile(sample_200, model="gev", which="xi", fit=fit,
                    grid=np.linspace(xi_hat - 0.5, xi_hat, 11))
        assert err.value.side == "upper"
        with pytest.raises(ProfileBracketError) as err:
            profile(sample_200, model="gev", which="xi", fit=fit,
                    grid=np.linspace(xi_hat, xi_hat + 0.5, 11))
        assert err.value.side == "lower"

    def test_unknown_target_rejected(self, sample_200):
        with pytest.raises(ValueError):
            profile(sample_200, model="gumbel", which="xi")
        with pytest.raises(ValueError):
            profile(sample_200, model="gev", which="return_level")  # p missing
