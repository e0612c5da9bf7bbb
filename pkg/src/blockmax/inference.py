"""Model fitting and uncertainty quantification.

Maximum likelihood fits for the GEV and Gumbel models (Nelder-Mead on the
penalized negative log-likelihood), standard errors from the inverse observed
information, normal-approximation and profile-likelihood confidence
intervals, the nested likelihood-ratio test, AIC, and the delta method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import as_values
from .gev import GevParams
from .likelihood import (
    PENALTY,
    SingularInformationError,
    gev_nllh_value,
    gumbel_nllh_value,
    observed_information,
)
from .returns import location_for_level, return_level, return_level_gradient
from .simplex import OptResult, SimplexConfig, minimize
from .special import chi2_quantile, normal_quantile

__all__ = [
    "ConvergenceError",
    "FitResult",
    "LrtResult",
    "ProfileBracketError",
    "ProfileCurve",
    "Regularity",
    "aic",
    "delta_method",
    "fit_gev",
    "fit_gumbel",
    "lrt",
    "normal_ci",
    "profile",
]

MIN_FIT_SIZE = 10
EULER_GAMMA = 0.5772157


class ConvergenceError(Exception):
    """The likelihood maximization did not converge."""


class ProfileBracketError(ValueError):
    """Profile grid does not bracket the deviance crossing; names the side."""

    def __init__(self, side: str):
        super().__init__(f"profile grid does not bracket the confidence bound on the {side} side")
        self.side = side


class Regularity(Enum):
    """Asymptotic status of the maximum likelihood estimator by shape value.

    Estimators are regular (usual asymptotics) for shape > -0.5, generally
    obtainable but non-standard for -1 < shape <= -0.5, and unlikely to be
    obtainable at all for shape <= -1.
    """

    REGULAR = "regular"
    NON_STANDARD = "non_standard"
    UNOBTAINABLE = "unobtainable"


def smith_regularity(xi: float) -> Regularity:
    if xi > -0.5:
        return Regularity.REGULAR
    if xi > -1.0:
        return Regularity.NON_STANDARD
    return Regularity.UNOBTAINABLE


@dataclass(frozen=True)
class FitResult:
    """Fitted model with covariance from the inverse observed information.

    ``cov``/``se`` are None when the information matrix could not be formed
    or inverted (the fit itself is still returned).
    """

    model: str  # "gev" | "gumbel"
    params: GevParams
    nllh: float
    cov: np.ndarray | None
    se: np.ndarray | None
    regularity: Regularity
    opt: OptResult

    @property
    def n_params(self) -> int:
        return 3 if self.model == "gev" else 2

    @property
    def theta(self) -> np.ndarray:
        p = self.params
        if self.model == "gev":
            return np.array([p.mu, p.sigma, p.xi])
        return np.array([p.mu, p.sigma])


def _moment_start(values: np.ndarray) -> tuple[float, float]:
    # Gumbel method-of-moments: sigma from the variance, mu from the mean.
    sigma0 = math.sqrt(6.0 * values.var(ddof=1)) / math.pi
    mu0 = values.mean() - EULER_GAMMA * sigma0
    return mu0, max(sigma0, 1e-12)


def _covariance(sample, params, model):
    try:
        info = observed_information(sample, params, model=model)
        cov = np.linalg.inv(info.matrix)
    except (SingularInformationError, np.linalg.LinAlgError):
        return None, None
    cov = 0.5 * (cov + cov.T)
    diag = np.diag(cov)
    if not np.all(np.isfinite(cov)) or np.any(diag <= 0):
        return None, None
    return cov, np.sqrt(diag)


def _check_fit_sample(sample) -> np.ndarray:
    values = as_values(sample)
    if values.size < MIN_FIT_SIZE:
        raise ValueError(f"need at least {MIN_FIT_SIZE} observations, got {values.size}")
    return values


def _run_fit(values, objective, x0) -> OptResult:
    opt = minimize(objective, x0, SimplexConfig())
    if not opt.converged:
        raise ConvergenceError(f"simplex search did not converge in {opt.iterations} iterations")
    if opt.f_min >= PENALTY:
        raise ConvergenceError("no valid parameter region found (penalized optimum)")
    return opt


def fit_gev(sample, compute_se: bool = True) -> FitResult:
    """Fit the three-parameter GEV model by maximum likelihood."""
    values = _check_fit_sample(sample)
    mu0, sigma0 = _moment_start(values)

    def objective(theta):
        return gev_nllh_value(values, theta[0], theta[1], theta[2])[0]

    opt = _run_fit(values, objective, np.array([mu0, sigma0, 0.1]))
    params = GevParams(opt.x_min[0], opt.x_min[1], opt.x_min[2])
    cov, se = _covariance(values, params, "gev") if compute_se else (None, None)
    return FitResult(
        model="gev",
        params=params,
        nllh=opt.f_min,
        cov=cov,
        se=se,
        regularity=smith_regularity(params.xi),
        opt=opt,
    )


def fit_gumbel(sample, compute_se: bool = True) -> FitResult:
    """Fit the two-parameter Gumbel model by maximum likelihood."""
    values = _check_fit_sample(sample)
    mu0, sigma0 = _moment_start(values)

    def objective(theta):
        return gumbel_nllh_value(values, theta[0], theta[1])[0]

    opt = _run_fit(values, objective, np.array([mu0, sigma0]))
    params = GevParams(opt.x_min[0], opt.x_min[1], 0.0)
    cov, se = _covariance(values, params, "gumbel") if compute_se else (None, None)
    return FitResult(
        model="gumbel",
        params=params,
        nllh=opt.f_min,
        cov=cov,
        se=se,
        regularity=Regularity.REGULAR,
        opt=opt,
    )


def normal_ci(fit: FitResult, index: int, tau: float) -> tuple[float, float]:
    """Normal-approximation interval theta_i +- z_{tau/2} * se_i."""
    if fit.se is None:
        raise ValueError("fit has no standard errors")
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    center = fit.theta[index]
    half = normal_quantile(1.0 - tau / 2.0) * fit.se[index]
    return (center - half, center + half)


def delta_method(cov, gradient) -> float:
    """First-order variance of a scalar function: gradient' cov gradient."""
    cov = np.asarray(cov, dtype=float)
    gradient = np.asarray(gradient, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    if gradient.ndim != 1 or gradient.size != cov.shape[0]:
        raise ValueError("gradient and covariance dimensions disagree")
    if not np.allclose(cov, cov.T, atol=1e-8):
        raise ValueError("covariance must be symmetric")
    return float(gradient @ cov @ gradient)


@dataclass(frozen=True)
class LrtResult:
    d: float
    df: int
    reject_at_5pct: bool


def lrt(fit_null: FitResult, fit_alt: FitResult) -> LrtResult:
    """Likelihood-ratio test of the nested Gumbel null inside the GEV model.

    D = 2*(nllh_null - nllh_alt) compared against the 95% chi-square quantile
    with df = difference in parameter count.
    """
    if not (fit_null.model == "gumbel" and fit_alt.model == "gev"):
        raise ValueError("lrt expects a gumbel null fit and a gev alternative fit")
    if fit_alt.nllh > fit_null.nllh + 1e-6:
        raise ValueError("alternative fit is worse than the null; fits are inconsistent")
    d = 2.0 * (fit_null.nllh - fit_alt.nllh)
    df = fit_alt.n_params - fit_null.n_params
    return LrtResult(d=d, df=df, reject_at_5pct=d > chi2_quantile(0.95, df))


def aic(fit: FitResult) -> float:
    """Akaike information criterion: 2*nllh + 2*(free parameter count)."""
    return 2.0 * fit.nllh + 2.0 * fit.n_params


@dataclass(frozen=True)
class ProfileCurve:
    """Profile log-likelihood over a grid with the deviance-based interval."""

    which: str
    grid: np.ndarray
    lp: np.ndarray
    ci: tuple[float, float]
    tau: float


def _restricted(values, model, which, p):
    """Objective factory: nllh as a function of (fixed value, free params)."""
    if model == "gev":
        if which == "mu":
            return lambda g, r: gev_nllh_value(values, g, r[0], r[1])[0], ("sigma", "xi")
        if which == "sigma":
            return lambda g, r: gev_nllh_value(values, r[0], g, r[1])[0], ("mu", "xi")
        if which == "xi":
            return lambda g, r: gev_nllh_value(values, r[0], r[1], g)[0], ("mu", "sigma")
        if which == "return_level":
            def obj(g, r):
                mu = location_for_level(g, r[0], r[1], p)
                return gev_nllh_value(values, mu, r[0], r[1])[0]
            return obj, ("sigma", "xi")
    else:
        if which == "mu":
            return lambda g, r: gumbel_nllh_value(values, g, r[0])[0], ("sigma",)
        if which == "sigma":
            return lambda g, r: gumbel_nllh_value(values, r[0], g)[0], ("mu",)
        if which == "return_level":
            def obj(g, r):
                mu = location_for_level(g, r[0], 0.0, p)
                return gumbel_nllh_value(values, mu, r[0])[0]
            return obj, ("sigma",)
    raise ValueError(f"cannot profile {which!r} for the {model} model")


def _profile_center(fit: FitResult, which: str, p):
    """(center value, its standard error, free-parameter start vector)."""
    names = ["mu", "sigma", "xi"][: fit.n_params]
    if which == "return_level":
        if p is None:
            raise ValueError("profiling a return level requires the exceedance probability p")
        center = return_level(fit.params, p)
        se = None
        if fit.cov is not None:
            grad = return_level_gradient(fit.params, p)[: fit.n_params]
            se = math.sqrt(max(delta_method(fit.cov, grad), 0.0))
        start = [fit.theta[1]] if fit.model == "gumbel" else [fit.theta[1], fit.theta[2]]
        return center, se, np.array(start)
    if which not in names:
        raise ValueError(f"cannot profile {which!r} for the {fit.model} model")
    i = names.index(which)
    se = None if fit.se is None else float(fit.se[i])
    start = np.delete(fit.theta, i)
    return float(fit.theta[i]), se, start


def profile(
    sample,
    model: str = "gev",
    which: str = "xi",
    grid=None,
    tau: float = 0.05,
    p: float | None = None,
    n_grid: int = 100,
    fit: FitResult | None = None,
) -> ProfileCurve:
    """Profile log-likelihood and deviance confidence interval.

    For each grid value of the profiled quantity the remaining parameters are
    re-maximized (warm-started from the neighbouring grid point).  The
    interval is the set where the deviance 2*(lhat - lp) stays below the
    1-tau chi-square(1) quantile, with endpoints found by linear
    interpolation between grid points.  A default grid spans the estimate
    +- 4 standard errors and is widened automatically if it fails to bracket
    a crossing; a grid that still fails raises :class:`ProfileBracketError`.

    Profiling ``which="return_level"`` re-expresses the model in terms of
    (x_p, sigma[, xi]) by substituting the matching location parameter.
    """
    values = as_values(sample)
    if model not in ("gev", "gumbel"):
        raise ValueError(f"unknown model {model!r}")
    if fit is None:
        fit = fit_gev(values) if model == "gev" else fit_gumbel(values)
    lhat = -fit.nllh
    objective, _free = _restricted(values, model, which, p)
    center, center_se, start = _profile_center(fit, which, p)

    if grid is not None:
        # The estimate itself is always a grid point, so the deviance minimum
        # is observed and a one-sided grid fails with the offending side named.
        grid = np.sort(np.unique(np.append(np.asarray(grid, dtype=float), center)))
        expandable = False
    else:
        if center_se is None:
            raise ValueError("fit has no standard errors; pass an explicit grid")
        half = 4.0 * center_se
        grid = np.sort(np.unique(np.append(np.linspace(center - half, center + half, n_grid), center)))
        expandable = True

    critical = chi2_quantile(1.0 - tau, 1)
    lp = _profile_values(objective, grid, center, start)

    for _ in range(3):
        if not expandable:
            break
        dev = 2.0 * (lhat - lp)
        step = grid[1] - grid[0] if grid.size > 1 else max(abs(center), 1.0) * 0.1
        n_ext = max(n_grid // 2, 2)
        extend_lo = dev[0] <= critical
        extend_hi = dev[-1] <= critical
        if not (extend_lo or extend_hi):
            break
        if extend_lo:
            new = grid[0] - step * np.arange(n_ext, 0, -1)
            lp = np.concatenate([_profile_values(objective, new[::-1], grid[0], start)[::-1], lp])
            grid = np.concatenate([new, grid])
        if extend_hi:
            new = grid[-1] + step * np.arange(1, n_ext + 1)
            lp = np.concatenate([lp, _profile_values(objective, new, grid[-1], start)])
            grid = np.concatenate([grid, new])

    ci = _deviance_interval(grid, lp, lhat, critical)
    return ProfileCurve(which=which, grid=grid, lp=lp, ci=ci, tau=tau)


def _profile_values(objective, grid, center, start) -> np.ndarray:
    """Maximize out the free parameters at each grid value, walking outward."""
    lp = np.empty(grid.size)
    i0 = int(np.argmin(np.abs(grid - center)))
    for indices in (range(i0, grid.size), range(i0 - 1, -1, -1)):
        warm = start.copy()
        for i in indices:
            g = grid[i]
            opt = minimize(lambda r: objective(g, r), warm, SimplexConfig())
            lp[i] = -opt.f_min
            warm = opt.x_min
    return lp


def _deviance_interval(grid, lp, lhat, critical) -> tuple[float, float]:
    dev = 2.0 * (lhat - lp)
    i0 = int(np.argmin(dev))

    def crossing(indices, inner):
        prev = inner
        for j in indices:
            if dev[j] > critical:
                frac = (dev[j] - critical) / (dev[j] - dev[prev])
                return float(grid[j] + frac * (grid[prev] - grid[j]))
            prev = j
        raise ProfileBracketError("lower" if indices.step < 0 else "upper")

    lower = crossing(range(i0 - 1, -1, -1), i0)
    upper = crossing(range(i0 + 1, grid.size), i0)
    return (lower, upper)
