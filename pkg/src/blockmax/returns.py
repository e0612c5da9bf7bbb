"""Return levels, their parameter gradient, and delta-method intervals.

The level exceeded by a block maximum with probability ``p`` (the "1/p-block
return level") is the ``1-p`` quantile of the fitted law:

    x_p = mu - (sigma/xi) * (1 - y_p**(-xi)),   y_p = -log(1 - p)

with the ``xi = 0`` branch ``x_p = mu - sigma*log(y_p)``.  Here ``p`` is
always the exceedance probability (period = 1/p); phrasings that attach the
exceedance to ``1-p`` appear elsewhere in the literature, but only this
convention is consistent with the quantile inversion above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .gev import GUMBEL_XI_EPS, GevParams, quantile
from .special import normal_quantile

if TYPE_CHECKING:  # pragma: no cover
    from .inference import FitResult

__all__ = [
    "LevelBasis",
    "ReturnLevelEstimate",
    "location_for_level",
    "return_level",
    "return_level_ci",
    "return_level_gradient",
]


class LevelBasis(Enum):
    RAW_FIT = "raw_fit"
    BIAS_CORRECTED = "bias_corrected"


@dataclass(frozen=True)
class ReturnLevelEstimate:
    """Point estimate with delta-method variance and confidence bounds."""

    p: float
    period: float
    level: float
    variance: float
    ci: tuple[float, float]
    level_basis: LevelBasis


def _check_p(p: float):
    if not 0.0 < p < 1.0:
        raise ValueError("exceedance probability must lie strictly between 0 and 1")


def return_level(params: GevParams, p: float) -> float:
    """Level exceeded with probability p per block; equals quantile(params, 1-p)."""
    _check_p(p)
    return quantile(params, 1.0 - p)


def return_level_gradient(params: GevParams, p: float) -> np.ndarray:
    """Gradient of the return level in the model parameters.

    (d/dmu, d/dsigma, d/dxi) for the full family; for shapes below the Gumbel
    switch the two-component Gumbel branch [1, -log y_p] is returned.
    """
    _check_p(p)
    log_y = math.log(-math.log1p(-p))
    if abs(params.xi) < GUMBEL_XI_EPS:
        return np.array([1.0, -log_y])
    xi = params.xi
    w = -math.expm1(-xi * log_y)  # 1 - y_p**(-xi)
    y_pow = math.exp(-xi * log_y)  # y_p**(-xi)
    return np.array(
        [
            1.0,
            -w / xi,
            params.sigma * w / xi**2 - params.sigma * y_pow * log_y / xi,
        ]
    )


def _gumbel_limit_xi_gradient(sigma: float, log_y: float) -> float:
    # limit of d x_p / d xi as xi -> 0
    return 0.5 * sigma * log_y**2


def location_for_level(level: float, sigma: float, xi: float, p: float) -> float:
    """Location parameter that puts the p-exceedance return level at ``level``.

    Inverse of :func:`return_level` in mu, used to re-express the model in
    terms of (x_p, sigma, xi) when profiling a return level.
    """
    _check_p(p)
    log_y = math.log(-math.log1p(-p))
    if abs(xi) < GUMBEL_XI_EPS:
        return level + sigma * log_y
    return level - sigma * math.expm1(-xi * log_y) / xi


def return_level_ci(
    fit: "FitResult",
    p: float,
    tau: float = 0.05,
    one_sided: bool = False,
    sigma_corrected: float | None = None,
) -> ReturnLevelEstimate:
    """Return level with delta-method variance and normal-theory bounds.

    Variance is the quadratic form grad' V grad of the fit covariance with
    :func:`return_level_gradient`.  Bounds are ``level +- z*sqrt(variance)``
    with the two-sided normal quantile z_{tau/2} by default; ``one_sided``
    switches to the one-sided ``1-tau`` quantile, matching the convention some
    published tables use.  Passing ``sigma_corrected`` substitutes a
    bias-corrected scale into the level (recorded in ``level_basis``).
    """
    _check_p(p)
    if fit.cov is None:
        raise ValueError("fit has no covariance matrix; cannot build an interval")
    params = fit.params
    basis = LevelBasis.RAW_FIT
    if sigma_corrected is not None:
        params = GevParams(params.mu, sigma_corrected, params.xi)
        basis = LevelBasis.BIAS_CORRECTED

    level = return_level(params, p)
    gradient = return_level_gradient(params, p)
    cov = np.asarray(fit.cov, dtype=float)
    if gradient.size < cov.shape[0]:
        # 3-parameter covariance with a shape estimate sitting below the
        # Gumbel switch: extend with the analytic xi->0 limit component.
        log_y = math.log(-math.log1p(-p))
        gradient = np.append(gradient, _gumbel_limit_xi_gradient(params.sigma, log_y))
    if gradient.size != cov.shape[0]:
        raise ValueError("gradient and covariance dimensions disagree")

    variance = float(gradient @ cov @ gradient)
    z = normal_quantile(1.0 - tau) if one_sided else normal_quantile(1.0 - tau / 2.0)
    half = z * math.sqrt(max(variance, 0.0))
    return ReturnLevelEstimate(
        p=p,
        period=1.0 / p,
        level=level,
        variance=variance,
        ci=(level - half, level + half),
        level_basis=basis,
    )
