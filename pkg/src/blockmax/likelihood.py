"""Negative log-likelihood surfaces and the observed information matrix.

The GEV surface is ``m*log(sigma) + (1+1/xi)*sum(log t_i) + sum(t_i**(-1/xi))``
with ``t_i = 1 + xi*(x_i - mu)/sigma`` required positive for every
observation; shapes with ``|xi| < GUMBEL_XI_EPS`` use the Gumbel surface
``m*log(sigma) + sum(z_i) + sum(exp(-z_i))`` instead.  Points that violate a
constraint (or whose value overflows) map to a finite penalty, never NaN, so
the simplex search always has comparable values; a point exactly on the
support boundary counts as a violation.

Hot evaluations go through the kernel backend in ``blockmax._core``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _core
from .data import as_values
from .gev import GUMBEL_XI_EPS, GevParams

__all__ = [
    "NegLogLik",
    "ObservedInfo",
    "SingularInformationError",
    "gev_nllh_value",
    "gumbel_nllh_value",
    "nllh_gev",
    "nllh_gumbel",
    "observed_information",
]

PENALTY = _core.PENALTY


class SingularInformationError(Exception):
    """Observed information cannot be inverted; carries the condition estimate."""

    def __init__(self, message, condition_estimate=float("inf")):
        super().__init__(message)
        self.condition_estimate = condition_estimate


@dataclass(frozen=True)
class NegLogLik:
    """Negative log-likelihood value plus a validity flag.

    ``valid`` means the parameters satisfy every support constraint and the
    value is the exact (finite) negative log-likelihood; otherwise ``value``
    is the penalty surface.
    """

    value: float
    valid: bool


@dataclass(frozen=True)
class ObservedInfo:
    """Central-difference Hessian of the negative log-likelihood."""

    matrix: np.ndarray
    condition_estimate: float


def gev_nllh_value(values: np.ndarray, mu: float, sigma: float, xi: float):
    """Fast path: (value, valid) for the GEV surface, switching at GUMBEL_XI_EPS."""
    if abs(xi) < GUMBEL_XI_EPS:
        return _core.gumbel_nllh(values, mu, sigma)
    return _core.gev_nllh(values, mu, sigma, xi)


def gumbel_nllh_value(values: np.ndarray, mu: float, sigma: float):
    """Fast path: (value, valid) for the Gumbel surface."""
    return _core.gumbel_nllh(values, mu, sigma)


def _check_nonempty(values):
    if values.size == 0:
        raise ValueError("sample must be nonempty")
    return values


def nllh_gev(sample, p: GevParams | tuple) -> NegLogLik:
    """Negative GEV log-likelihood of a sample at (mu, sigma, xi)."""
    values = _check_nonempty(as_values(sample))
    mu, sigma, xi = (p.mu, p.sigma, p.xi) if isinstance(p, GevParams) else p
    value, valid = gev_nllh_value(values, mu, sigma, xi)
    return NegLogLik(value, valid)


def nllh_gumbel(sample, mu: float, sigma: float) -> NegLogLik:
    """Negative Gumbel log-likelihood of a sample at (mu, sigma)."""
    values = _check_nonempty(as_values(sample))
    value, valid = gumbel_nllh_value(values, mu, sigma)
    return NegLogLik(value, valid)


def _hessian(fun, theta: np.ndarray, step_scale: float) -> np.ndarray:
    """Central finite-difference Hessian with per-coordinate steps.

    Step h_i = max(step_scale, step_scale*|theta_i|).  Off-diagonal entries
    use the four-point cross stencil; the upper triangle is mirrored.  Raises
    SingularInformationError if any stencil point is invalid (e.g. the stencil
    crossed the support boundary).
    """
    d = theta.size
    h = np.maximum(step_scale, step_scale * np.abs(theta))
    hess = np.empty((d, d))

    def f(t):
        value, valid = fun(t)
        if not valid:
            raise SingularInformationError(
                "finite-difference stencil left the valid parameter region"
            )
        return value

    f0 = f(theta)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h[i]
        hess[i, i] = (f(theta + ei) - 2.0 * f0 + f(theta - ei)) / h[i] ** 2
        for j in range(i + 1, d):
            ej = np.zeros(d)
            ej[j] = h[j]
            hess[i, j] = (
                f(theta + ei + ej) - f(theta + ei - ej) - f(theta - ei + ej) + f(theta - ei - ej)
            ) / (4.0 * h[i] * h[j])
            hess[j, i] = hess[i, j]
    return hess


def observed_information(
    sample, p: GevParams, model: str = "gev", step_scale: float = 1e-5
) -> ObservedInfo:
    """Observed information: Hessian of the negative log-likelihood at ``p``.

    ``model="gumbel"`` differentiates over (mu, sigma) only, giving a 2x2
    matrix; the default differentiates over (mu, sigma, xi).  All observations
    must be strictly inside the support at every stencil point.  A non-finite
    or hopelessly ill-conditioned matrix raises SingularInformationError with
    the condition estimate attached.
    """
    values = _check_nonempty(as_values(sample))
    if model == "gumbel":
        theta = np.array([p.mu, p.sigma])
        fun = lambda t: gumbel_nllh_value(values, t[0], t[1])
    elif model == "gev":
        theta = np.array([p.mu, p.sigma, p.xi])
        fun = lambda t: gev_nllh_value(values, t[0], t[1], t[2])
    else:
        raise ValueError(f"unknown model {model!r}")

    matrix = _hessian(fun, theta, step_scale)
    if not np.all(np.isfinite(matrix)):
        raise SingularInformationError("observed information has non-finite entries")
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > 1e13:
        raise SingularInformationError(
            f"observed information is ill-conditioned (cond ~ {condition:.3g})",
            condition_estimate=condition,
        )
    return ObservedInfo(matrix=matrix, condition_estimate=condition)
