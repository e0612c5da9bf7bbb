"""Numpy implementations of the negative log-likelihood kernels.

Reference backend for the compiled extension in ``_kernels.pyx``; both share
the same contract:

* input ``x`` is a contiguous float64 array, ``(value, valid)`` comes back;
* ``sigma <= 0`` or a support violation yields ``(PENALTY + violation, False)``
  where ``violation`` grows with the depth of the constraint breach, so a
  simplex search is pushed back toward the valid region;
* a finite value is always returned: if the exact expression overflows, the
  point is penalised the same way, graded by how far the exponent exceeds the
  representable range.
"""

import math

import numpy as np

PENALTY = 1e10
_OVERFLOW_EDGE = 690.0  # exp() overflows just above exp(709)


def gumbel_nllh(x, mu, sigma):
    """Negative Gumbel log-likelihood: m*log(sigma) + sum z + sum exp(-z)."""
    if sigma <= 0.0:
        return PENALTY - sigma, False
    z = (x - mu) / sigma
    with np.errstate(over="ignore"):
        value = x.size * math.log(sigma) + float(z.sum()) + float(np.exp(-z).sum())
    if not math.isfinite(value):
        excess = float(np.clip(-z - _OVERFLOW_EDGE, 0.0, None).sum())
        return PENALTY + excess, False
    return value, True


def gev_nllh(x, mu, sigma, xi):
    """Negative GEV log-likelihood for xi bounded away from zero.

    m*log(sigma) + (1+1/xi)*sum log t + sum t^(-1/xi) with t = 1+xi*(x-mu)/sigma,
    valid only while every t is strictly positive.  Callers route near-zero xi
    to :func:`gumbel_nllh`.
    """
    if sigma <= 0.0:
        return PENALTY - sigma, False
    s = xi * (x - mu) / sigma
    t = 1.0 + s
    if np.any(t <= 0.0):
        violation = float(np.clip(-t, 0.0, None).sum())
        return PENALTY + violation, False
    log_t = np.log1p(s)
    e = -log_t / xi  # t^(-1/xi) == exp(e), the numerically stable form
    with np.errstate(over="ignore"):
        value = (
            x.size * math.log(sigma)
            + (1.0 + 1.0 / xi) * float(log_t.sum())
            + float(np.exp(e).sum())
        )
    if not math.isfinite(value):
        excess = float(np.clip(e - _OVERFLOW_EDGE, 0.0, None).sum())
        return PENALTY + excess, False
    return value, True
