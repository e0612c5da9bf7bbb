"""Distribution of the r-th order statistic of n i.i.d. draws.

The cdf is the binomial upper tail sum_{k=r}^{n} C(n,k) F^k (1-F)^{n-k};
terms are accumulated in log space and summed largest-first so ranks remain
stable for n well beyond the handful needed in typical return-period work.
"""

from __future__ import annotations

import math

from .gev import GevParams, cdf, pdf

__all__ = ["order_cdf", "order_pdf"]


def _check_rank(r: int, n: int):
    if n < 1 or not 1 <= r <= n:
        raise ValueError(f"rank must satisfy 1 <= r <= n, got r={r}, n={n}")


def order_cdf(f: float, r: int, n: int) -> float:
    """P(X_{r:n} <= x) given F = F(x), the parent cdf value."""
    _check_rank(r, n)
    if not 0.0 <= f <= 1.0:
        raise ValueError("f must be a probability in [0, 1]")
    if f == 0.0:
        return 0.0
    if f == 1.0:
        return 1.0
    log_f, log_1mf = math.log(f), math.log1p(-f)
    log_terms = [
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        + k * log_f + (n - k) * log_1mf
        for k in range(r, n + 1)
    ]
    top = max(log_terms)
    total = top + math.log(sum(math.exp(t - top) for t in sorted(log_terms, reverse=True)))
    return min(math.exp(total), 1.0)


def order_pdf(params: GevParams, x: float, r: int, n: int) -> float:
    """Density of the r-th order statistic: r*C(n,r)*f(x)*F^(r-1)*(1-F)^(n-r)."""
    _check_rank(r, n)
    fx = pdf(params, x)
    if fx <= 0.0:
        return 0.0
    big_f = cdf(params, x)
    if (big_f == 0.0 and r > 1) or (big_f == 1.0 and r < n):
        return 0.0
    log_coef = math.log(r) + math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)
    log_val = log_coef + math.log(fx)
    if r > 1:
        log_val += (r - 1) * math.log(big_f)
    if r < n:
        log_val += (n - r) * math.log1p(-big_f)
    return math.exp(log_val)
