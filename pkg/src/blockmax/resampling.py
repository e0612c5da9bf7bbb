"""Bootstrap and jackknife bias/standard-error estimation.

Both resamplers work on any statistic mapping a 1-D value array to a scalar
or vector.  Reports carry bias, standard error, |bias|/se, root mean square
error and the bias-corrected estimate per component, plus the screening
verdict helpers built on the quarter-of-a-standard-error rule of thumb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import as_values

__all__ = [
    "ResamplingError",
    "ResamplingReport",
    "Verdict",
    "bootstrap",
    "jackknife",
    "rmse",
    "rmse_approx",
    "screen",
]

# |bias|/se below this is ignorable; at or above CORRECT_MAX the statistic
# itself is suspect (the upper threshold is a heuristic, the rule of thumb
# only says "large compared to the standard error").
IGNORE_BELOW = 0.25
CORRECT_MAX = 1.0


class ResamplingError(Exception):
    """Resampling aborted (too many failed replicates, or a failed refit)."""


class Verdict(Enum):
    IGNORE = "ignore"
    CORRECT = "correct"
    SUSPECT = "suspect"


@dataclass(frozen=True)
class ResamplingReport:
    """Per-component resampling summary; method is "bootstrap" or "jackknife"."""

    method: str
    labels: tuple[str, ...]
    estimate: np.ndarray
    bias: np.ndarray
    se: np.ndarray
    ratio: np.ndarray
    rmse: np.ndarray
    corrected: np.ndarray
    b: int | None = None
    seed: int | None = None
    failed: int = 0


def rmse(bias: float, se: float) -> float:
    """Root mean square error se*sqrt(1 + (bias/se)^2), the exact form."""
    if se <= 0:
        raise ValueError("se must be positive")
    return se * math.sqrt(1.0 + (bias / se) ** 2)


def rmse_approx(bias: float, se: float) -> float:
    """Quadratic approximation se*(1 + 0.5*(bias/se)^2)."""
    if se <= 0:
        raise ValueError("se must be positive")
    return se * (1.0 + 0.5 * (bias / se) ** 2)


def _ratio(bias: np.ndarray, se: np.ndarray) -> np.ndarray:
    out = np.zeros_like(bias)
    nonzero = se > 0
    out[nonzero] = np.abs(bias[nonzero]) / se[nonzero]
    out[~nonzero & (bias != 0)] = np.inf
    return out


def _labels(labels, k):
    if labels is None:
        return tuple(f"stat_{i}" for i in range(k))
    labels = tuple(labels)
    if len(labels) != k:
        raise ValueError("labels length must match the statistic dimension")
    return labels


def _evaluate(statistic, values) -> np.ndarray:
    out = np.atleast_1d(np.asarray(statistic(values), dtype=float))
    if out.ndim != 1:
        raise ValueError("statistic must return a scalar or 1-D vector")
    if not np.all(np.isfinite(out)):
        raise ValueError("statistic returned non-finite values")
    return out


def _assemble(method, labels, estimate, bias, se, **extra) -> ResamplingReport:
    return ResamplingReport(
        method=method,
        labels=_labels(labels, estimate.size),
        estimate=estimate,
        bias=bias,
        se=se,
        ratio=_ratio(bias, se),
        rmse=np.hypot(se, bias),  # se*sqrt(1+(bias/se)^2), safe at se == 0
        corrected=estimate - bias,
        **extra,
    )


def bootstrap(sample, statistic, b: int = 999, seed: int = 0, labels=None) -> ResamplingReport:
    """Nonparametric bootstrap bias and standard error of a statistic.

    Draws ``b`` resamples of size n with replacement and evaluates the
    statistic on each: bias is the replicate mean minus the full-sample
    value, the standard error is the replicate standard deviation (divisor
    b - 1).  Replicate ``i`` draws from its own PCG64 stream seeded by
    (seed, i, attempt), so results are deterministic and independent of any
    parallel execution order.  A replicate whose statistic raises (or returns
    non-finite values) is redrawn; more than 10% failures aborts.
    """
    values = as_values(sample)
    if b < 2:
        raise ValueError("bootstrap needs at least 2 replicates")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    n = values.size
    estimate = _evaluate(statistic, values)

    replicates = np.empty((b, estimate.size))
    failed = 0
    fail_budget = 0.10 * b
    last_error = None
    for i in range(b):
        attempt = 0
        while True:
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, i, attempt])))
            idx = rng.integers(0, n, size=n)
            try:
                replicates[i] = _evaluate(statistic, values[idx])
                break
            except Exception as exc:  # noqa: BLE001 - any failed refit counts
                failed += 1
                last_error = exc
                if failed > fail_budget:
                    raise ResamplingError(
                        f"{failed} of {b} bootstrap replicates failed "
                        f"(limit 10%); last error: {last_error!r}"
                    ) from exc
                attempt += 1

    bias = replicates.mean(axis=0) - estimate
    se = replicates.std(axis=0, ddof=1)
    return _assemble("bootstrap", labels, estimate, bias, se, b=b, seed=seed, failed=failed)


def jackknife(sample, statistic, labels=None) -> ResamplingReport:
    """Leave-one-out jackknife bias and standard error of a statistic.

    Exactly n evaluations, one per deleted observation:
    bias = (n-1)*(mean of leave-one-out values - full value),
    se = sqrt((n-1)/n * sum (theta_(i) - mean)^2).  Fully deterministic;
    any failed evaluation aborts (there is no redraw to fall back on).
    """
    values = as_values(sample)
    n = values.size
    if n < 3:
        raise ValueError("jackknife needs at least 3 observations")
    estimate = _evaluate(statistic, values)

    loo = np.empty((n, estimate.size))
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        mask[i] = False
        try:
            loo[i] = _evaluate(statistic, values[mask])
        except Exception as exc:  # noqa: BLE001
            raise ResamplingError(f"jackknife refit without observation {i} failed: {exc!r}") from exc
        mask[i] = True

    center = loo.mean(axis=0)
    bias = (n - 1.0) * (center - estimate)
    se = np.sqrt((n - 1.0) / n * ((loo - center) ** 2).sum(axis=0))
    return _assemble("jackknife", labels, estimate, bias, se)


def screen(report: ResamplingReport) -> tuple[Verdict, ...]:
    """Per-component verdict from |bias|/se: ignore, correct, or suspect."""

    def verdict(r):
        if not math.isfinite(r):
            return Verdict.SUSPECT
        if r < IGNORE_BELOW:
            return Verdict.IGNORE
        if r < CORRECT_MAX:
            return Verdict.CORRECT
        return Verdict.SUSPECT

    return tuple(verdict(r) for r in report.ratio)
