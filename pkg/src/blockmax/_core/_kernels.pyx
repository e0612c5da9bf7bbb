# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled negative log-likelihood kernels.

Hot loop of every fit, bootstrap replicate, jackknife pass and profile grid
point.  Semantics are identical to the numpy fallback ``_kernels_py`` (see its
docstring for the penalty contract); only summation order may differ in the
last few ulps.
"""

from libc.math cimport exp, isfinite, log, log1p


cdef double PENALTY = 1e10
cdef double OVERFLOW_EDGE = 690.0


cpdef gumbel_nllh(const double[::1] x, double mu, double sigma):
    """Negative Gumbel log-likelihood; returns (value, valid)."""
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double z, acc, excess
    if sigma <= 0.0:
        return PENALTY - sigma, False
    acc = m * log(sigma)
    excess = 0.0
    for i in range(m):
        z = (x[i] - mu) / sigma
        acc += z + exp(-z)
        if -z > OVERFLOW_EDGE:
            excess += -z - OVERFLOW_EDGE
    if not isfinite(acc):
        return PENALTY + excess, False
    return acc, True


cpdef gev_nllh(const double[::1] x, double mu, double sigma, double xi):
    """Negative GEV log-likelihood for xi bounded away from zero; (value, valid)."""
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double s, t, log_t, e, acc, violation, excess
    cdef bint invalid = False
    if sigma <= 0.0:
        return PENALTY - sigma, False
    violation = 0.0
    for i in range(m):
        t = 1.0 + xi * (x[i] - mu) / sigma
        if t <= 0.0:
            invalid = True
            violation += -t
    if invalid:
        return PENALTY + violation, False
    acc = m * log(sigma)
    excess = 0.0
    for i in range(m):
        s = xi * (x[i] - mu) / sigma
        log_t = log1p(s)
        e = -log_t / xi
        acc += (1.0 + 1.0 / xi) * log_t + exp(e)
        if e > OVERFLOW_EDGE:
            excess += e - OVERFLOW_EDGE
    if not isfinite(acc):
        return PENALTY + excess, False
    return acc, True
