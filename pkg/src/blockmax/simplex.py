"""Derivative-free Nelder-Mead simplex minimizer.

Used for every likelihood and profile-likelihood maximization in the package.
The objective must return finite values everywhere (invalid regions are
expected to be penalized upstream, see the likelihood kernels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["OptResult", "SimplexConfig", "minimize"]


@dataclass(frozen=True)
class SimplexConfig:
    """Move coefficients and stopping rules.

    Convergence is declared when the value spread across the simplex,
    relative to the larger vertex magnitude (floored at 1e-12), drops to
    ``f_tol`` and the simplex diameter around the best vertex drops to
    ``x_tol``.  Both are required: a value-only rule stops early whenever two
    vertices tie (frequent on piecewise-linear objectives), a diameter-only
    rule stalls on flat valleys.
    """

    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    max_iter: int = 5000
    f_tol: float = 1e-10
    x_tol: float = 1e-8

    def __post_init__(self):
        for name in ("reflection", "expansion", "contraction", "shrink"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.expansion > 1.0 > self.contraction > 0.0:
            raise ValueError("need expansion > 1 > contraction > 0")


@dataclass(frozen=True)
class OptResult:
    x_min: np.ndarray
    f_min: float
    iterations: int
    converged: bool
    restarts: int


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    # x0 plus one vertex per axis, perturbed by a scale-aware step
    d = x0.size
    verts = np.tile(x0, (d + 1, 1))
    for i in range(d):
        verts[i + 1, i] += max(0.05 * abs(x0[i]), 0.00025)
    return verts


def _converged(fvals, verts, cfg) -> bool:
    f_best, f_worst = fvals[0], fvals[-1]
    denom = max(abs(f_best), abs(f_worst), 1e-12)
    f_ok = (f_worst - f_best) <= cfg.f_tol * denom
    x_ok = np.max(np.abs(verts - verts[0])) <= cfg.x_tol
    return f_ok and x_ok


def minimize(objective, x0, config: SimplexConfig | None = None,
             initial_simplex: np.ndarray | None = None, callback=None) -> OptResult:
    """Minimize ``objective`` from ``x0`` with the Nelder-Mead simplex.

    Deterministic for fixed inputs: vertex ordering breaks ties by insertion
    order (stable sort).  If the first pass exhausts ``max_iter`` without
    converging, one automatic restart is taken from the incumbent best point.
    ``callback(iteration, best_x, best_f)``, when given, is invoked once per
    iteration.
    """
    cfg = config or SimplexConfig()
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if x0.ndim != 1 or x0.size < 1:
        raise ValueError("x0 must be a 1-D point")
    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise ValueError(f"objective is not finite at x0: {f0!r}")

    verts = np.array(initial_simplex, dtype=float) if initial_simplex is not None \
        else _initial_simplex(x0)
    if verts.shape != (x0.size + 1, x0.size):
        raise ValueError("initial simplex must have shape (d+1, d)")

    total_iters = 0
    restarts = 0
    while True:
        verts, fvals, converged, iters = _run(objective, verts, cfg, callback, total_iters)
        total_iters += iters
        if converged or restarts >= 1:
            return OptResult(
                x_min=verts[0].copy(),
                f_min=float(fvals[0]),
                iterations=total_iters,
                converged=converged,
                restarts=restarts,
            )
        restarts += 1
        verts = _initial_simplex(verts[0])


def _run(objective, verts, cfg, callback, iter_offset):
    alpha, gamma, beta, delta = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    fvals = np.array([float(objective(v)) for v in verts])

    for it in range(cfg.max_iter):
        order = np.argsort(fvals, kind="stable")
        verts, fvals = verts[order], fvals[order]
        if callback is not None:
            callback(iter_offset + it, verts[0], float(fvals[0]))
        if _converged(fvals, verts, cfg):
            return verts, fvals, True, it + 1

        centroid = verts[:-1].mean(axis=0)
        worst = verts[-1]
        x_r = centroid + alpha * (centroid - worst)
        f_r = float(objective(x_r))

        if f_r < fvals[0]:
            x_e = centroid + gamma * (x_r - centroid)
            f_e = float(objective(x_e))
            if f_e < f_r:
                verts[-1], fvals[-1] = x_e, f_e
            else:
                verts[-1], fvals[-1] = x_r, f_r
        elif f_r < fvals[-2]:
            verts[-1], fvals[-1] = x_r, f_r
        else:
            if f_r < fvals[-1]:  # outside contraction
                x_c = centroid + beta * (x_r - centroid)
                f_c = float(objective(x_c))
                accept = f_c <= f_r
            else:  # inside contraction
                x_c = centroid + beta * (worst - centroid)
                f_c = float(objective(x_c))
                accept = f_c < fvals[-1]
            if accept:
                verts[-1], fvals[-1] = x_c, f_c
            else:  # shrink toward the best vertex
                for i in range(1, len(verts)):
                    verts[i] = verts[0] + delta * (verts[i] - verts[0])
                    fvals[i] = float(objective(verts[i]))

    order = np.argsort(fvals, kind="stable")
    return verts[order], fvals[order], False, cfg.max_iter
