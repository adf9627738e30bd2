"""Holomorphic motion of the trace in the disk parameter alpha.

gamma^(alpha)(t) is the trace of the driver alpha * lambda.  The whole
family shares one backward-flow schedule: the driver enters each step only
through its pointwise values, and those are alpha-linear, so the computed
gamma^(alpha) is an exact analytic function of alpha (a finite composition
of rational operations on alpha * lambda(.)).  Analyticity checks therefore
measure the mathematics, not integrator noise.

The certified parameter region is the norm-budget disk |alpha| <=
sigma / (norm estimate), capped at the unit disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backward import DEFAULT_LADDER, _ladder_finals, _neville_to_zero, _validated_ladder, schedule_size
from .cones import DEFAULT_SIGMA
from .drivers import Driver, holder_norm_estimate, transform_driver
from .errors import DomainError


@dataclass(frozen=True)
class MotionGrid:
    """Samples of (alpha, t) -> gamma^(alpha)(t) with their ladder metadata."""

    alphas: np.ndarray
    params: np.ndarray
    values: np.ndarray
    ladder: tuple
    tol: float


def certified_alpha_radius(d: Driver, sigma: float = DEFAULT_SIGMA, n: int = 256) -> float:
    """Radius of the certified alpha disk: norm budget capped at 1."""
    est = holder_norm_estimate(d, n).norm_lower_bound
    if est == 0.0:
        return 1.0
    return float(min(1.0, sigma / est))


def _motion_batch(d: Driver, alphas, params, y_ladder, tol):
    """gamma^(alpha_k)(t_k) for parallel arrays of alphas and params t > 0."""
    alphas = np.asarray(alphas, dtype=complex)
    params = np.asarray(params, dtype=float)
    ys = _validated_ladder(y_ladder)
    n_steps = schedule_size(tol)

    a_rep = np.repeat(alphas, ys.size)
    t_rep = np.repeat(params, ys.size)
    rungs = np.tile(ys, params.size)

    def evalf(times):
        return a_rep * d.eval(times)

    finals = _ladder_finals(evalf, t_rep, 1j * rungs, n_steps)
    grid = finals.reshape(params.size, ys.size)
    limit, err = _neville_to_zero(ys, grid)
    lam0 = complex(d.eval(0.0))
    return limit + alphas * lam0, err


def motion_sample(
    d: Driver, alpha: complex, t: float, y_ladder=DEFAULT_LADDER, tol: float = 1e-9
) -> complex:
    """gamma^(alpha)(t): the trace of the driver alpha * lambda at t.

    Equivalent to running the trace pipeline on the multiplied driver; the
    batched path exists so that whole alpha-grids share one schedule.
    """
    t = float(t)
    if not (0.0 <= t <= 1.0 and t <= d.horizon + 1e-12):
        raise DomainError(f"parameter {t} outside [0, 1] or the horizon")
    if t == 0.0:
        return complex(alpha) * complex(d.eval(0.0))
    vals, _ = _motion_batch(d, [complex(alpha)], [t], y_ladder, tol)
    return complex(vals[0])


def motion_grid(
    d: Driver, alphas, params, y_ladder=DEFAULT_LADDER, tol: float = 1e-9
) -> MotionGrid:
    """Sample the motion on the product of an alpha list and a t list."""
    alphas = np.asarray(list(alphas), dtype=complex)
    params = np.asarray(list(params), dtype=float)
    if np.any(params < 0.0) or np.any(params > 1.0):
        raise DomainError("motion parameters must lie in [0, 1]")
    values = np.empty((alphas.size, params.size), dtype=complex)

    pos = params > 0.0
    if np.any(pos):
        aa, tt = np.meshgrid(alphas, params[pos], indexing="ij")
        vals, _ = _motion_batch(d, aa.ravel(), tt.ravel(), y_ladder, tol)
        values[:, pos] = vals.reshape(alphas.size, int(np.sum(pos)))
    lam0 = complex(d.eval(0.0))
    values[:, ~pos] = (alphas * lam0)[:, None]
    return MotionGrid(
        alphas=alphas, params=params, values=values, ladder=tuple(y_ladder), tol=tol
    )


def analyticity_residual(
    d: Driver,
    t: float,
    center: complex = 0.0,
    radius: float = 0.2,
    m: int = 16,
    y_ladder=DEFAULT_LADDER,
    tol: float = 1e-9,
    sigma: float = DEFAULT_SIGMA,
) -> float:
    """Mean-value-property residual of alpha -> gamma^(alpha)(t) on a circle.

    For a map analytic on the closed disk the circle mean equals the center
    value up to the m-th Taylor term, so the residual shrinks like radius^m
    under radius refinement.  The disk must sit inside the certified alpha
    region.
    """
    if m < 8:
        raise DomainError("mean-value check needs at least 8 circle samples")
    if radius <= 0:
        raise DomainError("radius must be positive")
    center = complex(center)
    if abs(center) + radius > certified_alpha_radius(d, sigma) + 1e-12:
        raise DomainError("alpha disk leaves the certified region")
    angles = 2.0 * np.pi * np.arange(m) / m
    alphas = np.concatenate([[center], center + radius * np.exp(1j * angles)])
    vals, _ = _motion_batch(d, alphas, np.full(alphas.size, float(t)), y_ladder, tol)
    return float(np.abs(vals[0] - np.mean(vals[1:])))


def motion_of_segment(
    d: Driver, a: complex, alpha: complex, y_ladder=DEFAULT_LADDER, tol: float = 1e-9
) -> complex:
    """The motion of the vertical segment [0, 2i]: F(alpha, a) = gamma^(alpha)(-a^2/4).

    a = i*s with s in [0, 2]; at alpha = 0 the map is the identity on the
    segment.
    """
    a = complex(a)
    if abs(a.real) > 1e-12 or not (0.0 <= a.imag <= 2.0):
        raise DomainError("segment point must be i*s with s in [0, 2]")
    s = a.imag
    return motion_sample(d, alpha, s * s / 4.0, y_ladder, tol)


def real_slice_matches(d: Driver, alpha: float, t: float, y_ladder=DEFAULT_LADDER, tol: float = 1e-9) -> float:
    """|motion via alpha-batch - trace of the pre-multiplied driver|.

    Both routes must agree because the multiplied driver is evaluated, not
    re-derived; the difference is pure floating-point discrepancy between
    the batched and single-driver code paths.
    """
    from .backward import trace_point

    lhs = motion_sample(d, complex(alpha), t, y_ladder, tol)
    scaled = transform_driver(d, "multiply", alpha=complex(alpha))
    rhs, _ = trace_point(scaled, t, y_ladder, tol)
    return float(abs(lhs - rhs))
