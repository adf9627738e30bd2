"""Backward Loewner flow: trajectories, trace extraction, and certificates.

The flow solves d/du (A + lambda(t-u)) = -2/A from A(0) = z.  Two rewrites
make it numerically tame without ever differentiating the driver:

* integrate Psi(u) = A(u) + lambda(t-u), whose ODE Psi' = -2/(Psi -
  lambda(t-u)) needs only pointwise driver values;
* substitute u = v^2.  In v the tip singularity disappears: Phi(v) =
  Psi(v^2) satisfies Phi' = -4v/(Phi - lambda(t-v^2)), whose right side
  tends to the finite limit (+-)2i as v -> 0 along boundary flows, and
  perturbations decay like v0/v, so seeding errors damp instead of growing.

The first interval [0, u0], u0 = min(1e-6, t/100), is advanced by the
frozen-driver closed form A = sqrt(z^2 - 4u) (branch continued from z) with
the driver increment over the window restored exactly through the Psi
bookkeeping; the -2/A term is too stiff there for any stepper and the
frozen-driver error is far below integration tolerance at u0.

Two integrators share this setup.  ``integrate_backward`` is adaptive and
records its nodes, for certificates and convergence studies.  The trace and
motion pipelines instead run a fixed schedule in v (classical RK4, node
count set by the tolerance), geometric toward both interval ends --
toward v = 0 for the flow, toward v = sqrt(t) for drivers rough at time
0 -- and vectorized over whole batches of parameters: a fixed schedule
keeps every output an exact analytic function of the driver values, which
the holomorphic-motion checks need, and makes results independent of
batching and thread count.

Trace values on the negative parameter side come from the mirrored flow
started at -iy; both sides meet the driver value at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import (
    ConeParams,
    ConeSpec,
    comparison_anchor,
    cone_contains,
    default_cone_params,
    gap_growth_coefficient,
)
from .drivers import Driver, holder_norm_estimate
from .errors import DomainError, SingularityError
from .rk import dp_retune, dp_step, rk4_step

DEFAULT_LADDER = (1e-2, 1e-3, 1e-4)

# |A| below this is treated as hitting the ODE singularity
_SINGULAR = 1e-12

# fixed-schedule node count from a tolerance: fourth-order heuristic with a
# floor that keeps rough drivers resolved; validated by self-convergence
def schedule_size(tol: float) -> int:
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return int(np.clip(8.0 * tol**-0.25, 1024, 65536))


@dataclass(frozen=True)
class BackwardTrajectory:
    """Recorded backward flow A(u) = f(u, t, z) with its certificate inputs."""

    times: np.ndarray
    states: np.ndarray
    horizon: float
    z0: complex
    y_hat0: float
    side: int
    certified: bool


@dataclass(frozen=True)
class TraceSamples:
    """The curve t -> gamma(t) on a parameter grid over [-1, 1]."""

    params: np.ndarray
    points: np.ndarray
    extrapolation_error: np.ndarray


def _branch_sqrt(w2, ref):
    """sqrt(w2) on the branch continuous from ref (used at u ~ 0)."""
    w = np.sqrt(np.asarray(w2, dtype=complex))
    ref = np.asarray(ref, dtype=complex)
    dot = (w * ref.conjugate()).real
    cross = (w * ref.conjugate()).imag
    flip = (dot < 0.0) | ((dot == 0.0) & (cross < 0.0))
    return np.where(flip, -w, w)


def _frozen_substep(evalf, t_arr, z_arr, u0_arr):
    """A(u0) by the frozen-driver closed form plus the exact Psi increment."""
    a_frozen = _branch_sqrt(z_arr * z_arr - 4.0 * u0_arr, z_arr)
    return a_frozen + evalf(t_arr) - evalf(t_arr - u0_arr)


def _guarded_rhs(evalf, t_arr):
    def f(v, phi):
        a = phi - evalf(t_arr - v * v)
        small = np.abs(a) < _SINGULAR
        if np.any(small):
            k = int(np.argmax(small))
            raise SingularityError(
                f"backward state within {_SINGULAR} of the singularity at "
                f"u={float(np.atleast_1d(v * v)[k])}"
            )
        return -4.0 * v / a

    return f


# fraction of fixed-schedule steps spent on the ascending leg; the rest
# refine toward v = sqrt(t), where the driver argument t - v^2 approaches 0
# and, since du = 2v dv, a fixed v-step sweeps the driver fastest
_ASCENT_FRACTION = 1.0 / 3.0

# deepest descending node, relative to sqrt(t); the single step it leaves to
# the endpoint is small enough that even a sqrt-type driver modulus there
# contributes below any supported tolerance
_END_REFINEMENT = 1e-6


def _fixed_flow(evalf, t_arr, v_start, phi_start, n_steps, record=False):
    """RK4 on a per-element two-sided geometric v-grid from v_start to sqrt(t).

    Steps tighten toward both endpoints: near v_start because the flow's
    natural resolution variable there is log v, and near sqrt(t) because the
    driver is evaluated at t - v^2, which crosses 0 at the far end -- a
    driver whose modulus is genuinely Hölder-1/2 at the time origin (the
    sqrt kind, Brownian samples) has unbounded slope there, and a one-sided
    grid would leave an O(h^{3/2}) bias in every trace value.  All elements
    take the same number of steps; each has its own grid ratios, so
    per-element arithmetic never depends on the rest of the batch.
    Returns (v_nodes, phi_nodes) when recording, else the final phi.
    """
    t_arr = np.asarray(t_arr, dtype=float)
    v0 = np.asarray(v_start, dtype=float)
    vmax = np.sqrt(t_arr)
    n_up = int(round(_ASCENT_FRACTION * n_steps))
    n_up = max(1, min(n_steps - 2, n_up))
    n_dn = n_steps - n_up
    # meeting point: halfway, or the geometric mean when the start is high
    v_mid = np.where(v0 < 0.5 * vmax, 0.5 * vmax, np.sqrt(v0 * vmax))
    r_up = (v_mid / v0) ** (1.0 / n_up)
    w_mid = vmax - v_mid
    r_dn = _END_REFINEMENT ** (1.0 / (n_dn - 1)) if n_dn > 1 else 1.0
    f = _guarded_rhs(evalf, t_arr)

    phi = np.asarray(phi_start, dtype=complex).copy()
    v = v0.copy()
    nodes_v = [v.copy()] if record else None
    nodes_phi = [phi.copy()] if record else None
    for k in range(1, n_steps + 1):
        if k <= n_up:
            v_next = v0 * r_up**k
        elif k < n_steps:
            v_next = vmax - w_mid * r_dn ** (k - n_up)
        else:
            v_next = vmax
        phi = rk4_step(f, v, phi, v_next - v)
        v = v_next
        if record:
            nodes_v.append(v.copy())
            nodes_phi.append(phi.copy())
    if record:
        return np.array(nodes_v), np.array(nodes_phi)
    return phi


def _ladder_finals(evalf, t_arr, z_arr, n_steps):
    """f(t, t, z) for a batch of (horizon, start) pairs, fixed schedule."""
    t_arr = np.asarray(t_arr, dtype=float)
    z_arr = np.asarray(z_arr, dtype=complex)
    u0 = np.minimum(1e-6, t_arr / 100.0)
    a0 = _frozen_substep(evalf, t_arr, z_arr, u0)
    phi0 = a0 + evalf(t_arr - u0)
    phi = _fixed_flow(evalf, t_arr, np.sqrt(u0), phi0, n_steps)
    vmax = np.sqrt(t_arr)
    return phi - evalf(np.maximum(t_arr - vmax * vmax, 0.0))


def _neville_to_zero(xs, vals):
    """Polynomial extrapolation of vals(x) to x = 0; returns (limit, err).

    err is the magnitude of the last diagonal increment, a heuristic
    estimate rather than a bound.
    """
    m = len(xs)
    cols = [np.asarray(vals[..., j], dtype=complex) for j in range(m)]
    prev = cols[0]
    for j in range(1, m):
        nxt = []
        for i in range(m - j):
            xi, xj = xs[i], xs[i + j]
            nxt.append((xj * cols[i] - xi * cols[i + 1]) / (xj - xi))
        cols = nxt
        latest = cols[0]
        err = np.abs(latest - prev)
        prev = latest
    return prev, err


def _validated_ladder(y_ladder):
    ys = np.asarray(tuple(y_ladder), dtype=float)
    if ys.size < 3:
        raise DomainError("ladder needs at least three rungs")
    if np.any(ys <= 0.0) or np.any(np.diff(ys) >= 0.0):
        raise DomainError("ladder must be strictly decreasing and positive")
    return ys


_BUDGET_GRID = 256


def _certified(d: Driver, z: complex, cone: ConeParams) -> bool:
    start_ok = cone_contains(
        ConeSpec(base=0.0, aperture=cone.theta1, orientation="two-sided"), z
    )
    budget_ok = (
        holder_norm_estimate(d, _BUDGET_GRID).norm_lower_bound <= cone.sigma + 1e-12
    )
    return bool(start_ok and budget_ok)


def integrate_backward(
    d: Driver,
    t: float,
    z: complex,
    tol: float = 1e-9,
    u_max: float = None,
    cone: ConeParams = None,
) -> BackwardTrajectory:
    """Adaptive backward integration from z, recording every accepted node.

    The trajectory covers u in [0, u_max] (default: the full horizon t).
    Starting points outside the certified cone, or drivers whose norm
    estimate exceeds the budget, still integrate but are flagged
    uncertified.
    """
    t = float(t)
    if not (0.0 < t <= 1.0 and t <= d.horizon + 1e-12):
        raise DomainError(f"horizon {t} outside (0, {min(1.0, d.horizon)}]")
    z = complex(z)
    if z == 0.0:
        raise DomainError("backward flow must start away from 0")
    if z.imag == 0.0:
        raise DomainError("backward flow must start off the real axis")
    u_end = t if u_max is None else float(u_max)
    if not (0.0 < u_end <= t):
        raise DomainError("u_max must lie in (0, t]")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    cp = default_cone_params() if cone is None else cone

    side = 1 if z.imag > 0 else -1
    evalf = d.eval
    times = [0.0]
    states = [z]

    u0 = min(1e-6, t / 100.0, u_end)
    a0 = complex(_frozen_substep(evalf, np.array([t]), np.array([z]), np.array([u0]))[0])
    times.append(u0)
    states.append(a0)

    if u0 < u_end:
        v = float(np.sqrt(u0))
        v_end = float(np.sqrt(u_end))
        phi = a0 + complex(evalf(t - u0))
        f = _guarded_rhs(evalf, t)
        h = 0.1 * v
        guard = 0
        while v < v_end:
            guard += 1
            if guard > 10_000_000:
                raise SingularityError("backward integration stalled")
            # stability cap h <~ v: the local Lipschitz constant is ~ 1/v
            hc = min(h, 0.5 * v, v_end - v)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                phi5, err = dp_step(f, v, phi, hc)
            err = float(err) if np.isfinite(err) else np.inf
            if err <= tol:
                v = v_end if v_end - (v + hc) < 1e-16 * v_end else v + hc
                phi = complex(phi5)
                u = u_end if v == v_end else v * v
                a = phi - complex(evalf(t - u))
                if abs(a) < _SINGULAR:
                    raise SingularityError(
                        f"backward state within {_SINGULAR} of the singularity at u={u}"
                    )
                times.append(u)
                states.append(a)
            h = float(dp_retune(hc, err, tol))

    return BackwardTrajectory(
        times=np.array(times),
        states=np.array(states),
        horizon=t,
        z0=z,
        y_hat0=comparison_anchor(z),
        side=side,
        certified=_certified(d, z, cp),
    )


def backward_map(d: Driver, t: float, z: complex, u: float = None, tol: float = 1e-9) -> complex:
    """f(u, t, z): the backward flow state at time u (default u = t)."""
    traj = integrate_backward(d, t, z, tol=tol, u_max=u)
    return complex(traj.states[-1])


def trace_point(d: Driver, t: float, y_ladder=DEFAULT_LADDER, tol: float = 1e-9):
    """gamma(t) for t in [-1, 1] with an extrapolation-error estimate.

    Integrates the backward flow from side * i * y for every ladder rung,
    then extrapolates the finals to y = 0; the boundary limit is contractive
    in the rung height, so the extrapolation is benign.  gamma(0) is the
    driver value at 0 exactly.
    """
    t = float(t)
    if abs(t) > 1.0 or abs(t) > d.horizon + 1e-12:
        raise DomainError(f"trace parameter {t} outside [-1, 1] or the horizon")
    if t == 0.0:
        return complex(d.eval(0.0)), 0.0
    ys = _validated_ladder(y_ladder)
    side = 1.0 if t > 0 else -1.0
    horizon = abs(t)
    finals = _ladder_finals(
        d.eval,
        np.full(ys.size, horizon),
        side * 1j * ys,
        schedule_size(tol),
    )
    limit, err = _neville_to_zero(ys, finals[None, :])
    return complex(limit[0]) + complex(d.eval(0.0)), float(err[0])


def trace_curve(d: Driver, n: int, y_ladder=DEFAULT_LADDER, tol: float = 1e-9) -> TraceSamples:
    """gamma on the two-sided quadratic grid t_k = +-(k/n)^2, k = 0..n.

    Quadratic spacing equalizes arc length near the sqrt-shaped tip.  All
    parameter/rung combinations integrate as one batch on the shared
    schedule.
    """
    if n < 2:
        raise DomainError("trace grid needs n >= 2")
    if d.horizon < 1.0 - 1e-12:
        raise DomainError("trace over [-1, 1] needs a driver on the full horizon")
    ys = _validated_ladder(y_ladder)
    k = np.arange(1, n + 1, dtype=float)
    pos = (k / n) ** 2
    params = np.concatenate([-pos[::-1], [0.0], pos])

    horizons = np.repeat(pos, ys.size)
    rungs = np.tile(ys, pos.size)

    lam0 = complex(d.eval(0.0))
    n_steps = schedule_size(tol)

    def one_side(side):
        finals = _ladder_finals(d.eval, horizons, side * 1j * rungs, n_steps)
        grid = finals.reshape(pos.size, ys.size)
        limit, err = _neville_to_zero(ys, grid)
        return limit + lam0, err

    up_pts, up_err = one_side(+1.0)
    dn_pts, dn_err = one_side(-1.0)

    points = np.concatenate([dn_pts[::-1], [lam0], up_pts])
    errors = np.concatenate([dn_err[::-1], [0.0], up_err])
    return TraceSamples(params=params, points=points, extrapolation_error=errors)


def tip_flow(d: Driver, t: float, side: int, n_steps: int = 4096):
    """The boundary flow f(u, t, 0+-) on the geometric grid; (u, A) arrays.

    Seeded just off the tip at u_s = min(1e-12, t * 1e-6) with the frozen
    asymptote A = side * 2i * sqrt(u_s) plus the exact driver increment; the
    flow attracts nearby solutions, so the seeding error damps further.
    """
    t = float(t)
    if not (0.0 < t <= 1.0 and t <= d.horizon + 1e-12):
        raise DomainError(f"horizon {t} outside (0, {min(1.0, d.horizon)}]")
    if side not in (1, -1):
        raise DomainError("side must be +1 or -1")
    u_s = min(1e-12, t * 1e-6)
    v_s = float(np.sqrt(u_s))
    a_seed = side * 2j * v_s + (complex(d.eval(t)) - complex(d.eval(t - u_s)))
    phi0 = a_seed + complex(d.eval(t - u_s))
    nodes_v, nodes_phi = _fixed_flow(
        d.eval, np.array([t]), np.array([v_s]), np.array([phi0]), n_steps, record=True
    )
    v = nodes_v[:, 0]
    u = v * v
    u[-1] = t
    a = nodes_phi[:, 0] - d.eval(np.maximum(t - u, 0.0))
    return u, a


def cone_certificate(traj: BackwardTrajectory, cp: ConeParams = None) -> dict:
    """Check containment and the Im lower bound along a recorded trajectory.

    min_ratio is the worst slack of |Re A| < theta2 * Im A; im_margin the
    worst slack of Im A >= nu * sqrt(u).  Lower-side trajectories are
    checked against the mirrored cone.
    """
    cp = default_cone_params() if cp is None else cp
    ims = traj.side * traj.states.imag
    res = np.abs(traj.states.real)
    ratio = cp.theta2 * ims - res
    margin = ims - cp.nu * np.sqrt(traj.times)
    min_ratio = float(np.min(ratio))
    im_margin = float(np.min(margin))
    return {
        "in_cone": bool(min_ratio > 0.0),
        "min_ratio": min_ratio,
        "im_margin": im_margin,
    }


def gronwall_gap(traj: BackwardTrajectory, cp: ConeParams = None, sigma: float = None) -> dict:
    """Worst excess of |A - B| over its certified growth bound.

    B is the driverless comparison flow from the anchor height; the bound
    allows the initial separation plus (sqrt(1 + theta2^2) + 1) * sigma *
    sqrt(u) of growth.  max_violation <= 0 up to integration error whenever
    the driver is within budget.
    """
    cp = default_cone_params() if cp is None else cp
    sigma = cp.sigma if sigma is None else float(sigma)
    coef = gap_growth_coefficient(sigma, cp.theta2)
    b = traj.side * 1j * np.sqrt(traj.y_hat0**2 + 4.0 * traj.times)
    gap = np.abs(traj.states - b)
    bound = gap[0] + coef * np.sqrt(traj.times)
    return {"max_violation": float(np.max(gap - bound))}
