"""Cross-cutting verification: curve geometry, derivative formula, hull laws.

Everything here combines at least two independent pipelines and measures how
well their outputs agree, so every function returns a metric rather than a
boolean; the uniform convention is pass iff metric <= tolerance.  Raster set
identities are compared after a one-pixel dilation because escape-time
rendering carries inherent half-pixel geometry error.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .backward import (
    DEFAULT_LADDER,
    TraceSamples,
    backward_map,
    cone_certificate,
    gronwall_gap,
    integrate_backward,
    tip_flow,
    trace_curve,
    trace_point,
)
from .cones import DEFAULT_SIGMA
from .drivers import Driver, driver_fingerprint, holder_norm_estimate, transform_driver
from .errors import DomainError, InconsistencyError
from .forward import (
    expansion_at_infinity,
    forward_map,
    hull_raster,
    integrate_forward,
    right_hull_raster,
)

_trapz = getattr(np, "trapezoid", np.trapz)


# ---------------------------------------------------------------------------
# quasi-arc geometry

@dataclass(frozen=True)
class QuasiArcEstimate:
    """Largest subarc-diameter / chord ratio over sampled parameter pairs."""

    constant: float
    argmax_pair: tuple
    refinement_history: tuple


def _quasi_arc_scan(params, points):
    """max over i<j of diam(points[i..j]) / |points[i]-points[j]|."""
    n = len(points)
    dist = np.abs(points[:, None] - points[None, :])
    diam = np.zeros(n)  # diam[i] = diameter of points[i..j] for the current j
    best = 0.0
    arg = (float(params[0]), float(params[-1]))
    for j in range(1, n):
        col = dist[: j + 1, j]
        tail_max = np.maximum.accumulate(col[::-1])[::-1]
        diam[:j] = np.maximum(diam[:j], tail_max[:j])
        diam[j] = 0.0
        chords = col[:j]
        ok = chords > 1e-10
        if np.any(ok):
            ratios = np.where(ok, diam[:j] / np.maximum(chords, 1e-300), 0.0)
            i = int(np.argmax(ratios))
            if ratios[i] > best:
                best = float(ratios[i])
                arg = (float(params[i]), float(params[j]))
    if best == 0.0:
        raise DomainError("degenerate trace: all chords below resolution")
    return best, arg


def quasi_arc_constant(trace: TraceSamples) -> QuasiArcEstimate:
    """Three-point constant of the sampled curve, with a refinement history.

    The history holds the constant on strided subsamples (coarse to fine);
    it is non-decreasing because refinement only adds candidate pairs and
    grows subarc diameters.
    """
    if len(trace.points) < 8:
        raise DomainError("quasi-arc estimate needs at least 8 samples")
    history = []
    for stride in (4, 2, 1):
        if (len(trace.points) - 1) % stride or (len(trace.points) - 1) // stride < 4:
            continue
        c, arg = _quasi_arc_scan(trace.params[::stride], trace.points[::stride])
        history.append((stride, c))
    constant, argmax = _quasi_arc_scan(trace.params, trace.points)
    return QuasiArcEstimate(
        constant=constant, argmax_pair=argmax, refinement_history=tuple(history)
    )


# ---------------------------------------------------------------------------
# derivative of the trace

_SMOOTH_BASE_KINDS = {"constant", "linear", "sqrt", "weierstrass"}


def _base_kind(d: Driver) -> str:
    while hasattr(d, "inner"):
        d = d.inner
    return d.kind


def derivative_formula(
    d: Driver,
    t: float,
    n_steps: int = 4096,
    y_ladder=DEFAULT_LADDER,
    tol: float = 1e-9,
    consistency: bool = True,
) -> complex:
    """gamma'(t) from the exponentiated singular integral along the tip flow.

    The integrand pairs 1/(2u) with the squared-gap term so the two
    divergences cancel; in the v = sqrt(u) variable it reads
    (1/v) * (1 + 4u / A(u)^2) with A the boundary flow, which tends to a
    finite limit at the tip and vanishes identically for the driverless
    flow.  The boundary flow equals the forward-flow gap of the trace point
    (the same function reached from the other end), which is cross-checked
    at interior times when ``consistency`` is set.
    """
    t = float(t)
    if not (-1.0 < t < 1.0) or t == 0.0:
        raise DomainError("derivative parameter must lie in (-1, 1) minus 0")
    if _base_kind(d) not in _SMOOTH_BASE_KINDS:
        raise DomainError(
            f"derivative formula limited to smooth driver kinds, got {_base_kind(d)!r}"
        )
    side = 1 if t > 0 else -1
    horizon = abs(t)
    u, a = tip_flow(d, horizon, side, n_steps)
    v = np.sqrt(u)
    with np.errstate(invalid="ignore", divide="ignore"):
        integrand = (1.0 + 4.0 * u / (a * a)) / v
    integral = _trapz(integrand, v) + integrand[0] * v[0]
    deriv = (1j / np.sqrt(horizon)) * np.exp(integral)

    if consistency:
        _check_tip_against_forward(d, t, u, a, y_ladder, tol)
    return complex(deriv)


def _check_tip_against_forward(d, t, u, a, y_ladder, tol):
    """The trace point must die at |t| under the forward flow, and its gap
    along the way must match the tip flow."""
    horizon = abs(t)
    gamma, _ = trace_point(d, t, y_ladder, tol)
    traj = integrate_forward(d, gamma, t_max=horizon, tol=tol)
    if traj.lifetime < horizon * (1.0 - 1e-3) - 1e-6:
        raise InconsistencyError(
            f"trace point {gamma} died at {traj.lifetime}, well before {horizon}"
        )
    if np.isinf(traj.lifetime) and traj.terminal_gap > 1e-2 * np.sqrt(horizon):
        raise InconsistencyError(
            f"trace point {gamma} never approached the driver by {horizon}"
        )
    for frac in (0.25, 0.5, 0.75):
        k = int(np.searchsorted(u, frac * horizon))
        if not (0 < k < len(u) - 1):
            continue
        s = horizon - u[k]
        g = forward_map(d, gamma, s, tol=tol)
        gap_forward = g - complex(d.eval(s))
        ref = a[k]
        scale = max(abs(ref), np.sqrt(horizon))
        if abs(gap_forward - ref) > 1e-3 * scale:
            raise InconsistencyError(
                f"forward gap {gap_forward} disagrees with boundary flow {ref} at u={u[k]}"
            )


# ---------------------------------------------------------------------------
# round trip and injectivity

# kill radius for on-curve probes: must sit above the perpendicular noise
# floor of extrapolated trace points (distance delta_perp from the curve
# keeps the gap above ~sqrt(2*delta_perp), so 1e-7 of noise floors near 1e-3)
_PROBE_EPS_KILL = 6e-4


def round_trip_check(
    d: Driver,
    t: float,
    delta: float = 1e-5,
    y_ladder=DEFAULT_LADDER,
    tol: float = 1e-9,
) -> float:
    """|gap at death| + |death time - t| for a point just inside the tip.

    The probe sits at gamma(t) minus delta along the curve direction, so its
    forward flow dies slightly before t even at the full horizon; outward
    probes would survive past the horizon at t = 1 and mask the check.
    """
    t = float(t)
    if not (0.0 < t <= 1.0):
        raise DomainError("round trip needs t in (0, 1]")
    gamma, _ = trace_point(d, t, y_ladder, tol)
    back, _ = trace_point(d, t * (1.0 - 1e-3), y_ladder, tol)
    tangent = gamma - back
    if abs(tangent) < 1e-12:
        raise DomainError("degenerate tangent at the probe parameter")
    z = gamma - delta * tangent / abs(tangent)

    traj = integrate_forward(
        d, z, t_max=min(1.0, d.horizon), tol=tol, eps_kill=_PROBE_EPS_KILL
    )
    t_end = float(traj.times[-1])
    gap_end = abs(complex(traj.states[-1]) - complex(d.eval(t_end)))
    death = traj.lifetime if np.isfinite(traj.lifetime) else t_end
    return float(gap_end + abs(death - t))


def injectivity_check(trace: TraceSamples, separation: float) -> dict:
    """Smallest image distance among parameter pairs at least separation apart."""
    if len(trace.points) < 33:
        raise DomainError("injectivity check needs at least 16 samples per side")
    if separation <= 0:
        raise DomainError("separation must be positive")
    dp = np.abs(trace.params[:, None] - trace.params[None, :])
    dz = np.abs(trace.points[:, None] - trace.points[None, :])
    mask = np.triu(dp >= separation, k=1)
    if not np.any(mask):
        raise DomainError("no parameter pairs at the requested separation")
    dz_masked = np.where(mask, dz, np.inf)
    flat = int(np.argmin(dz_masked))
    i, j = np.unravel_index(flat, dz.shape)
    error_bound = 2.0 * float(np.max(trace.extrapolation_error))
    min_distance = float(dz[i, j])
    return {
        "min_distance": min_distance,
        "pair": (float(trace.params[i]), float(trace.params[j])),
        "error_bound": error_bound,
        "passed": bool(min_distance > error_bound),
    }


# ---------------------------------------------------------------------------
# raster set comparisons

def _dilate(mask: np.ndarray) -> np.ndarray:
    """One-pixel 3x3 dilation."""
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    out[1:, 1:] |= mask[:-1, :-1]
    out[:-1, :-1] |= mask[1:, 1:]
    out[1:, :-1] |= mask[:-1, 1:]
    out[:-1, 1:] |= mask[1:, :-1]
    return out


def raster_mismatch(mask_a: np.ndarray, mask_b: np.ndarray) -> float:
    """Symmetric-difference fraction after one-pixel dilation slack."""
    only_a = mask_a & ~_dilate(mask_b)
    only_b = mask_b & ~_dilate(mask_a)
    denom = max(1, int(np.sum(mask_a | mask_b)))
    return (int(np.sum(only_a)) + int(np.sum(only_b))) / denom


def _rotate_mask_by_i(arr: np.ndarray) -> np.ndarray:
    """Relabel a raster on window W' = -i*W to the window W (multiply by i)."""
    return arr.T[::-1, :].copy()


def _dist_to_polyline(zs: np.ndarray, poly: np.ndarray) -> np.ndarray:
    a = poly[:-1][None, :]
    b = poly[1:][None, :]
    z = zs[:, None]
    ab = b - a
    denom = np.maximum(np.abs(ab) ** 2, 1e-300)
    frac = np.clip(((z - a) * ab.conjugate()).real / denom, 0.0, 1.0)
    return np.min(np.abs(z - (a + frac * ab)), axis=1)


def hull_trace_consistency(
    d: Driver,
    t: float,
    window=(-3.0, 3.0, -3.0, 3.0),
    resolution: int = 128,
    n: int = 128,
    tol: float = 1e-6,
    threads: int = 1,
    y_ladder=DEFAULT_LADDER,
    trace_tol: float = 1e-9,
) -> float:
    """Hausdorff-style distance between the hull raster and the trace, in
    units of the pixel diagonal (the hull should be the curve and vice
    versa)."""
    raster = hull_raster(d, t, window, resolution, resolution, tol, threads=threads)
    trace = trace_curve(d, n, y_ladder, trace_tol)
    xs = raster.x_centers()
    ys = raster.y_centers()
    mask = raster.sublevel(t)
    centers = (xs[:, None] + 1j * ys[None, :])[mask]
    sel = np.abs(trace.params) <= t + 1e-12
    poly = trace.points[sel]
    diag = float(np.hypot(xs[1] - xs[0], ys[1] - ys[0]))
    if centers.size == 0 or poly.size < 2:
        return np.inf
    pixel_excess = float(np.max(_dist_to_polyline(centers, poly)))
    trace_excess = float(np.max(np.min(np.abs(poly[:, None] - centers[None, :]), axis=1)))
    return max(pixel_excess, trace_excess) / diag


# ---------------------------------------------------------------------------
# verification report plumbing

@dataclass(frozen=True)
class VerificationReport:
    """Named metric-vs-tolerance entries plus reproducibility metadata."""

    entries: tuple
    driver_fingerprint: str
    config: dict

    @property
    def all_passed(self) -> bool:
        return all(e["pass"] for e in self.entries)


def _entry(name, metric, tolerance, runtime):
    metric = float(metric)
    return {
        "check": name,
        "pass": bool(metric <= tolerance),
        "metric": metric,
        "tolerance": float(tolerance),
        "runtime": float(runtime),
    }


# each check: cfg -> (metric, tolerance)

def _check_budget(d, cfg):
    est = holder_norm_estimate(d, 256)
    return est.norm_lower_bound, cfg["sigma"]


def _cert_trajectory(d, cfg, side):
    z = side * 1j * 1e-3
    return integrate_backward(d, min(1.0, d.horizon), z, tol=cfg["trace_tol"])


def _check_cone(d, cfg, side):
    cert = cone_certificate(_cert_trajectory(d, cfg, side))
    return max(-cert["min_ratio"], -cert["im_margin"]), 1e-8


def _check_comparison(d, cfg, side):
    rep = gronwall_gap(_cert_trajectory(d, cfg, side))
    return rep["max_violation"], 1e-8


def _check_contraction(d, cfg):
    t = min(1.0, d.horizon)
    rungs = np.asarray(cfg["y_ladder"], dtype=float)
    finals = np.array(
        [backward_map(d, t, 1j * y, tol=cfg["trace_tol"]) for y in rungs]
    )
    worst = -np.inf
    for i in range(len(rungs)):
        for j in range(i + 1, len(rungs)):
            worst = max(
                worst, abs(finals[i] - finals[j]) - abs(rungs[i] - rungs[j])
            )
    return worst, 1e-8


def _check_semigroup(d, cfg):
    t2 = min(1.0, d.horizon) / 2.0
    t1 = t2 / 2.0
    u = 0.8 * t1
    z = 0.1j
    w = backward_map(d, t2, z, u=t2 - t1, tol=cfg["trace_tol"])
    lhs = backward_map(d, t1, w, u=u, tol=cfg["trace_tol"])
    rhs = backward_map(d, t2, z, u=u + t2 - t1, tol=cfg["trace_tol"])
    return abs(lhs - rhs), 1e-6


def _check_tip_asymptotics(d, cfg):
    t = 1e-4
    gamma, _ = trace_point(d, t, cfg["y_ladder"], cfg["trace_tol"])
    ratio = abs(gamma - complex(d.eval(0.0))) / (2.0 * np.sqrt(t))
    return abs(ratio - 1.0), 0.25


def _check_injectivity(d, cfg):
    trace = trace_curve(d, max(16, cfg["n_trace"]), cfg["y_ladder"], cfg["trace_tol"])
    rep = injectivity_check(trace, separation=0.05)
    return rep["error_bound"] - rep["min_distance"], 0.0


def _check_quasi_arc(d, cfg):
    lo = quasi_arc_constant(
        trace_curve(d, cfg["n_trace"], cfg["y_ladder"], cfg["trace_tol"])
    )
    hi = quasi_arc_constant(
        trace_curve(d, 2 * cfg["n_trace"], cfg["y_ladder"], cfg["trace_tol"])
    )
    return abs(hi.constant - lo.constant) / hi.constant, 0.05


def _check_round_trip(d, cfg):
    return round_trip_check(d, cfg["t"], y_ladder=cfg["y_ladder"], tol=cfg["trace_tol"]), 1e-3


def _check_expansion(d, cfg):
    res = expansion_at_infinity(d, min(1.0, d.horizon), (50.0, 100.0), m=16)
    near, far = float(np.max(res[0])), float(np.max(res[1]))
    return far / max(near, 1e-300), 1.5


def _check_trace_cone(d, cfg):
    trace = trace_curve(d, cfg["n_trace"], cfg["y_ladder"], cfg["trace_tol"])
    lam0 = complex(d.eval(0.0))
    nz = trace.params != 0.0
    w = trace.points[nz] - lam0
    signed_im = np.sign(trace.params[nz]) * w.imag
    return float(np.max(np.abs(w.real) - signed_im)), 1e-8


def _check_hull_translation(d, cfg):
    c0 = 0.3 + 0.2j
    t, window, res = cfg["t"], cfg["window"], cfg["resolution"]
    x0, x1, y0, y1 = window
    base = hull_raster(d, t, window, res, res, cfg["tol"], threads=cfg["threads"])
    moved = hull_raster(
        transform_driver(d, "shift", a=c0),
        t,
        (x0 + c0.real, x1 + c0.real, y0 + c0.imag, y1 + c0.imag),
        res,
        res,
        cfg["tol"],
        threads=cfg["threads"],
    )
    return raster_mismatch(moved.sublevel(t), base.sublevel(t)), 0.01


def _check_hull_scaling(d, cfg):
    t, window, res, a = cfg["t"], cfg["window"], cfg["resolution"], cfg["a"]
    scaled = hull_raster(
        transform_driver(d, "scale", a=a),
        t,
        tuple(a * w for w in window),
        res,
        res,
        cfg["tol"],
        threads=cfg["threads"],
    )
    base = hull_raster(
        d, t / a**2, window, res, res, cfg["tol"], threads=cfg["threads"]
    )
    return raster_mismatch(scaled.sublevel(t), base.sublevel(t / a**2)), 0.01


def _check_hull_symmetry(d, cfg):
    t, window, res = cfg["t"], cfg["window"], cfg["resolution"]
    x0, x1, y0, y1 = window
    base = hull_raster(d, t, window, res, res, cfg["tol"], threads=cfg["threads"])
    neg = hull_raster(
        transform_driver(d, "negate"),
        t,
        (-x1, -x0, -y1, -y0),
        res,
        res,
        cfg["tol"],
        threads=cfg["threads"],
    )
    return raster_mismatch(neg.sublevel(t), base.sublevel(t)[::-1, ::-1]), 0.01


def _check_hull_duality(d, cfg):
    t, window, res = cfg["t"], cfg["window"], cfg["resolution"]
    x0, x1, y0, y1 = window
    base = hull_raster(d, t, window, res, res, cfg["tol"], threads=cfg["threads"])
    rot = right_hull_raster(
        transform_driver(d, "dual", t=t),
        t,
        (y0, y1, -x1, -x0),
        res,
        res,
        cfg["tol"],
        threads=cfg["threads"],
    )
    mask_ir = _rotate_mask_by_i(rot.sublevel(t))
    return raster_mismatch(base.sublevel(t), mask_ir), 0.01


def _check_hull_concatenation(d, cfg):
    # points dying in (t, t+s] are trace points gamma(p) with t < |p| <= t+s;
    # their time-t images must die under the restricted driver at |p| - t
    t, s = cfg["t"], cfg["s"]
    restricted = transform_driver(d, "restrict", t0=t)
    worst = 0.0
    for sign in (1.0, -1.0):
        for frac in (0.2, 0.5, 0.8):
            p = sign * (t + frac * s)
            gamma, _ = trace_point(d, p, cfg["y_ladder"], cfg["trace_tol"])
            w = forward_map(d, gamma, t, tol=cfg["trace_tol"])
            traj = integrate_forward(
                restricted, w, t_max=s, tol=cfg["trace_tol"], eps_kill=_PROBE_EPS_KILL
            )
            if not np.isfinite(traj.lifetime):
                return np.inf, 0.02
            worst = max(worst, abs(traj.lifetime - (abs(p) - t)) / s)
    return worst, 0.02


def _check_trace_concatenation(d, cfg):
    t, s = cfg["t"], cfg["s"]
    gamma_full, _ = trace_point(d, t + s, cfg["y_ladder"], cfg["trace_tol"])
    w = forward_map(d, gamma_full, t, tol=cfg["trace_tol"])
    restricted = transform_driver(d, "restrict", t0=t)
    gamma_rest, _ = trace_point(restricted, s, cfg["y_ladder"], cfg["trace_tol"])
    return abs(w - gamma_rest), 1e-4


def _check_hull_equals_trace(d, cfg):
    metric = hull_trace_consistency(
        d,
        cfg["t"],
        cfg["window"],
        cfg["resolution"],
        n=max(32, cfg["n_trace"]),
        tol=cfg["tol"],
        threads=cfg["threads"],
        y_ladder=cfg["y_ladder"],
        trace_tol=cfg["trace_tol"],
    )
    return metric, 1.0


_CHECKS = {
    "budget": _check_budget,
    "cone-upper": lambda d, cfg: _check_cone(d, cfg, +1),
    "cone-lower": lambda d, cfg: _check_cone(d, cfg, -1),
    "comparison-upper": lambda d, cfg: _check_comparison(d, cfg, +1),
    "comparison-lower": lambda d, cfg: _check_comparison(d, cfg, -1),
    "contraction": _check_contraction,
    "semigroup": _check_semigroup,
    "tip-asymptotics": _check_tip_asymptotics,
    "injectivity": _check_injectivity,
    "quasi-arc": _check_quasi_arc,
    "round-trip": _check_round_trip,
    "expansion": _check_expansion,
    "trace-cone": _check_trace_cone,
    "hull-translation": _check_hull_translation,
    "hull-scaling": _check_hull_scaling,
    "hull-symmetry": _check_hull_symmetry,
    "hull-duality": _check_hull_duality,
    "hull-concatenation": _check_hull_concatenation,
    "trace-concatenation": _check_trace_concatenation,
    "hull-equals-trace": _check_hull_equals_trace,
}

_HULL_SUITE = (
    "hull-concatenation",
    "hull-duality",
    "hull-scaling",
    "hull-symmetry",
    "hull-translation",
    "trace-concatenation",
)


def _select_checks(suite: str):
    if suite == "all":
        return sorted(_CHECKS)
    names = []
    for token in suite.split(","):
        token = token.strip()
        if not token:
            continue
        matches = sorted(n for n in _CHECKS if n == token or n.startswith(token))
        if not matches:
            raise DomainError(f"unknown check selector {token!r}")
        names.extend(m for m in matches if m not in names)
    if not names:
        raise DomainError("empty check selection")
    return sorted(names)


def run_verification(
    d: Driver,
    suite: str = "all",
    t: float = 0.5,
    s: float = 0.25,
    a: float = 2.0,
    window=(-3.0, 3.0, -3.0, 3.0),
    resolution: int = 64,
    n_trace: int = 24,
    tol: float = 1e-6,
    trace_tol: float = 1e-9,
    y_ladder=DEFAULT_LADDER,
    sigma: float = DEFAULT_SIGMA,
    threads: int = 1,
) -> VerificationReport:
    """Run the named checks and assemble a deterministic report.

    The configuration echo records everything that affects the numbers;
    thread count is deliberately excluded because results are independent
    of it.
    """
    if not (0.0 < t and 0.0 < s and t + s <= min(1.0, d.horizon) + 1e-12):
        raise DomainError("need 0 < t, 0 < s with t + s within the horizon")
    cfg = {
        "suite": suite,
        "t": float(t),
        "s": float(s),
        "a": float(a),
        "window": tuple(float(w) for w in window),
        "resolution": int(resolution),
        "n_trace": int(n_trace),
        "tol": float(tol),
        "trace_tol": float(trace_tol),
        "y_ladder": tuple(float(y) for y in y_ladder),
        "sigma": float(sigma),
    }
    run_cfg = dict(cfg, threads=max(1, int(threads)))
    entries = []
    for name in _select_checks(suite):
        start = time.perf_counter()
        metric, tolerance = _CHECKS[name](d, run_cfg)
        entries.append(_entry(name, metric, tolerance, time.perf_counter() - start))
    return VerificationReport(
        entries=tuple(entries),
        driver_fingerprint=driver_fingerprint(d),
        config={k: (list(v) if isinstance(v, tuple) else v) for k, v in cfg.items()},
    )


def hull_property_suite(
    d: Driver,
    t: float,
    s: float,
    a: float = 2.0,
    window=(-3.0, 3.0, -3.0, 3.0),
    resolution: int = 64,
    **kwargs,
) -> VerificationReport:
    """The raster identity suite plus the trace-level splice identity."""
    return run_verification(
        d,
        suite=",".join(_HULL_SUITE),
        t=t,
        s=s,
        a=a,
        window=window,
        resolution=resolution,
        **kwargs,
    )


# ---------------------------------------------------------------------------
# empirical constants

def continuity_constant(d1: Driver, d2: Driver, n: int = 32, y_ladder=DEFAULT_LADDER, tol: float = 1e-9) -> float:
    """Empirical ratio sup|trace difference| / sup|driver difference|."""
    tr1 = trace_curve(d1, n, y_ladder, tol)
    tr2 = trace_curve(d2, n, y_ladder, tol)
    numerator = float(np.max(np.abs(tr1.points - tr2.points)))
    ts = np.linspace(0.0, min(d1.horizon, d2.horizon), max(n, 64) + 1)
    denominator = float(np.max(np.abs(d1.eval(ts) - d2.eval(ts))))
    if denominator < 1e-12:
        raise DomainError("drivers agree on the grid; ratio undefined")
    return numerator / denominator


def diameter_of_endpoints(drivers, y_ladder=DEFAULT_LADDER, tol: float = 1e-9) -> float:
    """Diameter of {gamma(1)} across a driver family."""
    drivers = list(drivers)
    if not drivers:
        raise DomainError("empty driver family")
    ends = np.array([trace_point(d, 1.0, y_ladder, tol)[0] for d in drivers])
    if len(ends) == 1:
        return 0.0
    return float(np.max(np.abs(ends[:, None] - ends[None, :])))
