"""Complex-valued driving functions on [0, 1].

Both Loewner flows in this package are steered by a driving function
``lambda: [0, H] -> C`` with horizon ``H <= 1``.  Base kinds are closed-form
families (constant, linear, sqrt, weierstrass), sampled paths with linear
interpolation, and seeded Brownian sample paths.  Transform kinds wrap an
inner driver and evaluate through it without copying state, so algebraic
identities such as ``dual(dual(d)) == negate(d)`` hold pointwise to machine
precision.

Drivers are immutable and evaluated strictly pointwise.  Nothing in the
toolkit ever differentiates a driver, which is what lets rough sampled paths
share every code path with smooth closed forms.

The JSON interchange schema (one object per driver, transforms nested under
``inner``) is documented in :mod:`cloewner.io` and in the README.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .errors import DomainError

# absolute slack when validating evaluation times, absorbs the rounding of
# integrator stage times at interval ends
TIME_SLACK = 1e-9


class Driver:
    """Base class: an immutable map t -> lambda(t) on [0, horizon]."""

    kind: ClassVar[str] = "abstract"
    horizon: float = 1.0

    def _values(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval(self, t):
        """Evaluate at a float or a 1-d array of floats in [0, horizon]."""
        arr = np.asarray(t, dtype=float)
        if arr.size and (np.min(arr) < -TIME_SLACK or np.max(arr) > self.horizon + TIME_SLACK):
            raise DomainError(
                f"evaluation time outside [0, {self.horizon!r}] for driver kind {self.kind!r}"
            )
        clipped = np.clip(arr, 0.0, self.horizon)
        vals = np.asarray(self._values(np.atleast_1d(clipped)), dtype=complex)
        if arr.ndim == 0:
            return complex(vals[0])
        return vals.reshape(arr.shape)

    def to_spec(self) -> dict:
        raise NotImplementedError

    @property
    def at_zero(self) -> complex:
        return self.eval(0.0)


def _require_finite(name, *values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError(f"non-finite value in field {name!r}")


@dataclass(frozen=True)
class ConstantDriver(Driver):
    c: complex
    kind: ClassVar[str] = "constant"
    horizon: float = 1.0

    def __post_init__(self):
        _require_finite("c", complex(self.c))

    def _values(self, t):
        return np.full(t.shape, complex(self.c))

    def to_spec(self):
        return {"kind": self.kind, "c": _c2j(self.c)}


@dataclass(frozen=True)
class LinearDriver(Driver):
    coef: complex
    kind: ClassVar[str] = "linear"
    horizon: float = 1.0

    def __post_init__(self):
        _require_finite("coef", complex(self.coef))

    def _values(self, t):
        return complex(self.coef) * t

    def to_spec(self):
        return {"kind": self.kind, "coef": _c2j(self.coef)}


@dataclass(frozen=True)
class SqrtDriver(Driver):
    coef: complex
    kind: ClassVar[str] = "sqrt"
    horizon: float = 1.0

    def __post_init__(self):
        _require_finite("coef", complex(self.coef))

    def _values(self, t):
        return complex(self.coef) * np.sqrt(t)

    def to_spec(self):
        return {"kind": self.kind, "coef": _c2j(self.coef)}


@dataclass(frozen=True, eq=False)
class SamplesDriver(Driver):
    """Piecewise-linear interpolation through sampled values on [0, 1]."""

    times: np.ndarray
    re: np.ndarray
    im: np.ndarray
    kind: ClassVar[str] = "samples"
    horizon: float = 1.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise DomainError("samples driver needs at least two nodes")
        if re.shape != times.shape or im.shape != times.shape:
            raise DomainError("samples driver arrays must share one length")
        _require_finite("times", times)
        _require_finite("re", re)
        _require_finite("im", im)
        if np.any(np.diff(times) <= 0):
            raise DomainError("samples driver times must be strictly increasing")
        if abs(times[0]) > 1e-9 or abs(times[-1] - 1.0) > 1e-9:
            raise DomainError("samples driver times must cover [0, 1]")
        for arr in (times, re, im):
            arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def _values(self, t):
        return np.interp(t, self.times, self.re) + 1j * np.interp(t, self.times, self.im)

    def to_spec(self):
        return {
            "kind": self.kind,
            "times": [float(x) for x in self.times],
            "re": [float(x) for x in self.re],
            "im": [float(x) for x in self.im],
        }


@dataclass(frozen=True)
class WeierstrassDriver(Driver):
    """c * sum_{k<K} a^k cos(b^k pi t), a rough driver with tunable texture."""

    a: float
    b: float
    K: int
    c: complex
    kind: ClassVar[str] = "weierstrass"
    horizon: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.a < 1.0):
            raise DomainError("weierstrass needs 0 < a < 1")
        if self.b < 1.0:
            raise DomainError("weierstrass needs b >= 1")
        if not (1 <= int(self.K) <= 64):
            raise DomainError("weierstrass needs 1 <= K <= 64")
        _require_finite("a", self.a)
        _require_finite("b", self.b)
        _require_finite("c", complex(self.c))

    def _values(self, t):
        acc = np.zeros(t.shape)
        for k in range(int(self.K)):
            acc = acc + self.a**k * np.cos(self.b**k * np.pi * t)
        return complex(self.c) * acc

    def to_spec(self):
        return {
            "kind": self.kind,
            "a": float(self.a),
            "b": float(self.b),
            "K": int(self.K),
            "c": _c2j(self.c),
        }


@dataclass(frozen=True, eq=False)
class BrownianDriver(Driver):
    """Seeded complex Brownian sample path at 2^depth + 1 dyadic nodes.

    The path is drawn once at construction (PCG64, bit-reproducible for a
    given seed) and then evaluated exactly like a samples driver.  Real and
    imaginary increments are independent N(0, dt/2), so E|path(t)|^2 =
    scale^2 * t.
    """

    seed: int
    scale: float = 1.0
    depth: int = 10
    kind: ClassVar[str] = "brownian-sample"
    horizon: float = 1.0

    def __post_init__(self):
        if not (1 <= int(self.depth) <= 22):
            raise DomainError("brownian-sample needs 1 <= depth <= 22")
        _require_finite("scale", self.scale)
        n = 1 << int(self.depth)
        rng = np.random.default_rng(int(self.seed))
        steps = rng.standard_normal((2, n))
        incr = (steps[0] + 1j * steps[1]) * np.sqrt(0.5 / n)
        path = np.concatenate([[0.0 + 0.0j], np.cumsum(incr)]) * float(self.scale)
        times = np.linspace(0.0, 1.0, n + 1)
        path.setflags(write=False)
        times.setflags(write=False)
        object.__setattr__(self, "_times", times)
        object.__setattr__(self, "_path", path)

    def _values(self, t):
        return np.interp(t, self._times, self._path.real) + 1j * np.interp(
            t, self._times, self._path.imag
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "seed": int(self.seed),
            "scale": float(self.scale),
            "K": int(self.depth),
        }


@dataclass(frozen=True)
class ShiftedDriver(Driver):
    inner: Driver
    offset: complex
    kind: ClassVar[str] = "shifted"

    def __post_init__(self):
        _require_finite("c", complex(self.offset))
        object.__setattr__(self, "horizon", self.inner.horizon)

    def _values(self, t):
        return self.inner.eval(t) + complex(self.offset)

    def to_spec(self):
        return {"kind": self.kind, "c": _c2j(self.offset), "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class ScaledDriver(Driver):
    """Loewner scaling a*lambda(t/a^2); hulls scale as a*L_{t/a^2}."""

    inner: Driver
    a: float
    kind: ClassVar[str] = "scaled"

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise DomainError("scaling factor must be a positive real")
        object.__setattr__(self, "horizon", min(1.0, self.a**2 * self.inner.horizon))

    def _values(self, t):
        return self.a * self.inner.eval(t / self.a**2)

    def to_spec(self):
        return {"kind": self.kind, "a": float(self.a), "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class NegatedDriver(Driver):
    inner: Driver
    kind: ClassVar[str] = "negated"

    def __post_init__(self):
        object.__setattr__(self, "horizon", self.inner.horizon)

    def _values(self, t):
        return -self.inner.eval(t)

    def to_spec(self):
        return {"kind": self.kind, "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class MultipliedDriver(Driver):
    """alpha * lambda(t): the holomorphic-motion parameter direction."""

    inner: Driver
    alpha: complex
    kind: ClassVar[str] = "multiplied"

    def __post_init__(self):
        _require_finite("alpha", complex(self.alpha))
        object.__setattr__(self, "horizon", self.inner.horizon)

    def _values(self, t):
        return complex(self.alpha) * self.inner.eval(t)

    def to_spec(self):
        return {"kind": self.kind, "alpha": _c2j(self.alpha), "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class DualDriver(Driver):
    """r -> -i * lambda(t0 - r), the driver of the rotated complement hull."""

    inner: Driver
    t0: float
    kind: ClassVar[str] = "dual"

    def __post_init__(self):
        if not (np.isfinite(self.t0) and 0.0 <= self.t0 <= self.inner.horizon):
            raise DomainError("dual horizon must lie in [0, inner horizon]")
        object.__setattr__(self, "horizon", float(self.t0))

    def _values(self, t):
        return -1j * self.inner.eval(self.t0 - t)

    def to_spec(self):
        return {"kind": self.kind, "t0": float(self.t0), "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class RestrictedDriver(Driver):
    """r -> lambda(t0 + r): the driver seen after running the flow to t0."""

    inner: Driver
    t0: float
    kind: ClassVar[str] = "restricted"

    def __post_init__(self):
        if not (np.isfinite(self.t0) and 0.0 <= self.t0 <= self.inner.horizon):
            raise DomainError("restriction point must lie in [0, inner horizon]")
        object.__setattr__(self, "horizon", self.inner.horizon - float(self.t0))

    def _values(self, t):
        return self.inner.eval(self.t0 + t)

    def to_spec(self):
        return {"kind": self.kind, "t0": float(self.t0), "inner": self.inner.to_spec()}


_TRANSFORMS = ("shift", "scale", "negate", "dual", "multiply", "restrict")


def transform_driver(d: Driver, op: str, **params) -> Driver:
    """Wrap ``d`` in one of the driver transforms.

    op is one of ``shift`` (complex ``a``), ``scale`` (real ``a > 0``),
    ``negate``, ``dual`` (horizon ``t``), ``multiply`` (complex ``alpha``) or
    ``restrict`` (``t0``).  Transforms evaluate purely through the inner
    driver; composition is associative to machine precision.
    """
    if op == "shift":
        return ShiftedDriver(d, complex(params.pop("a")))
    if op == "scale":
        return ScaledDriver(d, float(params.pop("a")))
    if op == "negate":
        return NegatedDriver(d)
    if op == "dual":
        return DualDriver(d, float(params.pop("t")))
    if op == "multiply":
        return MultipliedDriver(d, complex(params.pop("alpha")))
    if op == "restrict":
        return RestrictedDriver(d, float(params.pop("t0")))
    raise DomainError(f"unknown transform {op!r}; expected one of {_TRANSFORMS}")


@dataclass(frozen=True)
class HolderEstimate:
    """Grid lower bound for the 1/2-Holder norm."""

    norm_lower_bound: float
    pair_count: int
    grid_resolution: int


def holder_norm_estimate(d: Driver, n: int = 256) -> HolderEstimate:
    """Estimate sup |lambda(t)-lambda(s)| / |t-s|^(1/2) over the n-grid.

    Evaluates every unordered pair of grid points i/n * horizon, so the
    result is a true lower bound of the Holder norm and is monotone
    non-decreasing under grid refinement on nested grids.
    """
    if n < 2:
        raise DomainError("holder estimate needs a grid with n >= 2")
    ts = np.linspace(0.0, d.horizon, n + 1)
    vals = d.eval(ts)
    best = 0.0
    for off in range(1, n + 1):
        quot = np.abs(vals[off:] - vals[:-off]) / np.sqrt(ts[off:] - ts[:-off])
        if quot.size:
            best = max(best, float(np.max(quot)))
    return HolderEstimate(best, n * (n + 1) // 2, n)


def eval_driver(d: Driver, t):
    """Evaluate a driver at a scalar or 1-d array of times."""
    return d.eval(t)


# JSON interchange -----------------------------------------------------------

def _c2j(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def _j2c(obj, field: str) -> complex:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise DomainError(f"field {field!r} must be an object with keys 're' and 'im'")
    re, im = obj["re"], obj["im"]
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise DomainError(f"field {field!r} must hold two numbers")
    return complex(float(re), float(im))


def _take(spec: dict, kind: str, required: tuple, optional: dict = None):
    optional = optional or {}
    allowed = {"kind", *required, *optional}
    unknown = set(spec) - allowed
    if unknown:
        raise DomainError(f"unknown field(s) {sorted(unknown)} for kind {kind!r}")
    missing = [f for f in required if f not in spec]
    if missing:
        raise DomainError(f"missing field(s) {missing} for kind {kind!r}")
    out = {f: spec[f] for f in required}
    for f, default in optional.items():
        out[f] = spec.get(f, default)
    return out


def driver_from_spec(spec: dict) -> Driver:
    """Build a driver from its JSON object form.  Unknown fields are rejected."""
    if not isinstance(spec, dict):
        raise DomainError("driver specification must be a JSON object")
    kind = spec.get("kind")
    if kind == "constant":
        f = _take(spec, kind, ("c",))
        return ConstantDriver(_j2c(f["c"], "c"))
    if kind == "linear":
        f = _take(spec, kind, ("coef",))
        return LinearDriver(_j2c(f["coef"], "coef"))
    if kind == "sqrt":
        f = _take(spec, kind, ("coef",))
        return SqrtDriver(_j2c(f["coef"], "coef"))
    if kind == "samples":
        f = _take(spec, kind, ("times", "re", "im"))
        return SamplesDriver(
            np.asarray(f["times"], dtype=float),
            np.asarray(f["re"], dtype=float),
            np.asarray(f["im"], dtype=float),
        )
    if kind == "weierstrass":
        f = _take(spec, kind, ("a", "b", "K", "c"))
        return WeierstrassDriver(float(f["a"]), float(f["b"]), int(f["K"]), _j2c(f["c"], "c"))
    if kind == "brownian-sample":
        f = _take(spec, kind, ("seed",), {"scale": 1.0, "K": 10})
        return BrownianDriver(int(f["seed"]), float(f["scale"]), int(f["K"]))
    if kind == "shifted":
        f = _take(spec, kind, ("c", "inner"))
        return ShiftedDriver(driver_from_spec(f["inner"]), _j2c(f["c"], "c"))
    if kind == "scaled":
        f = _take(spec, kind, ("a", "inner"))
        return ScaledDriver(driver_from_spec(f["inner"]), float(f["a"]))
    if kind == "negated":
        f = _take(spec, kind, ("inner",))
        return NegatedDriver(driver_from_spec(f["inner"]))
    if kind == "multiplied":
        f = _take(spec, kind, ("alpha", "inner"))
        return MultipliedDriver(driver_from_spec(f["inner"]), _j2c(f["alpha"], "alpha"))
    if kind == "dual":
        f = _take(spec, kind, ("t0", "inner"))
        return DualDriver(driver_from_spec(f["inner"]), float(f["t0"]))
    if kind == "restricted":
        f = _take(spec, kind, ("t0", "inner"))
        return RestrictedDriver(driver_from_spec(f["inner"]), float(f["t0"]))
    raise DomainError(f"unknown driver kind {kind!r}")


def load_driver(path) -> Driver:
    with open(path, "r", encoding="ascii") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"driver file {path} is not valid JSON: {exc}") from exc
    return driver_from_spec(spec)


def driver_fingerprint(d: Driver) -> str:
    """sha256 of the canonical JSON serialization, used in output metadata."""
    blob = json.dumps(d.to_spec(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("ascii")).hexdigest()
