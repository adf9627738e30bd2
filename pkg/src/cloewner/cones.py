"""Cone feasibility and the certified parameters used by the backward flow.

The backward flow is well posed for driving functions of 1/2-Holder norm at
most ``sigma`` started inside a two-sided cone of half-aperture ``theta1``,
provided a containment aperture ``theta2`` exists for which a strict
inequality between the three parameters holds.  This module decides that
inequality, scans for a canonical feasible ``theta2``, and packages the
derived constants (``nu`` for the Im lower bound, ``C2 + 1`` times ``sigma``
for the comparison-gap growth) that the flow certificates check against.

Everything here is closed-form real arithmetic; no ODE is integrated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# norm budget used toolkit-wide unless a caller overrides it
DEFAULT_SIGMA = 1.0 / 3.0

# fixed logarithmic scan grid for feasible_theta2; canonical, never resized
_THETA2_GRID = np.geomspace(1e-3, 1e3, 600)


def constraint_lhs(theta1: float, theta2: float) -> float:
    """Left side of the feasibility inequality: geometry of the start cone."""
    if theta2 <= 0:
        raise DomainError("theta2 must be positive")
    if theta1 < 0:
        raise DomainError("theta1 must be non-negative")
    return (theta1 / np.sqrt(1.0 + theta1**2)) * (1.0 + theta2) / theta2


def constraint_radicand(sigma: float, theta2: float) -> float:
    """Quantity under the root on the right side; feasibility needs it > 0."""
    if sigma < 0:
        raise DomainError("sigma must be non-negative")
    if theta2 <= 0:
        raise DomainError("theta2 must be positive")
    c2p1 = np.sqrt(1.0 + theta2**2) + 1.0
    return 1.0 - sigma**2 * (1.0 + theta2) ** 2 * c2p1**2 / (4.0 * theta2**2)


def constraint_margin(sigma: float, theta1: float, theta2: float) -> float:
    """Right side minus left side; positive iff the constraint holds.

    Returns -inf when the radicand is non-positive so the margin stays a
    smooth selection functional on the feasible set and orders infeasible
    points below every feasible one.
    """
    rad = constraint_radicand(sigma, theta2)
    if rad <= 0.0:
        return -np.inf
    return float(np.sqrt(rad) - constraint_lhs(theta1, theta2))


def constraint_holds(sigma: float, theta1: float, theta2: float) -> bool:
    """Strict feasibility of (sigma, theta1, theta2): margin > 0."""
    return constraint_margin(sigma, theta1, theta2) > 0.0


def feasible_theta2(sigma: float, theta1: float):
    """Canonical feasible containment aperture, or None if the scan is empty.

    Scans the fixed 600-point logarithmic grid on [1e-3, 1e3] and returns
    the grid point of maximal margin.  The grid is never refined, so the
    witness is reproducible across runs and platforms.
    """
    margins = np.array([constraint_margin(sigma, theta1, t2) for t2 in _THETA2_GRID])
    best = int(np.argmax(margins))
    if margins[best] <= 0.0:
        return None
    return float(_THETA2_GRID[best])


def nu_coefficient(sigma: float, theta2: float) -> float:
    """Coefficient of sqrt(u) in the certified Im lower bound."""
    if theta2 <= 0:
        raise DomainError("theta2 must be positive")
    return (np.sqrt(1.0 + theta2**2) + 1.0) * sigma / theta2


def gap_growth_coefficient(sigma: float, theta2: float) -> float:
    """Coefficient of sqrt(u) in the comparison-gap bound |A - B|."""
    if theta2 <= 0:
        raise DomainError("theta2 must be positive")
    return (np.sqrt(1.0 + theta2**2) + 1.0) * sigma


@dataclass(frozen=True)
class ConeParams:
    """Certified parameter tuple for the backward flow.

    ``nu`` is derived, not free: it is the Im lower-bound coefficient the
    containment proof provides at these parameters.  theta2 >= theta1 is
    deliberately not required.
    """

    sigma: float
    theta1: float
    theta2: float
    nu: float

    def __post_init__(self):
        if self.sigma < 0 or self.theta1 < 0 or self.theta2 <= 0:
            raise DomainError("cone parameters out of range")
        if not constraint_holds(self.sigma, self.theta1, self.theta2):
            raise DomainError(
                f"constraint fails at sigma={self.sigma}, theta1={self.theta1}, "
                f"theta2={self.theta2}"
            )
        expected = nu_coefficient(self.sigma, self.theta2)
        if abs(self.nu - expected) > 1e-12 * max(1.0, expected):
            raise DomainError("nu does not match its defining formula")

    @classmethod
    def certify(cls, sigma: float = DEFAULT_SIGMA, theta1: float = 0.0) -> "ConeParams":
        """Scan for theta2 and build the certified tuple, or raise."""
        t2 = feasible_theta2(sigma, theta1)
        if t2 is None:
            raise DomainError(
                f"no feasible theta2 for sigma={sigma}, theta1={theta1}"
            )
        return cls(sigma, theta1, t2, nu_coefficient(sigma, t2))


def default_cone_params() -> ConeParams:
    return ConeParams.certify(DEFAULT_SIGMA, 0.0)


_ORIENTATIONS = ("up", "down", "two-sided", "right")


@dataclass(frozen=True)
class ConeSpec:
    """A based cone in the plane with exact strict membership."""

    base: complex
    aperture: float
    orientation: str = "up"

    def __post_init__(self):
        if self.aperture < 0:
            raise DomainError("aperture must be non-negative")
        if self.orientation not in _ORIENTATIONS:
            raise DomainError(
                f"orientation {self.orientation!r} not in {_ORIENTATIONS}"
            )


def _in_up_cone(w: complex, aperture: float) -> bool:
    if aperture == 0.0:
        # degenerate cone: the open positive imaginary ray
        return w.real == 0.0 and w.imag > 0.0
    return w.imag > 0.0 and abs(w.real) < aperture * w.imag


def cone_contains(spec: ConeSpec, z: complex) -> bool:
    """Strict membership of z in the cone described by spec."""
    w = complex(z) - complex(spec.base)
    if spec.orientation == "up":
        return _in_up_cone(w, spec.aperture)
    if spec.orientation == "down":
        return _in_up_cone(-w, spec.aperture)
    if spec.orientation == "two-sided":
        return _in_up_cone(w, spec.aperture) or _in_up_cone(-w, spec.aperture)
    # right: the quarter-turn image of the two-sided cone, hugging the real axis
    v = -1j * w
    return _in_up_cone(v, spec.aperture) or _in_up_cone(-v, spec.aperture)


def comparison_anchor(z: complex) -> float:
    """Starting height of the driverless comparison flow for initial point z.

    For z = x + iy off the real axis this is |z|^2 / |y|, the height that
    minimizes |z - i y0| / y0 over y0 > 0.  Purely real z has no comparison
    flow and is a domain error.
    """
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("comparison anchor undefined on the real axis")
    return abs(z) ** 2 / abs(z.imag)
