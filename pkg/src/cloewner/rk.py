"""Runge-Kutta kernels shared by both Loewner flows.

Two kernels, two roles.  ``dp_step`` is one embedded Dormand-Prince 5(4)
step, used where adaptive error control matters (forward flow near death,
single backward trajectories at a requested tolerance).  ``rk4_step`` is one
classical fixed step, used by the trace engine on a precomputed schedule.

Both kernels operate on complex arrays strictly elementwise: no norm, no
reduction, no branch ever couples batch elements.  That makes results
independent of how a batch is partitioned, which is what lets callers farm
pixels or trace parameters out to worker threads and still produce
bit-identical output at any thread count.
"""

from __future__ import annotations

import numpy as np

# Dormand-Prince 5(4) tableau
DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
DP_A = (
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

# step-size controller bounds, shared so both flows retune identically
STEP_SAFETY = 0.9
STEP_SHRINK_MIN = 0.2
STEP_GROW_MAX = 5.0


def dp_step(f, t, y, h):
    """One embedded 5(4) step from (t, y) with stepsize h.

    t, y, h may be arrays of one batch shape; f(t, y) must evaluate
    elementwise.  Returns (y5, err) with err = |y5 - y4| per element.
    """
    k = [f(t, y)]
    for i, row in enumerate(DP_A):
        acc = row[0] * k[0]
        for j in range(1, len(row)):
            acc = acc + row[j] * k[j]
        k.append(f(t + DP_C[i + 1] * h, y + h * acc))
    y5 = y + h * sum(b * ki for b, ki in zip(DP_B5, k))
    y4 = y + h * sum(b * ki for b, ki in zip(DP_B4, k))
    return y5, np.abs(y5 - y4)


def dp_retune(h, err, tol):
    """Next stepsize from the embedded error estimate, elementwise."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(err > 0.0, tol / np.maximum(err, 1e-300), STEP_GROW_MAX**5)
    factor = np.clip(STEP_SAFETY * ratio**0.2, STEP_SHRINK_MIN, STEP_GROW_MAX)
    return h * factor


def rk4_step(f, t, y, h):
    """One classical fourth-order step, elementwise over the batch.

    The increment is h * (ksum / 6), not (h / 6) * ksum: when the stage sum
    is an exact small multiple (the driverless tip flow has ksum = 12i) the
    division is exact and the step preserves the closed-form solution to the
    last bit.
    """
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + h * ((k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)
