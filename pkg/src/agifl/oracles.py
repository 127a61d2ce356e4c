"""Independent brute-force reference implementations.

These back the `agifl oracle` subcommand and the verification suite. They
deliberately do not call into the production modules: the rate formula is
evaluated directly with `math`, the placement optimum is found by exhaustive
grid search, and the weighted mean is plain Python arithmetic.
"""

import math

import numpy as np

__all__ = ["rate_direct", "grid_placement", "weighted_mean_direct"]


def rate_direct(bandwidth: float, tx_power: float, altitude: float,
                horizontal: float, ref_gain: float = 1e-5,
                noise: float = 1e-12) -> float:
    """Direct evaluation of the link rate formula, bit/s."""
    snr = ref_gain * tx_power / (noise * (altitude ** 2 + horizontal ** 2))
    return bandwidth * math.log2(1.0 + snr)


def _grid_best(xs, ys, users, altitude):
    """Smallest summed slant distance over the cartesian grid xs x ys."""
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    total = np.zeros_like(gx)
    h_sq = altitude ** 2
    for ux, uy in users:
        total += np.sqrt((gx - ux) ** 2 + (gy - uy) ** 2 + h_sq)
    flat = int(np.argmin(total))
    i, j = np.unravel_index(flat, total.shape)
    return float(xs[i]), float(ys[j]), float(total[i, j])


def grid_placement(users, altitude: float, coarse_step: float = 1.0,
                   refine_step: float = 0.01):
    """Exhaustive search for the minimum-sum-distance hovering point.

    Scans the user bounding box (the optimum lies in the users' convex
    hull) on a `coarse_step` grid, then refines on a `refine_step` grid
    around the best coarse cell. Returns (x, y, objective).
    """
    users = [(float(x), float(y)) for x, y in users]
    if not users:
        raise ValueError("users must be non-empty")
    xs_lo = min(x for x, _ in users)
    xs_hi = max(x for x, _ in users)
    ys_lo = min(y for _, y in users)
    ys_hi = max(y for _, y in users)

    xs = np.arange(xs_lo, xs_hi + coarse_step, coarse_step)
    ys = np.arange(ys_lo, ys_hi + coarse_step, coarse_step)
    bx, by, _ = _grid_best(xs, ys, users, altitude)

    xs = np.arange(bx - coarse_step, bx + coarse_step + refine_step, refine_step)
    ys = np.arange(by - coarse_step, by + coarse_step + refine_step, refine_step)
    return _grid_best(xs, ys, users, altitude)


def weighted_mean_direct(updates):
    """Sample-count-weighted mean of parameter vectors, computed by hand.

    `updates` is a sequence of (values, count) pairs; returns a plain list.
    """
    updates = list(updates)
    if not updates:
        raise ValueError("updates must be non-empty")
    length = len(updates[0][0])
    total = sum(count for _, count in updates)
    out = []
    for i in range(length):
        acc = 0.0
        for values, count in updates:
            acc += (count / total) * values[i]
        out.append(acc)
    return out
