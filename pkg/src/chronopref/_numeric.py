"""Small numerical helpers shared across modules."""

from __future__ import annotations

import math

import numpy as np


def dkw_epsilon(n: int, alpha: float = 1e-3) -> float:
    """Dvoretzky-Kiefer-Wolfowitz band half-width for an n-sample empirical CDF.

    With probability at least ``1 - alpha`` the sup-norm distance between the
    empirical and true CDF is below the returned value.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def bisect_increasing(func, target, lo, hi, iters: int = 200):
    """Vectorised bisection for the smallest ``x`` in ``[lo, hi]`` with ``func(x) >= target``.

    ``func`` must be nondecreasing and accept arrays. ``lo``/``hi`` broadcast
    against ``target``. Stops early once the bracket no longer shrinks in
    floating point.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        done = (mid <= lo) | (mid >= hi)
        if np.all(done):
            break
        above = np.asarray(func(mid)) >= target
        hi = np.where(above & ~done, mid, hi)
        lo = np.where(~above & ~done, mid, lo)
    return hi
