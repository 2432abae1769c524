"""Drift-diffusion model with constant or collapsing boundaries.

Evidence ``Z`` starts at 0 and follows ``dZ = mu dt + sigma dW``; hitting
``+b(t)`` first selects ``x``, hitting ``-b(t)`` selects ``y``. Paths are
stepped with Euler-Maruyama, and the crossing time is refined by linear
interpolation inside the crossing step.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chronometric import Boundary, ConstantBoundary, ReciprocalBoundary, SpecError, boundary_from_json
from .rng import block_rng, blocks
from .rum import SimulatedTrials

log = logging.getLogger(__name__)

DDM_BLOCK = 8192
STEP_CHUNK = 256


@dataclass(frozen=True)
class DdmSpec:
    """Drift ``mu(x,y) = k (u(x) - u(y))`` unless overridden in ``drift``.

    ``drift`` keys are ``"x|y"`` meaning ``mu(x, y)``; the reverse orientation
    is its negative.
    """

    u: dict[str, float]
    boundary: Boundary = field(default_factory=ConstantBoundary)
    sigma2: float = 1.0
    k: float = 1.0
    dt: float = 1e-3
    t_max: float | None = None
    drift: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise SpecError("sigma2 must be positive")
        if not self.k > 0:
            raise SpecError("drift scale k must be positive")
        if not self.dt > 0:
            raise SpecError("dt must be positive")
        if isinstance(self.boundary, ReciprocalBoundary) or not math.isfinite(self.boundary.b0):
            raise SpecError("DDM boundary must be finite at t = 0")
        if self.boundary.collapsing:
            grid = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 2001)])
            vals = np.asarray(self.boundary(grid), dtype=float)
            step = np.diff(vals)
            # exponential boundaries underflow to 0 far out; only require strict decrease while positive
            if vals[0] <= 0 or np.any(vals < 0) or np.any(step[vals[1:] > 0] >= 0):
                raise SpecError("collapsing boundary must be positive and strictly decreasing")

    def mu(self, x: str, y: str) -> float:
        if f"{x}|{y}" in self.drift:
            return float(self.drift[f"{x}|{y}"])
        if f"{y}|{x}" in self.drift:
            return -float(self.drift[f"{y}|{x}"])
        return self.k * (self.u[x] - self.u[y])

    @property
    def horizon(self) -> float:
        """Truncation time: explicit ``t_max`` or 100 diffusive time scales."""
        if self.t_max is not None:
            return float(self.t_max)
        return 100.0 * self.boundary.b0 ** 2 / self.sigma2

    def to_json(self) -> dict:
        out = {
            "model": "ddm",
            "utilities": dict(self.u),
            "boundary": self.boundary.to_json(),
            "sigma2": self.sigma2,
            "k": self.k,
            "dt": self.dt,
        }
        if self.t_max is not None:
            out["t_max"] = self.t_max
        if self.drift:
            out["drift"] = dict(self.drift)
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "DdmSpec":
        if doc.get("model") != "ddm":
            raise SpecError("not a DDM spec")
        u = {str(k): float(v) for k, v in doc.get("utilities", {}).items()}
        drift = {str(k): float(v) for k, v in doc.get("drift", {}).items()}
        for key in drift:
            for o in key.split("|"):
                u.setdefault(o, 0.0)
        return cls(
            u=u,
            boundary=boundary_from_json(doc.get("boundary", {"family": "constant", "B": 1.0})),
            sigma2=float(doc.get("sigma2", 1.0)),
            k=float(doc.get("k", 1.0)),
            dt=float(doc.get("dt", 1e-3)),
            t_max=float(doc["t_max"]) if doc.get("t_max") is not None else None,
            drift=drift,
        )


def constant_boundary_choice_probability(mu: float, B: float, sigma2: float) -> float:
    """Probability of hitting ``+B`` before ``-B`` from 0."""
    return 1.0 / (1.0 + math.exp(-2.0 * mu * B / sigma2))


def _run_paths(mu, sigma, boundary: Boundary, dt, t_max, rng, count):
    """Simulate ``count`` paths; returns (upper_hit, rt, finished_mask)."""
    z = np.zeros(count)
    t0 = 0.0
    alive = np.arange(count)
    upper = np.zeros(count, dtype=bool)
    rt = np.full(count, np.nan)
    step_sd = sigma * math.sqrt(dt)
    n_steps_max = int(math.ceil(t_max / dt))
    steps_done = 0
    while alive.size and steps_done < n_steps_max:
        m = min(STEP_CHUNK, n_steps_max - steps_done)
        incr = mu * dt + step_sd * rng.standard_normal((alive.size, m))
        path = z[alive, None] + np.cumsum(incr, axis=1)
        times = t0 + dt * np.arange(1, m + 1)
        bnd = np.asarray(boundary(times), dtype=float)
        hit_up = path >= bnd
        hit_lo = path <= -bnd
        hit = hit_up | hit_lo
        any_hit = hit.any(axis=1)
        first = np.argmax(hit, axis=1)
        rows = np.flatnonzero(any_hit)
        if rows.size:
            j = first[rows]
            z_cur = path[rows, j]
            z_prev = np.where(j > 0, path[rows, np.maximum(j - 1, 0)], z[alive[rows]])
            b_cur = bnd[j]
            b_prev = np.where(j > 0, bnd[np.maximum(j - 1, 0)], float(boundary(t0)))
            is_up = hit_up[rows, j]
            sign = np.where(is_up, 1.0, -1.0)
            # solve z_prev + f dz = sign * (b_prev + f db) for f in [0, 1]
            num = sign * b_prev - z_prev
            den = (z_cur - z_prev) - sign * (b_cur - b_prev)
            with np.errstate(divide="ignore", invalid="ignore"):
                frac = np.where(den != 0, num / den, 1.0)
            frac = np.clip(np.nan_to_num(frac, nan=1.0), 0.0, 1.0)
            t_prev = t0 + dt * j
            ids = alive[rows]
            rt[ids] = t_prev + frac * dt
            upper[ids] = is_up
        keep = ~any_hit
        z[alive[keep]] = path[keep, -1]
        alive = alive[keep]
        t0 += m * dt
        steps_done += m
    finished = ~np.isnan(rt)
    return upper, rt, finished


def sample_ddm(spec: DdmSpec, pair: tuple[str, str], n: int, seed: int = 0, workers: int = 1) -> SimulatedTrials:
    """Simulate ``n`` DDM trials for ``pair = (x, y)``.

    Paths still undecided at the horizon are discarded and replaced by new
    paths; the number replaced is reported as ``resampled``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    x, y = pair
    mu = spec.mu(x, y)
    sigma = math.sqrt(spec.sigma2)
    t_max = spec.horizon

    def run(block):
        idx, count = block
        rng = block_rng(seed, x, y, idx)
        ups, rts = [], []
        have, drawn, rounds = 0, 0, 0
        while have < count:
            rounds += 1
            if rounds > 1000:
                raise SpecError("almost no DDM paths finish before the horizon; raise t_max")
            need = count - have
            up, rt, fin = _run_paths(mu, sigma, spec.boundary, spec.dt, t_max, rng, need)
            drawn += need
            ups.append(up[fin])
            rts.append(rt[fin])
            have += int(fin.sum())
        return np.concatenate(ups), np.concatenate(rts), drawn - count, drawn

    plan = blocks(n, DDM_BLOCK)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, plan))
    else:
        parts = [run(b) for b in plan]
    chose = np.concatenate([p[0] for p in parts])
    rt = np.concatenate([p[1] for p in parts])
    resampled = sum(p[2] for p in parts)
    drawn = sum(p[3] for p in parts)
    if resampled:
        log.info("pair (%s, %s): %d of %d DDM paths hit the horizon and were redrawn", x, y, resampled, drawn)
    return SimulatedTrials(x, y, chose, rt, resampled, drawn)


def ddm_likelihood_ratio(spec: DdmSpec, t, mu: float | None = None, pair: tuple[str, str] | None = None):
    """``exp(mu b(t) / (sigma^2 / 2))``: the choice-density ratio at time t.

    Only defined here for collapsing boundaries. Pass either ``mu`` or a
    ``pair`` whose drift is taken from the spec.
    """
    if not spec.boundary.collapsing:
        raise SpecError("likelihood-ratio formula is for collapsing boundaries")
    if mu is None:
        if pair is None:
            raise ValueError("need mu or pair")
        mu = spec.mu(*pair)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    return np.exp(mu * np.asarray(spec.boundary(t)) / (spec.sigma2 / 2.0))
