"""Random utility models with (noisy) chronometric functions.

Each trial draws a realised utility difference ``v`` from ``g(x, y)``;
``x`` is chosen when ``v > 0`` and the response time is ``r(|v|)``,
optionally multiplied by mean-one lognormal noise.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..data import AnalyticCDF, ChoiceDataset, TrialRecord
from .chronometric import ChronometricFunction, Reciprocal, SpecError, chronometric_from_json
from .distributions import DiffFamily, Logistic, PairDiff, family_from_json, _pair_key
from .rng import block_rng, blocks

log = logging.getLogger(__name__)

MAX_RESAMPLE_ROUNDS = 10_000


class UnsupportedModel(ValueError):
    """The requested closed form does not exist for this model."""


@dataclass(frozen=True)
class SimulatedTrials:
    """Vectorised trials for one ordered pair ``(x, y)``."""

    x: str
    y: str
    chose_x: np.ndarray
    rt: np.ndarray
    resampled: int = 0
    drawn: int = 0

    @property
    def n(self) -> int:
        return int(self.rt.size)

    @property
    def resample_rate(self) -> float:
        return self.resampled / self.drawn if self.drawn else 0.0

    def records(self, start: int = 0) -> list[TrialRecord]:
        x, y = self.x, self.y
        return [
            TrialRecord(x, y, x if cx else y, float(t), str(start + i))
            for i, (cx, t) in enumerate(zip(self.chose_x.tolist(), self.rt.tolist()))
        ]


def dataset_from_simulations(sims) -> ChoiceDataset:
    """Empirical dataset straight from simulated arrays (no per-trial objects)."""
    from ..data import EmpiricalCDF, DataError, _PairEntry, canonical

    entries = []
    for s in sims:
        rx, ry = s.rt[s.chose_x], s.rt[~s.chose_x]
        if rx.size == 0 or ry.size == 0:
            raise DataError(f"pair ({s.x}, {s.y}) is one-directional in the simulated data")
        a, b = canonical(s.x, s.y)
        if a != s.x:
            rx, ry = ry, rx
        na, nb = rx.size, ry.size
        entries.append(_PairEntry(a, b, na / (na + nb), EmpiricalCDF(rx), EmpiricalCDF(ry), na, nb))
    return ChoiceDataset(entries)


@dataclass(frozen=True)
class LognormalNoise:
    """Multiplicative noise ``eta = exp(N(-s^2/2, s^2))``, so ``E[eta] = 1``."""

    s: float

    def __post_init__(self):
        if not self.s >= 0:
            raise SpecError("noise scale must be nonnegative")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.lognormal(mean=-0.5 * self.s ** 2, sigma=self.s, size=n)

    def to_json(self):
        return {"family": "lognormal", "s": self.s}


@dataclass(frozen=True)
class RumCfSpec:
    """Utility function, difference family (with per-pair overrides) and chronometric function."""

    u: dict[str, float]
    diff: DiffFamily = field(default_factory=Logistic)
    r: ChronometricFunction = field(default_factory=Reciprocal)
    noise: LognormalNoise | None = None
    pair_diff: dict[str, DiffFamily] = field(default_factory=dict)

    def v(self, x: str, y: str) -> float:
        return float(self.u[x] - self.u[y])

    def family(self, x: str, y: str) -> tuple[DiffFamily, bool]:
        """Family for the pair and whether it is stored in the ``(x, y)`` orientation."""
        fwd_key, rev_key = f"{x}|{y}", f"{y}|{x}"
        if fwd_key in self.pair_diff:
            return self.pair_diff[fwd_key], True
        if rev_key in self.pair_diff:
            return self.pair_diff[rev_key], False
        return self.diff, True

    def pair_distribution(self, x: str, y: str) -> PairDiff:
        fam, fwd = self.family(x, y)
        if fam.location:
            return fam.bind(x, y, self.v(x, y))
        bound = fam.bind(x, y) if fwd else fam.bind(y, x)
        return bound if fwd else bound.flipped()

    def true_difference(self, x: str, y: str) -> float:
        """Mean of ``g(x, y)``: the utility difference the data should reveal."""
        return self.pair_distribution(x, y).mean

    def to_json(self) -> dict:
        out = {
            "model": "rum_ncf" if self.noise is not None else "rum_cf",
            "utilities": dict(self.u),
            "diff": self.diff.to_json(),
            "chronometric": self.r.to_json(),
        }
        if self.noise is not None:
            out["noise"] = self.noise.to_json()
        if self.pair_diff:
            out["pair_diff"] = {k: f.to_json() for k, f in self.pair_diff.items()}
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "RumCfSpec":
        model = doc.get("model", "rum_cf")
        if model not in ("rum_cf", "rum_ncf"):
            raise SpecError(f"not a random-utility spec: {model!r}")
        noise = doc.get("noise")
        if model == "rum_ncf" and noise is None:
            raise SpecError("rum_ncf needs a noise block")
        if noise is not None and noise.get("family", "lognormal") != "lognormal":
            raise SpecError("only lognormal noise is supported")
        u = {str(k): float(v) for k, v in doc.get("utilities", {}).items()}
        pair_diff = {k: family_from_json(v) for k, v in doc.get("pair_diff", {}).items()}
        for k in pair_diff:
            for o in k.split("|"):
                u.setdefault(o, 0.0)
        return cls(
            u=u,
            diff=family_from_json(doc.get("diff", {"family": "logistic", "s": 1.0})),
            r=chronometric_from_json(doc.get("chronometric", {"family": "reciprocal"})),
            noise=LognormalNoise(float(noise["s"])) if noise is not None else None,
            pair_diff=pair_diff,
        )


def _sample_block(spec: RumCfSpec, dist: PairDiff, rng, count: int):
    vmax = spec.r.v_max
    v = dist.sample(rng, count)
    bad = (v == 0) | (np.abs(v) >= vmax) | ~np.isfinite(v)
    drawn, rounds = count, 0
    while np.any(bad):
        rounds += 1
        if rounds > MAX_RESAMPLE_ROUNDS:
            raise SpecError("difference distribution puts (almost) no mass where r is positive")
        k = int(bad.sum())
        v[bad] = dist.sample(rng, k)
        drawn += k
        bad = (v == 0) | (np.abs(v) >= vmax) | ~np.isfinite(v)
    rt = np.asarray(spec.r(np.abs(v)), dtype=float)
    if spec.noise is not None:
        rt = rt * spec.noise.sample(rng, count)
    return v > 0, rt, drawn - count, drawn


def sample_rum_cf(spec: RumCfSpec, pair: tuple[str, str], n: int, seed: int = 0, workers: int = 1) -> SimulatedTrials:
    """Simulate ``n`` trials of the choice between ``pair = (x, y)``.

    Draws with ``v == 0`` or with ``r(|v|) == 0`` are redrawn (the count is
    logged and returned), so every emitted response time is positive.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    x, y = pair
    dist = spec.pair_distribution(x, y)
    plan = blocks(n)

    def run(block):
        idx, count = block
        return _sample_block(spec, dist, block_rng(seed, x, y, idx), count)

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
        log.info("pair (%s, %s): redrew %d of %d differences", x, y, resampled, drawn)
    return SimulatedTrials(x, y, chose, rt, resampled, drawn)


def analytic_cdfs(spec: RumCfSpec, pair: tuple[str, str]) -> tuple[float, AnalyticCDF, AnalyticCDF]:
    """Exact ``p(x,y)``, ``F(x,y)`` and ``F(y,x)`` implied by the model.

    ``F(x,y)(t) = [1 - G(r^{-1}(t))] / [1 - G(0)]`` and
    ``F(y,x)(t) = G(-r^{-1}(t)) / G(0)``, where ``G`` is conditioned on
    ``|v| < v_max`` when ``r`` vanishes beyond ``v_max`` (matching the
    sampler's redraw rule).
    """
    if spec.noise is not None:
        raise UnsupportedModel("no closed form with response-time noise")
    x, y = pair
    dist = spec.pair_distribution(x, y)
    r = spec.r
    vmax = r.v_max
    if np.isfinite(vmax):
        lo_mass, hi_mass = float(dist.cdf(-vmax)), float(dist.cdf(vmax))
    else:
        lo_mass, hi_mass = 0.0, 1.0
    span = hi_mass - lo_mass
    if span <= 0:
        raise UnsupportedModel("no probability mass where the chronometric function is positive")

    def G(v):
        return (np.clip(dist.cdf(v), lo_mass, hi_mass) - lo_mass) / span

    g0 = float(G(0.0))
    if not 0.0 < g0 < 1.0:
        raise UnsupportedModel("one option is never chosen under this model")
    p_xy = 1.0 - g0

    def F_xy(t):
        return (1.0 - G(r.inverse(t))) / (1.0 - g0)

    def F_yx(t):
        return G(-np.asarray(r.inverse(t))) / g0

    # time range: fast end from extreme quantiles of |v|, slow end from small |v|
    ext = np.abs(dist.ppf(np.array([1e-9, 1.0 - 1e-9])))
    v_big = float(np.nanmin([np.nanmax(ext), vmax * (1 - 1e-9)])) if np.isfinite(vmax) else float(np.nanmax(ext))
    scale = max(abs(dist.mean), float(np.abs(dist.ppf(0.75) - dist.ppf(0.25))), 1e-3)
    t_lo = float(r(v_big)) if float(r(v_big)) > 0 else float(r(vmax * 0.999))
    t_hi = float(r(1e-4 * scale))
    support = (max(t_lo, 1e-12), max(t_hi, 2 * t_lo))
    return p_xy, AnalyticCDF(F_xy, support), AnalyticCDF(F_yx, support)


def analytic_dataset(spec: RumCfSpec, pairs) -> ChoiceDataset:
    return ChoiceDataset.from_analytic({(x, y): analytic_cdfs(spec, (x, y)) for x, y in pairs})


def simulate_dataset(spec, pairs, n: int, seed: int = 0, workers: int = 1) -> tuple[ChoiceDataset, list[SimulatedTrials]]:
    """Simulate every pair and assemble the empirical dataset."""
    from .ddm import DdmSpec, sample_ddm

    sampler = sample_ddm if isinstance(spec, DdmSpec) else sample_rum_cf
    sims = [sampler(spec, tuple(p), n, seed, workers) for p in pairs]
    return dataset_from_simulations(sims), sims


def pair_label(x: str, y: str) -> str:
    return _pair_key(x, y)
