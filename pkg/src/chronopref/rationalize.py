"""Constructive rationalization and necessary-condition checks.

``construct_rum`` shows that choice probabilities alone reveal nothing: any
SCF is generated by a random utility model with *any* prescribed utility
function. ``construct_rum_cf_two_options`` builds a RUM with chronometric
function for any single-pair SCF-RT and any decreasing boundary.
``check_necessary_rationalizability`` looks for strict cycles in the
relations revealed within a model class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import integrate

from .data import ChoiceDataset, EmpiricalCDF, canonical
from .generators.chronometric import (
    Boundary,
    HyperbolicBoundary,
    ReciprocalBoundary,
    boundary_chronometric_bridge,
)
from .generators.distributions import Tabulated
from .generators.rum import RumCfSpec, SimulatedTrials
from .generators.rng import block_rng, blocks
from .relations import CycleReport, Relation, has_inconsistent_cycle


class UnsupportedData(ValueError):
    """The construction does not apply to this dataset."""


# choice probabilities only ----------------------------------------------

@dataclass(frozen=True)
class PairRum:
    """Piecewise-uniform difference density for one pair, oriented so ``v >= 0``.

    Density ``p(y,x)`` on ``[-1, 0)`` and ``d`` on ``[0, delta]``.
    """

    x: str
    y: str
    p_xy: float
    v: float
    d: float
    delta: float

    @property
    def family(self) -> Tabulated:
        return Tabulated([-1.0, 0.0, self.delta], [0.0, 1.0 - self.p_xy, 1.0])

    def G(self, v):
        return self.family.cdf(v)

    @property
    def mean(self) -> float:
        # exact integral of v over the two uniform pieces
        return -0.5 * (1.0 - self.p_xy) + 0.5 * self.d * self.delta ** 2

    @property
    def mass(self) -> float:
        return (1.0 - self.p_xy) + self.d * self.delta


def construct_rum(scf: Mapping[tuple[str, str], float], u: Mapping[str, float]) -> dict[tuple[str, str], PairRum]:
    """Rationalize choice probabilities ``scf`` with utility function ``u``.

    ``scf`` maps ``(x, y)`` to ``p(x, y)`` (either orientation per pair).
    Each pair gets ``d = p(x,y)^2 / (p(y,x) + 2v)`` and
    ``delta = (p(y,x) + 2v) / p(x,y)`` with ``v = u(x) - u(y) >= 0``, which
    gives mean ``v`` and ``G(0) = p(y,x)``.
    """
    out = {}
    for (a, b), p_ab in scf.items():
        if not 0.0 < p_ab < 1.0:
            raise ValueError(f"p({a},{b}) = {p_ab} must lie strictly between 0 and 1")
        v_ab = u[a] - u[b]
        if v_ab > 0 or (v_ab == 0 and (a, b) == canonical(a, b)):
            x, y, p, v = a, b, p_ab, v_ab
        else:
            x, y, p, v = b, a, 1.0 - p_ab, -v_ab
        q = 1.0 - p
        d = p * p / (q + 2.0 * v)
        delta = (q + 2.0 * v) / p
        out[(x, y)] = PairRum(x, y, p, v, d, delta)
    return out


def rum_spec(construction: Mapping[tuple[str, str], PairRum], u: Mapping[str, float], r=None) -> RumCfSpec:
    """Simulation spec for a constructed RUM (chronometric function ``r`` defaults to ``1/v``)."""
    kw = {} if r is None else {"r": r}
    return RumCfSpec(u=dict(u), pair_diff={f"{k[0]}|{k[1]}": c.family for k, c in construction.items()}, **kw)


# one pair with response times ------------------------------------------------

def _quantiles(cdf, alphas: np.ndarray) -> np.ndarray:
    if isinstance(cdf, EmpiricalCDF):
        k = np.searchsorted(np.arange(1, cdf.n + 1) / cdf.n, alphas, side="left")
        return cdf.samples[np.minimum(k, cdf.n - 1)]
    if getattr(cdf, "_quantile_func", None) is not None:
        return np.array([cdf.quantile(a) for a in alphas.tolist()])
    return cdf.quantiles(alphas)


@dataclass
class TwoOptionRumCf:
    """RUM-CF built from one pair's SCF-RT and a collapsing boundary ``b``.

    ``G(-b(t)) = p(y,x) F(y,x)(t)`` and ``G(b(t)) = 1 - p(x,y) F(x,y)(t)``,
    with chronometric function ``r = b^{-1}``.
    """

    x: str
    y: str
    p_xy: float
    F_xy: object
    F_yx: object
    boundary: Boundary
    r: object = field(init=False)
    mean: float = field(init=False)

    def __post_init__(self):
        self.r = boundary_chronometric_bridge(self.boundary)
        self.mean = self._mean()

    @property
    def b0(self) -> float:
        return float(self.boundary.b0)

    def G(self, v):
        v = np.asarray(v, dtype=float)
        a = np.abs(v)
        with np.errstate(divide="ignore"):
            t = np.where(a < self.b0, np.asarray(self.r(np.where(a > 0, a, 1.0)), dtype=float), 0.0)
        lower = (1.0 - self.p_xy) * np.asarray(self.F_yx(t))
        upper = 1.0 - self.p_xy * np.asarray(self.F_xy(t))
        # G(0) = p(y,x): the limit of both branches as t -> infinity
        out = np.where(a == 0, 1.0 - self.p_xy, np.where(v < 0, lower, upper))
        return out if out.ndim else float(out)

    def _mean(self) -> float:
        p, q = self.p_xy, 1.0 - self.p_xy
        if isinstance(self.F_xy, EmpiricalCDF) and isinstance(self.F_yx, EmpiricalCDF):
            # v = b(T) when x is chosen and -b(T) when y is chosen
            return float(p * np.mean(self.boundary(self.F_xy.samples)) - q * np.mean(self.boundary(self.F_yx.samples)))

        def tail(v):
            return p * float(self.F_xy(float(self.r(v)))) - q * float(self.F_yx(float(self.r(v))))

        # E[v] = int_0^b0 [1 - G(v)] - G(-v) dv
        hi = self.b0
        if math.isfinite(hi):
            val, _ = integrate.quad(tail, 0.0, hi, epsabs=1e-13, epsrel=1e-10, limit=500)
            return val
        a, _ = integrate.quad(tail, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=500)
        c, _ = integrate.quad(tail, 1.0, np.inf, epsabs=1e-13, epsrel=1e-10, limit=500)
        return a + c

    def sample_differences(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Exact draws from ``G`` by inverting the two branches."""
        return self.sample_quantiles(rng.random(n))

    def simulate(self, n: int, seed: int = 0) -> SimulatedTrials:
        """Re-simulate choices and RTs: draw ``v`` from ``G``, choose by sign, RT ``r(|v|)``."""
        parts_c, parts_t = [], []
        for idx, count in blocks(n):
            chose_x, t = self._sample_choice_times(block_rng(seed, self.x, self.y, idx).random(count))
            v = np.asarray(self.boundary(t), dtype=float)
            with np.errstate(divide="ignore"):
                rt = np.asarray(self.r(np.where(v > 0, v, 1.0)), dtype=float)
            # b(T) underflows to 0 for very slow trials; r(b(T)) = T there
            parts_c.append(chose_x)
            parts_t.append(np.where(v > 0, rt, t))
        return SimulatedTrials(self.x, self.y, np.concatenate(parts_c), np.concatenate(parts_t), 0, n)

    def to_spec(self, knots: int = 2001, tail: float = 1e-6) -> RumCfSpec:
        """Tabulated approximation of ``G`` as a re-simulable model spec."""
        u = np.linspace(tail, 1.0 - tail, knots)
        v = np.unique(np.sort(self.sample_quantiles(u)))
        c = np.asarray(self.G(v), dtype=float)
        c = np.maximum.accumulate(c)
        c = (c - c[0]) / (c[-1] - c[0])
        return RumCfSpec(
            u={self.x: self.mean, self.y: 0.0},
            r=self.r,
            pair_diff={f"{self.x}|{self.y}": Tabulated(v, c)},
        )

    def _sample_choice_times(self, u) -> tuple[np.ndarray, np.ndarray]:
        """Choice and boundary-crossing time ``T`` of the draw at level ``u`` of ``G``."""
        u = np.asarray(u, dtype=float)
        q = 1.0 - self.p_xy
        t = np.empty_like(u)
        low = u < q
        t[low] = _quantiles(self.F_yx, np.clip(u[low] / q, 1e-300, 1.0))
        t[~low] = _quantiles(self.F_xy, np.clip((1.0 - u[~low]) / self.p_xy, 1e-300, 1.0))
        return ~low, t

    def sample_quantiles(self, u) -> np.ndarray:
        """Quantiles of ``G`` at levels ``u``."""
        chose_x, t = self._sample_choice_times(u)
        b = np.asarray(self.boundary(t), dtype=float)
        return np.where(chose_x, b, -b)


def construct_rum_cf_two_options(dataset: ChoiceDataset, boundary: Boundary | None = None) -> TwoOptionRumCf:
    """Rationalize a single-pair SCF-RT; the boundary defaults to ``1/(1+t)``."""
    pairs = dataset.pairs()
    if len(pairs) != 1:
        raise UnsupportedData(f"construction needs exactly one observed pair, got {len(pairs)}")
    b = boundary if boundary is not None else HyperbolicBoundary(1.0, 1.0)
    if not (b.collapsing or isinstance(b, ReciprocalBoundary)):
        raise UnsupportedData("boundary must collapse to zero")
    x, y = pairs[0]
    return TwoOptionRumCf(x, y, dataset.prob(x, y), dataset.cdf(x, y), dataset.cdf(y, x), b)


# necessary conditions ---------------------------------------------------------

CLASSES = ("unrestricted", "symmetric", "fechner")


@dataclass(frozen=True)
class RationalizabilityReport:
    model_class: str
    checks: dict[str, CycleReport]

    @property
    def passed(self) -> bool:
        return not any(self.checks.values())

    def to_json(self) -> dict:
        return {
            "class": self.model_class,
            "pass": self.passed,
            "checks": {
                name: {"cycle": bool(rep), "witness": list(rep.witness)} for name, rep in sorted(self.checks.items())
            },
        }


def check_necessary_rationalizability(
    dataset: ChoiceDataset,
    model_class: str = "symmetric",
    tol: float | str = 0.0,
    strict_tol: float | None = None,
    margin: float = 0.0,
    t_margin: float = 0.0,
) -> RationalizabilityReport:
    """Search the class's revealed relations for strict cycles.

    A strict cycle means no model of the class rationalizes the data.
    Passing is necessary, not sufficient.
    """
    from .fechner import build_fechner_relation
    from .symmetric import build_symmetric_relation
    from .unrestricted import build_rt_relation

    checks: dict[str, Relation]
    if model_class == "unrestricted":
        checks = {"R_rt": build_rt_relation(dataset, tol, strict_tol).relation}
    elif model_class == "symmetric":
        rel = build_symmetric_relation(dataset, margin, t_margin)
        checks = {"R_s": rel.rs, "R_srt": rel.rsrt, "R_s+R_srt": rel.union}
    elif model_class == "fechner":
        rel = build_fechner_relation(dataset, margin)
        checks = {"R_s": rel.rs, "R_f": rel.rf, "R_s+R_f": rel.union}
    else:
        raise ValueError(f"unknown model class {model_class!r}; expected one of {CLASSES}")
    return RationalizabilityReport(model_class, {k: has_inconsistent_cycle(v) for k, v in checks.items()})
