"""Utility-difference distributions ``g(x, y)`` for random utility models.

Location families (normal, logistic) are centred on the deterministic
difference ``u(x) - u(y)`` supplied at bind time. The CRRA lottery, the
bimodal fixture and tabulated CDFs describe one fixed orientation of one
pair and carry their own mean. :meth:`DiffFamily.bind` returns a
:class:`PairDiff` for a concrete orientation; flipping the orientation
negates the difference, so ``G(y,x)(v) = 1 - G(x,y)(-v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from .chronometric import SpecError


class PairDiff:
    """Distribution of the realised difference for one ordered pair."""

    def __init__(self, cdf, ppf, mean: float, support: tuple[float, float], symmetric: bool):
        self._cdf = cdf
        self._ppf = ppf
        self.mean = float(mean)
        self.support = support
        self.symmetric = symmetric

    def cdf(self, v):
        return self._cdf(np.asarray(v, dtype=float))

    def ppf(self, u):
        return self._ppf(np.asarray(u, dtype=float))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.ppf(rng.random(n))

    def flipped(self) -> "PairDiff":
        lo, hi = self.support
        return PairDiff(
            lambda v: 1.0 - self._cdf(-v),
            lambda u: -self._ppf(1.0 - u),
            -self.mean,
            (-hi, -lo),
            self.symmetric,
        )


class DiffFamily:
    symmetric = True
    location = True  # centred on u(x) - u(y)

    def bind(self, x: str, y: str, v_xy: float) -> PairDiff:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _pair_key(x: str, y: str) -> str:
    a, b = sorted((x, y))
    return f"{a}|{b}"


@dataclass(frozen=True)
class Normal(DiffFamily):
    """Probit differences; ``pair_sigma`` makes the model heteroskedastic."""

    sigma: float = 1.0
    pair_sigma: dict = field(default_factory=dict)

    def scale(self, x: str, y: str) -> float:
        return float(self.pair_sigma.get(_pair_key(x, y), self.sigma))

    def bind(self, x, y, v_xy):
        d = stats.norm(loc=v_xy, scale=self.scale(x, y))
        return PairDiff(d.cdf, d.ppf, v_xy, (-np.inf, np.inf), True)

    @property
    def fechnerian(self) -> bool:
        return not self.pair_sigma

    def to_json(self):
        out = {"family": "normal", "sigma": self.sigma}
        if self.pair_sigma:
            out["pair_sigma"] = dict(self.pair_sigma)
        return out


@dataclass(frozen=True)
class Logistic(DiffFamily):
    """Logit differences with scale ``s`` (optionally per pair)."""

    s: float = 1.0
    pair_s: dict = field(default_factory=dict)

    def scale(self, x: str, y: str) -> float:
        return float(self.pair_s.get(_pair_key(x, y), self.s))

    def bind(self, x, y, v_xy):
        d = stats.logistic(loc=v_xy, scale=self.scale(x, y))
        return PairDiff(d.cdf, d.ppf, v_xy, (-np.inf, np.inf), True)

    @property
    def fechnerian(self) -> bool:
        return not self.pair_s

    def to_json(self):
        out = {"family": "logistic", "s": self.s}
        if self.pair_s:
            out["pair_s"] = dict(self.pair_s)
        return out


@dataclass(frozen=True)
class CrraLottery(DiffFamily):
    """Random risk aversion: lottery ``x`` pays ``prize`` w.p. ``prize_prob``, ``y`` pays ``safe``.

    With ``alpha ~ U[alpha_lo, alpha_hi]`` the realised difference is
    ``prize_prob * prize**alpha - safe**alpha``. Closed-form CDF requires
    ``safe == 1``, which makes the difference monotone in ``alpha``.
    """

    alpha_lo: float = 0.4
    alpha_hi: float = 1.4
    prize: float = 20.0
    prize_prob: float = 0.05
    safe: float = 1.0
    symmetric = False
    location = False

    def __post_init__(self):
        if not self.alpha_hi > self.alpha_lo:
            raise SpecError("alpha_hi must exceed alpha_lo")
        if self.safe != 1.0:
            raise SpecError("only safe == 1 is supported (monotone difference)")
        if not (self.prize > 1 and 0 < self.prize_prob < 1):
            raise SpecError("need prize > 1 and prize_prob in (0, 1)")

    def diff(self, alpha):
        return self.prize_prob * self.prize ** np.asarray(alpha, dtype=float) - 1.0

    def mean(self) -> float:
        val, _ = integrate.quad(self.diff, self.alpha_lo, self.alpha_hi, epsabs=1e-13, epsrel=1e-12)
        return val / (self.alpha_hi - self.alpha_lo)

    def cdf(self, v):
        v = np.asarray(v, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            alpha = np.log((v + 1.0) / self.prize_prob) / math.log(self.prize)
        out = (alpha - self.alpha_lo) / (self.alpha_hi - self.alpha_lo)
        out = np.where(v <= -1.0, 0.0, out)
        return np.clip(np.nan_to_num(out, nan=0.0), 0.0, 1.0)

    def ppf(self, u):
        alpha = self.alpha_lo + np.asarray(u, dtype=float) * (self.alpha_hi - self.alpha_lo)
        return self.diff(alpha)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.diff(self.alpha_lo)), float(self.diff(self.alpha_hi))

    def bind(self, x, y, v_xy=None):
        return PairDiff(self.cdf, self.ppf, self.mean(), self.support, False)

    def to_json(self):
        return {
            "family": "crra_lottery",
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "prize": self.prize,
            "prize_prob": self.prize_prob,
            "safe": self.safe,
        }


class BimodalFixture(DiffFamily):
    """Symmetric bimodal difference distribution with mean 1/2.

    Density ``(1-v)^-5`` below 0, ``1-2v`` on (0, 1/2], ``2v-1`` on (1/2, 1]
    and ``v^-5`` above 1. Paired with ``r(v) = 1/v`` its response times
    satisfy q-FSD but not the pointwise density-ratio condition.
    """

    location = False
    mean = 0.5

    @staticmethod
    def cdf(v):
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.select(
                [v <= 0, v <= 0.5, v <= 1.0],
                [0.25 / (1.0 - v) ** 4, 0.25 + v * (1.0 - v), 0.75 - v * (1.0 - v)],
                1.0 - 0.25 / v ** 4,
            )
        return out

    @staticmethod
    def ppf(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.select(
                [u <= 0.25, u <= 0.5, u <= 0.75],
                [
                    1.0 - (4.0 * u) ** -0.25,
                    0.5 * (1.0 - np.sqrt(np.maximum(2.0 - 4.0 * u, 0.0))),
                    0.5 * (1.0 + np.sqrt(np.maximum(4.0 * u - 2.0, 0.0))),
                ],
                (4.0 * (1.0 - u)) ** -0.25,
            )
        return out

    def bind(self, x, y, v_xy=None):
        return PairDiff(self.cdf, self.ppf, 0.5, (-np.inf, np.inf), True)

    def to_json(self):
        return {"family": "bimodal_fixture"}


class Tabulated(DiffFamily):
    """Piecewise-linear CDF through ``(v[i], cdf[i])`` knots.

    A piecewise-constant density is represented exactly. The mean is the
    exact integral of the linear pieces.
    """

    location = False
    symmetric = False

    def __init__(self, v, cdf):
        v, c = np.asarray(v, dtype=float), np.asarray(cdf, dtype=float)
        if v.size < 2 or v.shape != c.shape:
            raise SpecError("tabulated family needs matching v/cdf arrays of length >= 2")
        if np.any(np.diff(v) <= 0) or np.any(np.diff(c) < 0):
            raise SpecError("tabulated knots must be increasing")
        if abs(c[0]) > 1e-12 or abs(c[-1] - 1.0) > 1e-12:
            raise SpecError("tabulated cdf must run from 0 to 1")
        self.v, self.c = v, c

    def cdf(self, v):
        return np.interp(np.asarray(v, dtype=float), self.v, self.c, left=0.0, right=1.0)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        # drop flat pieces so the inverse interpolation is well defined
        keep = np.concatenate([[True], np.diff(self.c) > 0])
        return np.interp(u, self.c[keep], self.v[keep])

    @property
    def mean(self) -> float:
        mass = np.diff(self.c)
        mids = 0.5 * (self.v[1:] + self.v[:-1])
        return float(np.sum(mass * mids))

    def bind(self, x, y, v_xy=None):
        return PairDiff(self.cdf, self.ppf, self.mean, (float(self.v[0]), float(self.v[-1])), False)

    def to_json(self):
        return {"family": "tabulated", "v": self.v.tolist(), "cdf": self.c.tolist()}


def family_from_json(doc: dict) -> DiffFamily:
    fam = doc.get("family")
    if fam == "normal":
        return Normal(float(doc.get("sigma", 1.0)), dict(doc.get("pair_sigma", {})))
    if fam == "logistic":
        return Logistic(float(doc.get("s", 1.0)), dict(doc.get("pair_s", {})))
    if fam == "crra_lottery":
        keys = ("alpha_lo", "alpha_hi", "prize", "prize_prob", "safe")
        return CrraLottery(**{k: float(doc[k]) for k in keys if k in doc})
    if fam == "bimodal_fixture":
        return BimodalFixture()
    if fam == "tabulated":
        return Tabulated(doc["v"], doc["cdf"])
    raise SpecError(f"unknown difference family {fam!r}")
