"""Decision boundaries and chronometric functions.

A chronometric function ``r`` maps a realised absolute utility difference to
a response time: continuous, strictly decreasing while positive, exploding
at zero and vanishing at infinity. A collapsing DDM boundary ``b`` is its
inverse, so the two are built from each other here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._numeric import bisect_increasing


class SpecError(ValueError):
    """Invalid model configuration."""


# boundaries ---------------------------------------------------------------

class Boundary:
    """Symmetric decision boundary ``+-b(t)``."""

    collapsing = True

    def __call__(self, t):
        raise NotImplementedError

    @property
    def b0(self) -> float:
        return float(self(0.0))

    def inverse(self, v):
        """Time at which the boundary equals ``v`` (``0 < v <= b(0)``)."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantBoundary(Boundary):
    B: float = 1.0
    collapsing = False

    def __post_init__(self):
        if not self.B > 0:
            raise SpecError("constant boundary must be positive")

    def __call__(self, t):
        return np.full(np.shape(t), self.B) if np.ndim(t) else self.B

    def inverse(self, v):
        raise SpecError("a constant boundary has no inverse")

    def to_json(self):
        return {"family": "constant", "B": self.B}


@dataclass(frozen=True)
class HyperbolicBoundary(Boundary):
    """``b(t) = b0 / (1 + t / tau)``."""

    height: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        if not (self.height > 0 and self.tau > 0):
            raise SpecError("hyperbolic boundary needs b0 > 0 and tau > 0")

    def __call__(self, t):
        return self.height / (1.0 + np.asarray(t, dtype=float) / self.tau)

    def inverse(self, v):
        v = np.asarray(v, dtype=float)
        return self.tau * (self.height / v - 1.0)

    def to_json(self):
        return {"family": "hyperbolic", "b0": self.height, "tau": self.tau}


@dataclass(frozen=True)
class ExponentialBoundary(Boundary):
    """``b(t) = b0 * exp(-t / tau)``."""

    height: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        if not (self.height > 0 and self.tau > 0):
            raise SpecError("exponential boundary needs b0 > 0 and tau > 0")

    def __call__(self, t):
        return self.height * np.exp(-np.asarray(t, dtype=float) / self.tau)

    def inverse(self, v):
        return -self.tau * np.log(np.asarray(v, dtype=float) / self.height)

    def to_json(self):
        return {"family": "exponential", "b0": self.height, "tau": self.tau}


@dataclass(frozen=True)
class ReciprocalBoundary(Boundary):
    """``b(t) = kappa / t``; unbounded at zero, so only usable as a bridge."""

    kappa: float = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(t > 0, self.kappa / np.where(t > 0, t, 1.0), np.inf)

    def inverse(self, v):
        return self.kappa / np.asarray(v, dtype=float)

    def to_json(self):
        return {"family": "reciprocal", "kappa": self.kappa}


class CustomBoundary(Boundary):
    """Arbitrary continuous, strictly decreasing boundary given as a callable."""

    def __init__(self, func, t_hi: float = 1e6, validate: bool = True):
        self.func = func
        self.t_hi = t_hi
        if validate:
            grid = np.concatenate([[0.0], np.geomspace(1e-6, t_hi, 4001)])
            vals = np.asarray(func(grid), dtype=float)
            if not np.all(np.isfinite(vals[1:])) or np.any(vals[1:] <= 0):
                raise SpecError("boundary must be positive and finite for t > 0")
            if np.any(np.diff(vals) >= 0):
                raise SpecError("boundary must be strictly decreasing")

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    def inverse(self, v):
        # b decreasing: find smallest t with -b(t) >= -v
        v = np.asarray(v, dtype=float)
        return bisect_increasing(lambda s: -np.asarray(self.func(s)), -v, 0.0, self.t_hi)

    def to_json(self):
        raise SpecError("custom boundaries are not serialisable")


def boundary_from_json(doc: dict) -> Boundary:
    fam = doc.get("family")
    if fam == "constant":
        return ConstantBoundary(float(doc.get("B", 1.0)))
    if fam == "hyperbolic":
        return HyperbolicBoundary(float(doc.get("b0", 1.0)), float(doc.get("tau", 1.0)))
    if fam == "exponential":
        return ExponentialBoundary(float(doc.get("b0", 1.0)), float(doc.get("tau", 1.0)))
    if fam == "reciprocal":
        return ReciprocalBoundary(float(doc.get("kappa", 1.0)))
    raise SpecError(f"unknown boundary family {fam!r}")


# chronometric functions ---------------------------------------------------

class ChronometricFunction:
    """Response time as a function of the realised absolute utility difference.

    ``v_max`` is the difference beyond which ``r`` is zero (``inf`` if never).
    """

    v_max: float = np.inf

    def __call__(self, v):
        raise NotImplementedError

    def inverse(self, t):
        """``r^{-1}(t)`` on the positive branch."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Reciprocal(ChronometricFunction):
    """``r(v) = kappa / v``."""

    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise SpecError("kappa must be positive")

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore"):
            return self.kappa / v

    def inverse(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return self.kappa / t

    def to_json(self):
        return {"family": "reciprocal", "kappa": self.kappa}


class InverseBoundary(ChronometricFunction):
    """``r = b^{-1}`` on ``(0, b(0)]`` and zero beyond."""

    def __init__(self, boundary: Boundary):
        if not boundary.collapsing:
            raise SpecError("chronometric bridge needs a collapsing boundary")
        self.boundary = boundary
        self.v_max = float(boundary.b0)

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        inside = v <= self.v_max
        safe = np.where(inside, v, self.v_max if np.isfinite(self.v_max) else 1.0)
        with np.errstate(divide="ignore"):
            out = np.where(inside, np.asarray(self.boundary.inverse(safe), dtype=float), 0.0)
        return np.maximum(out, 0.0)

    def inverse(self, t):
        return self.boundary(np.asarray(t, dtype=float))

    def to_json(self):
        return {"family": "inverse_boundary", "boundary": self.boundary.to_json()}


class TableChronometric(ChronometricFunction):
    """Monotone piecewise-linear table in log-log space, zero beyond the last knot."""

    def __init__(self, v, t):
        v, t = np.asarray(v, dtype=float), np.asarray(t, dtype=float)
        order = np.argsort(v)
        v, t = v[order], t[order]
        if v.size < 2 or np.any(v <= 0) or np.any(t <= 0):
            raise SpecError("table needs at least two positive knots")
        if np.any(np.diff(v) <= 0) or np.any(np.diff(t) >= 0):
            raise SpecError("table must be strictly decreasing in v")
        self.v, self.t = v, t
        self.v_max = float(v[-1])
        self._lv, self._lt = np.log(v), np.log(t)
        # extrapolate the first segment's slope towards v -> 0 so r -> inf
        self._slope0 = (self._lt[1] - self._lt[0]) / (self._lv[1] - self._lv[0])

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        lv = np.log(np.maximum(v, 1e-300))
        out = np.exp(np.interp(lv, self._lv, self._lt))
        below = lv < self._lv[0]
        out = np.where(below, np.exp(self._lt[0] + self._slope0 * (lv - self._lv[0])), out)
        return np.where(v > self.v_max, 0.0, out)

    def inverse(self, t):
        t = np.asarray(t, dtype=float)
        lt = np.log(np.maximum(t, 1e-300))
        out = np.exp(np.interp(-lt, -self._lt, self._lv))
        above = lt > self._lt[0]
        out = np.where(above, np.exp(self._lv[0] + (lt - self._lt[0]) / self._slope0), out)
        return np.where(t <= 0, self.v_max, out)

    def to_json(self):
        return {"family": "table", "v": self.v.tolist(), "t": self.t.tolist()}


def chronometric_from_json(doc: dict) -> ChronometricFunction:
    fam = doc.get("family", "reciprocal")
    if fam == "reciprocal":
        return Reciprocal(float(doc.get("kappa", 1.0)))
    if fam == "inverse_boundary":
        return InverseBoundary(boundary_from_json(doc["boundary"]))
    if fam == "table":
        return TableChronometric(doc["v"], doc["t"])
    raise SpecError(f"unknown chronometric family {fam!r}")


def boundary_chronometric_bridge(boundary: Boundary) -> ChronometricFunction:
    """Chronometric function ``r = b^{-1}`` of a collapsing boundary."""
    if isinstance(boundary, ReciprocalBoundary):
        return Reciprocal(boundary.kappa)
    return InverseBoundary(boundary)


def chronometric_boundary_bridge(r: ChronometricFunction) -> Boundary:
    """Boundary ``b = r^{-1}``, the reverse direction of the bridge."""
    if isinstance(r, Reciprocal):
        return ReciprocalBoundary(r.kappa)
    if isinstance(r, InverseBoundary):
        return r.boundary
    return CustomBoundary(lambda t: r.inverse(t), validate=False)
