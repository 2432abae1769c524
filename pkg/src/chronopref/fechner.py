"""Revelation and prediction under Fechnerian random utility models.

In a Fechnerian model every pair shares one symmetric difference
distribution, shifted by the utility difference. Then ``p(x,z) >= p(y,z)``
reveals ``x`` over ``y``, and the ``1/(2 p(x,y))`` percentile ``theta(x,y)``
of the RT distribution of ``x`` equals ``r(v(x,y))``. That identity turns
response times into exact out-of-sample choice probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .data import ChoiceDataset
from .relations import Relation, asymmetric_part, transitive_closure
from .symmetric import PercentileUndefined, reveal_symmetric_pair
from .unrestricted import Provenance, RevelationEdge


class NotPredictable(ValueError):
    """No prediction can be formed for the requested pair and pivot."""


class Case(str, Enum):
    ABOVE = "case1"  # p(y,z) > 1/2
    TIE = "case2"  # p(y,z) = 1/2
    BELOW = "case3"  # p(y,z) < 1/2


@dataclass(frozen=True)
class ThetaStat:
    pair: tuple[str, str]
    theta: float
    target_alpha: float


def theta_percentile(dataset: ChoiceDataset, x: str, y: str) -> ThetaStat:
    """Smallest ``t`` with ``F(x,y)(t) >= 1/(2 p(x,y))``; needs ``p(x,y) > 1/2``."""
    p = dataset.prob(x, y)
    if not p > 0.5:
        raise PercentileUndefined(f"theta({x},{y}) needs p({x},{y}) > 1/2; got {p:.6g}")
    alpha = 1.0 / (2.0 * p)
    return ThetaStat((x, y), dataset.cdf(x, y).quantile(alpha), alpha)


def common_pivots(dataset: ChoiceDataset, x: str, y: str) -> list[str]:
    return [z for z in sorted(dataset.options) if z not in (x, y) and dataset.has(x, z) and dataset.has(y, z)]


@dataclass(frozen=True)
class PivotComparison:
    z: str
    p_xz: float
    p_yz: float


def reveal_fechner(
    dataset: ChoiceDataset, x: str, y: str, margin: float = 0.0
) -> tuple[RevelationEdge | None, list[PivotComparison]]:
    """Edge ``x -> y`` if ``p(x,z) >= p(y,z)`` for some pivot ``z``.

    Strict if ``p(x,z) > p(y,z)`` for some pivot. ``margin`` widens the weak
    test and narrows the strict one, as for the symmetric pair test.
    """
    comps = [PivotComparison(z, dataset.prob(x, z), dataset.prob(y, z)) for z in common_pivots(dataset, x, y)]
    weak = any(c.p_xz >= c.p_yz - margin for c in comps)
    if not weak:
        return None, comps
    strict = any(c.p_xz > c.p_yz + margin for c in comps)
    return RevelationEdge(x, y, strict, Provenance.PIVOT), comps


@dataclass(frozen=True)
class FechnerRelation:
    rs: Relation
    rf: Relation
    union: Relation
    closure: Relation
    strict_closure: Relation
    edges: list[RevelationEdge] = field(default_factory=list)


def build_fechner_relation(dataset: ChoiceDataset, margin: float = 0.0) -> FechnerRelation:
    """``R^s`` over observed pairs, ``R^f`` over unobserved pairs, and ``T(R^s u R^f)``."""
    rs_edges = [e for x, y in dataset.ordered_pairs() if (e := reveal_symmetric_pair(dataset, x, y, margin))]
    rf_edges = []
    for a, b in dataset.unobserved_pairs():
        for x, y in ((a, b), (b, a)):
            e, _ = reveal_fechner(dataset, x, y, margin)
            if e is not None:
                rf_edges.append(e)

    def rel(edges):
        return Relation.build(
            [(e.source, e.target) for e in edges], [(e.source, e.target) for e in edges if e.strict], dataset.options
        )

    rs, rf = rel(rs_edges).with_reflexive(), rel(rf_edges)
    union = rs.union(rf)
    closure = transitive_closure(union)
    return FechnerRelation(rs, rf, union, closure, asymmetric_part(closure), rs_edges + rf_edges)


@dataclass(frozen=True)
class PredictionResult:
    """Predicted ``p(x,y)`` through pivot ``z``.

    ``swapped`` means the formula was evaluated for ``(y, x)`` (so that the
    first option has the larger pivot probability) and ``p_bar`` is one
    minus that value. ``consistent`` is False when ``p_bar`` falls outside
    ``(0, 1)``, which no Fechnerian model can produce.
    """

    pair: tuple[str, str]
    pivot: str
    case: Case
    p_bar: float
    theta_used: float | None
    inputs: dict
    swapped: bool = False
    consistent: bool = True

    def to_json(self) -> dict:
        return {
            "x": self.pair[0],
            "y": self.pair[1],
            "pivot": self.pivot,
            "case": self.case.value,
            "p_bar": self.p_bar,
            "theta_used": self.theta_used,
            "inputs": dict(self.inputs),
            "swapped": self.swapped,
            "consistent": self.consistent,
        }


def default_tie_tol(dataset: ChoiceDataset, y: str, z: str) -> float:
    """``2/sqrt(n)`` for sampled data; exact comparison for analytic data."""
    n = dataset.n_trials(y, z)
    return 0.0 if n is None else 2.0 / math.sqrt(n)


def predict_probability(
    dataset: ChoiceDataset, x: str, y: str, z: str, tie_tol: float | None = None
) -> PredictionResult:
    """Predict ``p(x,y)`` from the observed pairs ``(x,z)`` and ``(y,z)``.

    With the options ordered so that ``p(x,z) >= p(y,z)``:

    * ``p(y,z) > 1/2``: ``p(x,z) F(x,z)(theta(y,z))``
    * ``p(y,z) = 1/2``: ``p(x,z)``
    * ``p(y,z) < 1/2``: ``1 - p(z,x) F(z,x)(theta(z,y))``

    ``p(y,z)`` within ``tie_tol`` of one half counts as a tie.
    """
    if x == y or z in (x, y):
        raise NotPredictable("x, y and the pivot must be distinct")
    for a in (x, y):
        if not dataset.has(a, z):
            raise NotPredictable(f"pair ({a}, {z}) not observed; {z} cannot serve as pivot")
    swapped = dataset.prob(x, z) < dataset.prob(y, z)
    a, b = (y, x) if swapped else (x, y)
    if tie_tol is None:
        tie_tol = default_tie_tol(dataset, b, z)
    p_az, p_bz = dataset.prob(a, z), dataset.prob(b, z)
    inputs = {f"p({a},{z})": p_az, f"p({b},{z})": p_bz}
    try:
        if p_bz > 0.5 + tie_tol:
            case = Case.ABOVE
            theta = theta_percentile(dataset, b, z).theta
            F_at = float(dataset.cdf(a, z)(theta))
            inputs[f"F({a},{z})(theta)"] = F_at
            inner = p_az * F_at
        elif p_bz >= 0.5 - tie_tol:
            case, theta = Case.TIE, None
            inner = p_az
        else:
            case = Case.BELOW
            theta = theta_percentile(dataset, z, b).theta
            p_za = dataset.prob(z, a)
            F_at = float(dataset.cdf(z, a)(theta))
            inputs[f"p({z},{a})"] = p_za
            inputs[f"F({z},{a})(theta)"] = F_at
            inner = 1.0 - p_za * F_at
    except PercentileUndefined as exc:
        raise NotPredictable(str(exc)) from None
    p_bar = 1.0 - inner if swapped else inner
    return PredictionResult((x, y), z, case, float(p_bar), theta, inputs, swapped, 0.0 < p_bar < 1.0)


@dataclass(frozen=True)
class PairPredictions:
    """Predictions for one unobserved pair, one per available pivot."""

    pair: tuple[str, str]
    predictions: list[PredictionResult]
    spread: float
    spread_tol: float

    @property
    def pivots_agree(self) -> bool:
        return self.spread <= self.spread_tol

    def to_json(self) -> dict:
        return {
            "x": self.pair[0],
            "y": self.pair[1],
            "predictions": [p.to_json() for p in self.predictions],
            "spread": self.spread,
            "spread_tol": self.spread_tol,
            "pivots_agree": self.pivots_agree,
        }


def predict_all(
    dataset: ChoiceDataset, tie_tol: float | None = None, spread_tol: float = 0.02
) -> dict[tuple[str, str], PairPredictions]:
    """Predict every unobserved pair through every usable pivot.

    The spread (max minus min prediction over pivots) is a falsification
    signal: under a Fechnerian model all pivots give the same value.
    """
    out = {}
    for x, y in dataset.unobserved_pairs():
        preds = []
        for z in common_pivots(dataset, x, y):
            try:
                preds.append(predict_probability(dataset, x, y, z, tie_tol))
            except NotPredictable:
                continue
        if preds:
            vals = [p.p_bar for p in preds]
            out[(x, y)] = PairPredictions((x, y), preds, max(vals) - min(vals), spread_tol)
    return out
