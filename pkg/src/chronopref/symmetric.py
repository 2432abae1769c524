"""Revelation under symmetric random utility models.

If every difference distribution is symmetric about its mean, choosing
``x`` at least half of the time already reveals ``x`` over ``y``. Response
times add comparisons between pairs that were never offered together: the
``p(y,x)/p(x,y)`` percentile ``t(x,y)`` of the RT distribution of ``x``
equals ``r(2 v(x,y))``, so it orders utility differences against a shared
third option ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import ChoiceDataset
from .relations import Relation, asymmetric_part, transitive_closure
from .unrestricted import Provenance, RevelationEdge


class PercentileUndefined(ValueError):
    """The percentile statistic does not exist for this orientation."""


@dataclass(frozen=True)
class PercentileStat:
    pair: tuple[str, str]
    t_xy: float
    target_alpha: float


def reveal_symmetric_pair(dataset: ChoiceDataset, x: str, y: str, margin: float = 0.0) -> RevelationEdge | None:
    """Edge ``x -> y`` when ``p(x,y) >= p(y,x)``.

    With ``margin > 0`` the weak test becomes ``p(x,y) >= p(y,x) - margin``
    and the strict test ``p(x,y) > p(y,x) + margin``, so near-even pairs read
    as indifference rather than as a strict edge one way.
    """
    pxy, pyx = dataset.prob(x, y), dataset.prob(y, x)
    if pxy < pyx - margin:
        return None
    return RevelationEdge(x, y, pxy > pyx + margin, Provenance.CHOICE)


def t_percentile(dataset: ChoiceDataset, x: str, y: str) -> PercentileStat:
    """Smallest ``t`` with ``F(x,y)(t) >= p(y,x)/p(x,y)``; needs ``p(x,y) > p(y,x)``."""
    pxy, pyx = dataset.prob(x, y), dataset.prob(y, x)
    if not pxy > pyx:
        raise PercentileUndefined(f"t({x},{y}) needs p({x},{y}) > p({y},{x}); got {pxy:.6g} vs {pyx:.6g}")
    alpha = pyx / pxy
    return PercentileStat((x, y), dataset.cdf(x, y).quantile(alpha), alpha)


def _try_t(dataset, a, b):
    try:
        return t_percentile(dataset, a, b).t_xy, None
    except PercentileUndefined as exc:
        return None, str(exc)


@dataclass(frozen=True)
class Triangulation:
    """Percentiles consulted when comparing ``x`` and ``y`` through ``z``.

    ``t_xz``/``t_yz`` feed the test ``t(x,z) <= t(y,z)``; ``t_zx``/``t_zy``
    feed ``t(z,x) >= t(z,y)``. Missing values are ``None`` with a reason.
    """

    x: str
    y: str
    z: str
    t_xz: float | None = None
    t_yz: float | None = None
    t_zx: float | None = None
    t_zy: float | None = None
    branch: str | None = None
    reasons: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "t_xz": self.t_xz,
            "t_yz": self.t_yz,
            "t_zx": self.t_zx,
            "t_zy": self.t_zy,
            "branch": self.branch,
            "reasons": list(self.reasons),
        }


def reveal_triangulate(
    dataset: ChoiceDataset, x: str, y: str, z: str, margin: float = 0.0
) -> tuple[RevelationEdge | None, Triangulation]:
    """Edge ``x -> y`` if ``t(x,z) <= t(y,z)`` or ``t(z,x) >= t(z,y)``.

    Strict when the inequality that fired holds strictly. ``margin`` widens
    the weak test and narrows the strict one by the same amount of seconds.
    """
    for a, b in ((x, z), (y, z)):
        if not dataset.has(a, b):
            reason = f"pair ({a}, {b}) not observed"
            return None, Triangulation(x, y, z, reasons=(reason,))
    t_xz, r1 = _try_t(dataset, x, z)
    t_yz, r2 = _try_t(dataset, y, z)
    t_zx, r3 = _try_t(dataset, z, x)
    t_zy, r4 = _try_t(dataset, z, y)
    reasons = tuple(r for r in (r1, r2, r3, r4) if r)
    out_weak = t_xz is not None and t_yz is not None and t_xz <= t_yz + margin
    in_weak = t_zx is not None and t_zy is not None and t_zx >= t_zy - margin
    strict = (out_weak and t_xz < t_yz - margin) or (in_weak and t_zx > t_zy + margin)
    branch = {(True, True): "both", (True, False): "out", (False, True): "in"}.get((out_weak, in_weak))
    tri = Triangulation(x, y, z, t_xz, t_yz, t_zx, t_zy, branch, reasons)
    if branch is None:
        return None, tri
    return RevelationEdge(x, y, strict, Provenance.TRIANGULATION), tri


@dataclass(frozen=True)
class SymmetricRelation:
    """``R^s`` (observed pairs), ``R^srt`` (triangulated pairs) and the closure of their union."""

    rs: Relation
    rsrt: Relation
    union: Relation
    closure: Relation
    strict_closure: Relation
    edges: list[RevelationEdge] = field(default_factory=list)
    witnesses: list[tuple[RevelationEdge, Triangulation]] = field(default_factory=list)


def _relation(edges, nodes) -> Relation:
    return Relation.build(
        [(e.source, e.target) for e in edges],
        [(e.source, e.target) for e in edges if e.strict],
        nodes,
    )


def build_symmetric_relation(dataset: ChoiceDataset, margin: float = 0.0, t_margin: float = 0.0) -> SymmetricRelation:
    """Collect ``R^s`` over observed pairs and ``R^srt`` over unobserved pairs.

    Every third option ``z`` with both needed pairs observed is tried;
    conflicting verdicts from different ``z`` are all kept so that cycle
    diagnostics can flag them.
    """
    pair_edges = []
    for x, y in dataset.ordered_pairs():
        e = reveal_symmetric_pair(dataset, x, y, margin)
        if e is not None:
            pair_edges.append(e)
    tri_edges, witnesses = [], []
    opts = sorted(dataset.options)
    for a, b in dataset.unobserved_pairs():
        for x, y in ((a, b), (b, a)):
            for z in opts:
                if z in (x, y) or not (dataset.has(x, z) and dataset.has(y, z)):
                    continue
                e, tri = reveal_triangulate(dataset, x, y, z, t_margin)
                if e is not None:
                    tri_edges.append(e)
                    witnesses.append((e, tri))
    rs = _relation(pair_edges, dataset.options).with_reflexive()
    rsrt = _relation(tri_edges, dataset.options)
    union = rs.union(rsrt)
    closure = transitive_closure(union)
    return SymmetricRelation(rs, rsrt, union, closure, asymmetric_part(closure), pair_edges + tri_edges, witnesses)


def predict_sign_out_of_sample(
    dataset: ChoiceDataset, x: str, y: str, relation: SymmetricRelation | None = None, **kwargs
) -> str:
    """Predicted ordering of ``p(x,y)`` and ``1/2`` for a pair without data.

    Returns ``"x_over_y"`` (``p(x,y) > 1/2``), ``"y_over_x"``,
    ``"indifferent"`` (``p(x,y) = 1/2``) or ``"unknown"``.
    """
    rel = relation if relation is not None else build_symmetric_relation(dataset, **kwargs)
    if (x, y) in rel.strict_closure:
        return "x_over_y"
    if (y, x) in rel.strict_closure:
        return "y_over_x"
    if (x, y) in rel.closure and (y, x) in rel.closure:
        return "indifferent"
    return "unknown"
