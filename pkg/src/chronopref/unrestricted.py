"""Assumption-free revelation from response times.

``x`` is revealed preferred to ``y`` when the RT distribution of choosing
``y`` is q-first-order dominated, ``F(y,x)(t) <= q F(x,y)(t)`` for all
``t`` with ``q = p(x,y)/p(y,x)``. Equivalently ``Q(x,y)(t) >= 1``, i.e. x
is more likely than y to have been chosen before every time t.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from ._numeric import dkw_epsilon
from .data import ChoiceDataset, EmpiricalCDF
from .relations import Relation, asymmetric_part, transitive_closure

ANALYTIC_MASS_FLOOR = 1e-12
# empirical margins are multiples of 1/n, so this only absorbs rounding
FLOAT_SLACK = 1e-12


class Provenance(str, Enum):
    QFSD = "q_fsd"  # q-dominance of response-time distributions
    DENSITY = "density_ratio"
    TRIANGULATION = "triangulation"  # percentiles against a third option
    CHOICE = "choice_probability"  # p(x,y) >= p(y,x) under symmetry
    PIVOT = "pivot"  # p(x,z) >= p(y,z) under the Fechner assumption
    CLOSURE = "closure"


@dataclass(frozen=True)
class RevelationEdge:
    source: str
    target: str
    strict: bool
    provenance: Provenance

    @property
    def strength(self) -> str:
        return "strict" if self.strict else "weak"


@dataclass(frozen=True)
class DominanceVerdict:
    holds: bool
    strict: bool
    q: float
    worst_margin: float
    witness_t: float
    best_margin: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def _checkpoints(G, H) -> np.ndarray:
    pts = np.union1d(G.checkpoints(), H.checkpoints())
    return pts[pts > 0]


def q_fsd(G, H, q: float, tol: float = 0.0, strict_tol: float | None = None) -> DominanceVerdict:
    """Test ``G(t) <= q * H(t) + tol`` for all t.

    For step CDFs it suffices to test at the jump points of ``G``: between
    them ``G`` is flat while ``q H`` can only increase. Jump points of ``H``
    are added so that strictness (``G < q H - strict_tol`` somewhere) is
    detected wherever the gap opens. ``strict_tol`` defaults to ``tol``.
    Analytic CDFs are checked on their dense log grid.
    """
    if not q > 0:
        raise ValueError("q must be positive")
    if strict_tol is None:
        strict_tol = tol
    t = _checkpoints(G, H)
    margin = q * np.asarray(H(t)) - np.asarray(G(t))
    i = int(np.argmin(margin))
    worst = float(margin[i])
    best = float(np.max(margin))
    # t -> infinity: both CDFs reach one, margin q - 1
    worst_inf = q - 1.0
    witness = float(t[i])
    if worst_inf < worst:
        worst, witness = worst_inf, float("inf")
    best = max(best, worst_inf)
    holds = worst >= -tol - FLOAT_SLACK
    strict = holds and best > strict_tol + FLOAT_SLACK
    return DominanceVerdict(holds, strict, float(q), worst, witness, best)


def sampling_tolerance(dataset: ChoiceDataset, x: str, y: str, alpha: float = 1e-3) -> float:
    """``2 * DKW(n, alpha)`` with ``n`` the smaller of the two RT sample sizes; 0 for analytic data."""
    n_x, n_y = dataset.count(x, y), dataset.count(y, x)
    if n_x is None or n_y is None:
        return 0.0
    return 2.0 * dkw_epsilon(min(n_x, n_y), alpha)


def resolve_tol(dataset: ChoiceDataset, x: str, y: str, tol) -> float:
    """Numeric tolerance, or ``"dkw"`` for :func:`sampling_tolerance`."""
    if isinstance(tol, str):
        if tol != "dkw":
            raise ValueError(f"tolerance must be a number or 'dkw', got {tol!r}")
        return sampling_tolerance(dataset, x, y)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return float(tol)


def reveal_unrestricted(
    dataset: ChoiceDataset, x: str, y: str, tol: float | str = 0.0, strict_tol: float | None = None
) -> tuple[RevelationEdge | None, DominanceVerdict]:
    """Edge ``x -> y`` if F(y,x) q-FSD F(x,y) for q = p(x,y)/p(y,x).

    ``tol`` may be ``"dkw"`` to use the sampling tolerance of the pair.
    """
    q = dataset.prob(x, y) / dataset.prob(y, x)
    tol = resolve_tol(dataset, x, y, tol)
    verdict = q_fsd(dataset.cdf(y, x), dataset.cdf(x, y), q, tol, strict_tol)
    if not verdict.holds:
        return None, verdict
    return RevelationEdge(x, y, verdict.strict, Provenance.QFSD), verdict


def q_ratio_curve(dataset: ChoiceDataset, x: str, y: str, grid) -> np.ndarray:
    """Q(x,y)(t) = p(x,y)F(x,y)(t) / (p(y,x)F(y,x)(t)) on ``grid``.

    Points where both terms vanish are NaN; a positive numerator over a
    zero denominator gives ``inf``.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("grid points must be positive")
    num = dataset.prob(x, y) * np.asarray(dataset.cdf(x, y)(grid))
    den = dataset.prob(y, x) * np.asarray(dataset.cdf(y, x)(grid))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    out = np.where((num == 0) & (den == 0), np.nan, out)
    out = np.where((num > 0) & (den == 0), np.inf, out)
    return out


@dataclass(frozen=True)
class DensityVerdict:
    status: str  # "holds" | "fails" | "inconclusive"
    strict: bool
    worst_ratio: float
    worst_bin: tuple[float, float]
    n_bins_checked: int
    n_bins_sparse: int

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_json(self) -> dict:
        d = asdict(self)
        d["worst_bin"] = list(self.worst_bin)
        return d


def density_ratio_check(
    dataset: ChoiceDataset,
    x: str,
    y: str,
    bins: int | np.ndarray = 32,
    min_count: int = 10,
    tol: float = 0.0,
) -> DensityVerdict:
    """Binned test of ``p(x,y) f(x,y)(t) >= p(y,x) f(y,x)(t)``.

    Empirical data use equal-count bins over the pooled RTs; the weighted
    density comparison in a bin reduces to comparing the two choice counts.
    A bin fails when ``mass_x / mass_y < 1 - tol``. Bins with fewer than
    ``min_count`` pooled observations are not judged; any such bin, or fewer
    than two judged bins, makes a non-failing verdict inconclusive.
    Analytic data compare exact bin masses on the CDF check grid (or the
    given edges) and have no sparse bins.
    """
    px, py = dataset.prob(x, y), dataset.prob(y, x)
    Fx, Fy = dataset.cdf(x, y), dataset.cdf(y, x)
    empirical = isinstance(Fx, EmpiricalCDF) and isinstance(Fy, EmpiricalCDF)
    if empirical:
        pooled = np.concatenate([Fx.samples, Fy.samples])
        if np.ndim(bins) == 0:
            edges = np.unique(np.quantile(pooled, np.linspace(0.0, 1.0, int(bins) + 1)))
        else:
            edges = np.asarray(bins, dtype=float)
        edges[0], edges[-1] = min(edges[0], pooled.min()), max(edges[-1], pooled.max())
        cx = np.histogram(Fx.samples, edges)[0].astype(float)
        cy = np.histogram(Fy.samples, edges)[0].astype(float)
        total = cx + cy
        judged = total >= min_count
        mass_x, mass_y = cx, cy
    else:
        if np.ndim(bins) == 0:
            edges = np.union1d(Fx.checkpoints(), Fy.checkpoints())
        else:
            edges = np.asarray(bins, dtype=float)
        mass_x = px * np.diff(np.asarray(Fx(edges)))
        mass_y = py * np.diff(np.asarray(Fy(edges)))
        # far-tail bins hold less mass than the CDFs resolve in floating point
        judged = (mass_x + mass_y) > ANALYTIC_MASS_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(mass_y > 0, mass_x / np.where(mass_y > 0, mass_y, 1.0), np.inf)
    n_sparse = int(np.sum(~judged & ((mass_x + mass_y) > 0))) if empirical else 0
    idx = np.flatnonzero(judged)
    if idx.size == 0:
        return DensityVerdict("inconclusive", False, float("nan"), (float("nan"), float("nan")), 0, n_sparse)
    k = idx[np.argmin(ratio[idx])]
    worst = float(ratio[k])
    worst_bin = (float(edges[k]), float(edges[k + 1]))
    if worst < 1.0 - tol:
        return DensityVerdict("fails", False, worst, worst_bin, int(idx.size), n_sparse)
    if idx.size < 2 or n_sparse > 0:
        return DensityVerdict("inconclusive", False, worst, worst_bin, int(idx.size), n_sparse)
    strict = bool(np.any(ratio[idx] > 1.0 + tol))
    return DensityVerdict("holds", strict, worst, worst_bin, int(idx.size), n_sparse)


@dataclass(frozen=True)
class RtRelation:
    relation: Relation
    closure: Relation
    strict_closure: Relation
    verdicts: dict[tuple[str, str], DominanceVerdict]
    edges: list[RevelationEdge]


def build_rt_relation(dataset: ChoiceDataset, tol: float | str = 0.0, strict_tol: float | None = None) -> RtRelation:
    """R^rt (q-FSD edges plus all reflexive pairs) with T(R^rt) and T_P(R^rt)."""
    weak, strict, edges, verdicts = set(), set(), [], {}
    for x, y in dataset.ordered_pairs():
        edge, verdict = reveal_unrestricted(dataset, x, y, tol, strict_tol)
        verdicts[(x, y)] = verdict
        if edge is not None:
            edges.append(edge)
            weak.add((x, y))
            if edge.strict:
                strict.add((x, y))
    weak.update((o, o) for o in dataset.options)
    rel = Relation.build(weak, strict, dataset.options)
    closure = transitive_closure(rel)
    return RtRelation(rel, closure, asymmetric_part(closure), verdicts, edges)
