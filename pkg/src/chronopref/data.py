"""Observable choice data: trials, per-pair statistics and response-time CDFs.

A dataset maps every observed unordered pair ``{x, y}`` to a choice
probability and two conditional response-time distributions, one for each
possible choice. Field data produce step CDFs (:class:`EmpiricalCDF`);
closed-form fixtures produce :class:`AnalyticCDF` objects. All analysis code
talks to both through the same small interface: ``cdf(t)``, ``quantile(alpha)``
and ``checkpoints()``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ._numeric import bisect_increasing

RT_FLOOR = 1e-9
TRIALS_HEADER = ("trial_id", "option_a", "option_b", "choice", "rt_seconds")


class DataError(ValueError):
    """Raised when trial data cannot be turned into a valid dataset."""


class PairNotObserved(KeyError):
    """Raised when a pair outside the observed set D is queried."""


def canonical(x: str, y: str) -> tuple[str, str]:
    return (x, y) if x <= y else (y, x)


@dataclass(frozen=True)
class TrialRecord:
    option_a: str
    option_b: str
    chosen: str
    rt: float
    trial_id: str = ""

    def __post_init__(self):
        if not self.option_a or not self.option_b:
            raise DataError("option ids must be non-empty")
        if self.option_a == self.option_b:
            raise DataError(f"pair options must differ, got {self.option_a!r} twice")
        if self.chosen not in (self.option_a, self.option_b):
            raise DataError(f"chosen option {self.chosen!r} not in pair ({self.option_a}, {self.option_b})")
        if not (self.rt > RT_FLOOR) or not math.isfinite(self.rt):
            raise DataError(f"response time must be positive and finite, got {self.rt!r}")

    @property
    def pair(self) -> tuple[str, str]:
        return canonical(self.option_a, self.option_b)


class EmpiricalCDF:
    """Right-continuous step CDF of a finite positive sample.

    ``quantile(alpha)`` is the smallest sample value ``t`` with
    ``F(t) >= alpha``, defined for ``alpha`` in ``(0, 1]``.
    """

    def __init__(self, samples: Iterable[float]):
        arr = np.sort(np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float))
        if arr.size == 0:
            raise DataError("empirical CDF needs at least one sample")
        if not np.all(arr > 0):
            raise DataError("response times must be positive")
        arr.setflags(write=False)
        self.samples = arr
        self._levels = np.arange(1, arr.size + 1, dtype=float) / arr.size

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.searchsorted(self.samples, t, side="right") / self.samples.size
        return out if out.ndim else float(out)

    def quantile(self, alpha: float) -> float:
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"quantile level must lie in (0, 1], got {alpha}")
        k = int(np.searchsorted(self._levels, alpha, side="left"))
        return float(self.samples[min(k, self.samples.size - 1)])

    def checkpoints(self) -> np.ndarray:
        return np.unique(self.samples)

    def support(self) -> tuple[float, float]:
        return float(self.samples[0]), float(self.samples[-1])


class AnalyticCDF:
    """Closed-form response-time CDF.

    Parameters
    ----------
    func : callable
        Vectorised, nondecreasing map from times ``t > 0`` to ``[0, 1]``.
    support : (float, float)
        Range containing essentially all of the mass; used to bracket
        quantiles and to lay out the dominance check grid.
    quantile_func : callable, optional
        Exact inverse, if known. Otherwise quantiles come from root finding.
    grid_size : int
        Number of log-spaced check points.
    """

    def __init__(
        self,
        func: Callable,
        support: tuple[float, float],
        quantile_func: Callable | None = None,
        grid_size: int = 10_000,
    ):
        self.func = func
        self._support = (float(support[0]), float(support[1]))
        self._quantile_func = quantile_func
        self.grid_size = grid_size

    n = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.clip(np.asarray(self.func(np.maximum(t, 0.0)), dtype=float), 0.0, 1.0)
        out = np.where(t <= 0, 0.0, out)
        return out if out.ndim else float(out)

    def support(self) -> tuple[float, float]:
        return self._support

    def quantile(self, alpha: float) -> float:
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"quantile level must lie in (0, 1], got {alpha}")
        if self._quantile_func is not None:
            return float(self._quantile_func(alpha))
        lo, hi = self._support
        lo = lo / 2.0
        while self(lo) >= alpha and lo > 1e-300:
            lo /= 10.0
        while self(hi) < alpha:
            hi *= 10.0
            if hi > 1e300:
                raise ValueError(f"quantile {alpha} not reached")
        return float(bisect_increasing(self, alpha, lo, hi))

    def quantiles(self, alphas) -> np.ndarray:
        lo, hi = self._support
        return bisect_increasing(self, np.asarray(alphas, dtype=float), lo * 1e-3, hi * 1e3)

    def checkpoints(self) -> np.ndarray:
        lo, hi = self._support
        return np.geomspace(lo * 1e-2, hi * 1e2, self.grid_size)


@dataclass(frozen=True)
class PairStats:
    """Counts and sorted response times for one observed pair ``(x, y)``."""

    x: str
    y: str
    n_x: int
    n_y: int
    rts_x: np.ndarray = field(repr=False)
    rts_y: np.ndarray = field(repr=False)

    @property
    def p_x(self) -> float:
        return self.n_x / (self.n_x + self.n_y)

    @property
    def n(self) -> int:
        return self.n_x + self.n_y

    def flipped(self) -> "PairStats":
        return PairStats(self.y, self.x, self.n_y, self.n_x, self.rts_y, self.rts_x)


@dataclass(frozen=True)
class _PairEntry:
    # stored in canonical orientation a <= b
    a: str
    b: str
    p_a: float
    cdf_a: object
    cdf_b: object
    n_a: int | None = None
    n_b: int | None = None


class ChoiceDataset:
    """Immutable stochastic choice data with response times.

    Both orientations of every stored pair belong to the observed set ``D``;
    all accessors accept either orientation.
    """

    def __init__(self, entries: Iterable[_PairEntry], options: Iterable[str] | None = None):
        self._entries: dict[tuple[str, str], _PairEntry] = {}
        opts = set(options or ())
        for e in entries:
            key = (e.a, e.b)
            if key in self._entries:
                raise DataError(f"duplicate pair {key}")
            if not 0.0 < e.p_a < 1.0:
                raise DataError(f"pair ({e.a}, {e.b}) has choice probability {e.p_a}; both options need positive probability")
            self._entries[key] = e
            opts.update(key)
        if not self._entries:
            raise DataError("no trials")
        self.options: frozenset[str] = frozenset(opts)

    # construction -----------------------------------------------------
    @classmethod
    def from_trials(cls, trials: Iterable[TrialRecord]) -> "ChoiceDataset":
        buckets: dict[tuple[str, str], dict[str, list[float]]] = {}
        for tr in trials:
            a, b = tr.pair
            slot = buckets.setdefault((a, b), {a: [], b: []})
            slot[tr.chosen].append(tr.rt)
        if not buckets:
            raise DataError("no trials")
        entries = []
        for (a, b), rts in sorted(buckets.items()):
            if not rts[a] or not rts[b]:
                missing = b if not rts[b] else a
                raise DataError(
                    f"pair ({a}, {b}) is one-directional: {missing!r} was never chosen, "
                    "so its choice probability would be zero"
                )
            na, nb = len(rts[a]), len(rts[b])
            entries.append(_PairEntry(a, b, na / (na + nb), EmpiricalCDF(rts[a]), EmpiricalCDF(rts[b]), na, nb))
        return cls(entries)

    @classmethod
    def from_analytic(cls, pairs: Mapping[tuple[str, str], tuple[float, AnalyticCDF, AnalyticCDF]]) -> "ChoiceDataset":
        """Build a dataset from exact distributions.

        ``pairs`` maps ``(x, y)`` to ``(p(x, y), F(x, y), F(y, x))``.
        """
        entries = []
        for (x, y), (p, fx, fy) in pairs.items():
            if (x, y) == canonical(x, y):
                entries.append(_PairEntry(x, y, float(p), fx, fy))
            else:
                entries.append(_PairEntry(y, x, 1.0 - float(p), fy, fx))
        return cls(entries)

    # queries ------------------------------------------------------------
    def _entry(self, x: str, y: str) -> tuple[_PairEntry, bool]:
        key = canonical(x, y)
        if x == y or key not in self._entries:
            raise PairNotObserved(f"pair ({x}, {y}) is not in the data")
        return self._entries[key], key[0] == x

    def has(self, x: str, y: str) -> bool:
        return x != y and canonical(x, y) in self._entries

    @property
    def is_analytic(self) -> bool:
        return any(e.n_a is None for e in self._entries.values())

    def pairs(self) -> list[tuple[str, str]]:
        """Observed unordered pairs in canonical, sorted order."""
        return sorted(self._entries)

    def ordered_pairs(self) -> list[tuple[str, str]]:
        out = []
        for a, b in self.pairs():
            out.extend([(a, b), (b, a)])
        return out

    def unobserved_pairs(self) -> list[tuple[str, str]]:
        """Canonical unordered pairs of distinct options without data."""
        opts = sorted(self.options)
        return [(a, b) for i, a in enumerate(opts) for b in opts[i + 1:] if (a, b) not in self._entries]

    def prob(self, x: str, y: str) -> float:
        e, fwd = self._entry(x, y)
        return e.p_a if fwd else 1.0 - e.p_a

    def cdf(self, x: str, y: str):
        """Response-time CDF conditional on ``x`` being chosen against ``y``."""
        e, fwd = self._entry(x, y)
        return e.cdf_a if fwd else e.cdf_b

    def count(self, x: str, y: str) -> int | None:
        e, fwd = self._entry(x, y)
        return e.n_a if fwd else e.n_b

    def n_trials(self, x: str, y: str) -> int | None:
        e, _ = self._entry(x, y)
        if e.n_a is None:
            return None
        return e.n_a + e.n_b

    def stats(self, x: str, y: str) -> PairStats:
        e, fwd = self._entry(x, y)
        if e.n_a is None:
            raise TypeError("analytic pairs carry no trial counts")
        st = PairStats(e.a, e.b, e.n_a, e.n_b, e.cdf_a.samples, e.cdf_b.samples)
        return st if fwd else st.flipped()

    def restrict(self, pairs: Iterable[tuple[str, str]]) -> "ChoiceDataset":
        """Sub-dataset holding only the listed pairs."""
        keep = {canonical(*p) for p in pairs}
        return ChoiceDataset([e for k, e in self._entries.items() if k in keep], options=self.options)


def empirical_cdf(samples: Sequence[float]) -> EmpiricalCDF:
    return EmpiricalCDF(samples)


def scf_probability(dataset: ChoiceDataset, x: str, y: str) -> float:
    return dataset.prob(x, y)


def load_trials(source) -> ChoiceDataset:
    """Parse a trials CSV (text or binary stream, or a path) into a dataset."""
    if isinstance(source, (str, bytes)) and not isinstance(source, io.IOBase):
        with open(source, "rb") as fh:
            return load_trials(fh)
    raw = source.read()
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    return ChoiceDataset.from_trials(parse_trials(text))


def parse_trials(text: str) -> list[TrialRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("no trials") from None
    header = [h.strip() for h in header]
    if tuple(header) != TRIALS_HEADER:
        raise DataError(f"line 1: expected header {','.join(TRIALS_HEADER)}, got {','.join(header)}")
    trials = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise DataError(f"line {lineno}: expected 5 fields, got {len(row)}")
        tid, a, b, choice, rt_s = (c.strip() for c in row)
        try:
            rt = float(rt_s)
        except ValueError:
            raise DataError(f"line {lineno}: rt_seconds {rt_s!r} is not a number") from None
        try:
            trials.append(TrialRecord(a, b, choice, rt, tid))
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
    if not trials:
        raise DataError("no trials")
    return trials


def emit_trials(trials: Iterable[TrialRecord], out=None) -> str:
    """Write trials in the CSV schema; returns the text (also written to ``out`` if given)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIALS_HEADER)
    for i, tr in enumerate(trials):
        w.writerow([tr.trial_id or str(i), tr.option_a, tr.option_b, tr.chosen, repr(float(tr.rt))])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def dataset_to_trials(dataset: ChoiceDataset) -> list[TrialRecord]:
    """Flatten an empirical dataset back to trial records (pair by pair, x-choices first)."""
    out = []
    for a, b in dataset.pairs():
        st = dataset.stats(a, b)
        for rt in st.rts_x:
            out.append(TrialRecord(a, b, a, float(rt), str(len(out))))
        for rt in st.rts_y:
            out.append(TrialRecord(a, b, b, float(rt), str(len(out))))
    return out
