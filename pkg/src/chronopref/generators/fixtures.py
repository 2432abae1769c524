"""Closed-form fixtures used as golden test data.

``bimodal_dataset`` is a two-option SCF-RT whose response times pass the
q-FSD test for ``x`` over ``y`` while the density-ratio condition fails near
``t = 2``. ``crra_dataset`` is the random risk-aversion lottery choice in
which most of the probability goes to the option with the lower mean
utility.
"""

from __future__ import annotations

import json

import numpy as np

from ..data import AnalyticCDF, ChoiceDataset
from .chronometric import Reciprocal, SpecError
from .distributions import BimodalFixture, CrraLottery
from .rum import RumCfSpec, analytic_dataset

BIMODAL_P = 0.75
BIMODAL_SUPPORT = (1e-2, 1e2)


def bimodal_f_xy(t):
    """RT CDF when ``x`` is chosen: ``t^4/3`` below 1, then two hyperbolic pieces."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = 1.0 / 3.0 + (4.0 / 3.0) * (t - 1.0) / t ** 2
        top = 1.0 - (4.0 / 3.0) * (t - 1.0) / t ** 2
    out = np.select([t <= 0, t < 1.0, t < 2.0], [0.0, t ** 4 / 3.0, mid], top)
    return out if out.ndim else float(out)


def bimodal_f_yx(t):
    """RT CDF when ``y`` is chosen: ``t^4 / (1+t)^4``."""
    t = np.maximum(np.asarray(t, dtype=float), 0.0)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(t), 1.0, (t / (1.0 + t)) ** 4)
    return out if out.ndim else float(out)


def bimodal_q_xy(alpha: float) -> float:
    """Exact inverse of :func:`bimodal_f_xy` (smallest t with F(t) >= alpha)."""
    if alpha < 1.0 / 3.0:
        return (3.0 * alpha) ** 0.25
    if alpha < 2.0 / 3.0:
        # (4/3)(t-1)/t^2 = c' solved as t = 2/(1 + sqrt(1 - 4c)), c = (3 alpha - 1)/4
        c = (3.0 * alpha - 1.0) / 4.0
        return 2.0 / (1.0 + np.sqrt(1.0 - 4.0 * c))
    if alpha >= 1.0:
        return float("inf")
    c = 3.0 * (1.0 - alpha) / 4.0
    disc = 1.0 - 4.0 * c
    if abs(disc) < 1e-12:
        disc = 0.0
    return float((1.0 + np.sqrt(disc)) / (2.0 * c))


def bimodal_q_yx(alpha: float) -> float:
    if alpha >= 1.0:
        return float("inf")
    a = alpha ** 0.25
    return float(a / (1.0 - a))


def bimodal_dataset(x: str = "x", y: str = "y") -> ChoiceDataset:
    """Exact SCF-RT with ``p(x,y) = 3/4``."""
    fx = AnalyticCDF(bimodal_f_xy, BIMODAL_SUPPORT, quantile_func=bimodal_q_xy)
    fy = AnalyticCDF(bimodal_f_yx, BIMODAL_SUPPORT, quantile_func=bimodal_q_yx)
    return ChoiceDataset.from_analytic({(x, y): (BIMODAL_P, fx, fy)})


def bimodal_spec(x: str = "x", y: str = "y") -> RumCfSpec:
    """RUM-CF generating :func:`bimodal_dataset`: bimodal ``g`` and ``r(v) = 1/v``."""
    return RumCfSpec(
        u={x: 0.5, y: 0.0},
        r=Reciprocal(1.0),
        pair_diff={f"{x}|{y}": BimodalFixture()},
    )


def crra_spec(x: str = "x", y: str = "y", **params) -> RumCfSpec:
    """Lottery ``x`` against a sure payment ``y`` under random CRRA risk aversion."""
    fam = CrraLottery(**params)
    return RumCfSpec(u={x: fam.mean(), y: 0.0}, r=Reciprocal(1.0), pair_diff={f"{x}|{y}": fam})


def crra_dataset(x: str = "x", y: str = "y", **params) -> ChoiceDataset:
    return analytic_dataset(crra_spec(x, y, **params), [(x, y)])


def load_fixture(source) -> ChoiceDataset:
    """Analytic dataset from a fixture JSON document, string or path.

    Accepted documents: ``{"family": "bimodal_fixture"}``,
    ``{"family": "crra_lottery", ...lottery params}`` or a RUM-CF model spec
    with a ``"pairs"`` list.
    """
    if isinstance(source, (str, bytes)):
        text = source.decode() if isinstance(source, bytes) else source
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                doc = json.load(fh)
    else:
        doc = dict(source)
    x, y = doc.get("options", ["x", "y"])
    fam = doc.get("family")
    if fam == "bimodal_fixture":
        return bimodal_dataset(x, y)
    if fam == "crra_lottery":
        keys = ("alpha_lo", "alpha_hi", "prize", "prize_prob", "safe")
        return crra_dataset(x, y, **{k: float(doc[k]) for k in keys if k in doc})
    if doc.get("model") == "rum_cf":
        pairs = [tuple(p) for p in doc.get("pairs", [])]
        if not pairs:
            raise SpecError("analytic RUM-CF fixture needs a non-empty 'pairs' list")
        return analytic_dataset(RumCfSpec.from_json(doc), pairs)
    raise SpecError(f"unknown fixture {fam or doc.get('model')!r}")
