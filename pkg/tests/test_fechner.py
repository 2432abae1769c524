import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chronopref.fechner import (
    Case,
    NotPredictable,
    build_fechner_relation,
    common_pivots,
    default_tie_tol,
    predict_all,
    predict_probability,
    reveal_fechner,
    theta_percentile,
)
from chronopref.generators import Logistic, Normal, RumCfSpec, analytic_dataset, simulate_dataset
from chronopref.symmetric import PercentileUndefined
from chronopref.unrestricted import Provenance

from oracles import logit_p, probit_p


def star(u, hub="z", diff=None):
    spec = RumCfSpec(u=u, diff=diff or Logistic(1.0))
    return analytic_dataset(spec, [(o, hub) for o in sorted(u) if o != hub])


@pytest.mark.parametrize("v", [0.25, 1.0, 3.0])
def test_theta_equals_r_of_difference(v):
    ds = analytic_dataset(RumCfSpec(u={"x": v, "y": 0.0}), [("x", "y")])
    st_ = theta_percentile(ds, "x", "y")
    assert st_.theta == pytest.approx(1.0 / v, rel=1e-6)
    assert st_.target_alpha == pytest.approx(1.0 / (2.0 * logit_p(v)))


def test_theta_needs_majority():
    ds = analytic_dataset(RumCfSpec(u={"x": 0.0, "y": 0.4}), [("x", "y")])
    with pytest.raises(PercentileUndefined):
        theta_percentile(ds, "x", "y")


def test_pivot_reveal():
    ds = star({"x": 0.3, "y": 0.1, "z": 0.0})
    assert common_pivots(ds, "x", "y") == ["z"]
    e, comps = reveal_fechner(ds, "x", "y")
    assert e is not None and e.strict and e.provenance is Provenance.PIVOT
    assert comps[0].p_xz > comps[0].p_yz
    assert reveal_fechner(ds, "y", "x")[0] is None


def test_relation_contains_pivot_edges():
    ds = star({"x": 0.3, "y": 0.1, "z": 0.0})
    rel = build_fechner_relation(ds)
    assert ("x", "y") in rel.rf.strict
    assert ("x", "y") in rel.strict_closure
    assert all((o, o) in rel.rs for o in "xyz")


@pytest.mark.parametrize(
    "u, case",
    [
        ({"x": 1.0, "y": 0.5, "z": 0.0}, Case.ABOVE),
        ({"x": 1.0, "y": 0.0, "z": 0.0}, Case.TIE),
        ({"x": 0.5, "y": -0.5, "z": 0.0}, Case.BELOW),
    ],
)
def test_analytic_predictions_exact(u, case):
    ds = star(u)
    res = predict_probability(ds, "x", "y", "z")
    assert res.case is case
    assert res.p_bar == pytest.approx(logit_p(u["x"] - u["y"]), abs=1e-6)
    assert res.consistent and not res.swapped


def test_swapped_orientation_is_complement():
    ds = star({"x": 1.0, "y": 0.5, "z": 0.0})
    a = predict_probability(ds, "x", "y", "z")
    b = predict_probability(ds, "y", "x", "z")
    assert b.swapped
    assert b.p_bar == pytest.approx(1.0 - a.p_bar, abs=1e-12)


def test_not_predictable_without_pivot_pair():
    ds = analytic_dataset(RumCfSpec(u={"x": 1.0, "y": 0.0, "z": 0.5}), [("x", "z")])
    with pytest.raises(NotPredictable):
        predict_probability(ds, "x", "y", "z")
    with pytest.raises(NotPredictable):
        predict_probability(ds, "x", "x", "z")


def test_default_tie_tol():
    ds = star({"x": 1.0, "y": 0.0, "z": 0.0})
    assert default_tie_tol(ds, "y", "z") == 0.0
    sds, _ = simulate_dataset(RumCfSpec(u={"y": 0.0, "z": 0.0}), [("y", "z")], 10_000, seed=1)
    assert default_tie_tol(sds, "y", "z") == pytest.approx(0.02)


def test_pivots_agree_under_fechner_model():
    spec = RumCfSpec(u={"x": 1.0, "y": 0.2, "a": 0.0, "b": 0.6})
    ds = analytic_dataset(spec, [("x", "a"), ("y", "a"), ("x", "b"), ("y", "b")])
    preds = predict_all(ds)
    pp = preds[("x", "y")] if ("x", "y") in preds else preds[("y", "x")]
    assert len(pp.predictions) == 2
    assert pp.pivots_agree and pp.spread < 1e-6


def test_pivots_disagree_under_heteroskedastic_model():
    diff = Normal(1.0, pair_sigma={"a|x": 0.4, "b|y": 2.5})
    spec = RumCfSpec(u={"x": 1.0, "y": 0.2, "a": 0.0, "b": 0.6}, diff=diff)
    ds = analytic_dataset(spec, [("x", "a"), ("y", "a"), ("x", "b"), ("y", "b")])
    pp = next(iter(predict_all(ds).values()))
    assert not pp.pivots_agree and pp.spread > 0.02


@settings(max_examples=40)
@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.sampled_from(["logit", "probit"]))
def test_prediction_matches_closed_form(ux, uy, fam):
    diff, p = (Logistic(1.0), logit_p) if fam == "logit" else (Normal(1.0), probit_p)
    if abs(ux) < 1e-3 or abs(uy) < 1e-3:
        return
    ds = star({"x": ux, "y": uy, "z": 0.0}, diff=diff)
    res = predict_probability(ds, "x", "y", "z")
    assert res.p_bar == pytest.approx(p(ux - uy), abs=1e-5)
