import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chronopref.data import ChoiceDataset
from chronopref.generators import (
    BimodalFixture,
    ExponentialBoundary,
    HyperbolicBoundary,
    ReciprocalBoundary,
    RumCfSpec,
    analytic_cdfs,
    analytic_dataset,
    bimodal_dataset,
    sample_rum_cf,
    simulate_dataset,
)
from chronopref.rationalize import (
    UnsupportedData,
    check_necessary_rationalizability,
    construct_rum,
    construct_rum_cf_two_options,
    rum_spec,
)

from oracles import dkw


def sup_gap(a, b):
    """Sup-norm between two empirical CDFs over the pooled sample."""
    a, b = np.sort(a), np.sort(b)
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


# choice probabilities only ---------------------------------------------------

@settings(max_examples=100)
@given(st.floats(0.01, 0.99), st.floats(-3.0, 3.0))
def test_any_utility_rationalizes_any_probability(p, v):
    rum = construct_rum({("x", "y"): p}, {"x": v, "y": 0.0})
    ((key, c),) = rum.items()
    # stored orientation has nonnegative difference
    assert c.v >= 0
    assert c.mass == pytest.approx(1.0, abs=1e-10)
    assert c.mean == pytest.approx(c.v, abs=1e-10)
    assert float(c.G(0.0)) == pytest.approx(1.0 - c.p_xy, abs=1e-10)
    # orientation bookkeeping
    p_key = p if key == ("x", "y") else 1.0 - p
    assert c.p_xy == pytest.approx(p_key)
    # numerical mean of the tabulated family agrees with the exact formula
    assert c.family.mean == pytest.approx(c.v, abs=1e-10)


def test_construction_rejects_degenerate_probability():
    with pytest.raises(ValueError):
        construct_rum({("x", "y"): 1.0}, {"x": 0.0, "y": 0.0})


def test_constructed_rum_resimulates_choice_probabilities():
    scf = {("a", "b"): 0.3, ("b", "c"): 0.8, ("a", "c"): 0.55}
    u = {"a": 2.0, "b": 0.0, "c": 1.0}
    spec = rum_spec(construct_rum(scf, u), u)
    n = 50_000
    for (x, y), p in scf.items():
        sim = sample_rum_cf(spec, (x, y), n, seed=7)
        assert abs(sim.chose_x.mean() - p) < dkw(n)
        assert spec.true_difference(x, y) == pytest.approx(u[x] - u[y], abs=1e-10)


# single pair with response times --------------------------------------------

def test_fixture_with_reciprocal_boundary_recovers_its_generating_density():
    ds = bimodal_dataset()
    rum = construct_rum_cf_two_options(ds, ReciprocalBoundary(1.0))
    v = np.concatenate([np.linspace(-5, -0.01, 60), np.linspace(0.01, 5, 60)])
    np.testing.assert_allclose(rum.G(v), BimodalFixture.cdf(v), atol=1e-9)
    assert rum.G(0.0) == pytest.approx(0.25)
    assert rum.G(-1.0) == pytest.approx(1 / 64)
    assert rum.mean == pytest.approx(0.5, abs=1e-6)


def test_collapsing_boundary_construction_matches_branches():
    ds = bimodal_dataset()
    b = HyperbolicBoundary(1.0, 1.0)
    rum = construct_rum_cf_two_options(ds, b)
    t = np.array([0.2, 1.0, 3.0])
    np.testing.assert_allclose(rum.G(-b(t)), 0.25 * ds.cdf("y", "x")(t), atol=1e-12)
    np.testing.assert_allclose(rum.G(b(t)), 1.0 - 0.75 * ds.cdf("x", "y")(t), atol=1e-12)
    # all mass lies within the boundary's starting height
    assert rum.G(-1.0) == pytest.approx(0.0, abs=1e-12) and rum.G(1.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("boundary", [HyperbolicBoundary(1.0, 1.0), ExponentialBoundary(2.0, 1.0)])
def test_round_trip_reproduces_data(boundary):
    ds = bimodal_dataset()
    rum = construct_rum_cf_two_options(ds, boundary)
    n = 50_000
    sim = rum.simulate(n, seed=3)
    assert abs(sim.chose_x.mean() - 0.75) < dkw(n)
    fx, fy = ds.cdf("x", "y"), ds.cdf("y", "x")
    for rts, F in ((sim.rt[sim.chose_x], fx), (sim.rt[~sim.chose_x], fy)):
        s = np.sort(rts)
        i = np.arange(1, s.size + 1) / s.size
        assert np.max(np.abs(i - F(s))) < dkw(s.size)


def test_empirical_round_trip_and_tabulated_spec():
    spec = RumCfSpec(u={"x": 0.4, "y": 0.0})
    ds, sims = simulate_dataset(spec, [("x", "y")], 20_000, seed=2)
    rum = construct_rum_cf_two_options(ds)
    sim = rum.simulate(20_000, seed=9)
    orig = sims[0]
    assert sup_gap(sim.rt[sim.chose_x], orig.rt[orig.chose_x]) < 2 * dkw(orig.chose_x.sum())
    tab = rum.to_spec()
    re = sample_rum_cf(tab, ("x", "y"), 20_000, seed=4)
    assert abs(re.chose_x.mean() - ds.prob("x", "y")) < 2 * dkw(20_000)


def test_two_option_construction_needs_one_pair():
    ds = analytic_dataset(RumCfSpec(u={"a": 1.0, "b": 0.0, "c": 0.5}), [("a", "b"), ("b", "c")])
    with pytest.raises(UnsupportedData):
        construct_rum_cf_two_options(ds)


# necessary conditions ------------------------------------------------------------

def cyclic_dataset():
    pairs = {}
    for x, y in (("a", "b"), ("b", "c"), ("c", "a")):
        pairs[(x, y)] = analytic_cdfs(RumCfSpec(u={x: 0.5, y: 0.0}), (x, y))
    return ChoiceDataset.from_analytic(pairs)


@pytest.mark.parametrize("cls", ["unrestricted", "symmetric"])
def test_cycle_detected(cls):
    rep = check_necessary_rationalizability(cyclic_dataset(), cls)
    assert not rep.passed
    bad = [k for k, c in rep.checks.items() if c]
    assert bad
    w = rep.checks[bad[0]].witness
    assert w[0] == w[-1] and set(w) == {"a", "b", "c"}
    assert rep.to_json()["pass"] is False


@pytest.mark.parametrize("cls", ["unrestricted", "symmetric", "fechner"])
def test_consistent_data_passes(cls):
    spec = RumCfSpec(u={"a": 1.0, "b": 0.5, "c": 0.0, "d": 0.2})
    ds = analytic_dataset(spec, [("a", "b"), ("b", "c"), ("a", "d"), ("c", "d")])
    rep = check_necessary_rationalizability(ds, cls)
    assert rep.passed, rep.to_json()


def test_fechner_pivot_cycle():
    # pivots disagree about a vs b: a beats b via c, b beats a via d
    pairs = {}
    for x, y, v in (("a", "c", 0.8), ("b", "c", 0.2), ("a", "d", 0.1), ("b", "d", 0.9)):
        pairs[(x, y)] = analytic_cdfs(RumCfSpec(u={x: v, y: 0.0}), (x, y))
    ds = ChoiceDataset.from_analytic(pairs)
    rep = check_necessary_rationalizability(ds, "fechner")
    assert rep.checks["R_f"]
    assert not rep.passed


def test_unknown_class():
    with pytest.raises(ValueError):
        check_necessary_rationalizability(cyclic_dataset(), "probit")
