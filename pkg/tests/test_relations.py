import json

from hypothesis import given
from hypothesis import strategies as st

from chronopref.relations import Relation, asymmetric_part, has_inconsistent_cycle, transitive_closure

from oracles import all_simple_cycles, asym, closure, strict_cycle_exists

NODES = ["a", "b", "c", "d", "e"]
edge = st.tuples(st.sampled_from(NODES), st.sampled_from(NODES))
edge_sets = st.sets(edge, max_size=14)


def rel(*edges, strict=()):
    return Relation.build(edges, strict)


def test_closure_chain():
    assert ("a", "c") in transitive_closure(rel(("a", "b"), ("b", "c")))


def test_closure_empty():
    assert transitive_closure(Relation()).weak == frozenset()


def test_closure_two_cycle_adds_loops():
    t = transitive_closure(rel(("a", "b"), ("b", "a")))
    assert {("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")} <= t.weak


def test_asymmetric_part_examples():
    assert asymmetric_part(rel(("a", "b"))).weak == {("a", "b")}
    assert asymmetric_part(rel(("a", "b"), ("b", "a"))).weak == frozenset()


def test_strict_part_of_closure_worked_example():
    t = transitive_closure(rel(("a", "b"), ("b", "c"), ("c", "b")))
    assert t.weak == {("a", "b"), ("a", "c"), ("b", "c"), ("c", "b"), ("b", "b"), ("c", "c")}
    assert asymmetric_part(t).weak == {("a", "b"), ("a", "c")}
    assert t.strict == {("a", "b"), ("a", "c")}


def test_cycle_all_strict():
    rep = has_inconsistent_cycle(rel(("a", "b"), ("b", "c"), ("c", "a"), strict=[("a", "b"), ("b", "c"), ("c", "a")]))
    assert rep
    assert rep.witness == ("a", "b", "c", "a")


def test_indifference_cycle_is_consistent():
    assert not has_inconsistent_cycle(rel(("a", "b"), ("b", "a")))


def test_strict_edge_with_weak_return_is_inconsistent():
    rep = has_inconsistent_cycle(rel(("a", "b"), ("b", "a"), strict=[("a", "b")]))
    assert rep and rep.witness == ("a", "b", "a")


def test_acyclic_order_is_consistent():
    r = rel(("a", "b"), ("b", "c"), ("a", "c"), ("a", "a"), strict=[("a", "b")])
    assert not has_inconsistent_cycle(r)


def test_json_round_trip():
    r = rel(("b", "a"), ("a", "c"), strict=[("a", "c")])
    doc = r.to_json()
    assert doc == {"weak": [["a", "c"], ["b", "a"]], "strict": [["a", "c"]]}
    assert Relation.from_json(json.dumps(doc)) == r


@given(edge_sets)
def test_closure_matches_warshall(edges):
    assert transitive_closure(Relation.build(edges)).weak == closure(edges)


@given(edge_sets)
def test_closure_idempotent_and_extensive(edges):
    r = Relation.build(edges)
    t = transitive_closure(r)
    assert r.weak <= t.weak
    assert transitive_closure(t).weak == t.weak


@given(edge_sets, edge_sets)
def test_closure_monotone(e1, e2):
    small = transitive_closure(Relation.build(e1)).weak
    big = transitive_closure(Relation.build(e1 | e2)).weak
    assert small <= big


@given(edge_sets)
def test_asymmetric_part_matches_enumeration(edges):
    assert asymmetric_part(Relation.build(edges)).weak == asym(edges)


@given(edge_sets)
def test_strict_closure_has_no_loops(edges):
    t = transitive_closure(Relation.build(edges))
    assert not any(a == b for a, b in asymmetric_part(t).weak)


@given(edge_sets, st.data())
def test_cycle_detection_matches_enumeration(edges, data):
    strict = data.draw(st.sets(st.sampled_from(sorted(edges)), max_size=len(edges))) if edges else set()
    r = Relation.build(edges, strict)
    rep = has_inconsistent_cycle(r)
    assert bool(rep) == strict_cycle_exists(set(edges), set(strict))
    if rep:
        w = rep.witness
        assert w[0] == w[-1]
        assert all((w[i], w[i + 1]) in r for i in range(len(w) - 1))
        hard = r.strict | asymmetric_part(r).weak
        assert any((w[i], w[i + 1]) in hard for i in range(len(w) - 1))


def test_oracle_enumerates_triangle():
    cyc = all_simple_cycles({("a", "b"), ("b", "c"), ("c", "a")}, "abc")
    assert cyc == [("a", "b", "c", "a")]
