"""Binary relations over options: closure, asymmetric part, inconsistent cycles."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

Edge = tuple[str, str]


@dataclass(frozen=True)
class Relation:
    """Weak relation ``weak`` plus edges explicitly tagged strict.

    Strict-tagged edges are always members of ``weak`` as well; the
    constructor adds them if the caller did not.
    """

    weak: frozenset[Edge] = frozenset()
    strict: frozenset[Edge] = frozenset()
    nodes: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        weak = frozenset(self.weak) | frozenset(self.strict)
        object.__setattr__(self, "weak", weak)
        object.__setattr__(self, "strict", frozenset(self.strict))
        nodes = set(self.nodes)
        for a, b in weak:
            nodes.update((a, b))
        object.__setattr__(self, "nodes", frozenset(nodes))

    @classmethod
    def build(cls, weak: Iterable[Edge] = (), strict: Iterable[Edge] = (), nodes: Iterable[str] = ()) -> "Relation":
        return cls(frozenset(weak), frozenset(strict), frozenset(nodes))

    def __contains__(self, edge: Edge) -> bool:
        return tuple(edge) in self.weak

    def union(self, other: "Relation") -> "Relation":
        return Relation(self.weak | other.weak, self.strict | other.strict, self.nodes | other.nodes)

    def with_reflexive(self) -> "Relation":
        return Relation(self.weak | {(x, x) for x in self.nodes}, self.strict, self.nodes)

    def to_json(self) -> dict:
        return {"weak": sorted([list(e) for e in self.weak]), "strict": sorted([list(e) for e in self.strict])}

    @classmethod
    def from_json(cls, doc: dict | str) -> "Relation":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls.build(map(tuple, doc.get("weak", [])), map(tuple, doc.get("strict", [])))


def transitive_closure(rel: Relation) -> Relation:
    """T(R): ``(x, y)`` whenever a chain of one or more R-edges links x to y.

    Self-pairs appear only if already in R or if x lies on a cycle. The
    strict part of the result is the asymmetric part of T(R).
    """
    g = nx.DiGraph()
    g.add_nodes_from(rel.nodes)
    g.add_edges_from(rel.weak)
    closed = nx.transitive_closure(g, reflexive=False)
    weak = frozenset(closed.edges()) | frozenset(e for e in rel.weak if e[0] == e[1])
    return Relation(weak, asymmetric_part(Relation(weak)).weak, rel.nodes)


def asymmetric_part(rel: Relation) -> Relation:
    """P: edges of R whose reverse is not in R."""
    p = frozenset((a, b) for a, b in rel.weak if (b, a) not in rel.weak)
    return Relation(p, p, rel.nodes)


def strict_edges(rel: Relation) -> frozenset[Edge]:
    """Explicitly strict edges together with the asymmetric part."""
    return rel.strict | asymmetric_part(rel).weak


@dataclass(frozen=True)
class CycleReport:
    inconsistent: bool
    witness: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.inconsistent


def has_inconsistent_cycle(rel: Relation) -> CycleReport:
    """Look for a closed walk through R that uses at least one strict edge.

    Pure indifference cycles are allowed. The witness lists the cycle's
    vertices with the first vertex repeated at the end, e.g. ``a, b, c, a``.
    """
    g = nx.DiGraph()
    g.add_nodes_from(rel.nodes)
    g.add_edges_from(rel.weak)
    best: tuple[str, ...] | None = None
    for a, b in sorted(strict_edges(rel)):
        if a == b:
            cyc = (a, a)
        elif nx.has_path(g, b, a):
            cyc = (a, *nx.shortest_path(g, b, a))
        else:
            continue
        if best is None or len(cyc) < len(best):
            best = cyc
    if best is None:
        return CycleReport(False)
    return CycleReport(True, best)
