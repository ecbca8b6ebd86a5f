"""Active-node election and the backbone graph over active nodes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .geometry import REL_TOL, Point, distance
from .partition import Partition, active_position

ACTIVE = "active"
SLEEPING = "sleeping"
DEAD = "dead"


@dataclass
class NodeState:
    id: int
    position: Point
    energy: float
    role: str = SLEEPING

    def __post_init__(self):
        if self.energy < 0:
            raise ValueError("energy must be non-negative")
        if self.energy == 0:
            self.role = DEAD

    @property
    def alive(self):
        return self.energy > 0


def elect_active(nodes_in_cell: Iterable[NodeState]):
    """Id of the alive node with the most energy (smallest id on ties), or None."""
    best = None
    for n in nodes_in_cell:
        if not n.alive:
            continue
        if best is None or n.energy > best.energy or (n.energy == best.energy and n.id < best.id):
            best = n
    return None if best is None else best.id


class UnionFind:
    """Disjoint sets over hashable keys, with path halving and union by size."""

    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def count(self):
        return sum(1 for x in self.parent if self.parent[x] == x)


@dataclass(frozen=True)
class Edge:
    a: tuple
    b: tuple
    length: float
    violation: bool


@dataclass
class BackboneGraph:
    vertices: dict  # cell id -> (node id, Point)
    edges: list
    radio_range: float
    component_count: int = field(default=0)

    @property
    def violations(self):
        return [e for e in self.edges if e.violation]

    @property
    def max_edge_length(self):
        return max((e.length for e in self.edges), default=0.0)

    def to_dict(self):
        return {
            "radio_range": self.radio_range,
            "vertices": [{"cell": list(c), "node": n, "position": [p.x, p.y]}
                         for c, (n, p) in self.vertices.items()],
            "edges": [{"cells": [list(e.a), list(e.b)], "length": e.length,
                       "violation": e.violation} for e in self.edges],
            "violations": len(self.violations),
            "component_count": self.component_count,
        }


def _components(vertices, edges):
    uf = UnionFind(vertices)
    for e in edges:
        if not e.violation:
            uf.union(e.a, e.b)
    return uf.count()


def build_backbone(partition: Partition, actives: Mapping, R: float) -> BackboneGraph:
    """Backbone over the partition's required links between non-empty cells.

    ``actives`` maps cell id to ``(node_id, Point)``; cells that are absent
    or map to ``None`` are empty. Links longer than ``R`` are kept and
    flagged as violations.
    """
    verts = {tuple(c): v for c, v in actives.items() if v is not None}
    edges = []
    for a, b in partition.adjacency:
        if a in verts and b in verts:
            length = distance(verts[a][1], verts[b][1])
            edges.append(Edge(a, b, length, length > R * (1 + REL_TOL)))
    g = BackboneGraph(verts, edges, R)
    g.component_count = _components(verts, edges)
    return g


def canonical_actives(partition: Partition, round: int = 0, cells=None) -> dict:
    """Every cell (or just ``cells``) with its reference active position; node id = -1."""
    ids = [c.id for c in partition.cells] if cells is None else cells
    return {cid: (-1, active_position(partition, cid, round)) for cid in ids}


def is_connected(graph: BackboneGraph) -> bool:
    return _components(graph.vertices, graph.edges) <= 1


def degree_histogram(graph: BackboneGraph) -> dict:
    deg = Counter({v: 0 for v in graph.vertices})
    for e in graph.edges:
        if not e.violation:
            deg[e.a] += 1
            deg[e.b] += 1
    return dict(sorted(Counter(deg.values()).items()))
