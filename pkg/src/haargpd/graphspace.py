"""Finite connected multigraphs as combinatorial models of a space.

A connected graph is path connected, locally path connected and
semilocally simply connected; its fundamental group is free of rank
``E - V + 1`` and its universal cover is a tree.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple


class GraphError(ValueError):
    """Base class for malformed graph input."""


class Disconnected(GraphError):
    pass


class DanglingEdge(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class Edge(NamedTuple):
    id: int
    src: int
    dst: int


@dataclass(frozen=True)
class MultiGraph:
    """Vertices ``0..vertices-1``; parallel edges and self-loops allowed."""

    vertices: int
    edges: tuple[Edge, ...] = ()
    _incident: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))

    @classmethod
    def from_pairs(cls, vertices: int, pairs: Iterable[tuple[int, int]]) -> "MultiGraph":
        return cls(vertices, tuple(Edge(i, a, b) for i, (a, b) in enumerate(pairs)))

    @classmethod
    def from_json(cls, data: dict) -> "MultiGraph":
        try:
            n = data["vertices"]
            edges = tuple(Edge(int(e["id"]), int(e["src"]), int(e["dst"])) for e in data["edges"])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"bad graph record: {exc}") from exc
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphError("'vertices' must be an integer")
        return cls(n, edges)

    @classmethod
    def load(cls, path: str | Path) -> "MultiGraph":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {"vertices": self.vertices,
                "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges]}

    def edge(self, eid: int) -> Edge:
        return self.edges[eid]

    def incident(self, v: int) -> list[int]:
        """Edge ids touching ``v``, ascending; a loop appears once."""
        if self._incident is None:
            table: dict[int, list[int]] = {u: [] for u in range(self.vertices)}
            for e in self.edges:
                table[e.src].append(e.id)
                if e.dst != e.src:
                    table[e.dst].append(e.id)
            object.__setattr__(self, "_incident", table)
        return self._incident[v]


def validate_graph(g: MultiGraph) -> None:
    if g.vertices <= 0:
        raise EmptyGraph("graph has no vertices")
    for i, e in enumerate(g.edges):
        if e.id != i:
            raise GraphError(f"edge ids must be dense and ascending; got {e.id} at position {i}")
        for v in (e.src, e.dst):
            if not 0 <= v < g.vertices:
                raise DanglingEdge(f"edge {e.id} references vertex {v} outside 0..{g.vertices - 1}")
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for eid in g.incident(u):
            e = g.edges[eid]
            w = e.dst if e.src == u else e.src
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != g.vertices:
        missing = sorted(set(range(g.vertices)) - seen)
        raise Disconnected(f"vertices {missing} unreachable from vertex 0")


class TreeLink(NamedTuple):
    parent: int
    edge: int
    forward: bool  # True when the edge points from the child to the parent


@dataclass(frozen=True)
class SpanningTree:
    root: int
    tree_edges: frozenset[int]
    parent: dict[int, TreeLink]
    order: tuple[int, ...]  # vertices in the order they were attached

    def non_tree_edges(self, g: MultiGraph) -> list[int]:
        return [e.id for e in g.edges if e.id not in self.tree_edges]


def spanning_tree(g: MultiGraph, root: int = 0) -> SpanningTree:
    """Grow a tree from ``root``, always attaching via the lowest-id frontier edge.

    On C3 rooted at v0 this yields ``{e0, e1}``; parallel edges resolve to
    the smaller id.
    """
    if not 0 <= root < g.vertices:
        raise GraphError(f"root {root} out of range")
    attached = {root}
    order = [root]
    parent: dict[int, TreeLink] = {}
    frontier: list[tuple[int, int]] = []  # (edge id, endpoint already in tree)

    def push(u: int) -> None:
        for eid in g.incident(u):
            heapq.heappush(frontier, (eid, u))

    push(root)
    while frontier:
        eid, u = heapq.heappop(frontier)
        e = g.edges[eid]
        w = e.dst if e.src == u else e.src
        if w in attached:
            continue
        attached.add(w)
        order.append(w)
        # child w reaches parent u forward iff the edge runs w -> u
        parent[w] = TreeLink(u, eid, e.src == w)
        push(w)
    return SpanningTree(root, frozenset(link.edge for link in parent.values()), parent, tuple(order))


def pi1_rank(g: MultiGraph) -> int:
    return len(g.edges) - g.vertices + 1


# Small named graphs used throughout tests and the CLI.

def rose(k: int) -> MultiGraph:
    return MultiGraph.from_pairs(1, [(0, 0)] * k)


def cycle(n: int) -> MultiGraph:
    return MultiGraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def doubled_edge() -> MultiGraph:
    return MultiGraph.from_pairs(2, [(0, 1), (0, 1)])


def path_graph(n: int) -> MultiGraph:
    return MultiGraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def random_connected_graph(rng, max_vertices: int = 5, max_edges: int = 7,
                           min_vertices: int = 1) -> MultiGraph:
    """Random connected multigraph: a random tree plus extra edges (loops allowed)."""
    n = rng.randint(min_vertices, max_vertices)
    pairs = []
    for v in range(1, n):
        u = rng.randrange(v)
        pairs.append((u, v) if rng.random() < 0.5 else (v, u))
    extra = rng.randint(0, max(0, max_edges - len(pairs)))
    for _ in range(extra):
        pairs.append((rng.randrange(n), rng.randrange(n)))
    return MultiGraph.from_pairs(n, pairs)
