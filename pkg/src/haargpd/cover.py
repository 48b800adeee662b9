"""The transversal ``G^x`` (arrows ending at ``x``) as the universal cover.

The covering map is the source map; ``pi_1(X, x)`` acts on ``G^x`` by
left multiplication (deck transformations).  Fibres are infinite as soon
as the graph has a cycle, so everything here works with an explicit
radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .edgepath import (Arrow, NotComposable, OrientedEdge, compose, compose_all,
                       extensions_at_source, inverse, segment, unit)
from .graphspace import GraphError, MultiGraph, SpanningTree, pi1_rank, spanning_tree, validate_graph


class BadBasePoint(GraphError):
    pass


@dataclass(frozen=True)
class Transversal:
    graph: MultiGraph
    base: int

    def covering_map(self, y: Arrow) -> int:
        return y.source

    def contains(self, y: Arrow) -> bool:
        return isinstance(y, Arrow) and y.range == self.base

    def ball(self, radius: int) -> list[Arrow]:
        """Reduced arrows ``u -> base`` of length at most ``radius``, sorted."""
        layer = [unit(self.base)]
        out = list(layer)
        for _ in range(radius):
            layer = [z for y in layer for z in extensions_at_source(self.graph, y)]
            out.extend(layer)
        out.sort(key=Arrow.sort_key)
        return out

    def fiber(self, u: int, radius: int) -> list[Arrow]:
        return [y for y in self.ball(radius) if y.source == u]


def transversal(g: MultiGraph, x: int) -> Transversal:
    validate_graph(g)
    if not (isinstance(x, int) and 0 <= x < g.vertices):
        raise BadBasePoint(f"base point {x!r} is not a vertex of a {g.vertices}-vertex graph")
    return Transversal(g, x)


@dataclass(frozen=True)
class Section:
    """One arrow ``c_u : u -> x`` per vertex ``u``."""

    transversal: Transversal
    tree: SpanningTree
    arrows: Mapping[int, Arrow]

    @property
    def base(self) -> int:
        return self.transversal.base

    @property
    def graph(self) -> MultiGraph:
        return self.transversal.graph

    def __getitem__(self, u: int) -> Arrow:
        return self.arrows[u]

    def __iter__(self):
        return iter(sorted(self.arrows))

    def members(self) -> list[Arrow]:
        return [self.arrows[u] for u in sorted(self.arrows)]

    def twisted(self, loops: Mapping[int, Arrow]) -> "Section":
        """Replace ``c_u`` by ``loop_u * c_u`` for the given isotropy loops."""
        arrows = dict(self.arrows)
        for u, loop in loops.items():
            if not (loop.source == loop.range == self.base):
                raise NotComposable(f"{loop.text()} is not a loop at {self.base}")
            arrows[u] = compose(loop, arrows[u])
        return Section(self.transversal, self.tree, arrows)


def section(t: Transversal, tree: SpanningTree | None = None) -> Section:
    """Tree geodesics from every vertex to the base point."""
    g = t.graph
    if tree is None:
        tree = spanning_tree(g, t.base)
    if tree.root != t.base:
        raise BadBasePoint(f"tree is rooted at {tree.root}, not at base {t.base}")
    arrows = {t.base: unit(t.base)}
    for v in tree.order[1:]:
        link = tree.parent[v]
        step = segment(g, OrientedEdge(link.edge, link.forward))
        arrows[v] = compose(arrows[link.parent], step)
    return Section(t, tree, arrows)


def pi1_generators(t: Transversal, tree: SpanningTree | None = None,
                   sec: Section | None = None) -> list[Arrow]:
    """One loop ``c_dst * e * c_src^-1`` at the base per non-tree edge ``e``."""
    if sec is None:
        sec = section(t, tree)
    g = t.graph
    gens = []
    for eid in sec.tree.non_tree_edges(g):
        e = g.edges[eid]
        gens.append(compose_all(sec[e.dst], segment(g, OrientedEdge(eid, True)), inverse(sec[e.src])))
    assert len(gens) == pi1_rank(g)
    return gens


def deck_act(rho: Arrow, y: Arrow) -> Arrow:
    if not rho.is_loop:
        raise NotComposable(f"{rho.text()} is not a loop")
    if y.range != rho.source:
        raise NotComposable(f"{y.text()} does not end at {rho.source}")
    return compose(rho, y)


def isotropy_ball(t: Transversal, radius: int) -> list[Arrow]:
    """Loops at the base point of length at most ``radius``."""
    return [y for y in t.ball(radius) if y.source == t.base]


def deck_element(y: Arrow, z: Arrow) -> Arrow:
    """The unique deck transformation taking ``z`` to ``y`` (same fibre)."""
    if y.source != z.source:
        raise NotComposable("arrows lie in different fibres")
    return compose(y, inverse(z))


def generators_with_inverses(gens: Iterable[Arrow]) -> list[Arrow]:
    out = []
    for g in gens:
        out.extend((g, inverse(g)))
    return out
