"""Groupoid views, axiom checking, and the auxiliary groupoids.

A *view* exposes units, range/source, partial composition, inversion and
a finite ``ball(size)`` window.  Views exist for the fundamental groupoid
of a graph, the pair groupoid, transformation groupoids of free-group
actions on finite sets, and the quotient ``G^x_x \\ (G^x x G^x)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Any, Hashable, NamedTuple, Sequence

from . import edgepath as ep
from .cover import Section, Transversal, isotropy_ball
from .edgepath import Arrow, NotComposable, OrientedEdge
from .graphspace import EmptyGraph, MultiGraph, rose, validate_graph
from .report import Check, Report


class IncompatibleAction(ValueError):
    pass


class BibundleInvalid(ValueError):
    pass


class GroupoidView:
    """Interface shared by every finite-window groupoid in this package."""

    name = "groupoid"

    def units(self) -> list:
        raise NotImplementedError

    def unit(self, x) -> Any:
        raise NotImplementedError

    def r(self, a) -> Hashable:
        raise NotImplementedError

    def s(self, a) -> Hashable:
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def ball(self, size: int) -> list:
        raise NotImplementedError

    def range_fiber(self, x, size: int) -> list:
        return [a for a in self.ball(size) if self.r(a) == x]

    def text(self, a) -> str:
        return a.text() if hasattr(a, "text") else repr(a)


class FundamentalGroupoid(GroupoidView):
    """``Pi_1`` of a graph; ``reduced=False`` is a broken variant for mutation tests."""

    name = "fundamental"

    def __init__(self, g: MultiGraph, reduced: bool = True):
        validate_graph(g)
        self.graph = g
        self.reduced = reduced
        self._balls: dict[int, list[Arrow]] = {}

    def units(self):
        return list(range(self.graph.vertices))

    def unit(self, x):
        return ep.unit(x)

    def r(self, a):
        return a.range

    def s(self, a):
        return a.source

    def compose(self, a, b):
        return ep.compose(a, b, reduced=self.reduced)

    def inverse(self, a):
        return ep.inverse(a)

    def ball(self, size):
        if size not in self._balls:
            self._balls[size] = ep.enumerate_ball(self.graph, size)
        return self._balls[size]


class PairGroupoid(GroupoidView):
    name = "pair"

    def __init__(self, points: Sequence[Hashable]):
        points = list(points)
        if not points:
            raise EmptyGraph("pair groupoid needs at least one point")
        self.points = points

    def units(self):
        return list(self.points)

    def unit(self, x):
        return (x, x)

    def r(self, a):
        return a[0]

    def s(self, a):
        return a[1]

    def compose(self, a, b):
        if a[1] != b[0]:
            raise NotComposable(f"{a} and {b} are not composable")
        return (a[0], b[1])

    def inverse(self, a):
        return (a[1], a[0])

    def ball(self, size=0):
        return [(x, y) for x in self.points for y in self.points]


def pair_groupoid(points) -> PairGroupoid:
    if isinstance(points, int):
        points = range(points)
    return PairGroupoid(points)


class FreeGroup:
    """Free group of the given rank, realised as loops on a rose graph."""

    def __init__(self, rank: int):
        self.rank = rank
        self.graph = rose(rank)

    def identity(self) -> Arrow:
        return ep.unit(0)

    def generator(self, i: int) -> Arrow:
        return Arrow(0, 0, (OrientedEdge(i, True),))

    def generators(self) -> list[Arrow]:
        return [self.generator(i) for i in range(self.rank)]

    def element(self, exponents: Sequence[tuple[int, int]]) -> Arrow:
        """Product ``g_{i1}^{k1} g_{i2}^{k2} ...`` from ``(i, k)`` pairs."""
        out = self.identity()
        for i, k in exponents:
            out = ep.compose(out, ep.power(self.generator(i), k))
        return out

    def mul(self, a: Arrow, b: Arrow) -> Arrow:
        return ep.compose(a, b)

    def inv(self, a: Arrow) -> Arrow:
        return ep.inverse(a)

    def ball(self, size: int) -> list[Arrow]:
        return ep.enumerate_ball(self.graph, size)


def integer(k: int) -> Arrow:
    """``k`` in the infinite cyclic group (rank-one free group)."""
    return ep.power(FreeGroup(1).generator(0), k)


def exponent_sum(word: Arrow) -> int:
    return sum(1 if seg.forward else -1 for seg in word.word)


@dataclass(frozen=True)
class GroupAction:
    """Right action of a free group on ``{0..size-1}`` given by generator permutations."""

    group: FreeGroup
    size: int
    generator_perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        perms = tuple(tuple(p) for p in self.generator_perms)
        object.__setattr__(self, "generator_perms", perms)
        if len(perms) != self.group.rank:
            raise IncompatibleAction(f"{len(perms)} permutations for rank {self.group.rank}")
        for p in perms:
            if sorted(p) != list(range(self.size)):
                raise IncompatibleAction(f"{p} is not a permutation of 0..{self.size - 1}")
        inv = []
        for p in perms:
            q = [0] * self.size
            for i, j in enumerate(p):
                q[j] = i
            inv.append(tuple(q))
        object.__setattr__(self, "_inverse_perms", tuple(inv))

    def act(self, point: int, g: Arrow) -> int:
        """``point . g``; the word is applied left to right so that ``x.(gt) = (x.g).t``."""
        for seg in g.word:
            table = self.generator_perms[seg.edge] if seg.forward else self._inverse_perms[seg.edge]
            point = table[point]
        return point

    def check_compatibility(self, size: int) -> Check:
        check = Check("action-compatibility")
        words = self.group.ball(size)
        for x in range(self.size):
            check.record(self.act(x, self.group.identity()) == x, f"identity moves {x}")
            for g, t in product(words, repeat=2):
                lhs = self.act(self.act(x, g), t)
                rhs = self.act(x, self.group.mul(g, t))
                check.record(lhs == rhs, f"({x}.{g.text()}).{t.text()} != {x}.({g.text()}{t.text()})")
        return check


def rotation_action(n: int) -> GroupAction:
    """The integers acting on ``Z/n`` by ``x . k = x + k``."""
    return GroupAction(FreeGroup(1), n, (tuple((i + 1) % n for i in range(n)),))


class TArrow(NamedTuple):
    point: int
    g: Arrow

    def text(self) -> str:
        return f"({self.point}, {self.g.text().split(': ')[1]})"


class TransformationGroupoid(GroupoidView):
    """``S x| Gamma``: arrows ``(x, g)`` with ``r = x``, ``s = x.g``."""

    name = "transformation"

    def __init__(self, action: GroupAction):
        self.action = action
        self._balls: dict[int, list[TArrow]] = {}

    def units(self):
        return list(range(self.action.size))

    def unit(self, x):
        return TArrow(x, self.action.group.identity())

    def r(self, a):
        return a.point

    def s(self, a):
        return self.action.act(a.point, a.g)

    def compose(self, a, b):
        if self.s(a) != b.point:
            raise NotComposable(f"{a.text()} and {b.text()} are not composable")
        return TArrow(a.point, self.action.group.mul(a.g, b.g))

    def inverse(self, a):
        return TArrow(self.s(a), self.action.group.inv(a.g))

    def ball(self, size):
        if size not in self._balls:
            words = self.action.group.ball(size)
            self._balls[size] = [TArrow(x, g) for x in self.units() for g in words]
        return self._balls[size]


def transformation_groupoid(action: GroupAction, check_size: int = 2) -> TransformationGroupoid:
    check = action.check_compatibility(check_size)
    if not check.ok:
        raise IncompatibleAction("; ".join(check.messages))
    return TransformationGroupoid(action)


def check_axioms(G: GroupoidView, size: int, name: str | None = None) -> Check:
    """Unit, inverse and associativity laws over every pair/triple in ``G.ball(size)``."""
    check = Check(name or f"axioms[{G.name}]")
    arrows = G.ball(size)
    by_range = defaultdict(list)
    for a in arrows:
        by_range[G.r(a)].append(a)
    text = G.text
    for a in arrows:
        ra, sa = G.r(a), G.s(a)
        check.record(G.compose(G.unit(ra), a) == a, f"left unit fails at {text(a)}")
        check.record(G.compose(a, G.unit(sa)) == a, f"right unit fails at {text(a)}")
        inv = G.inverse(a)
        check.record(G.r(inv) == sa and G.s(inv) == ra, f"inverse endpoints wrong at {text(a)}")
        check.record(G.compose(a, inv) == G.unit(ra), f"a a^-1 != r(a) at {text(a)}")
        check.record(G.compose(inv, a) == G.unit(sa), f"a^-1 a != s(a) at {text(a)}")
    for a in arrows:
        for b in by_range[G.s(a)]:
            ab = G.compose(a, b)
            check.record(G.r(ab) == G.r(a) and G.s(ab) == G.s(b),
                         f"endpoints of {text(a)}*{text(b)}")
            for c in by_range[G.s(b)]:
                lhs = G.compose(ab, c)
                rhs = G.compose(a, G.compose(b, c))
                check.record(lhs == rhs, f"associativity fails for {text(a)}, {text(b)}, {text(c)}")
    return check


@dataclass(frozen=True)
class EquivalenceBibundle:
    """``G^x`` as a ``G^x_x``-``G`` equivalence: deck action on the left,
    right multiplication by ``G`` on the right."""

    transversal: Transversal
    section: Section

    @property
    def base(self) -> int:
        return self.transversal.base

    def left_act(self, xi: Arrow, y: Arrow) -> Arrow:
        if not (xi.range == xi.source == self.base):
            raise NotComposable(f"{xi.text()} is not in the isotropy at {self.base}")
        return ep.compose(xi, y)

    def right_act(self, y: Arrow, gamma: Arrow) -> Arrow:
        return ep.compose(y, gamma)

    def kinetics(self, y: Arrow, gamma: Arrow) -> tuple[Arrow, Arrow]:
        """``(y, gamma) -> (y, y gamma)`` for the right action."""
        if y.source != gamma.range:
            raise NotComposable(f"s({y.text()}) != r({gamma.text()})")
        return (y, ep.compose(y, gamma))

    def kinetics_inverse(self, y: Arrow, z: Arrow) -> tuple[Arrow, Arrow]:
        if y.range != self.base or z.range != self.base:
            raise NotComposable("both arrows must end at the base point")
        return (y, ep.compose(ep.inverse(y), z))

    def p(self, y: Arrow, gamma: Arrow) -> Arrow:
        return gamma

    def q(self, y: Arrow, z: Arrow) -> Arrow:
        """``q(y, z) = y^-1 z``, the quotient map onto ``G``."""
        return ep.compose(ep.inverse(y), z)

    def validate(self, radius: int) -> Report:
        report = Report()
        ball = self.transversal.ball(radius)
        loops = isotropy_ball(self.transversal, radius)
        free = report.add(Check("bibundle-left-free"))
        for y in ball:
            images = {}
            for xi in loops:
                img = self.left_act(xi, y)
                free.record(img not in images, f"{xi.text()} and {images.get(img)} agree on {y.text()}")
                images[img] = xi.text()
        commute = report.add(Check("bibundle-actions-commute"))
        arrows = ep.enumerate_ball(self.transversal.graph, min(radius, 2))
        for y in ball:
            for gamma in arrows:
                if gamma.range != y.source:
                    continue
                for xi in loops[:8]:
                    lhs = self.right_act(self.left_act(xi, y), gamma)
                    rhs = self.left_act(xi, self.right_act(y, gamma))
                    commute.record(lhs == rhs, "actions do not commute")
        return report


def kinetics(b: EquivalenceBibundle):
    """The map ``(y, gamma) -> (y, y gamma)`` of the right action."""
    return b.kinetics


class QArrow(NamedTuple):
    first: Arrow
    second: Arrow

    def text(self) -> str:
        return f"[({self.first.text()}), ({self.second.text()})]"


class QuotientGroupoid(GroupoidView):
    """Orbit classes ``[(y, z)]`` of the diagonal deck action; canonical
    representatives have ``first == c_{s(y)}``."""

    name = "quotient"

    def __init__(self, b: EquivalenceBibundle):
        self.bundle = b
        self.section = b.section
        self._fg = FundamentalGroupoid(b.transversal.graph)

    def canonical(self, y: Arrow, z: Arrow) -> QArrow:
        c = self.section[y.source]
        xi = ep.compose(c, ep.inverse(y))
        return QArrow(c, ep.compose(xi, z))

    def units(self):
        return list(range(self.bundle.transversal.graph.vertices))

    def unit(self, u):
        c = self.section[u]
        return QArrow(c, c)

    def r(self, a):
        return a.first.source

    def s(self, a):
        return a.second.source

    def compose(self, a, b):
        if self.s(a) != self.r(b):
            raise NotComposable(f"{a.text()} and {b.text()} are not composable")
        # move b so that its first entry equals a.second, then [(y,z)][(z,w)] = [(y,w)]
        xi = ep.compose(a.second, ep.inverse(b.first))
        return self.canonical(a.first, ep.compose(xi, b.second))

    def inverse(self, a):
        return self.canonical(a.second, a.first)

    def to_groupoid(self, a: QArrow) -> Arrow:
        return self.bundle.q(a.first, a.second)

    def from_groupoid(self, gamma: Arrow) -> QArrow:
        c = self.section[gamma.range]
        return QArrow(c, ep.compose(c, gamma))

    def ball(self, size):
        return [self.from_groupoid(gamma) for gamma in self._fg.ball(size)]


def quotient_groupoid(b: EquivalenceBibundle, check_radius: int = 2) -> QuotientGroupoid:
    report = b.validate(check_radius)
    if not report.ok:
        raise BibundleInvalid("; ".join(m for c in report.checks for m in c.messages))
    return QuotientGroupoid(b)


def check_kinetic_square(b: EquivalenceBibundle, radius: int) -> Report:
    """``q o k = p`` and ``k^-1 o k = id``, ``k o k^-1 = id`` on balls."""
    report = Report()
    t = b.transversal
    ys = t.ball(radius)
    arrows = FundamentalGroupoid(t.graph).ball(radius)
    by_range = defaultdict(list)
    for gamma in arrows:
        by_range[gamma.range].append(gamma)
    qk = report.add(Check("square-q-k-equals-p"))
    kinv = report.add(Check("square-kinv-k-identity"))
    inj = report.add(Check("square-kinetics-injective"))
    for y in ys:
        seen = set()
        for gamma in by_range[y.source]:
            pair = b.kinetics(y, gamma)
            qk.record(b.q(*pair) == b.p(y, gamma), f"q(k({y.text()}, {gamma.text()})) != p")
            kinv.record(b.kinetics_inverse(*pair) == (y, gamma), f"k^-1 k fails at {gamma.text()}")
            inj.record(pair not in seen, f"kinetics not injective at {gamma.text()}")
            seen.add(pair)
    kk = report.add(Check("square-k-kinv-identity"))
    for y in ys:
        for z in ys:
            kk.record(b.kinetics(*b.kinetics_inverse(y, z)) == (y, z), f"k k^-1 fails at ({y.text()}, {z.text()})")
    return report


def check_quotient(Q: QuotientGroupoid, radius: int, orbit_radius: int = 2) -> Report:
    """Quotient classes correspond bijectively to arrows of ``Pi_1``."""
    report = Report()
    G = Q._fg
    arrows = G.ball(radius)
    bij = report.add(Check("quotient-bijection"))
    lifted = {}
    for gamma in arrows:
        a = Q.from_groupoid(gamma)
        bij.record(Q.to_groupoid(a) == gamma, f"q(lift({gamma.text()})) != itself")
        bij.record(Q.canonical(a.first, a.second) == a, f"lift of {gamma.text()} not canonical")
        bij.record(a not in lifted, f"{gamma.text()} and {lifted.get(a)} share a class")
        lifted[a] = gamma.text()
        bij.record(Q.r(a) == gamma.range and Q.s(a) == gamma.source, f"r/s mismatch at {gamma.text()}")
    hom = report.add(Check("quotient-respects-composition"))
    by_range = defaultdict(list)
    for gamma in arrows:
        by_range[gamma.range].append(gamma)
    for gamma in arrows:
        A = Q.from_groupoid(gamma)
        for eta in by_range[gamma.source]:
            prod = Q.compose(A, Q.from_groupoid(eta))
            hom.record(Q.to_groupoid(prod) == ep.compose(gamma, eta),
                       f"composition not respected at {gamma.text()}, {eta.text()}")
        hom.record(Q.to_groupoid(Q.inverse(A)) == ep.inverse(gamma), f"inverse not respected at {gamma.text()}")

    orbit = report.add(Check("quotient-orbit-classes"))
    t = Q.bundle.transversal
    ys = t.ball(orbit_radius)
    loops = isotropy_ball(t, orbit_radius)
    by_q = defaultdict(list)
    for y, z in product(ys, repeat=2):
        base_class = Q.canonical(y, z)
        for xi in loops:
            y2, z2 = Q.bundle.left_act(xi, y), Q.bundle.left_act(xi, z)
            orbit.record(Q.canonical(y2, z2) == base_class and Q.bundle.q(y2, z2) == Q.bundle.q(y, z),
                         f"translate by {xi.text()} changes the class of ({y.text()}, {z.text()})")
        by_q[Q.bundle.q(y, z)].append((y, z))
    for pairs in by_q.values():
        y0, z0 = pairs[0]
        for y, z in pairs[1:]:
            xi = ep.compose(y, ep.inverse(y0))
            orbit.record(xi.is_loop and xi.range == t.base and Q.bundle.left_act(xi, z0) == z,
                         f"same q but different orbits: ({y0.text()}, {z0.text()}) vs ({y.text()}, {z.text()})")
    return report
