"""Haar systems on the fundamental groupoid of a graph, and their checks.

Three constructions produce the same system from a positive vertex
measure ``nu``: the double sum over vertices and covering fibres, the
translates ``l_{c_w^-1} lambda`` of an invariant measure ``lambda`` on the
transversal, and the closed form ``weight(gamma) = nu(s(gamma))`` used as
the oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from . import edgepath as ep
from .cover import Section, Transversal, generators_with_inverses, pi1_generators, section, transversal
from .edgepath import Arrow, OrientedEdge
from .gpdcore import (FundamentalGroupoid, GroupoidView, PairGroupoid, TArrow, TransformationGroupoid,
                      exponent_sum, integer, rotation_action, transformation_groupoid)
from .graphspace import MultiGraph, cycle
from .measures import (DiscreteMeasure, FinSupp, MeasureError, NotFullySupported, RangeFiber,
                       compose_family, counting_family, require_full_support, translate_measure,
                       uniform_vertex_measure)
from .report import Check, Report
from .scalars import Gauss

DEFAULT_RADIUS = 4


class NotInvariant(MeasureError):
    pass


@dataclass(frozen=True)
class ViewFiber:
    """Arrows of ``view`` with range ``unit``."""

    view: GroupoidView
    unit: Hashable

    def __contains__(self, a) -> bool:
        try:
            return self.view.r(a) == self.unit
        except (AttributeError, TypeError, IndexError):
            return False


@dataclass
class HaarSystem:
    groupoid: GroupoidView
    measure_at: Callable[[Hashable], DiscreteMeasure]
    provenance: str
    nu: DiscreteMeasure | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, unit) -> DiscreteMeasure:
        if unit not in self._cache:
            self._cache[unit] = self.measure_at(unit)
        return self._cache[unit]

    def weight(self, a) -> Fraction:
        return self[self.groupoid.r(a)].weight(a)

    def integrate(self, unit, f: FinSupp) -> Gauss:
        return self[unit].integrate(f)

    def ball_weights(self, radius: int) -> list[tuple]:
        return [(a, self.weight(a)) for a in self.groupoid.ball(radius)]


def haar_from_base_measure(nu: DiscreteMeasure, t: Transversal, sec: Section | None = None) -> HaarSystem:
    """``lambda^w(f) = sum_u nu(u) sum_{gamma in G^x_u} f(eta^-1 gamma)`` with ``eta = c_w``.

    For a point mass at ``delta`` only ``gamma = eta delta`` contributes, so
    the double sum is finite.
    """
    g = t.graph
    require_full_support(nu, g.vertices)
    if sec is None:
        sec = section(t)
    mu = counting_family(t)
    fibres = [(mu[u], nu.weight(u)) for u in nu.points]

    def measure_at(w: int) -> DiscreteMeasure:
        eta = sec[w]

        def weight(delta: Arrow) -> Fraction:
            point = FinSupp.indicator([ep.compose(eta, delta)])
            total = Gauss()
            for count, mass in fibres:
                total = total + count.integrate(point) * mass
            return total.re

        return DiscreteMeasure(weight, RangeFiber(w), full_support=True, label=f"lambda_G^{w}")

    return HaarSystem(FundamentalGroupoid(g), measure_at, "from_base_measure", nu)


def check_deck_invariance(lam: DiscreteMeasure, t: Transversal, loops: Sequence[Arrow], radius: int) -> Check:
    check = Check("deck-invariance")
    ball = t.ball(radius)
    for rho in loops:
        for y in ball:
            check.record(lam.weight(ep.compose(rho, y)) == lam.weight(y),
                         f"lambda({rho.text()} . {y.text()}) != lambda({y.text()})")
    return check


def haar_from_transversal(lam: DiscreteMeasure, sec: Section, radius: int = DEFAULT_RADIUS) -> HaarSystem:
    """``lambda_G^w = l_{c_w^-1} lambda`` for a deck-invariant ``lambda`` on ``G^x``."""
    t = sec.transversal
    ball = t.ball(radius)
    bad = [y for y in ball if not lam.weight(y) > 0]
    if bad:
        raise NotFullySupported(f"lambda vanishes at {bad[0].text()}")
    loops = generators_with_inverses(pi1_generators(t, sec=sec))
    check = check_deck_invariance(lam, t, loops, radius)
    if not check.ok:
        raise NotInvariant(check.messages[0])

    def measure_at(w: int) -> DiscreteMeasure:
        return translate_measure(sec[w], lam)

    return HaarSystem(FundamentalGroupoid(t.graph), measure_at, "from_transversal")


def direct_weight_oracle(nu: DiscreteMeasure, g: MultiGraph) -> HaarSystem:
    """Closed form: every arrow weighs ``nu`` of its source."""
    require_full_support(nu, g.vertices)

    def measure_at(w: int) -> DiscreteMeasure:
        return DiscreteMeasure(lambda a: nu.weight(a.source), RangeFiber(w), full_support=True)

    return HaarSystem(FundamentalGroupoid(g), measure_at, "direct_oracle", nu)


def transversal_from_haar(h: HaarSystem, x: int) -> DiscreteMeasure:
    return h[x]


def transformation_haar(tg: TransformationGroupoid) -> HaarSystem:
    """``delta_x x counting`` on the discrete group."""

    def measure_at(x: int) -> DiscreteMeasure:
        return DiscreteMeasure(lambda a, x=x: Fraction(1) if a.point == x else Fraction(0),
                               ViewFiber(tg, x), full_support=True)

    return HaarSystem(tg, measure_at, "transformation")


def pair_haar(pg: PairGroupoid, lam: DiscreteMeasure) -> HaarSystem:
    """``delta_x x lam`` on the pair groupoid: ``(x, y)`` weighs ``lam(y)``."""

    def measure_at(x) -> DiscreteMeasure:
        return DiscreteMeasure(lambda a, x=x: lam.weight(a[1]) if a[0] == x else Fraction(0),
                               ViewFiber(pg, x), full_support=lam.full_support)

    return HaarSystem(pg, measure_at, "pair")


def mutate_system(h: HaarSystem, target, factor: Fraction) -> HaarSystem:
    """Copy of ``h`` with the weight of one arrow multiplied by ``factor``."""
    G = h.groupoid

    def measure_at(unit) -> DiscreteMeasure:
        base = h[unit]
        if G.r(target) != unit:
            return base
        return DiscreteMeasure(lambda a: base.weight(a) * factor if a == target else base.weight(a),
                               base.ambient, label=f"mutated {base.label}")

    return HaarSystem(G, measure_at, h.provenance + "+mutated", h.nu)


def _random_coefficient(rng: random.Random) -> Gauss:
    return Gauss(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))


def verify_haar(h: HaarSystem, radius: int = DEFAULT_RADIUS, trials: int = 200,
                rng: random.Random | None = None, prefix: str = "haar") -> Report:
    """Full support on the ball and left invariance
    ``lambda^{s(xi)}(f o l_xi) == lambda^{r(xi)}(f)``, exactly."""
    rng = rng or random.Random(0)
    G = h.groupoid
    report = Report()
    ball = G.ball(radius)
    by_range: dict = {}
    for a in ball:
        by_range.setdefault(G.r(a), []).append(a)
    text = G.text

    support = report.add(Check(f"{prefix}-support"))
    for a in ball:
        support.record(h.weight(a) > 0, f"zero weight at {text(a)}")

    def invariant(xi, f: FinSupp) -> bool:
        xi_inv = G.inverse(xi)
        pulled = f.map_keys(lambda a: G.compose(xi_inv, a))  # eta -> f(xi eta) lives on xi^-1 supp f
        return h.integrate(G.s(xi), pulled) == h.integrate(G.r(xi), f)

    pointwise = report.add(Check(f"{prefix}-invariance-pointwise"))
    translators = [a for a in G.ball(min(radius, 1)) if a != G.unit(G.r(a))]
    for xi in translators:
        for a in by_range.get(G.r(xi), []):
            pointwise.record(invariant(xi, FinSupp.indicator([a])), f"invariance fails for xi={text(xi)} at {text(a)}")

    sampled = report.add(Check(f"{prefix}-invariance-random"))
    for _ in range(trials):
        xi = rng.choice(ball)
        fibre = by_range[G.r(xi)]
        picks = rng.sample(fibre, min(len(fibre), rng.randint(1, 4)))
        f = FinSupp({a: _random_coefficient(rng) for a in picks})
        sampled.record(invariant(xi, f), f"invariance fails for xi={text(xi)}")
    return report


def compare_systems(h1: HaarSystem, h2: HaarSystem, radius: int, name: str) -> Check:
    check = Check(name)
    G = h1.groupoid
    for a in G.ball(radius):
        w1, w2 = h1.weight(a), h2.weight(a)
        check.record(w1 == w2, f"{G.text(a)}: {w1} != {w2}")
    return check


def verify_section_independence(nu: DiscreteMeasure, t: Transversal, sections: Sequence[Section],
                                radius: int = DEFAULT_RADIUS) -> Report:
    report = Report()
    systems = [haar_from_base_measure(nu, t, sec) for sec in sections]
    for i, other in enumerate(systems[1:], start=1):
        report.add(compare_systems(systems[0], other, radius, f"section-independence[{i}]"))
    return report


# -- the cycle graph as a group ------------------------------------------------

def displacement(gamma: Arrow) -> int:
    return exponent_sum(gamma)


def cycle_to_transformation(gamma: Arrow) -> TArrow:
    """``Pi_1(C_n) -> Z/n x| Z``: ``gamma -> (r(gamma), -winding)``."""
    return TArrow(gamma.range, integer(-displacement(gamma)))


def transformation_to_cycle(g: MultiGraph, a: TArrow) -> Arrow:
    n = g.vertices
    d = -exponent_sum(a.g)
    start = (a.point - d) % n
    raw = []
    here = start
    for _ in range(abs(d)):
        if d > 0:
            raw.append(OrientedEdge(here, True))
            here = (here + 1) % n
        else:
            here = (here - 1) % n
            raw.append(OrientedEdge(here, False))
    return ep.reduce(g, raw[::-1], start)


def verify_group_case(n: int, nu: DiscreteMeasure | None = None, radius: int = DEFAULT_RADIUS,
                      trials: int = 50, rng: random.Random | None = None) -> Report:
    """``Pi_1(C_n)`` is the transformation groupoid of ``Z`` rotating ``Z/n``;
    the uniform Haar system pushes forward to ``1/n`` times ``delta x counting``."""
    rng = rng or random.Random(0)
    g = cycle(n)
    nu = nu or uniform_vertex_measure(n)
    t = transversal(g, 0)
    h = haar_from_base_measure(nu, t, section(t))
    tg = transformation_groupoid(rotation_action(n))
    alpha = transformation_haar(tg)
    G = h.groupoid
    report = Report()

    bij = report.add(Check(f"group[{n}]-bijection"))
    arrows = G.ball(radius)
    for gamma in arrows:
        a = cycle_to_transformation(gamma)
        bij.record(transformation_to_cycle(g, a) == gamma, f"round trip fails at {gamma.text()}")
        bij.record(tg.r(a) == gamma.range and tg.s(a) == gamma.source, f"r/s not respected at {gamma.text()}")
    images = set()
    for a in tg.ball(radius):
        gamma = transformation_to_cycle(g, a)
        bij.record(cycle_to_transformation(gamma) == a, f"round trip fails at {a.text()}")
        bij.record(gamma not in images, f"two preimages collide at {gamma.text()}")
        images.add(gamma)

    hom = report.add(Check(f"group[{n}]-composition"))
    for gamma in arrows:
        for eta in arrows:
            if gamma.source != eta.range:
                continue
            lhs = cycle_to_transformation(ep.compose(gamma, eta))
            rhs = tg.compose(cycle_to_transformation(gamma), cycle_to_transformation(eta))
            hom.record(lhs == rhs, f"composition fails at {gamma.text()}, {eta.text()}")

    push = report.add(Check(f"group[{n}]-pushforward"))
    for a in tg.ball(radius):
        pushed = h.weight(transformation_to_cycle(g, a))
        expected = nu.weight(tg.s(a)) * alpha.weight(a)
        push.record(pushed == expected, f"pushforward weight {pushed} != {expected} at {a.text()}")

    report.extend(verify_haar(h, radius, trials, rng, prefix=f"group[{n}]-fundamental"))
    report.extend(verify_haar(alpha, radius, trials, rng, prefix=f"group[{n}]-transformation"))
    return report
