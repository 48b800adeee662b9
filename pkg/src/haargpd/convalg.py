"""Convolution *-algebra of finitely supported functions on ``Pi_1`` and its
trivialisation onto matrices over the group algebra of ``pi_1(X, x)``.

With ``nu = sigma**2`` the map

    Phi(f)(rho)[u, v] = f(c_u^-1 rho c_v) * sigma(u) * sigma(v)

is a *-isomorphism, all in rational arithmetic.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import edgepath as ep
from .cover import Section
from .edgepath import Arrow
from .haar import HaarSystem, haar_from_base_measure
from .measures import FinSupp, MeasureError, vertex_measure
from .report import Check, Report
from .scalars import Gauss


class ProvenanceMismatch(MeasureError):
    pass


PI1_PROVENANCES = ("from_base_measure", "from_transversal", "direct_oracle")


def convolve(f: FinSupp, g: FinSupp, h: HaarSystem) -> FinSupp:
    """``(f*g)(gamma) = sum_eta f(eta) g(eta^-1 gamma) lambda^{r(gamma)}(eta)``."""
    if h.provenance not in PI1_PROVENANCES:
        raise ProvenanceMismatch(f"convolution needs a Haar system on Pi_1, got {h.provenance!r}")
    by_range = defaultdict(list)
    for zeta, b in g.items():
        by_range[zeta.range].append((zeta, b))
    out = []
    for eta, a in f.items():
        w = h.weight(eta)
        for zeta, b in by_range[eta.source]:
            out.append((ep.compose(eta, zeta), a * b * w))
    return FinSupp(out)


def involution(f: FinSupp) -> FinSupp:
    return FinSupp({ep.inverse(gamma): v.conjugate() for gamma, v in f.items()})


def local_unit(h: HaarSystem, vertices) -> FinSupp:
    """``sum_u nu(u)^-1 delta_{unit_u}``: a two-sided unit for elements living over ``vertices``."""
    return FinSupp({ep.unit(u): Fraction(1) / h.weight(ep.unit(u)) for u in vertices})


@dataclass(frozen=True)
class SigmaWeights:
    """Square-root weights; the Haar system uses ``nu = sigma**2``."""

    sigma: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "sigma", {int(u): Fraction(s) for u, s in self.sigma.items()})

    def nu(self):
        return vertex_measure({u: s * s for u, s in self.sigma.items()}, label="sigma^2")

    def row(self, u: int) -> Fraction:
        return self.sigma[u]

    def col(self, v: int) -> Fraction:
        return self.sigma[v]

    star_preserving = True


@dataclass(frozen=True)
class NuWeights:
    """Direct ``nu``: ``Phi`` carries ``nu(v)`` on the column and is only multiplicative."""

    values: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "values", {int(u): Fraction(s) for u, s in self.values.items()})

    def nu(self):
        return vertex_measure(self.values)

    def row(self, u: int) -> Fraction:
        return Fraction(1)

    def col(self, v: int) -> Fraction:
        return self.values[v]

    star_preserving = False


class MatGroupElement:
    """Finite map ``rho -> {(u, v): entry}`` with ``rho`` a loop at the base."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Arrow, Mapping[tuple[int, int], Gauss]] = ()):
        clean = {}
        for rho, mat in dict(terms).items():
            entries = {uv: Gauss.coerce(v) for uv, v in mat.items() if v}
            if entries:
                clean[rho] = entries
        self.terms = clean

    def __eq__(self, other) -> bool:
        return isinstance(other, MatGroupElement) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"MatGroupElement({ {rho.text(): m for rho, m in self.terms.items()} })"

    def star(self, other: "MatGroupElement") -> "MatGroupElement":
        """Group-algebra convolution with matrix multiplication."""
        acc: dict = defaultdict(lambda: defaultdict(Gauss))
        for r1, m1 in self.terms.items():
            rows = defaultdict(list)
            for (u, v), a in m1.items():
                rows[v].append((u, a))
            for r2, m2 in other.terms.items():
                target = acc[ep.compose(r1, r2)]
                for (v, w), b in m2.items():
                    for u, a in rows.get(v, ()):
                        target[(u, w)] = target[(u, w)] + a * b
        return MatGroupElement(acc)

    def adjoint(self) -> "MatGroupElement":
        out: dict = defaultdict(dict)
        for rho, m in self.terms.items():
            inv = ep.inverse(rho)
            for (u, v), a in m.items():
                out[inv][(v, u)] = a.conjugate()
        return MatGroupElement(out)


def trivialize(f: FinSupp, sec: Section, sw) -> MatGroupElement:
    terms: dict = defaultdict(dict)
    for gamma, value in f.items():
        u, v = gamma.range, gamma.source
        rho = ep.compose_all(sec[u], gamma, ep.inverse(sec[v]))
        terms[rho][(u, v)] = value * (sw.row(u) * sw.col(v))
    return MatGroupElement(terms)


def untrivialize(F: MatGroupElement, sec: Section, sw) -> FinSupp:
    out = {}
    for rho, m in F.terms.items():
        for (u, v), value in m.items():
            gamma = ep.compose_all(ep.inverse(sec[u]), rho, sec[v])
            out[gamma] = value / (sw.row(u) * sw.col(v))
    return FinSupp(out)


def random_element(rng: random.Random, arrows: list[Arrow], max_terms: int = 4) -> FinSupp:
    picks = rng.sample(arrows, min(len(arrows), rng.randint(1, max_terms)))
    return FinSupp({a: Gauss(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                             Fraction(rng.randint(-4, 4), rng.randint(1, 3))) for a in picks})


def verify_algebra_iso(sec: Section, sw, trials: int = 100, radius: int = 3,
                       rng: random.Random | None = None, triples: int = 30,
                       system: HaarSystem | None = None) -> Report:
    rng = rng or random.Random(0)
    h = system or haar_from_base_measure(sw.nu(), sec.transversal, sec)
    arrows = h.groupoid.ball(radius)
    report = Report()
    mult = report.add(Check("algebra-multiplicative"))
    star = report.add(Check("algebra-involutive"))
    bij = report.add(Check("algebra-bijective"))
    invol = report.add(Check("algebra-involution-laws"))
    for _ in range(trials):
        f = random_element(rng, arrows)
        g = random_element(rng, arrows)
        Ff, Fg = trivialize(f, sec, sw), trivialize(g, sec, sw)
        fg = convolve(f, g, h)
        mult.record(trivialize(fg, sec, sw) == Ff.star(Fg), "Phi(f*g) != Phi(f) Phi(g)")
        if sw.star_preserving:
            star.record(trivialize(involution(f), sec, sw) == Ff.adjoint(), "Phi(f^*) != Phi(f)^dagger")
        bij.record(untrivialize(Ff, sec, sw) == f, "Phi^-1 Phi != id")
        invol.record(involution(involution(f)) == f, "f** != f")
        invol.record(involution(fg) == convolve(involution(g), involution(f), h), "(f*g)^* != g^* f^*")
    assoc = report.add(Check("algebra-associative"))
    for _ in range(triples):
        f, g, k = (random_element(rng, arrows) for _ in range(3))
        assoc.record(convolve(convolve(f, g, h), k, h) == convolve(f, convolve(g, k, h), h),
                     "(f*g)*k != f*(g*k)")
    return report
