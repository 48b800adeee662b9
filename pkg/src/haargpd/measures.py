"""Measures and families of measures on discrete sets.

Measures are nonnegative rational weight functions; they are only ever
paired with finitely supported functions, so every integral is a finite
exact sum.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import edgepath as ep
from .cover import Section, Transversal
from .edgepath import Arrow
from .report import Check
from .scalars import Gauss


class MeasureError(ValueError):
    pass


class AmbientMismatch(MeasureError):
    pass


class NotFullySupported(MeasureError):
    pass


class NotInvertible(MeasureError):
    pass


class BadTranslator(MeasureError):
    pass


class NotCutoff(MeasureError):
    pass


# -- ambient sets -------------------------------------------------------------

@dataclass(frozen=True)
class Vertices:
    n: int

    def __contains__(self, p) -> bool:
        return isinstance(p, int) and 0 <= p < self.n


@dataclass(frozen=True)
class RangeFiber:
    """``G^x``: arrows whose range is ``base``."""

    base: int

    def __contains__(self, p) -> bool:
        return isinstance(p, Arrow) and p.range == self.base


@dataclass(frozen=True)
class AnySet:
    def __contains__(self, p) -> bool:
        return True


# -- finitely supported functions ---------------------------------------------

class FinSupp:
    """Finitely supported Gaussian-rational function; zero values are dropped."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping | Iterable = ()):
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict = {}
        for k, v in items:
            v = Gauss.coerce(v)
            acc[k] = acc[k] + v if k in acc else v
        self._data = {k: v for k, v in acc.items() if v}

    @classmethod
    def indicator(cls, keys: Iterable, value=1) -> "FinSupp":
        return cls({k: value for k in keys})

    def __getitem__(self, key) -> Gauss:
        return self._data.get(key, Gauss())

    def __contains__(self, key) -> bool:
        return key in self._data

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def items(self):
        return self._data.items()

    def support(self) -> set:
        return set(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSupp):
            return NotImplemented
        return self._data == other._data

    def __add__(self, other: "FinSupp") -> "FinSupp":
        return FinSupp(list(self.items()) + list(other.items()))

    def __sub__(self, other: "FinSupp") -> "FinSupp":
        return self + other.scale(-1)

    def scale(self, c) -> "FinSupp":
        return FinSupp({k: v * c for k, v in self.items()})

    def map_keys(self, fn: Callable) -> "FinSupp":
        return FinSupp((fn(k), v) for k, v in self.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{getattr(k, 'text', lambda: k)()}: {v}" for k, v in self.items())
        return f"FinSupp({{{body}}})"


# -- measures -----------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteMeasure:
    """A measure given by a pointwise weight on an ambient (possibly infinite) set.

    ``points`` is set only for measures on finite sets (the vertex set).
    ``full_support`` certifies positivity structurally, e.g. a weight of
    the form ``nu(s(gamma))`` with ``nu`` positive.
    """

    weight: Callable[[Hashable], Fraction]
    ambient: object = field(default_factory=AnySet)
    points: tuple | None = None
    full_support: bool = False
    label: str = ""

    def __call__(self, p) -> Fraction:
        return self.weight(p)

    def integrate(self, f: FinSupp) -> Gauss:
        total = Gauss()
        for p, value in f.items():
            if p not in self.ambient:
                raise AmbientMismatch(f"{getattr(p, 'text', lambda: p)()} is outside {self.ambient}")
            w = self.weight(p)
            if w:
                total = total + value * w
        return total

    def weights(self) -> dict:
        if self.points is None:
            raise MeasureError("measure lives on an infinite set; enumerate a ball instead")
        return {p: self.weight(p) for p in self.points}


def vertex_measure(weights: Mapping[int, Fraction] | Sequence, label: str = "nu") -> DiscreteMeasure:
    if not isinstance(weights, Mapping):
        weights = dict(enumerate(weights))
    table = {int(k): Fraction(v) for k, v in weights.items()}
    n = max(table) + 1 if table else 0
    if sorted(table) != list(range(n)):
        raise MeasureError(f"vertex weights must cover 0..{n - 1}")
    if any(v < 0 for v in table.values()):
        raise MeasureError("weights must be nonnegative")
    return DiscreteMeasure(lambda u: table.get(u, Fraction(0)), Vertices(n), tuple(range(n)),
                           all(v > 0 for v in table.values()), label)


def uniform_vertex_measure(n: int, value: Fraction | None = None) -> DiscreteMeasure:
    value = Fraction(1, n) if value is None else Fraction(value)
    return vertex_measure({u: value for u in range(n)}, label="uniform")


def require_full_support(nu: DiscreteMeasure, n: int | None = None) -> None:
    if nu.points is None:
        raise NotFullySupported("base measure must be on a finite vertex set")
    if n is not None and len(nu.points) != n:
        raise NotFullySupported(f"base measure covers {len(nu.points)} of {n} vertices")
    zero = [u for u in nu.points if not nu.weight(u) > 0]
    if zero:
        raise NotFullySupported(f"base measure vanishes at vertices {zero}")


@dataclass(frozen=True)
class MeasureFamily:
    """Measures ``mu_y`` indexed by ``index``, each supported in ``projection^-1(y)``."""

    index: tuple
    projection: Callable
    member: Callable[[Hashable], DiscreteMeasure]
    label: str = ""

    def __getitem__(self, y) -> DiscreteMeasure:
        return self.member(y)

    def apply(self, f: FinSupp) -> FinSupp:
        """``y -> mu_y(f)``; finitely supported because only fibres meeting ``supp f`` count."""
        out = {}
        for y in sorted({self.projection(p) for p in f}):
            out[y] = self.member(y).integrate(f)
        return FinSupp(out)


def counting_family(t: Transversal) -> MeasureFamily:
    """Counting measure on each fibre ``G^x_u`` of the covering map."""
    amb = RangeFiber(t.base)

    def member(u: int) -> DiscreteMeasure:
        return DiscreteMeasure(lambda y, u=u: Fraction(1) if y.source == u else Fraction(0),
                               amb, label=f"count[{u}]")

    return MeasureFamily(tuple(range(t.graph.vertices)), t.covering_map, member, "counting")


def compose_family(nu: DiscreteMeasure, mu: MeasureFamily) -> DiscreteMeasure:
    """``nu o mu`` with pointwise weight ``nu(pi(p)) * mu_{pi(p)}(p)``."""
    require_full_support(nu, len(mu.index))
    member = mu.member
    proj = mu.projection
    sample = member(mu.index[0])

    def weight(p) -> Fraction:
        y = proj(p)
        return nu.weight(y) * member(y).weight(p)

    return DiscreteMeasure(weight, sample.ambient, full_support=mu.label == "counting",
                           label=f"{nu.label} o {mu.label}")


def pullback(phi: Callable, m: DiscreteMeasure, phi_inverse: Callable | None = None,
             check_points: Iterable = (), ambient=None) -> DiscreteMeasure:
    """``phi^* m`` with ``phi^* m (f) = m(f o phi^-1)``, i.e. weight ``m(phi(p))``."""
    if phi_inverse is not None:
        for p in check_points:
            if phi_inverse(phi(p)) != p:
                raise NotInvertible(f"phi^-1(phi({p})) != {p}")
    return DiscreteMeasure(lambda p: m.weight(phi(p)), ambient or m.ambient,
                           full_support=m.full_support, label=f"pullback {m.label}")


def translate_measure(eta: Arrow, lam: DiscreteMeasure) -> DiscreteMeasure:
    """Carry ``lam`` on ``G^x`` to ``G^w`` along ``eta : w -> x``: ``delta -> lam(eta delta)``."""
    if not isinstance(lam.ambient, RangeFiber):
        raise BadTranslator("only measures on a transversal G^x can be translated")
    if eta.range != lam.ambient.base:
        raise BadTranslator(f"{eta.text()} does not end at {lam.ambient.base}")
    weight = lam.weight

    def translated(delta: Arrow) -> Fraction:
        return weight(ep.compose(eta, delta))

    return DiscreteMeasure(translated, RangeFiber(eta.source), full_support=lam.full_support,
                           label=f"l_{{{eta.text()}}}^-1 {lam.label}")


def averaging_family(t: Transversal, f: FinSupp) -> FinSupp:
    """Sum of ``f`` over each deck orbit, indexed by the orbit's vertex."""
    out: dict[int, Gauss] = defaultdict(Gauss)
    for y, value in f.items():
        if y.range != t.base:
            raise AmbientMismatch(f"{y.text()} is not in G^{t.base}")
        out[y.source] = out[y.source] + value
    return FinSupp(out)


def mu_surjectivity_witness(F: FinSupp, sec: Section) -> FinSupp:
    """A function on ``G^x`` whose fibrewise counting sums are ``F``."""
    return FinSupp({sec[u]: value for u, value in F.items()})


@dataclass(frozen=True)
class CutoffFn:
    values: Mapping[Arrow, Fraction]
    vertices: int

    def __post_init__(self):
        clean = {a: Fraction(v) for a, v in self.values.items() if v}
        if any(v < 0 for v in clean.values()):
            raise NotCutoff("cutoff values must be nonnegative")
        object.__setattr__(self, "values", clean)

    def __call__(self, y: Arrow) -> Fraction:
        return self.values.get(y, Fraction(0))

    def fiber_sums(self) -> dict[int, Fraction]:
        sums = {u: Fraction(0) for u in range(self.vertices)}
        for y, v in self.values.items():
            sums[y.source] += v
        return sums

    def is_normalized(self) -> bool:
        return all(s == 1 for s in self.fiber_sums().values())


def cutoff(sec: Section) -> CutoffFn:
    """Indicator of the section arrows: one positive point per fibre, finite support."""
    return CutoffFn({c: Fraction(1) for c in sec.members()}, sec.graph.vertices)


def normalize_cutoff(e: CutoffFn) -> CutoffFn:
    sums = e.fiber_sums()
    empty = [u for u, s in sums.items() if s == 0]
    if empty:
        raise NotCutoff(f"cutoff vanishes on the fibres over {empty}")
    return CutoffFn({y: v / sums[y.source] for y, v in e.values.items()}, e.vertices)


def recover_base_measure(lam: DiscreteMeasure, h: CutoffFn) -> DiscreteMeasure:
    """``nu(u) = sum over supp h in the fibre over u of h * lam``."""
    if not h.is_normalized():
        raise NotCutoff("cutoff must have fibre sums equal to 1")
    nu = {u: Fraction(0) for u in range(h.vertices)}
    for y, v in h.values.items():
        nu[y.source] += v * lam.weight(y)
    return vertex_measure(nu, label="recovered")


# -- equivariance -------------------------------------------------------------

class DeckFamilyAction:
    """Deck transformations on ``G^x``; the induced action on vertices is trivial."""

    def act(self, rho: Arrow, y: Arrow) -> Arrow:
        return ep.compose(rho, y)

    def act_index(self, rho: Arrow, u: int) -> int:
        return u


class TrivialAction:
    def act(self, g, p):
        return p

    def act_index(self, g, y):
        return y


def check_equivariance(family: MeasureFamily, action, samples: Iterable[tuple], name: str = "equivariance") -> Check:
    """``mu_{g y}(f) == int f(g^-1 p) d mu_y(p)`` for every sample ``(g, y, f)``."""
    check = Check(name)
    for g, y, f in samples:
        lhs = family[action.act_index(g, y)].integrate(f)
        # p -> f(g^-1 p) is supported on g . supp f
        moved = f.map_keys(lambda p: action.act(g, p))
        rhs = family[y].integrate(moved)
        check.record(lhs == rhs, f"family not equivariant at g={getattr(g, 'text', lambda: g)()}, y={y}")
    return check


def deck_equivariance_samples(t: Transversal, loops: Sequence[Arrow], radius: int) -> list[tuple]:
    """Point-mass samples over the ball for each loop and each fibre."""
    ball = t.ball(radius)
    return [(rho, z.source, FinSupp.indicator([z])) for rho in loops for z in ball]
