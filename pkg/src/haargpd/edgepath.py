"""Arrows of the fundamental groupoid of a graph as reduced edge-words.

Arrows point right to left: ``Arrow.word[-1]`` is the first segment
traversed and ``word[0]`` the last, so ``compose(gamma, eta)`` means
"first ``eta``, then ``gamma``" and its word is ``gamma.word + eta.word``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from .graphspace import MultiGraph


class PathError(ValueError):
    pass


class NonConcatenable(PathError):
    pass


class NotComposable(PathError):
    pass


class OrientedEdge(NamedTuple):
    edge: int
    forward: bool = True

    def flip(self) -> "OrientedEdge":
        return OrientedEdge(self.edge, not self.forward)

    def start(self, g: MultiGraph) -> int:
        e = g.edges[self.edge]
        return e.src if self.forward else e.dst

    def end(self, g: MultiGraph) -> int:
        e = g.edges[self.edge]
        return e.dst if self.forward else e.src

    def sort_key(self) -> tuple[int, int]:
        return (self.edge, 0 if self.forward else 1)


def _cancels(a: OrientedEdge, b: OrientedEdge) -> bool:
    return a.edge == b.edge and a.forward != b.forward


class Arrow:
    """An endpoint-fixing homotopy class of edge paths, ``source -> range``."""

    __slots__ = ("source", "range", "word", "_hash")

    def __init__(self, source: int, range: int, word: Sequence[OrientedEdge] = ()):
        self.source = source
        self.range = range
        self.word = tuple(word)
        self._hash = hash((source, range, self.word))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Arrow):
            return NotImplemented
        return (self._hash == other._hash and self.source == other.source
                and self.range == other.range and self.word == other.word)

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.word)

    @property
    def is_unit(self) -> bool:
        return not self.word

    @property
    def is_loop(self) -> bool:
        return self.source == self.range

    def sort_key(self):
        return (len(self.word), tuple(seg.sort_key() for seg in self.word), self.source, self.range)

    def __lt__(self, other: "Arrow") -> bool:
        return self.sort_key() < other.sort_key()

    def text(self) -> str:
        """Report form ``"r<-s: e2.e1~"``; ``~`` marks a backward segment."""
        if not self.word:
            return f"{self.range}<-{self.source}: id"
        segs = ".".join(f"e{seg.edge}" + ("" if seg.forward else "~") for seg in self.word)
        return f"{self.range}<-{self.source}: {segs}"

    def __repr__(self) -> str:
        return f"Arrow({self.text()!r})"

    def is_reduced(self) -> bool:
        return not any(_cancels(a, b) for a, b in zip(self.word, self.word[1:]))


def unit(v: int) -> Arrow:
    return Arrow(v, v, ())


def segment(g: MultiGraph, seg: OrientedEdge) -> Arrow:
    seg = OrientedEdge(*seg)
    return Arrow(seg.start(g), seg.end(g), (seg,))


def free_reduce(word: Iterable[OrientedEdge]) -> tuple[OrientedEdge, ...]:
    """Cancel adjacent inverse pairs with a stack (order-independent result)."""
    out: list[OrientedEdge] = []
    for seg in word:
        if out and _cancels(out[-1], seg):
            out.pop()
        else:
            out.append(seg)
    return tuple(out)


def reduce(g: MultiGraph, raw_word: Sequence[OrientedEdge], start: int) -> Arrow:
    """Normal form of a raw word written in arrow order (rightmost segment first).

    The path leaves ``start`` along ``raw_word[-1]`` and ends with ``raw_word[0]``.
    """
    raw = tuple(OrientedEdge(*seg) for seg in raw_word)
    here = start
    for seg in reversed(raw):
        if seg.start(g) != here:
            raise NonConcatenable(f"segment {seg} does not start at vertex {here}")
        here = seg.end(g)
    return Arrow(start, here, free_reduce(raw))


def compose(gamma: Arrow, eta: Arrow, reduced: bool = True) -> Arrow:
    """``gamma * eta``: traverse ``eta`` then ``gamma``; needs ``s(gamma) == r(eta)``.

    ``reduced=False`` concatenates without cancellation; it exists only to
    build deliberately broken groupoids for mutation tests.
    """
    if gamma.source != eta.range:
        raise NotComposable(f"source {gamma.source} of {gamma.text()} != range {eta.range} of {eta.text()}")
    if not reduced:
        return Arrow(eta.source, gamma.range, gamma.word + eta.word)
    left, right = gamma.word, eta.word
    i = 0
    n = min(len(left), len(right))
    while i < n and _cancels(left[len(left) - 1 - i], right[i]):
        i += 1
    return Arrow(eta.source, gamma.range, left[:len(left) - i] + right[i:])


def compose_all(*arrows: Arrow) -> Arrow:
    out = arrows[-1]
    for a in reversed(arrows[:-1]):
        out = compose(a, out)
    return out


def inverse(gamma: Arrow) -> Arrow:
    return Arrow(gamma.range, gamma.source, tuple(seg.flip() for seg in reversed(gamma.word)))


def power(loop: Arrow, k: int) -> Arrow:
    if not loop.is_loop:
        raise NotComposable("only loops have powers")
    base = loop if k >= 0 else inverse(loop)
    out = unit(loop.range)
    for _ in range(abs(k)):
        out = compose(base, out)
    return out


def extensions_at_range(g: MultiGraph, gamma: Arrow) -> list[Arrow]:
    """All reduced one-segment extensions ``seg * gamma`` (new last segment)."""
    out = []
    for eid in g.incident(gamma.range):
        e = g.edges[eid]
        for fwd in (True, False):
            seg = OrientedEdge(eid, fwd)
            if seg.start(g) != gamma.range:
                continue
            if gamma.word and _cancels(seg, gamma.word[0]):
                continue
            out.append(Arrow(gamma.source, seg.end(g), (seg,) + gamma.word))
    return out


def extensions_at_source(g: MultiGraph, gamma: Arrow) -> list[Arrow]:
    """All reduced one-segment extensions ``gamma * seg`` (new first segment)."""
    out = []
    for eid in g.incident(gamma.source):
        for fwd in (True, False):
            seg = OrientedEdge(eid, fwd)
            if seg.end(g) != gamma.source:
                continue
            if gamma.word and _cancels(gamma.word[-1], seg):
                continue
            out.append(Arrow(seg.start(g), gamma.range, gamma.word + (seg,)))
    return out


def enumerate_ball(g: MultiGraph, max_len: int) -> list[Arrow]:
    """All reduced arrows with at most ``max_len`` segments, deterministically ordered."""
    layer = [unit(v) for v in range(g.vertices)]
    ball = list(layer)
    for _ in range(max_len):
        nxt = []
        for gamma in layer:
            nxt.extend(extensions_at_range(g, gamma))
        layer = nxt
        ball.extend(layer)
    ball.sort(key=Arrow.sort_key)
    return ball
