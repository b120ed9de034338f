"""Rank-two coset decompositions, star operations and FC enumeration.

Elements are handled through their heaps; an :class:`FCElement` is just a
graph plus the canonical word of its heap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .coxeter import INF, CoxeterGraph, Word, format_word
from .heap import Heap, HeapError, delete_vertices, extension_obstruction, is_fc_heap, superpose


@dataclass(frozen=True)
class FCElement:
    graph: CoxeterGraph
    key: Word

    @classmethod
    def from_word(cls, graph: CoxeterGraph, word: Iterable[int]) -> "FCElement":
        h = Heap.from_word(graph, word)
        if not is_fc_heap(h):
            raise HeapError(f"{format_word(h.labels)} is not a reduced word of an FC element")
        return cls(graph, h.canonical_word())

    @classmethod
    def from_heap(cls, h: Heap) -> "FCElement":
        return cls(h.graph, h.canonical_word())

    @cached_property
    def heap(self) -> Heap:
        return Heap.from_word(self.graph, self.key)

    @property
    def length(self) -> int:
        return len(self.key)

    def inverse(self) -> "FCElement":
        return FCElement(self.graph, Heap.from_word(self.graph, self.key[::-1]).canonical_word())

    def __str__(self):
        return format_word(self.key)


def _check_pair(graph: CoxeterGraph, s: int, t: int):
    if s == t or not graph.adjacent(s, t):
        raise HeapError(f"s{s + 1} and s{t + 1} are not adjacent")


def coset_decompose_left(w: FCElement, s: int, t: int) -> tuple[Word, FCElement]:
    """``w = w_I * w^I`` with ``I = {s, t}``: strip minimal vertices labelled in ``I``."""
    _check_pair(w.graph, s, t)
    h = w.heap
    stripped: list[int] = []
    while True:
        hit = [v for v in h.minimal() if h.labels[v] in (s, t)]
        if not hit:
            break
        stripped.append(h.labels[hit[0]])
        h = delete_vertices(h, hit)
    return tuple(stripped), FCElement.from_heap(h)


def coset_decompose_right(w: FCElement, s: int, t: int) -> tuple[FCElement, Word]:
    """``w = (^I w) * (_I w)``; the second factor lies in ``<s, t>``."""
    w_i, rest = coset_decompose_left(w.inverse(), s, t)
    return rest.inverse(), w_i[::-1]


def _alternating(last: int, other: int, k: int) -> Word:
    """The alternating word of length ``k`` in two letters ending with ``last``."""
    return tuple(last if (k - 1 - i) % 2 == 0 else other for i in range(k))


def _string_neighbor(w: FCElement, s: int, t: int, delta: int) -> FCElement | None:
    w_i, rest = coset_decompose_left(w, s, t)
    k = len(w_i)
    m = w.graph.m(s, t)
    if k == 0 or (m != INF and k >= m):
        return None
    target = k + delta
    if target < 1 or (m != INF and target > m - 1):
        return None
    last = w_i[-1]
    other = t if last == s else s
    word = _alternating(last, other, target) + rest.key
    h = Heap.from_word(w.graph, word)
    if not is_fc_heap(h):
        return None
    return FCElement.from_heap(h)


def star_up_left(w: FCElement, s: int, t: int) -> FCElement | None:
    return _string_neighbor(w, s, t, +1)


def star_down_left(w: FCElement, s: int, t: int) -> FCElement | None:
    return _string_neighbor(w, s, t, -1)


def star_up_right(w: FCElement, s: int, t: int) -> FCElement | None:
    out = _string_neighbor(w.inverse(), s, t, +1)
    return None if out is None else out.inverse()


def star_down_right(w: FCElement, s: int, t: int) -> FCElement | None:
    out = _string_neighbor(w.inverse(), s, t, -1)
    return None if out is None else out.inverse()


@dataclass(frozen=True)
class StarStep:
    side: str  # "left" or "right"
    pair: tuple[int, int]
    result: Word


def star_reduce_to_commuting(w: FCElement) -> list[StarStep] | None:
    """Shortest sequence of length-decreasing star operations ending at a
    product of commuting generators, or ``None`` when there is none."""
    g = w.graph
    pairs = g.adjacent_pairs()
    start = w.key
    parent: dict[Word, tuple[Word, StarStep] | None] = {start: None}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        if x.heap.is_trivial():
            steps = []
            k = x.key
            while parent[k] is not None:
                prev, step = parent[k]
                steps.append(step)
                k = prev
            return steps[::-1]
        for s, t in pairs:
            for side, op in (("left", star_down_left), ("right", star_down_right)):
                y = op(x, s, t)
                if y is not None and y.key not in parent:
                    parent[y.key] = (x.key, StarStep(side, (s, t), y.key))
                    queue.append(y)
    return None


def enumerate_fc(graph: CoxeterGraph, max_len: int) -> Iterator[FCElement]:
    """Every FC element of length at most ``max_len`` once, by length then canonical word.

    Stops early at the first empty length.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    level = [()]
    yield FCElement(graph, ())
    for _ in range(max_len):
        found = set()
        for key in level:
            h = Heap.from_word(graph, key)
            desc = h.minimal_labels()
            for s in range(graph.rank):
                if s in desc:
                    continue
                prod = superpose(Heap.from_word(graph, (s,)), h)
                if extension_obstruction(prod, 0) is None:
                    found.add(prod.canonical_word())
        if not found:
            return
        level = sorted(found)
        for key in level:
            yield FCElement(graph, key)


def count_fc(graph: CoxeterGraph, max_len: int) -> list[int]:
    """Number of FC elements of each length up to ``max_len``."""
    counts = [0] * (max_len + 1)
    for el in enumerate_fc(graph, max_len):
        counts[el.length] += 1
    return counts
