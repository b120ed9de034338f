"""Heaps of pieces over a Coxeter graph.

A :class:`Heap` is a labelled poset whose vertices are numbered ``0..n-1`` in
an order that is always a linear extension.  The strict order is stored as
two tuples of bitmasks: ``down[v]`` (vertices strictly below ``v``) and
``up[v]`` (strictly above).  ``names`` keeps the 1-based identifiers the
vertices had in the word they came from, so subheaps report the original
positions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .coxeter import INF, CoxeterGraph, Word


class HeapError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Heap:
    __slots__ = ("graph", "labels", "names", "down", "up", "_key")

    def __init__(self, graph: CoxeterGraph, labels: Sequence[int], down: Sequence[int],
                 names: Sequence[int] | None = None):
        self.graph = graph
        self.labels = tuple(labels)
        self.down = tuple(down)
        n = len(self.labels)
        self.names = tuple(range(1, n + 1)) if names is None else tuple(names)
        up = [0] * n
        for v, below in enumerate(self.down):
            for u in _bits(below):
                up[u] |= 1 << v
        self.up = tuple(up)
        self._key = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_word(cls, graph: CoxeterGraph, word: Iterable[int]) -> "Heap":
        word = graph.check_word(word)
        down = []
        for j, s in enumerate(word):
            conc = graph.concurrent_mask(s)
            below = 0
            for i in range(j):
                if conc >> word[i] & 1:
                    below |= down[i] | (1 << i)
            down.append(below)
        return cls(graph, word, down)

    # -- basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def all_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def less(self, a: int, b: int) -> bool:
        return bool(self.down[b] >> a & 1)

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    def interval(self, a: int, b: int) -> int:
        """Bitmask of the closed interval ``[a, b]`` (empty if ``a`` is not below ``b``)."""
        if a == b:
            return 1 << a
        if not self.less(a, b):
            return 0
        return (self.up[a] & self.down[b]) | (1 << a) | (1 << b)

    def minimal(self) -> list[int]:
        return [v for v, d in enumerate(self.down) if d == 0]

    def maximal(self) -> list[int]:
        return [v for v, u in enumerate(self.up) if u == 0]

    def minimal_labels(self) -> frozenset[int]:
        return frozenset(self.labels[v] for v in self.minimal())

    def maximal_labels(self) -> frozenset[int]:
        return frozenset(self.labels[v] for v in self.maximal())

    def chain(self, label: int) -> list[int]:
        """Vertices carrying ``label``, bottom to top."""
        return [v for v, s in enumerate(self.labels) if s == label]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for b, below in enumerate(self.down):
            for a in _bits(below):
                if not self.up[a] & below:
                    out.append((a, b))
        return out

    def is_trivial(self) -> bool:
        return not any(self.down)

    def levels(self) -> list[int]:
        """Height of each vertex (length of the longest chain ending there, minus one)."""
        level = []
        for v, below in enumerate(self.down):
            level.append(max((level[u] + 1 for u in _bits(below)), default=0))
        return level

    def word(self) -> Word:
        """The labels in stored vertex order (one linear extension)."""
        return self.labels

    def canonical_word(self) -> Word:
        """Lexicographically least linear extension, read as a word.

        Two heaps over the same graph are isomorphic exactly when these agree.
        """
        if self._key is None:
            remaining = self.all_mask
            out = []
            while remaining:
                best = None
                for v in _bits(remaining):
                    if not self.down[v] & remaining:
                        if best is None or self.labels[v] < self.labels[best]:
                            best = v
                out.append(self.labels[best])
                remaining &= ~(1 << best)
            self._key = tuple(out)
        return self._key

    def linear_extensions(self) -> Iterator[tuple[int, ...]]:
        """All linear extensions as vertex sequences (exponential; small heaps only)."""
        n = len(self.labels)

        def rec(remaining: int, prefix: list[int]):
            if not remaining:
                yield tuple(prefix)
                return
            for v in _bits(remaining):
                if not self.down[v] & remaining:
                    prefix.append(v)
                    yield from rec(remaining & ~(1 << v), prefix)
                    prefix.pop()

        yield from rec((1 << n) - 1, [])

    def order_ideals(self) -> list[int]:
        """Every order ideal as a bitmask."""
        seen = {0}
        stack = [0]
        while stack:
            ideal = stack.pop()
            for v in range(len(self.labels)):
                if not ideal >> v & 1 and self.down[v] & ~ideal == 0:
                    nxt = ideal | (1 << v)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        return sorted(seen)

    def vertex_name(self, v: int) -> str:
        return f"s{self.labels[v] + 1}@{self.names[v]}"

    def __repr__(self):
        from .coxeter import format_word
        return f"<Heap {format_word(self.labels)} on {self.graph!r}>"

    def __eq__(self, other):
        if not isinstance(other, Heap):
            return NotImplemented
        return self.graph == other.graph and self.canonical_word() == other.canonical_word()

    def __hash__(self):
        return hash((self.graph, self.canonical_word()))

    def check_axioms(self) -> bool:
        """Heap axioms: concurrent-labelled vertices comparable, and the order is the
        transitive closure of its restriction to concurrent pairs."""
        g = self.graph
        n = len(self.labels)
        for a in range(n):
            for b in range(a + 1, n):
                if g.concurrent(self.labels[a], self.labels[b]) and not self.comparable(a, b):
                    return False
        rebuilt = subheap(self, range(n))
        return rebuilt.down == self.down


# -- constructions ---------------------------------------------------------


def heap_of_word(graph: CoxeterGraph, word: Iterable[int]) -> Heap:
    return Heap.from_word(graph, word)


def subheap(e: Heap, subset: Iterable[int]) -> Heap:
    """Induced labels; order is the transitive closure of ``a <= b`` restricted to
    concurrent-labelled pairs inside ``subset``."""
    keep = sorted(set(subset))
    n = len(e)
    for v in keep:
        if not 0 <= v < n:
            raise HeapError(f"vertex {v} out of range")
    g = e.graph
    down = []
    for j, b in enumerate(keep):
        conc = g.concurrent_mask(e.labels[b])
        below = 0
        for i in range(j):
            a = keep[i]
            if e.down[b] >> a & 1 and conc >> e.labels[a] & 1:
                below |= down[i] | (1 << i)
        down.append(below)
    return Heap(g, [e.labels[v] for v in keep], down, [e.names[v] for v in keep])


def delete_vertices(e: Heap, vertices: Iterable[int]) -> Heap:
    drop = set(vertices)
    return subheap(e, [v for v in range(len(e)) if v not in drop])


def superpose(e: Heap, f: Heap) -> Heap:
    """The heap ``e`` placed over ``f``: ``e``'s vertices come first."""
    if e.graph != f.graph:
        raise HeapError("cannot superpose heaps over different graphs")
    g = e.graph
    n = len(e)
    labels = e.labels + f.labels
    down = list(e.down)
    for j, b in enumerate(f.labels):
        conc = g.concurrent_mask(b)
        below = f.down[j] << n
        for a in range(n):
            if conc >> e.labels[a] & 1:
                below |= e.down[a] | (1 << a)
        # close under the relations coming through f's own order
        for i in _bits(f.down[j]):
            below |= down[n + i]
        down.append(below)
    return Heap(g, labels, down)


# -- convexity --------------------------------------------------------------


def as_mask(e: Heap, subset) -> int:
    if isinstance(subset, int):
        return subset
    m = _mask(subset)
    if m >> len(e):
        raise HeapError("vertex out of range")
    return m


def up_closure(e: Heap, mask: int) -> int:
    out = 0
    for v in _bits(mask):
        out |= e.up[v]
    return out


def down_closure(e: Heap, mask: int) -> int:
    out = 0
    for v in _bits(mask):
        out |= e.down[v]
    return out


def is_convex(e: Heap, subset) -> bool:
    mask = as_mask(e, subset)
    return up_closure(e, mask) & down_closure(e, mask) & ~mask == 0


def is_convex_by_peeling(e: Heap, subset) -> bool:
    """Can ``subset`` be reached by repeatedly deleting maximal or minimal vertices?"""
    target = as_mask(e, subset)
    current = e.all_mask
    while current != target:
        for v in _bits(current & ~target):
            if not e.up[v] & current or not e.down[v] & current:
                current &= ~(1 << v)
                break
        else:
            return False
    return True


def is_chain(e: Heap, vertices: Sequence[int]) -> bool:
    return all(e.less(a, b) for a, b in zip(vertices, vertices[1:]))


# -- full commutativity -----------------------------------------------------


def _alternating_convex_chain(e: Heap, lo: int, hi: int) -> int:
    """If ``[lo, hi]`` is a chain alternating between two adjacent labels whose
    length equals their (finite) bond, return that bond; else 0."""
    iv = e.interval(lo, hi)
    if iv == 0:
        return 0
    verts = list(_bits(iv))
    if len(verts) < 3:
        return 0
    s, t = e.labels[lo], e.labels[verts[1]]
    g = e.graph
    if not g.adjacent(s, t):
        return 0
    m = g.m(s, t)
    if m == INF or len(verts) != m:
        return 0
    for i, v in enumerate(verts):
        if e.labels[v] != (s if i % 2 == 0 else t):
            return 0
    return int(m)


def is_fc_heap(e: Heap) -> bool:
    """No equal-label cover and no convex alternating chain of length ``m(s, t)``."""
    n = len(e)
    labels = e.labels
    last: dict[int, int] = {}
    for v in range(n):
        s = labels[v]
        if s in last:
            u = last[s]
            if not e.up[u] & e.down[v]:
                return False
        last[s] = v
    g = e.graph
    for lo in range(n):
        s = labels[lo]
        for hi in _bits(e.up[lo]):
            t = labels[hi]
            if t != s and not g.adjacent(s, t):
                continue
            if _alternating_convex_chain(e, lo, hi):
                return False
    return True


def is_fc_word(graph: CoxeterGraph, word: Iterable[int]) -> bool:
    """True iff ``word`` is a reduced expression of a fully commutative element."""
    return is_fc_heap(Heap.from_word(graph, word))


def _require_fc(e: Heap):
    if not is_fc_heap(e):
        raise HeapError("heap is not fully commutative")


def left_descents(e: Heap, check: bool = True) -> frozenset[int]:
    if check:
        _require_fc(e)
    return e.minimal_labels()


def right_descents(e: Heap, check: bool = True) -> frozenset[int]:
    if check:
        _require_fc(e)
    return e.maximal_labels()


@dataclass(frozen=True)
class ChainSpec:
    vertices: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    def is_balanced(self, e: Heap) -> bool:
        return bool(self.vertices) and e.labels[self.vertices[0]] == e.labels[self.vertices[-1]]


class Status(enum.Enum):
    DESCENT = "descent"
    STILL_FC = "still_fc"
    WEAKLY_COMPLEX = "weakly_complex"


@dataclass(frozen=True)
class MultiplyStatus:
    kind: Status
    heap: Heap | None = None        # heap of s*w (s*w on the matching side) when not a descent
    partner: int | None = None      # the unique t of the alternating chain
    chain: ChainSpec | None = None  # convex chain of length m(s, t) in ``heap``


def find_braid_chain(e: Heap, new_vertex: int) -> tuple[int, ChainSpec] | None:
    """Look for a convex alternating chain of full length through ``new_vertex``,
    which must be minimal or maximal in ``e``."""
    s = e.labels[new_vertex]
    g = e.graph
    bottom = not e.down[new_vertex]
    found = None
    for t in g.neighbors(s):
        if g.m(s, t) == INF:
            continue
        m = int(g.m(s, t))
        s_chain = [v for v in e.chain(s) if v != new_vertex]
        t_chain = e.chain(t)
        if bottom:
            seq = [new_vertex]
            for i in range(m - 1):
                src = t_chain if i % 2 == 0 else s_chain
                k = i // 2
                if k >= len(src):
                    break
                seq.append(src[k])
        else:
            seq = [new_vertex]
            s_rev, t_rev = s_chain[::-1], t_chain[::-1]
            for i in range(m - 1):
                src = t_rev if i % 2 == 0 else s_rev
                k = i // 2
                if k >= len(src):
                    break
                seq.append(src[k])
            seq.reverse()
        if len(seq) != m or not is_chain(e, seq) or not is_convex(e, seq):
            continue
        if found is not None:
            raise HeapError("alternating chain is not unique")
        found = (t, ChainSpec(tuple(seq)))
    return found


def extension_obstruction(e: Heap, new_vertex: int):
    """For ``e`` obtained from an FC heap by adding one minimal or maximal vertex
    whose label is not already extremal there: ``None`` if ``e`` is still FC,
    otherwise the partner label and alternating chain that break it.

    Only configurations through the new vertex need checking, because adding
    an extremal vertex creates no new relations among the old ones.
    """
    s = e.labels[new_vertex]
    same = [v for v in e.chain(s) if v != new_vertex]
    if same:
        other = same[0] if not e.down[new_vertex] else same[-1]
        lo, hi = min(other, new_vertex), max(other, new_vertex)
        if not e.up[lo] & e.down[hi]:
            raise HeapError("equal labels would be adjacent; the letter is a descent")
    return find_braid_chain(e, new_vertex)


def left_multiply_status(e: Heap, s: int, check: bool = True) -> MultiplyStatus:
    if check:
        _require_fc(e)
    if s in e.minimal_labels():
        return MultiplyStatus(Status.DESCENT)
    product = superpose(Heap.from_word(e.graph, (s,)), e)
    witness = extension_obstruction(product, 0)
    if witness is None:
        return MultiplyStatus(Status.STILL_FC, product)
    return MultiplyStatus(Status.WEAKLY_COMPLEX, product, witness[0], witness[1])


def right_multiply_status(e: Heap, s: int, check: bool = True) -> MultiplyStatus:
    if check:
        _require_fc(e)
    if s in e.maximal_labels():
        return MultiplyStatus(Status.DESCENT)
    product = superpose(e, Heap.from_word(e.graph, (s,)))
    witness = extension_obstruction(product, len(product) - 1)
    if witness is None:
        return MultiplyStatus(Status.STILL_FC, product)
    return MultiplyStatus(Status.WEAKLY_COMPLEX, product, witness[0], witness[1])


def factor_around(e: Heap, block: Iterable[int]) -> tuple[Word, Word, Word]:
    """Split a linear extension as ``prefix + block + suffix`` for a convex chain ``block``.

    The prefix is everything below some block vertex; returns the three words.
    """
    verts = sorted(block)
    mask = _mask(verts)
    if not is_convex(e, mask):
        raise HeapError("block is not convex")
    below = down_closure(e, mask) & ~mask
    rest = e.all_mask & ~mask & ~below
    word = lambda m: tuple(e.labels[v] for v in _bits(m))
    return word(below), tuple(e.labels[v] for v in verts), word(rest)


# -- contraction, P1, P2 ----------------------------------------------------


def contract(e: Heap, chain: ChainSpec, keep_top: bool = False) -> Heap:
    """Delete all but one endpoint of a balanced convex chain."""
    verts = chain.vertices
    if not verts:
        raise HeapError("empty chain")
    if not is_chain(e, verts):
        raise HeapError("vertices do not form a chain")
    if not chain.is_balanced(e):
        raise HeapError("chain is not balanced")
    if not is_convex(e, verts):
        raise HeapError("chain is not convex")
    drop = verts[:-1] if keep_top else verts[1:]
    return delete_vertices(e, drop)


def balanced_convex_chains(e: Heap, max_length: int = 3) -> list[ChainSpec]:
    """All balanced convex chains of length 2..max_length."""
    out = []
    for lo in range(len(e)):
        for hi in _bits(e.up[lo]):
            if e.labels[hi] != e.labels[lo]:
                continue
            iv = e.interval(lo, hi)
            verts = list(_bits(iv))
            if len(verts) <= max_length and is_chain(e, verts):
                out.append(ChainSpec(tuple(verts)))
    return out


def _legal_removals(e: Heap, current: int) -> list[int]:
    out = []
    for a in _bits(current):
        rest = current & ~(1 << a)
        bit = 1 << a
        if not e.up[a] & current:
            if any(e.up[b] & current == bit and e.labels[b] != e.labels[a] for b in _bits(rest)):
                out.append(a)
                continue
        if not e.down[a] & current:
            if any(e.down[b] & current == bit and e.labels[b] != e.labels[a] for b in _bits(rest)):
                out.append(a)
    return out


def dismantling_sequence(e: Heap) -> list[int] | None:
    """Vertices in removal order reducing ``e`` to a trivial heap, or ``None``."""
    memo: dict[int, list[int] | None] = {}

    def trivial(current: int) -> bool:
        return all(not e.down[v] & current for v in _bits(current))

    def search(current: int) -> list[int] | None:
        if current in memo:
            return memo[current]
        if trivial(current):
            memo[current] = []
            return []
        memo[current] = None
        for a in _legal_removals(e, current):
            tail = search(current & ~(1 << a))
            if tail is not None:
                memo[current] = [a] + tail
                break
        return memo[current]

    return search(e.all_mask)


def is_dismantlable(e: Heap) -> bool:
    return dismantling_sequence(e) is not None


def has_property_p2(e: Heap) -> bool:
    for lo in range(len(e)):
        for hi in _bits(e.up[lo]):
            if e.labels[hi] == e.labels[lo] and bin(e.interval(lo, hi)).count("1") <= 3:
                return False
    return True


# -- isomorphism and export -------------------------------------------------


def is_isomorphic(e: Heap, f: Heap) -> bool:
    """Labelled-poset isomorphism.  Equal labels form chains, so the only candidate
    map sends the k-th vertex labelled s in ``e`` to the k-th one in ``f``."""
    if e.graph != f.graph or sorted(e.labels) != sorted(f.labels):
        return False
    rank_in_chain = {}
    for heap in (e, f):
        count: dict[int, int] = {}
        for v, s in enumerate(heap.labels):
            rank_in_chain[(id(heap), v)] = count.get(s, 0)
            count[s] = count.get(s, 0) + 1
    target = {(f.labels[v], rank_in_chain[(id(f), v)]): v for v in range(len(f))}
    phi = [target[(e.labels[v], rank_in_chain[(id(e), v)])] for v in range(len(e))]
    for a in range(len(e)):
        for b in range(len(e)):
            if e.less(a, b) != f.less(phi[a], phi[b]):
                return False
    return True


def to_dot(e: Heap) -> str:
    """Graphviz source: vertices ``s_i^{(k)}`` placed at (generator, level)."""
    level = e.levels()
    occurrence: dict[int, int] = {}
    lines = ["digraph heap {", "  node [shape=plaintext];"]
    for v, s in enumerate(e.labels):
        occurrence[s] = occurrence.get(s, 0) + 1
        lines.append(f'  v{e.names[v]} [label="s_{s + 1}^{{({occurrence[s]})}}", '
                     f'pos="{s},{level[v]}!"];')
    for a, b in e.covers():
        lines.append(f"  v{e.names[a]} -> v{e.names[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def dihedral_proper_words(s: int, t: int, m: int) -> tuple[Word, ...]:
    """Reduced words of the elements of <s, t> other than the longest one, by length."""
    out: list[Word] = [()]
    for k in range(1, m):
        for first, second in ((s, t), (t, s)):
            out.append(tuple(first if i % 2 == 0 else second for i in range(k)))
    return tuple(out)
