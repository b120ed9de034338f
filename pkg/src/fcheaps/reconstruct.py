"""Search for six-vertex bipartite graphs on which a fixed word gives a fully
commutative, dismantlable heap with a boundary vertex that is not linearly
equivalent to any effective boundary vertex.

Edges, boundary columns and equivalence classes depend only on which generators
are adjacent, not on the bond labels.  Bond labels only decide full
commutativity, so for each adjacency pattern the search assigns every edge the
smallest label above the longest convex alternating chain of that pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .boundary import BoundaryComplex
from .coxeter import CoxeterGraph, Word, format_word, is_bipartite, parse_word
from .heap import Heap, _bits, is_chain, is_convex, is_dismantlable, is_fc_heap
from .star import FCElement, enumerate_fc, star_reduce_to_commuting

TARGET_WORD = parse_word("s1s3s5s2s4s1s3s2s4s6s1s3s5")
TARGET_VERTEX = 10  # 1-based position in the word


@dataclass(frozen=True)
class Candidate:
    edges: tuple[tuple[int, int], ...]  # 0-based adjacent pairs
    bonds: tuple[int, ...]              # minimal label per edge making the word FC
    graph: CoxeterGraph
    star_reducible_witness: bool        # True when the element star-reduces to commuting

    def bond_text(self) -> str:
        return ", ".join(f"s{s + 1}-s{t + 1}:{m}" for (s, t), m in zip(self.edges, self.bonds))


def _connected(n: int, edges) -> bool:
    seen = {0}
    stack = [0]
    adj = {i: set() for i in range(n)}
    for s, t in edges:
        adj[s].add(t)
        adj[t].add(s)
    while stack:
        v = stack.pop()
        for u in adj[v] - seen:
            seen.add(u)
            stack.append(u)
    return len(seen) == n


def longest_alternating_chain(e: Heap, s: int, t: int) -> int:
    """Length of the longest convex chain alternating between labels ``s`` and ``t``."""
    verts = [v for v in range(len(e)) if e.labels[v] in (s, t)]
    best = 0
    for i, lo in enumerate(verts):
        chain = [lo]
        for v in verts[i + 1:]:
            if e.labels[v] != e.labels[chain[-1]] and e.less(chain[-1], v):
                if is_chain(e, chain + [v]) and is_convex(e, chain + [v]):
                    chain.append(v)
        best = max(best, len(chain) if len(chain) > 1 else 0)
    return best


def _minimal_bonds(word: Word, n: int, edges) -> tuple[int, ...]:
    probe = CoxeterGraph.from_bonds(n, {e: 10 ** 6 for e in edges})
    h = Heap.from_word(probe, word)
    return tuple(max(3, longest_alternating_chain(h, s, t) + 1) for s, t in edges)


def search(word: Word = TARGET_WORD, vertex: int = TARGET_VERTEX, n: int = 6,
           require_connected: bool = True) -> Iterator[Candidate]:
    """Yield every matching adjacency pattern in lexicographic edge-set order."""
    pairs = list(combinations(range(n), 2))
    for k in range(len(pairs) + 1):
        for edges in combinations(pairs, k):
            if require_connected and not _connected(n, edges):
                continue
            bonds = _minimal_bonds(word, n, edges)
            g = CoxeterGraph.from_bonds(n, dict(zip(edges, bonds)), "reconstruction")
            if not is_bipartite(g):
                continue
            h = Heap.from_word(g, word)
            if not is_fc_heap(h) or not is_dismantlable(h):
                continue
            if not is_isolated_boundary(h, vertex - 1):
                continue
            reducible = star_reduce_to_commuting(FCElement.from_heap(h)) is not None
            yield Candidate(edges, bonds, g, reducible)


def is_isolated_boundary(h: Heap, v: int) -> bool:
    """``v`` is a boundary vertex whose class holds no effective boundary vertex."""
    c = BoundaryComplex(h)
    if not c.is_boundary_vertex(v):
        return False
    cls = c.class_of()
    return all(cls[u] != cls[v] for u in c.effective_boundary_vertices())


def describe(h: Heap) -> dict:
    c = BoundaryComplex(h)
    names = h.names
    return {
        "edges": [(names[e.lo], names[e.hi]) for e in c.edges],
        "columns": [[names[v] for v in _bits(col)] for col in c.columns],
        "boundary": [names[v] for v in c.boundary_vertices()],
        "effective": [names[v] for v in c.effective_boundary_vertices()],
        "classes": [[names[v] for v in cls] for cls in c.linear_equivalence_classes() if len(cls) > 1],
        "kernel_dim": c.kernel_dim,
    }


# The straight line s1 - s2 - ... - s6 with bonds 4, 3, 4, 3, 3 is the only
# match whose edges join consecutive labels; it is the reconstruction used
# throughout the tests.
LINE_BONDS = {(0, 1): 4, (1, 2): 3, (2, 3): 4, (3, 4): 3, (4, 5): 3}


def reconstructed_graph() -> CoxeterGraph:
    return CoxeterGraph.from_bonds(6, LINE_BONDS, "line-434333")


def irreducible_witness(graph: CoxeterGraph, max_len: int) -> FCElement | None:
    """Shortest FC element (by length, then canonical word) admitting no
    star reduction to a product of commuting generators."""
    for el in enumerate_fc(graph, max_len):
        if star_reduce_to_commuting(el) is None:
            return el
    return None


def search_log(witness_len: int = 11) -> str:
    lines = ["# Six-vertex graph reconstruction search", "",
             f"Word: `{format_word(TARGET_WORD)}`; vertex of interest: {TARGET_VERTEX}.", "",
             "All connected graphs on six labelled vertices were enumerated. For each "
             "adjacency pattern every edge gets the smallest bond label above the longest "
             "convex alternating chain of its two labels in the heap (the least label "
             "keeping the word fully commutative); patterns that are not bipartite are "
             "dropped. A pattern matches when the heap is fully commutative, dismantlable, "
             "and the vertex of interest is a boundary vertex whose linear equivalence "
             "class contains no effective boundary vertex.", "",
             "Boundary data depends only on adjacency, so raising any bond label keeps "
             "a match a match.", "",
             "| # | bonds (minimal labels) | word star-reduces |", "|---|---|---|"]
    found = list(search())
    for i, c in enumerate(found, 1):
        lines.append(f"| {i} | {c.bond_text()} | {'yes' if c.star_reducible_witness else 'no'} |")
    lines += ["", f"{len(found)} matching adjacency patterns.", ""]
    g = reconstructed_graph()
    h = Heap.from_word(g, TARGET_WORD)
    d = describe(h)
    lines += ["## Chosen reconstruction", "",
              "The straight line `s1 - s2 - s3 - s4 - s5 - s6` with bonds "
              "`m(s1,s2) = 4, m(s2,s3) = 3, m(s3,s4) = 4, m(s4,s5) = 3, m(s5,s6) = 3` is the "
              "only match whose edges join consecutive labels, so it is the natural reading "
              "of an unlabelled drawing with generators numbered along the line.", "",
              f"- edges: {d['edges']}",
              f"- boundary columns: {d['columns']}",
              f"- kernel dimension: {d['kernel_dim']}",
              f"- boundary vertices: {d['boundary']}",
              f"- effective boundary vertices: {d['effective']}",
              f"- non-trivial equivalence classes: {d['classes']}",
              f"- vertex {TARGET_VERTEX} is isolated from every effective vertex: "
              f"{is_isolated_boundary(h, TARGET_VERTEX - 1)}", ""]
    w = irreducible_witness(g, witness_len)
    if w is not None:
        lines += [f"The group is not star reducible: `{w}` (length {w.length}) is fully "
                  "commutative and no sequence of length-decreasing star operations takes it "
                  "to a product of commuting generators. The word itself does star-reduce, so "
                  "the failure is a property of the group, not of this element.", ""]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    import sys
    out = sys.argv[1] if len(sys.argv) > 1 else None
    text = search_log()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
