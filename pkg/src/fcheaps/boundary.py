"""The two-term chain complex of a heap.

Edges are consecutive pairs in a label chain.  The boundary of an edge
``(x, y)`` is the sum of the vertices strictly between ``x`` and ``y`` whose
label is adjacent to the edge label, so every column is a 0/1 vector and is
stored as a vertex bitmask.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coxeter import format_word
from .heap import Heap, HeapError, _bits, has_property_p2, is_dismantlable, is_fc_heap, subheap
from .linalg import EchelonBasis, nullspace, solve


@dataclass(frozen=True, order=True)
class Edge:
    lo: int
    hi: int


def heap_edges(e: Heap) -> list[Edge]:
    """Edges ordered by generator, then by position along the chain."""
    out = []
    for s in sorted(set(e.labels)):
        chain = e.chain(s)
        out.extend(Edge(a, b) for a, b in zip(chain, chain[1:]))
    return out


class BoundaryComplex:
    def __init__(self, heap: Heap):
        self.heap = heap
        self.edges = tuple(heap_edges(heap))
        g = heap.graph
        cols = []
        for edge in self.edges:
            s = heap.labels[edge.lo]
            between = heap.up[edge.lo] & heap.down[edge.hi]
            col = 0
            for v in _bits(between):
                if g.adjacent(s, heap.labels[v]):
                    col |= 1 << v
            cols.append(col)
        self.columns = tuple(cols)
        self._basis = None

    # -- matrices -----------------------------------------------------------

    def column_vector(self, j: int) -> list[int]:
        col = self.columns[j]
        return [col >> v & 1 for v in range(len(self.heap))]

    def matrix(self) -> list[list[Fraction]]:
        """Vertex-by-edge matrix of the boundary map."""
        n = len(self.heap)
        return [[Fraction(col >> v & 1) for col in self.columns] for v in range(n)]

    @property
    def basis(self) -> EchelonBasis:
        if self._basis is None:
            b = EchelonBasis(len(self.heap))
            for j in range(len(self.columns)):
                b.add(self.column_vector(j))
            self._basis = b
        return self._basis

    # -- dimensions ---------------------------------------------------------

    @property
    def image_dim(self) -> int:
        return self.basis.rank

    @property
    def kernel_dim(self) -> int:
        return len(self.edges) - self.basis.rank

    def is_acyclic(self) -> bool:
        return self.kernel_dim == 0

    def kernel_basis(self) -> list[list[Fraction]]:
        """A basis of the kernel, as edge coefficient vectors."""
        return nullspace([self.column_vector(j) for j in range(len(self.edges))], len(self.heap))

    # -- boundary vertices --------------------------------------------------

    def is_boundary_vertex(self, v: int) -> bool:
        if not any(col >> v & 1 for col in self.columns):
            return False
        unit = [0] * len(self.heap)
        unit[v] = 1
        return self.basis.contains(unit)

    def boundary_vertices(self) -> list[int]:
        return [v for v in range(len(self.heap)) if self.is_boundary_vertex(v)]

    def effective_boundary_vertices(self) -> list[int]:
        return sorted({col.bit_length() - 1 for col in self.columns
                       if col and col & (col - 1) == 0})

    def boundary_witness(self, v: int) -> list[Fraction] | None:
        """Edge coefficients x with boundary(x) equal to the vertex ``v``."""
        unit = [0] * len(self.heap)
        unit[v] = 1
        return solve([self.column_vector(j) for j in range(len(self.edges))], unit)

    def equivalence_pairs(self) -> list[tuple[int, int]]:
        out = []
        for col in self.columns:
            if bin(col).count("1") == 2:
                a = col.bit_length() - 1
                b = (col & -col).bit_length() - 1
                out.append((b, a))
        return out

    def linear_equivalence_classes(self) -> list[list[int]]:
        """Partition of all vertices, each class sorted, classes sorted by least member."""
        parent = list(range(len(self.heap)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.equivalence_pairs():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        classes: dict[int, list[int]] = {}
        for v in range(len(self.heap)):
            classes.setdefault(find(v), []).append(v)
        return sorted(classes.values())

    def class_of(self) -> list[int]:
        """Index of the equivalence class of each vertex."""
        out = [0] * len(self.heap)
        for i, cls in enumerate(self.linear_equivalence_classes()):
            for v in cls:
                out[v] = i
        return out


def build_complex(e: Heap) -> BoundaryComplex:
    return BoundaryComplex(e)


def kernel_dim(e: Heap) -> int:
    return BoundaryComplex(e).kernel_dim


def is_acyclic(e: Heap) -> bool:
    return BoundaryComplex(e).kernel_dim == 0


def strong_acyclicity_witness(e: Heap) -> int | None:
    """A vertex whose deletion leaves a heap with nontrivial kernel, if any."""
    for v in range(len(e)):
        rest = subheap(e, [u for u in range(len(e)) if u != v])
        if BoundaryComplex(rest).kernel_dim:
            return v
    return None


def is_strongly_acyclic(e: Heap) -> bool:
    return is_acyclic(e) and strong_acyclicity_witness(e) is None


@dataclass(frozen=True)
class Verdict:
    holds: bool
    violation: int | None = None


def verify_main_theorem(e: Heap, complex_: BoundaryComplex | None = None,
                        check: bool = True) -> Verdict:
    """Every boundary vertex must be linearly equivalent to an effective one.

    On failure the least violating vertex is reported.
    """
    if check and not is_fc_heap(e):
        raise HeapError("heap is not fully commutative")
    c = complex_ if complex_ is not None else BoundaryComplex(e)
    if not any(c.columns):
        return Verdict(True)
    cls = c.class_of()
    good = {cls[v] for v in c.effective_boundary_vertices()}
    for v in c.boundary_vertices():
        if cls[v] not in good:
            return Verdict(False, v)
    return Verdict(True)


def heap_report(e: Heap) -> dict:
    """JSON-ready description of a heap and its boundary data (schema 1).

    Vertices are referred to by their 1-based names throughout.
    """
    c = BoundaryComplex(e)
    name = e.names
    fc = is_fc_heap(e)
    columns = [[name[v] for v in _bits(col)] for col in c.columns]
    verdict = verify_main_theorem(e, c, check=False) if fc else None
    strong_witness = strong_acyclicity_witness(e)
    return {
        "schema": 1,
        "graph": e.graph.describe(),
        "word": format_word(e.labels),
        "canonical_word": format_word(e.canonical_word()),
        "vertices": [{"id": name[v], "label": e.labels[v] + 1} for v in range(len(e))],
        "covers": [[name[a], name[b]] for a, b in e.covers()],
        "fully_commutative": fc,
        "edges": [[name[ed.lo], name[ed.hi]] for ed in c.edges],
        "boundary_columns": columns,
        "kernel_dim": c.kernel_dim,
        "image_dim": c.image_dim,
        "acyclic": c.kernel_dim == 0,
        "strongly_acyclic": c.kernel_dim == 0 and strong_witness is None,
        "strong_acyclicity_witness": None if strong_witness is None else name[strong_witness],
        "boundary_vertices": [name[v] for v in c.boundary_vertices()],
        "effective_boundary_vertices": [name[v] for v in c.effective_boundary_vertices()],
        "equivalence_classes": [[name[v] for v in cls] for cls in c.linear_equivalence_classes()],
        "dismantlable": is_dismantlable(e),
        "property_p2": has_property_p2(e),
        "main_theorem": None if verdict is None else {
            "holds": verdict.holds,
            "violation": None if verdict.violation is None else name[verdict.violation],
        },
    }
