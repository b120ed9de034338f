"""Property battery run over enumerated heaps.

Each check takes a heap (or a word) and returns a list of human-readable
violation strings; an empty list means the property held.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .boundary import BoundaryComplex, is_strongly_acyclic
from .coxeter import CoxeterGraph, Word, bipartition, format_word, is_simply_laced
from .heap import (Heap, Status, _bits, balanced_convex_chains, contract, delete_vertices,
                   has_property_p2, is_convex, is_convex_by_peeling, is_dismantlable,
                   is_isomorphic, left_multiply_status, subheap)
from .laurent import V, V_INV, LaurentPoly
from .tl import TLAlgebra


def _subsets(e: Heap, rng: random.Random, exhaustive_upto: int, samples: int) -> list[int]:
    n = len(e)
    if n <= exhaustive_upto:
        return list(range(1 << n))
    return sorted({rng.getrandbits(n) for _ in range(samples)})


def _edge_names(c: BoundaryComplex) -> list[tuple[int, int]]:
    n = c.heap.names
    return [(n[ed.lo], n[ed.hi]) for ed in c.edges]


def _column_names(c: BoundaryComplex) -> dict[tuple[int, int], frozenset[int]]:
    n = c.heap.names
    return {(n[ed.lo], n[ed.hi]): frozenset(n[v] for v in _bits(col))
            for ed, col in zip(c.edges, c.columns)}


# -- convex subheap checks ----------------------------------------------------


def check_peeling(e: Heap, masks: Iterable[int]) -> list[str]:
    out = []
    for mask in masks:
        if is_convex(e, mask) != is_convex_by_peeling(e, mask):
            out.append(f"convexity and peeling disagree on {sorted(e.names[v] for v in _bits(mask))}")
    return out


def check_convex_subheap(e: Heap, ce: BoundaryComplex, x: Heap) -> dict[str, list[str]]:
    """All properties relating a heap to one convex subheap."""
    found: dict[str, list[str]] = defaultdict(list)
    where = sorted(x.names)
    cx = BoundaryComplex(x)
    e_edges = set(_edge_names(ce))
    e_cols = _column_names(ce)
    x_cols = _column_names(cx)
    for edge in _edge_names(cx):
        if edge not in e_edges:
            found["edge_persistence"].append(f"edge {edge} of subheap {where} missing in parent")
        elif x_cols[edge] != e_cols[edge]:
            found["boundary_locality"].append(f"edge {edge}: {sorted(x_cols[edge])} vs "
                                              f"{sorted(e_cols[edge])} in subheap {where}")
    # intervals agree
    index = {name: v for v, name in enumerate(e.names)}
    for a in range(len(x)):
        for b in range(len(x)):
            if x.less(a, b):
                ix = {x.names[v] for v in _bits(x.interval(a, b))}
                ie = {e.names[v] for v in _bits(e.interval(index[x.names[a]], index[x.names[b]]))}
                if ix != ie:
                    found["interval_equality"].append(f"[{x.names[a]},{x.names[b]}] differs in {where}")
    # equivalence and effectiveness transport
    e_class = ce.class_of()
    for a, b in cx.equivalence_pairs():
        na, nb = index[x.names[a]], index[x.names[b]]
        if e_class[na] != e_class[nb]:
            found["equivalence_transport"].append(
                f"{x.names[a]} ~ {x.names[b]} in {where} but not in parent")
    e_eff = {e.names[v] for v in ce.effective_boundary_vertices()}
    for v in cx.effective_boundary_vertices():
        if x.names[v] not in e_eff:
            found["effective_transport"].append(f"{x.names[v]} effective in {where} only")
    e_bd = {e.names[v] for v in ce.boundary_vertices()}
    for v in cx.boundary_vertices():
        if x.names[v] not in e_bd:
            found["boundary_monotonicity"].append(f"{x.names[v]} boundary in {where} only")
    return found


def check_equivalence_preserves_boundary(c: BoundaryComplex) -> list[str]:
    bd = set(c.boundary_vertices())
    out = []
    for cls in c.linear_equivalence_classes():
        inside = [v for v in cls if v in bd]
        if inside and len(inside) != len(cls):
            out.append(f"class {[c.heap.names[v] for v in cls]} mixes boundary status")
    return out


def check_bipartite_split(c: BoundaryComplex, parts) -> list[str]:
    if parts is None:
        return []
    side = {}
    for i, part in enumerate(parts):
        for s in part:
            side[s] = i
    e = c.heap
    out = []
    for ed, col in zip(c.edges, c.columns):
        for v in _bits(col):
            if side[e.labels[v]] == side[e.labels[ed.lo]]:
                out.append(f"edge ({e.names[ed.lo]},{e.names[ed.hi]}) hits {e.names[v]} on its own side")
    return out


def check_acyclic_boundary_deletion(e: Heap, c: BoundaryComplex) -> list[str]:
    if c.kernel_dim:
        return []
    out = []
    for v in c.boundary_vertices():
        if BoundaryComplex(delete_vertices(e, [v])).kernel_dim == 0:
            out.append(f"deleting boundary vertex {e.names[v]} keeps the heap acyclic")
    return out


def check_deletion_bound(e: Heap, c: BoundaryComplex) -> list[str]:
    out = []
    k = c.kernel_dim
    for v in range(len(e)):
        k2 = BoundaryComplex(delete_vertices(e, [v])).kernel_dim
        if abs(k - k2) > 1:
            out.append(f"deleting {e.names[v]} moves kernel dimension {k} -> {k2}")
    return out


def check_contraction_laws(e: Heap) -> list[str]:
    out = []
    k = BoundaryComplex(e).kernel_dim
    for chain in balanced_convex_chains(e, 3):
        verts = chain.vertices
        bottom = contract(e, chain)
        top = contract(e, chain, keep_top=True)
        if not is_isomorphic(bottom, top):
            out.append(f"contracting {[e.names[v] for v in verts]} depends on the kept endpoint")
        k2 = BoundaryComplex(bottom).kernel_dim
        if len(verts) == 2 and k2 != k - 1:
            out.append(f"2-chain {[e.names[v] for v in verts]}: kernel {k} -> {k2}")
        if len(verts) == 3 and e.labels[verts[1]] != e.labels[verts[0]] and k2 != k:
            out.append(f"3-chain {[e.names[v] for v in verts]}: kernel {k} -> {k2}")
    return out


def check_acyclicity_properties(e: Heap, c: BoundaryComplex, simply_laced: bool) -> dict[str, list[str]]:
    """Dismantlable iff acyclic; strongly acyclic implies P2, with the converse
    on simply laced graphs."""
    word = format_word(e.canonical_word())
    found: dict[str, list[str]] = {"dismantlable_iff_acyclic": [], "strongly_acyclic_p2": []}
    if is_dismantlable(e) != (c.kernel_dim == 0):
        found["dismantlable_iff_acyclic"].append(f"{word}: dismantlable={is_dismantlable(e)}, "
                                                 f"kernel {c.kernel_dim}")
    strong = is_strongly_acyclic(e)
    p2 = has_property_p2(e)
    if strong and not p2:
        found["strongly_acyclic_p2"].append(f"{word}: strongly acyclic without P2")
    if simply_laced and p2 and not strong:
        found["strongly_acyclic_p2"].append(f"{word}: P2 without strong acyclicity")
    return found


# -- weakly complex extensions ----------------------------------------------


def _simple_paths(adj: dict[int, list[int]], start: int, limit: int = 20000):
    """All simple paths from ``start`` (as vertex lists), capped at ``limit`` paths."""
    count = 0
    stack = [(start, [start])]
    while stack:
        v, path = stack.pop()
        yield path
        count += 1
        if count >= limit:
            return
        for u in adj.get(v, ()):
            if u not in path:
                stack.append((u, path + [u]))


def check_chain_label_alternation(w_heap: Heap) -> list[str]:
    """Along any chain of R-steps through boundary vertices that starts at an
    effective vertex, consecutive labels differ except possibly at the last step."""
    c = BoundaryComplex(w_heap)
    bd = set(c.boundary_vertices())
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in c.equivalence_pairs():
        if a in bd and b in bd:
            adj[a].append(b)
            adj[b].append(a)
    out = []
    lab = w_heap.labels
    for start in c.effective_boundary_vertices():
        for path in _simple_paths(adj, start):
            for i in range(len(path) - 2):
                if lab[path[i]] == lab[path[i + 1]]:
                    out.append("path " + "-".join(str(w_heap.names[v]) for v in path)
                               + f" repeats label s{lab[path[i]] + 1} before the last step")
                    break
    return sorted(set(out))


def check_weakly_complex(w_heap: Heap, s: int) -> dict[str, list[str]]:
    """Checks tied to one weakly complex left extension ``s * w``."""
    found: dict[str, list[str]] = defaultdict(list)
    st = left_multiply_status(w_heap, s, check=False)
    if st.kind is not Status.WEAKLY_COMPLEX:
        return found
    prod = st.heap
    if BoundaryComplex(prod).kernel_dim == 0:
        return found
    found["chain_label_alternation"].extend(check_chain_label_alternation(w_heap))
    found["truncated_chain_acyclic"] = []
    chain = st.chain.vertices
    truncated = delete_vertices(prod, [chain[-1]])
    k = BoundaryComplex(truncated).kernel_dim
    if k:
        found["truncated_chain_acyclic"].append(
            f"s{s + 1}*{format_word(w_heap.canonical_word())}: removing the chain top leaves kernel {k}")
    return found


# -- algebra checks -----------------------------------------------------------


def check_monomial_divisibility(alg: TLAlgebra, word: Word) -> list[str]:
    """Coefficients of b(word) in the monomial basis are integer multiples of
    (v + v^-1)^h, with h the kernel dimension of the word's heap."""
    h = BoundaryComplex(Heap.from_word(alg.graph, word)).kernel_dim
    d = (V + V_INV) ** h
    out = []
    for key, p in alg.to_b_basis(alg.b_word(word)).items():
        q = p.exact_quotient(d)
        if q is None or not q.is_constant():
            out.append(f"b({format_word(word)}): coefficient {p} of b[{format_word(key)}] "
                       f"is not an integer multiple of (v + v^-1)^{h}")
    return out


def check_deleted_letters(alg: TLAlgebra, word: Word) -> list[str]:
    """For an acyclic word heap, replacing any k letters of the t-product by -v^-1
    stays in the lattice."""
    if BoundaryComplex(Heap.from_word(alg.graph, word)).kernel_dim:
        return []
    out = []
    r = len(word)
    for k in range(r + 1):
        for drop in combinations(range(r), k):
            sub = tuple(x for i, x in enumerate(word) if i not in drop)
            val = alg.word_value(sub).scale(LaurentPoly.monomial(-k, (-1) ** k))
            if not val.in_lattice():
                out.append(f"{format_word(word)} with positions {[i + 1 for i in drop]} replaced "
                           f"leaves the lattice")
    return out


# -- driver -------------------------------------------------------------------


CHECK_NAMES = (
    "peeling_convexity", "edge_persistence", "interval_equality", "boundary_locality",
    "equivalence_transport", "effective_transport", "boundary_monotonicity",
    "equivalence_preserves_boundary", "bipartite_split", "bipartite_acyclic_deletion",
    "simply_laced_no_boundary", "dismantlable_iff_acyclic", "strongly_acyclic_p2",
    "deletion_kernel_bound", "contraction_laws",
    "chain_label_alternation", "truncated_chain_acyclic", "monomial_divisibility",
    "deleted_letter_lattice",
)


@dataclass
class BatteryReport:
    graph: str
    max_len: int
    checked: dict[str, int] = field(default_factory=lambda: {k: 0 for k in CHECK_NAMES})
    violations: dict[str, list[str]] = field(default_factory=lambda: {k: [] for k in CHECK_NAMES})

    def add(self, name: str, found: list[str]):
        self.checked[name] += 1
        self.violations[name].extend(found)

    def merge(self, findings: "Findings"):
        for name, found in findings.items():
            self.add(name, found)

    @property
    def total_violations(self) -> int:
        return sum(len(v) for v in self.violations.values())

    def to_dict(self) -> dict:
        return {"schema": 1, "graph": self.graph, "max_len": self.max_len,
                "checks": {k: {"checked": self.checked[k], "violations": self.violations[k]}
                           for k in CHECK_NAMES}}


def random_words(graph: CoxeterGraph, count: int, max_len: int, rng: random.Random) -> list[Word]:
    return [tuple(rng.randrange(graph.rank) for _ in range(rng.randint(0, max_len)))
            for _ in range(count)]


Findings = dict[str, list[str]]


def _note(out: dict[str, Findings], name: str, found: list[str]):
    out.setdefault(name, []).extend(found)


def battery_for_element(graph: CoxeterGraph, key: Word, alg: TLAlgebra, seed: int = 0,
                        algebra_len: int = 6, star_reducible: bool = True) -> Findings:
    """Checks for one FC element; keys present in the result were checked.

    Properties that only hold for star reducible groups are skipped unless
    ``star_reducible`` is set.
    """
    rng = random.Random(f"{seed}:{format_word(key)}")
    out: Findings = {}
    parts = bipartition(graph)
    simply = is_simply_laced(graph)
    e = Heap.from_word(graph, key)
    c = BoundaryComplex(e)
    masks = _subsets(e, rng, 6, 24)
    _note(out, "peeling_convexity", check_peeling(e, masks))
    for name in ("edge_persistence", "interval_equality", "boundary_locality",
                 "equivalence_transport", "effective_transport", "boundary_monotonicity"):
        out[name] = []
    for mask in masks:
        if mask and is_convex(e, mask):
            x = subheap(e, list(_bits(mask)))
            for name, found in check_convex_subheap(e, c, x).items():
                _note(out, name, found)
    _note(out, "equivalence_preserves_boundary", check_equivalence_preserves_boundary(c))
    if parts is not None:
        _note(out, "bipartite_split", check_bipartite_split(c, parts))
        if simply:
            _note(out, "bipartite_acyclic_deletion", check_acyclic_boundary_deletion(e, c))
        if simply and star_reducible:
            bd = c.boundary_vertices()
            _note(out, "simply_laced_no_boundary",
                  [f"{format_word(key)} has boundary vertices {[e.names[v] for v in bd]}"]
                  if bd else [])
    _note(out, "deletion_kernel_bound", check_deletion_bound(e, c))
    if not star_reducible:
        return out
    for name, found in check_acyclicity_properties(e, c, simply).items():
        _note(out, name, found)
    for s in range(graph.rank):
        for name, found in check_weakly_complex(e, s).items():
            _note(out, name, found)
    if len(key) <= algebra_len:
        _note(out, "deleted_letter_lattice", check_deleted_letters(alg, key))
        _note(out, "monomial_divisibility", check_monomial_divisibility(alg, key))
    return out


def battery_for_word(graph: CoxeterGraph, word: Word, alg: TLAlgebra, seed: int = 0,
                     algebra_len: int = 6, star_reducible: bool = True) -> Findings:
    """Checks that make sense for heaps of arbitrary (possibly unreduced) words."""
    rng = random.Random(f"{seed}:word:{format_word(word)}")
    out: Findings = {}
    parts = bipartition(graph)
    e = Heap.from_word(graph, word)
    c = BoundaryComplex(e)
    _note(out, "deletion_kernel_bound", check_deletion_bound(e, c))
    _note(out, "contraction_laws", check_contraction_laws(e))
    _note(out, "equivalence_preserves_boundary", check_equivalence_preserves_boundary(c))
    if parts is not None:
        _note(out, "bipartite_split", check_bipartite_split(c, parts))
        if is_simply_laced(graph):
            _note(out, "bipartite_acyclic_deletion", check_acyclic_boundary_deletion(e, c))
    masks = _subsets(e, rng, 6, 24)
    _note(out, "peeling_convexity", check_peeling(e, masks))
    for mask in masks:
        if mask and is_convex(e, mask):
            x = subheap(e, list(_bits(mask)))
            for name, found in check_convex_subheap(e, c, x).items():
                _note(out, name, found)
    if star_reducible and len(word) <= algebra_len:
        _note(out, "monomial_divisibility", check_monomial_divisibility(alg, word))
        _note(out, "deleted_letter_lattice", check_deleted_letters(alg, word))
    return out


def run_battery(graph: CoxeterGraph, max_len: int, seed: int = 0, algebra_len: int = 6,
                random_count: int = 40, keys: Iterable[Word] | None = None,
                star_reducible: bool = True) -> BatteryReport:
    """Run every check over the FC elements up to ``max_len`` plus seeded random words.

    The algebra checks are limited to words of length ``algebra_len``.
    """
    from .star import enumerate_fc
    report = BatteryReport(graph.name, max_len)
    alg = TLAlgebra(graph)
    if keys is None:
        keys = [el.key for el in enumerate_fc(graph, max_len)]
    for key in keys:
        report.merge(battery_for_element(graph, key, alg, seed, algebra_len, star_reducible))
    for word in random_words(graph, random_count, max_len, random.Random(seed)):
        report.merge(battery_for_word(graph, word, alg, seed, algebra_len, star_reducible))
    return report
