"""Forbidden trace configurations on straight-line Coxeter graphs.

A trace ``[x A y B z]`` with ``y`` avoiding a letter set is searched for at
the heap level.  Fix the vertex sets of the two blocks; every vertex above
some A-vertex and below some B-vertex must sit in ``y``, and that minimal
``y`` works whenever any does.  So a match exists iff for some choice the
union ``C`` of blocks and ``y`` is convex, A is an order ideal of ``C``, B is
a filter of ``C``, each block can be read in the prescribed letter order, and
``y`` avoids the letters.  :func:`brute_trace_factor` enumerates linear
extensions instead and is kept as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .coxeter import CoxeterGraph, Word, format_word, line_bonds
from .heap import Heap, _bits, _mask, down_closure, is_convex, up_closure


def _block_choices(e: Heap, word: Word) -> list[tuple[int, tuple[int, ...]]]:
    """Vertex sets that can be read as ``word`` in some order compatible with ``e``.

    Returns ``(mask, vertices in word order)`` pairs.
    """
    need: dict[int, int] = {}
    for s in word:
        need[s] = need.get(s, 0) + 1
    options = []
    for s, k in need.items():
        options.append([(s, c) for c in combinations(e.chain(s), k)])
    out = []
    for pick in product(*options):
        slots = {s: list(c) for s, c in pick}
        seq = []
        used: dict[int, int] = {}
        for s in word:
            i = used.get(s, 0)
            seq.append(slots[s][i])
            used[s] = i + 1
        # the word order must not contradict the heap order
        if all(not e.less(seq[j], seq[i]) for i in range(len(seq)) for j in range(i + 1, len(seq))):
            out.append((_mask(seq), tuple(seq)))
    return out


@dataclass(frozen=True)
class TraceMatch:
    first: tuple[int, ...]
    middle: tuple[int, ...]
    second: tuple[int, ...]


def find_trace_factor(e: Heap, first: Word, second: Word, avoid: Iterable[int]) -> TraceMatch | None:
    avoid_set = set(avoid)
    for a_mask, a_seq in _block_choices(e, first):
        a_up = up_closure(e, a_mask)
        for b_mask, b_seq in _block_choices(e, second):
            if a_mask & b_mask:
                continue
            middle = a_up & down_closure(e, b_mask) & ~a_mask & ~b_mask
            if any(e.labels[v] in avoid_set for v in _bits(middle)):
                continue
            c = a_mask | b_mask | middle
            if not is_convex(e, c):
                continue
            # A must be an ideal of C and B a filter of C
            if down_closure(e, a_mask) & c & ~a_mask:
                continue
            if up_closure(e, b_mask) & c & ~b_mask:
                continue
            return TraceMatch(a_seq, tuple(_bits(middle)), b_seq)
    return None


def brute_trace_factor(e: Heap, first: Word, second: Word, avoid: Iterable[int]) -> bool:
    """Same question, answered by scanning every linear extension (small heaps only)."""
    avoid_set = set(avoid)
    la, lb = len(first), len(second)
    for ext in e.linear_extensions():
        word = [e.labels[v] for v in ext]
        n = len(word)
        for i in range(n - la + 1):
            if tuple(word[i:i + la]) != tuple(first):
                continue
            for j in range(i + la, n - lb + 1):
                if any(word[k] in avoid_set for k in range(i + la, j)):
                    break
                if tuple(word[j:j + lb]) == tuple(second):
                    return True
    return False


def letters_between(e: Heap, a: int, b: int, label: int) -> int:
    """Number of vertices labelled ``label`` strictly between ``a`` and ``b``."""
    return sum(1 for v in _bits(e.up[a] & e.down[b]) if e.labels[v] == label)


# -- rules -----------------------------------------------------------------


@dataclass
class Rule:
    name: str
    check: Callable[[Heap], list[str]]


@dataclass
class ScanReport:
    graph: str
    max_len: int
    rules: list[str]
    advisory: str | None
    elements: int = 0
    matches: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "graph": self.graph,
            "max_len": self.max_len,
            "rules": self.rules,
            "advisory": self.advisory,
            "elements": self.elements,
            "matches": self.matches,
        }


def _s(i: int) -> int:
    """1-based generator name to 0-based index."""
    return i - 1


def occurrence_bound_rule(labels: Sequence[int], bound: int) -> Rule:
    def check(e: Heap) -> list[str]:
        out = []
        for s in labels:
            k = sum(1 for x in e.labels if x == s)
            if k > bound:
                out.append(f"s{s + 1} occurs {k} times")
        return out
    names = ",".join(f"s{s + 1}" for s in labels)
    return Rule(f"at most {bound} occurrences of {names}", check)


def return_rule(i: int, side: str, rank: int) -> Rule:
    """Between two consecutive occurrences of ``s_i`` there must be an ``s_{i-1}``
    (side ``"left"``) or an ``s_{i+1}`` (side ``"right"``)."""
    s = _s(i)
    nb = s - 1 if side == "left" else s + 1

    def check(e: Heap) -> list[str]:
        out = []
        chain = e.chain(s)
        for a, b in zip(chain, chain[1:]):
            if not (0 <= nb < rank) or not letters_between(e, a, b, nb):
                out.append(f"s{i} at {e.names[a]},{e.names[b]} without s{nb + 1} between")
        return out
    return Rule(f"s{i}..s{i} needs s{nb + 1} between", check)


def unique_between_rule(i: int, mid: int, absent: Sequence[int]) -> Rule:
    """Consecutive ``s_i`` with none of ``absent`` between have exactly one ``s_mid`` between."""
    s, m = _s(i), _s(mid)
    absent0 = [_s(a) for a in absent]

    def check(e: Heap) -> list[str]:
        out = []
        chain = e.chain(s)
        for a, b in zip(chain, chain[1:]):
            if any(letters_between(e, a, b, x) for x in absent0):
                continue
            k = letters_between(e, a, b, m)
            if k != 1:
                out.append(f"s{i} at {e.names[a]},{e.names[b]} has {k} s{mid} between")
        return out
    return Rule(f"s{i}..s{i} avoiding {','.join(f's{a}' for a in absent)} has one s{mid}", check)


def pattern_rule(first: Sequence[int], second: Sequence[int], avoid: Sequence[int]) -> Rule:
    """No trace ``[x A y B z]`` with ``y`` free of ``avoid`` (1-based letters)."""
    a = tuple(_s(i) for i in first)
    b = tuple(_s(i) for i in second)
    av = [_s(i) for i in avoid]

    def check(e: Heap) -> list[str]:
        if any(x < 0 or x >= e.graph.rank for x in a + b):
            return []
        m = find_trace_factor(e, a, b, av)
        if m is None:
            return []
        names = e.names
        return [f"blocks at {[names[v] for v in m.first]} and {[names[v] for v in m.second]}, "
                f"middle {[names[v] for v in m.middle]}"]
    name = f"[x {format_word(a)} y {format_word(b)} z], y without {','.join(f's{i}' for i in avoid)}"
    return Rule(name, check)


def _classify(graph: CoxeterGraph) -> str | None:
    bonds = line_bonds(graph)
    if bonds is None:
        return None
    special = [(i, b) for i, b in enumerate(bonds) if b != 3]
    n = graph.rank
    if not special:
        return "A"
    if n == 3 and special == [(0, 4)]:
        return "B3"
    if special == [(0, 4)]:
        return "B"
    if special == [(0, 5)]:
        return "H"
    if n >= 4 and special == [(1, 4)]:
        return "F"
    if n >= 4 and n % 2 == 0 and special == [(0, 4), (n - 2, 4)]:
        return "Caff"
    return "line"


def rules_for(graph: CoxeterGraph) -> tuple[list[Rule], str | None]:
    """Rules applying to ``graph`` and an advisory message when it is not one of
    the families the patterns are stated for."""
    kind = _classify(graph)
    if kind is None:
        return [], "graph is not a straight line; no forbidden-configuration rules apply"
    bonds = line_bonds(graph)
    n = graph.rank
    rules: list[Rule] = []
    # return rules: all bonds on one side of s_i equal to 3
    for i in range(1, n + 1):
        if all(b == 3 for b in bonds[i - 1:]):
            rules.append(return_rule(i, "left", n))
        if all(b == 3 for b in bonds[:i - 1]):
            rules.append(return_rule(i, "right", n))
    advisory = None
    if kind == "B3":
        rules.append(occurrence_bound_rule([1, 2], 3))
    elif kind == "F":
        rules.append(unique_between_rule(3, 2, [3, 4]))
        rules.append(pattern_rule([1, 2], [3, 2, 1, 3], [3, 4]))
        rules.append(pattern_rule([4, 3], [2, 3, 2, 4], [4, 5]))
        rules.append(pattern_rule([3, 1, 2, 3], [2, 1], [3, 4]))
        rules.append(pattern_rule([4, 2, 3, 2], [3, 4], [4, 5]))
    if kind in ("F", "H"):
        for i in range(1, n - 1):
            rules.append(pattern_rule([i, i + 2, i + 1], [i + 1, i + 2, i], [i + 2, i + 3]))
    if kind == "Caff":
        for i in range(1, n - 1):
            rules.append(pattern_rule([i + 2, i, i + 1], [i + 1, i], [i, i - 1]))
            rules.append(pattern_rule([i, i + 1], [i + 1, i, i + 2], [i, i - 1]))
            rules.append(pattern_rule([i + 2, i + 1], [i + 1, i + 2, i], [i + 2, i + 3]))
            rules.append(pattern_rule([i, i + 2, i + 1], [i + 1, i + 2], [i + 2, i + 3]))
    if kind in ("A", "B", "line"):
        advisory = (f"graph {graph.name or '?'} has no family-specific patterns; "
                    f"only the line return rules were checked")
    return rules, advisory


def scan_heap(e: Heap, rules: Iterable[Rule]) -> list[tuple[str, str]]:
    out = []
    for rule in rules:
        for detail in rule.check(e):
            out.append((rule.name, detail))
    return out


def forbidden_scan(graph: CoxeterGraph, max_len: int) -> ScanReport:
    from .star import enumerate_fc
    rules, advisory = rules_for(graph)
    report = ScanReport(graph.name, max_len, [r.name for r in rules], advisory)
    for el in enumerate_fc(graph, max_len):
        report.elements += 1
        for rule_name, detail in scan_heap(el.heap, rules):
            report.matches.append({"element": format_word(el.key), "rule": rule_name,
                                   "detail": detail})
    return report
