"""Coxeter graphs, words in the generators, and the standard line families.

Generators are indexed ``0..rank-1`` internally and printed as ``s1..sN``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

INF = math.inf

Word = tuple[int, ...]


class GraphError(ValueError):
    """Raised for malformed graph definitions or invalid family parameters."""


class ParseError(ValueError):
    """A parse failure carrying a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CoxeterGraph:
    """Symmetric bond matrix ``m(s, t)`` on ``rank`` generators.

    ``bonds`` holds the full matrix with ``1`` on the diagonal; entries off the
    diagonal are integers ``>= 2`` or :data:`INF`.
    """

    rank: int
    bonds: tuple[tuple[float, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.rank < 1:
            raise GraphError("rank must be positive")
        if len(self.bonds) != self.rank or any(len(r) != self.rank for r in self.bonds):
            raise GraphError("bond matrix has the wrong shape")
        for s in range(self.rank):
            if self.bonds[s][s] != 1:
                raise GraphError("diagonal bonds must be 1")
            for t in range(self.rank):
                if s == t:
                    continue
                m = self.bonds[s][t]
                if m != self.bonds[t][s]:
                    raise GraphError(f"bond matrix not symmetric at ({s + 1},{t + 1})")
                if m != INF and (m < 2 or m != int(m)):
                    raise GraphError(f"invalid bond {m} at ({s + 1},{t + 1})")
        # bitmask of generators concurrent with s (s itself and its neighbours)
        masks = tuple(
            sum(1 << t for t in range(self.rank) if t == s or self.bonds[s][t] >= 3)
            for s in range(self.rank)
        )
        object.__setattr__(self, "_concurrent", masks)

    @classmethod
    def from_bonds(cls, rank: int, bonds: dict[tuple[int, int], float], name: str = ""):
        """Build from a sparse ``{(s, t): m}`` map (0-based); missing pairs get 2."""
        matrix = [[1 if s == t else 2 for t in range(rank)] for s in range(rank)]
        for (s, t), m in bonds.items():
            if not (0 <= s < rank and 0 <= t < rank) or s == t:
                raise GraphError(f"bad generator pair ({s + 1},{t + 1})")
            matrix[s][t] = matrix[t][s] = m
        return cls(rank, tuple(tuple(r) for r in matrix), name)

    def m(self, s: int, t: int) -> float:
        return self.bonds[s][t]

    def adjacent(self, s: int, t: int) -> bool:
        return s != t and self.bonds[s][t] >= 3

    def concurrent(self, s: int, t: int) -> bool:
        return bool(self._concurrent[s] >> t & 1)

    def concurrent_mask(self, s: int) -> int:
        return self._concurrent[s]

    def neighbors(self, s: int) -> list[int]:
        return [t for t in range(self.rank) if self.adjacent(s, t)]

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        return [(s, t) for s in range(self.rank) for t in range(s + 1, self.rank)
                if self.adjacent(s, t)]

    def check_word(self, word: Iterable[int]) -> Word:
        word = tuple(word)
        for letter in word:
            if not 0 <= letter < self.rank:
                raise GraphError(f"generator s{letter + 1} out of range for rank {self.rank}")
        return word

    def to_text(self) -> str:
        """Serialise in the graph-file format (1-based, ``inf`` for infinite bonds)."""
        lines = [f"rank {self.rank}"]
        for s, t in self.adjacent_pairs():
            m = self.bonds[s][t]
            lines.append(f"bond {s + 1} {t + 1} {'inf' if m == INF else int(m)}")
        return "\n".join(lines) + "\n"

    def describe(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "bonds": [[s + 1, t + 1, "inf" if self.m(s, t) == INF else int(self.m(s, t))]
                      for s, t in self.adjacent_pairs()],
        }

    def __repr__(self):
        label = self.name or "CoxeterGraph"
        return f"<{label} rank={self.rank}>"


def _line(n: int, special: dict[int, float], name: str) -> CoxeterGraph:
    bonds = {(i, i + 1): 3 for i in range(n - 1)}
    bonds.update({(i, i + 1): m for i, m in special.items()})
    return CoxeterGraph.from_bonds(n, bonds, name)


def A_line(n: int) -> CoxeterGraph:
    if n < 1:
        raise GraphError("A_line needs n >= 1")
    return _line(n, {}, f"A{n}")


def B_line(n: int) -> CoxeterGraph:
    """Line with ``m(s1, s2) = 4``."""
    if n < 2:
        raise GraphError("B_line needs n >= 2")
    return _line(n, {0: 4}, f"B{n}")


def H_line(n: int) -> CoxeterGraph:
    """Line with ``m(s1, s2) = 5``."""
    if n < 2:
        raise GraphError("H_line needs n >= 2")
    return _line(n, {0: 5}, f"H{n}")


def F_line(n: int) -> CoxeterGraph:
    """Line with ``m(s2, s3) = 4``."""
    if n < 3:
        raise GraphError("F_line needs n >= 3")
    return _line(n, {1: 4}, f"F{n}")


def C_affine_odd(n: int) -> CoxeterGraph:
    """Type C~n for odd n: a line on n+1 generators with 4-bonds at both ends."""
    if n < 3 or n % 2 == 0:
        raise GraphError("C_affine_odd needs odd n >= 3")
    return _line(n + 1, {0: 4, n - 1: 4}, f"Caff{n}")


def complete(n: int, m: float = 3) -> CoxeterGraph:
    if n < 1:
        raise GraphError("complete needs n >= 1")
    if m != INF and m < 3:
        raise GraphError("complete graph bonds must be >= 3")
    bonds = {(s, t): m for s in range(n) for t in range(s + 1, n)}
    label = "inf" if m == INF else int(m)
    return CoxeterGraph.from_bonds(n, bonds, f"K{n}m{label}")


FAMILIES = {
    "A_line": A_line,
    "B_line": B_line,
    "H_line": H_line,
    "F_line": F_line,
    "C_affine_odd": C_affine_odd,
    "complete": complete,
}

_SHORT = {"A": "A_line", "B": "B_line", "H": "H_line", "F": "F_line",
          "Caff": "C_affine_odd", "Ct": "C_affine_odd", "C~": "C_affine_odd"}


def build_family(family: str, n: int, m: float | None = None) -> CoxeterGraph:
    """Build one of the named families; ``m`` is only used by ``complete``."""
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown family {family!r}") from None
    if family == "complete":
        return builder(n, 3 if m is None else m)
    if m is not None:
        raise GraphError(f"{family} takes no bond parameter")
    return builder(n)


def _parse_bond(token: str) -> float:
    if token.lower() in ("inf", "infinity", "oo"):
        return INF
    return int(token)


def parse_family_spec(spec: str) -> CoxeterGraph:
    """Parse ``A6``, ``Caff5``, ``K4m4``, ``B_line(4)`` or ``complete(4,4)``."""
    spec = spec.strip()
    match = re.fullmatch(r"(\w+)\((\d+)(?:\s*,\s*(\w+))?\)", spec)
    if match:
        family, n, m = match.groups()
        return build_family(family, int(n), None if m is None else _parse_bond(m))
    match = re.fullmatch(r"K(\d+)(?:m(\d+|inf))?", spec)
    if match:
        n, m = match.groups()
        return complete(int(n), 3 if m is None else _parse_bond(m))
    match = re.fullmatch(r"(Caff|Ct|C~|A|B|H|F)(\d+)", spec)
    if match:
        short, n = match.groups()
        return build_family(_SHORT[short], int(n))
    raise GraphError(f"unrecognised family spec {spec!r}")


def parse_graph_text(text: str) -> CoxeterGraph:
    """Parse the graph-file format: ``rank N`` then ``bond i j m`` lines (1-based)."""
    rank = None
    bonds: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        column = raw.index(tokens[0]) + 1
        if tokens[0] == "rank":
            if rank is not None:
                raise ParseError("duplicate rank line", lineno, column)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ParseError("expected 'rank N' with N >= 1", lineno, column)
            rank = int(tokens[1])
        elif tokens[0] == "bond":
            if rank is None:
                raise ParseError("bond before rank line", lineno, column)
            if len(tokens) != 4:
                raise ParseError("expected 'bond i j m'", lineno, column)
            fields = []
            at = column
            for k, (tok, conv) in enumerate(zip(tokens[1:], (int, int, _parse_bond)), start=1):
                at = raw.index(tok, at)
                try:
                    fields.append(conv(tok))
                except ValueError:
                    raise ParseError(f"non-numeric bond field {tok!r}", lineno, at + 1) from None
                at += len(tok)
            i, j, m = fields
            if not (1 <= i <= rank and 1 <= j <= rank) or i == j:
                raise ParseError(f"bad generator pair {i} {j}", lineno, raw.index(tokens[1]) + 1)
            if m != INF and m < 3:
                raise ParseError("bond value must be >= 3 or inf", lineno, raw.rindex(tokens[3]) + 1)
            key = (min(i, j) - 1, max(i, j) - 1)
            if key in bonds:
                raise ParseError(f"duplicate bond {i} {j}", lineno, column)
            bonds[key] = m
        else:
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno, column)
    if rank is None:
        raise ParseError("missing rank line", 1, 1)
    return CoxeterGraph.from_bonds(rank, bonds)


def load_graph(source: str) -> CoxeterGraph:
    """Resolve ``family:<spec>`` or a path to a graph file."""
    if source.startswith("family:"):
        return parse_family_spec(source[len("family:"):])
    path = Path(source)
    graph = parse_graph_text(path.read_text(encoding="utf-8"))
    return CoxeterGraph(graph.rank, graph.bonds, path.stem)


_LETTER = re.compile(r"s?(\d+)")


def parse_word(text: str, graph: CoxeterGraph | None = None) -> Word:
    """Parse ``s1s3s2``, ``s1 s3 s2``, ``1,3,2`` or ``1 3 2`` into a 0-based word.

    A bare ``1`` means ``s1``; the empty word is ``""`` or ``e``.
    """
    stripped = text.strip()
    if stripped in ("", "e", "1_W", "()"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in " ,\t*·":
            pos += 1
            continue
        match = _LETTER.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {ch!r}", 1, pos + 1)
        index = int(match.group(1))
        if index < 1 or (graph is not None and index > graph.rank):
            raise ParseError(f"generator s{index} out of range", 1, pos + 1)
        letters.append(index - 1)
        pos = match.end()
    return tuple(letters)


def format_word(word: Sequence[int]) -> str:
    return "".join(f"s{s + 1}" for s in word) if word else "1"


def bipartition(graph: CoxeterGraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """2-colour the concurrency graph (edges where ``m >= 3``).

    Returns the two colour classes, or ``None`` when there is an odd cycle.
    """
    colour: dict[int, int] = {}
    for root in range(graph.rank):
        if root in colour:
            continue
        colour[root] = 0
        stack = [root]
        while stack:
            s = stack.pop()
            for t in graph.neighbors(s):
                if t not in colour:
                    colour[t] = 1 - colour[s]
                    stack.append(t)
                elif colour[t] == colour[s]:
                    return None
    return (frozenset(s for s, c in colour.items() if c == 0),
            frozenset(s for s, c in colour.items() if c == 1))


def is_bipartite(graph: CoxeterGraph) -> bool:
    return bipartition(graph) is not None


def is_simply_laced(graph: CoxeterGraph) -> bool:
    return all(graph.m(s, t) <= 3 for s in range(graph.rank) for t in range(graph.rank) if s != t)


def line_bonds(graph: CoxeterGraph) -> list[float] | None:
    """Consecutive bonds ``m(s_i, s_{i+1})`` if the graph is the straight line
    ``s1 - s2 - ... - sn`` in index order, else ``None``."""
    for s in range(graph.rank):
        for t in range(s + 1, graph.rank):
            if graph.adjacent(s, t) != (t == s + 1):
                return None
    return [graph.m(i, i + 1) for i in range(graph.rank - 1)]
