"""Exact linear algebra over the rationals.

Vectors are integer lists; elimination is fraction-free (cross-multiply then
divide out the gcd), which decides span membership over Q exactly without
building Fraction objects.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _primitive(vec: list[int]) -> list[int]:
    g = 0
    for x in vec:
        if x:
            g = gcd(g, x)
            if g == 1:
                return vec
    if g > 1:
        return [x // g for x in vec]
    return vec


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of Q^n."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, list[int]]] = []  # (pivot index, row)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        v = list(vec)
        for piv, row in self.rows:
            a = v[piv]
            if a:
                b = row[piv]
                v = [b * x - a * y for x, y in zip(v, row)]
                v = _primitive(v)
        return v

    def add(self, vec: Sequence[int]) -> bool:
        """Insert ``vec``; return whether the rank grew."""
        v = self.reduce(vec)
        for i, x in enumerate(v):
            if x:
                self.rows.append((i, v))
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self.reduce(vec))


def rank(vectors: Iterable[Sequence[int]], dim: int) -> int:
    basis = EchelonBasis(dim)
    for v in vectors:
        basis.add(v)
    return basis.rank


def solve(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Find x with sum_j x_j * columns[j] == target over Q, or None."""
    n_rows = len(target)
    n_cols = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(n_cols)] + [Fraction(target[i])]
           for i in range(n_rows)]
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n_cols] != 0 for i in range(r, n_rows)):
        return None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][n_cols]
    return x


def nullspace(columns: Sequence[Sequence[int]], n_rows: int) -> list[list[Fraction]]:
    """Basis of {x : sum_j x_j * columns[j] == 0}, one vector per free column."""
    n_cols = len(columns)
    m = [[Fraction(columns[j][i]) for j in range(n_cols)] for i in range(n_rows)]
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    out = []
    for free in (c for c in range(n_cols) if c not in pivots):
        x = [Fraction(0)] * n_cols
        x[free] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -m[i][free]
        out.append(x)
    return out
