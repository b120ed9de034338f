"""Exact arithmetic in the generalized Temperley-Lieb algebra of a Coxeter graph.

Basis elements ``t[w]`` are indexed by fully commutative elements, each stored
as its canonical word (the lexicographically least reduced word).  Products are
built from left multiplication by one generator:

* ``s`` a left descent of ``w``:  ``t[s] t[w] = t[sw] + (v - v^-1) t[w]``;
* ``sw`` still fully commutative: ``t[s] t[w] = t[sw]``;
* ``sw`` weakly complex: write ``sw = u' w_st u''`` around the alternating
  chain and replace ``t[w_st]`` by ``-sum_{u < w_st} v^(len(u) - m) t[u]``.
  Every word produced this way is shorter than ``sw``, so the recursion ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .boundary import kernel_dim
from .coxeter import CoxeterGraph, Word, format_word
from .heap import (Heap, delete_vertices, dihedral_proper_words, factor_around,
                   extension_obstruction, is_fc_heap, superpose)
from .laurent import ONE, V, V_INV, LaurentPoly

Key = Word
Terms = dict[Key, LaurentPoly]


class TLError(ValueError):
    pass


class CBasisError(TLError):
    def __init__(self, key: Key, term: Key, coeff: LaurentPoly):
        super().__init__(f"c[{format_word(key)}]: coefficient of t[{format_word(term)}] "
                         f"is {coeff}, expected it in v^-1 Z[v^-1]")
        self.key, self.term, self.coeff = key, term, coeff


def _order(key: Key):
    return (len(key), key)


def _axpy(acc: Terms, src: Mapping[Key, LaurentPoly], coeff: LaurentPoly | None = None):
    for k, p in src.items():
        q = p if coeff is None else p * coeff
        if not q:
            continue
        r = acc.get(k)
        r = q if r is None else r + q
        if r:
            acc[k] = r
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class TLElement:
    graph: CoxeterGraph
    terms: Mapping[Key, LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: p for k, p in self.terms.items() if p})

    def coeff(self, key: Key) -> LaurentPoly:
        return self.terms.get(tuple(key), LaurentPoly())

    def support(self) -> list[Key]:
        return sorted(self.terms, key=_order)

    def leading(self) -> Key | None:
        return max(self.terms, key=_order) if self.terms else None

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "TLElement"):
        if self.graph != other.graph:
            raise TLError("elements live over different graphs")

    def __add__(self, other: "TLElement") -> "TLElement":
        self._check(other)
        acc = dict(self.terms)
        _axpy(acc, other.terms)
        return TLElement(self.graph, acc)

    def __neg__(self):
        return TLElement(self.graph, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other: "TLElement") -> "TLElement":
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "TLElement":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return TLElement(self.graph, {k: p * c for k, p in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TLElement):
            return NotImplemented
        return self.graph == other.graph and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.graph, frozenset(self.terms.items())))

    def in_lattice(self) -> bool:
        return all(p.in_a_minus() for p in self.terms.values())

    def in_v_inverse_lattice(self) -> bool:
        return all(p.in_v_inverse_a_minus() for p in self.terms.values())

    def __str__(self):
        if not self.terms:
            return "0"
        lines = []
        for k in self.support():
            p = self.terms[k]
            c = str(p)
            if len(p) > 1:
                c = f"({c})"
            lines.append(f"{c} * t[{format_word(k)}]")
        return "\n".join(lines)


def in_lattice(x: TLElement) -> bool:
    return x.in_lattice()


def in_v_inverse_lattice(x: TLElement) -> bool:
    return x.in_v_inverse_lattice()


class TLAlgebra:
    """Caches heaps, generator actions and the b- and c-bases for one graph.

    Not thread-safe; give each worker its own instance.
    """

    def __init__(self, graph: CoxeterGraph):
        self.graph = graph
        self._heaps: dict[Key, Heap] = {}
        self._gen: dict[tuple[int, Key], Terms] = {}
        self._prod: dict[tuple[Key, Key], Terms] = {}
        self._b: dict[Key, TLElement] = {}
        self._c: dict[Key, TLElement] = {}
        self.mu: dict[Key, tuple[int, dict[Key, int]]] = {}

    # -- keys ---------------------------------------------------------------

    def heap(self, key: Key) -> Heap:
        h = self._heaps.get(key)
        if h is None:
            h = Heap.from_word(self.graph, key)
            self._heaps[key] = h
        return h

    def key(self, word: Iterable[int]) -> Key:
        """Canonical key of a reduced word of a fully commutative element."""
        h = Heap.from_word(self.graph, word)
        if not is_fc_heap(h):
            raise TLError(f"{format_word(h.labels)} is not a reduced word of a fully "
                          f"commutative element")
        k = h.canonical_word()
        self._heaps.setdefault(k, h)
        return k

    def reverse_key(self, key: Key) -> Key:
        return Heap.from_word(self.graph, key[::-1]).canonical_word()

    # -- elements -----------------------------------------------------------

    def element(self, terms: Mapping[Key, LaurentPoly]) -> TLElement:
        return TLElement(self.graph, dict(terms))

    def one(self) -> TLElement:
        return self.element({(): ONE})

    def t(self, word: Iterable[int]) -> TLElement:
        return self.element({self.key(word): ONE})

    def zero(self) -> TLElement:
        return self.element({})

    # -- generator action ---------------------------------------------------

    def _gen_basis(self, s: int, key: Key) -> Terms:
        cached = self._gen.get((s, key))
        if cached is not None:
            return cached
        h = self.heap(key)
        if s in h.minimal_labels():
            lower = delete_vertices(h, [h.chain(s)[0]]).canonical_word()
            out = {lower: ONE, key: V - V_INV}
        else:
            prod = superpose(Heap.from_word(self.graph, (s,)), h)
            found = extension_obstruction(prod, 0)
            if found is None:
                out = {prod.canonical_word(): ONE}
            else:
                out = self._weakly_complex(prod, found[1])
        self._gen[(s, key)] = out
        return out

    def _weakly_complex(self, prod: Heap, chain) -> Terms:
        prefix, block, suffix = factor_around(prod, chain.vertices)
        m = len(block)
        tail = Heap.from_word(self.graph, suffix)
        if is_fc_heap(tail):
            start, head = {tail.canonical_word(): ONE}, prefix
        else:
            start, head = {(): ONE}, prefix + suffix  # not expected; stay correct anyway
        out: Terms = {}
        for u in dihedral_proper_words(block[0], block[1], m):
            word = head[:len(prefix)] + u + head[len(prefix):]
            val = self._fold_left(word, start)
            _axpy(out, val, LaurentPoly.monomial(len(u) - m, -1))
        return out

    def _fold_left(self, word: Word, terms: Terms) -> Terms:
        for s in reversed(word):
            acc: Terms = {}
            for k, p in terms.items():
                _axpy(acc, self._gen_basis(s, k), p)
            terms = acc
        return terms

    def mult_gen_left(self, s: int, x: TLElement) -> TLElement:
        return self.element(self._fold_left((s,), dict(x.terms)))

    def reverse(self, x: TLElement) -> TLElement:
        """The anti-automorphism sending ``t[w]`` to ``t[w^-1]``."""
        return self.element({self.reverse_key(k): p for k, p in x.terms.items()})

    def mult_gen_right(self, x: TLElement, s: int) -> TLElement:
        return self.reverse(self.mult_gen_left(s, self.reverse(x)))

    def word_value(self, word: Iterable[int]) -> TLElement:
        """``t[s1] t[s2] ... t[sr]`` for an arbitrary word."""
        return self.element(self._fold_left(tuple(word), {(): ONE}))

    def _basis_product(self, kx: Key, ky: Key) -> Terms:
        cached = self._prod.get((kx, ky))
        if cached is None:
            if not kx:
                cached = {ky: ONE}
            else:
                # kx[1:] is again a canonical key
                inner = self._basis_product(kx[1:], ky)
                cached = self._fold_left(kx[:1], inner)
            self._prod[(kx, ky)] = cached
        return cached

    def mult(self, x: TLElement, y: TLElement) -> TLElement:
        if x.graph != self.graph or y.graph != self.graph:
            raise TLError("graph mismatch")
        acc: Terms = {}
        for kx, px in x.terms.items():
            for ky, py in y.terms.items():
                _axpy(acc, self._basis_product(kx, ky), px * py)
        return self.element(acc)

    # -- monomial basis -----------------------------------------------------

    def b_word(self, word: Iterable[int]) -> TLElement:
        """``b[s1] b[s2] ... b[sr]`` for any word, reduced or not."""
        terms: Terms = {(): ONE}
        for s in reversed(tuple(word)):
            acc = self._fold_left((s,), terms)
            _axpy(acc, terms, V_INV)
            terms = acc
        return self.element(terms)

    def b_element(self, word: Iterable[int]) -> TLElement:
        key = self.key(word)
        cached = self._b.get(key)
        if cached is None:
            if not key:
                cached = self.one()
            else:
                rest = self.b_element(key[1:])
                acc = self._fold_left(key[:1], dict(rest.terms))
                _axpy(acc, rest.terms, V_INV)
                cached = self.element(acc)
            self._b[key] = cached
        return cached

    # -- canonical basis ----------------------------------------------------

    def c_element(self, word: Iterable[int]) -> TLElement:
        key = self.key(word)
        cached = self._c.get(key)
        if cached is not None:
            return cached
        if not key:
            self._c[key] = self.one()
            self.mu[key] = (-1, {})
            return self._c[key]
        h = self.heap(key)
        s = min(h.minimal_labels())
        lower = delete_vertices(h, [h.chain(s)[0]]).canonical_word()
        c_lower = self.c_element(lower)
        acc = self._fold_left((s,), dict(c_lower.terms))
        _axpy(acc, c_lower.terms, V_INV)
        mus: dict[Key, int] = {}
        for y in sorted(acc, key=_order, reverse=True):
            if y == key or y not in acc:
                continue
            mu = acc[y][0]
            if mu and s in self.heap(y).minimal_labels():
                mus[y] = mu
                _axpy(acc, self.c_element(y).terms, LaurentPoly.const(-mu))
        for y, p in acc.items():
            if y == key:
                if p != ONE:
                    raise CBasisError(key, y, p)
            elif not p.in_v_inverse_a_minus():
                raise CBasisError(key, y, p)
        if acc.get(key) != ONE:
            raise CBasisError(key, key, acc.get(key, LaurentPoly()))
        result = self.element(acc)
        self._c[key] = result
        self.mu[key] = (s, mus)
        return result

    # -- changes of basis ---------------------------------------------------

    def _expand(self, x: TLElement, basis) -> dict[Key, LaurentPoly]:
        rest = dict(x.terms)
        out: dict[Key, LaurentPoly] = {}
        while rest:
            y = max(rest, key=_order)
            p = rest[y]
            out[y] = p
            _axpy(rest, basis(y).terms, -p)
            if y in rest:
                raise TLError(f"basis element for {format_word(y)} is not unitriangular")
        return out

    def to_c_basis(self, x: TLElement) -> dict[Key, LaurentPoly]:
        return self._expand(x, self.c_element)

    def to_b_basis(self, x: TLElement) -> dict[Key, LaurentPoly]:
        return self._expand(x, self.b_element)


# -- lattices ---------------------------------------------------------------


def sub_lattice_membership(alg: TLAlgebra, x: TLElement, s: int, side: str = "left") -> bool:
    """Membership in the A^- lattice spanned by ``t[w]`` (s a descent of w on the
    given side) and ``v^-1 t[w]`` (s not a descent)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    for k, p in x.terms.items():
        h = alg.heap(k)
        desc = h.minimal_labels() if side == "left" else h.maximal_labels()
        if s in desc:
            if not p.in_a_minus():
                return False
        elif not p.in_v_inverse_a_minus():
            return False
    return True


def h_function(graph: CoxeterGraph, word: Iterable[int]) -> int:
    return kernel_dim(Heap.from_word(graph, word))


# -- campaign checks --------------------------------------------------------


@dataclass
class PropertyWFailure:
    word: Key
    s: int
    value: TLElement


def weakly_complex_extensions(alg: TLAlgebra, key: Key) -> list[int]:
    h = alg.heap(key)
    out = []
    for s in range(alg.graph.rank):
        if s in h.minimal_labels():
            continue
        if extension_obstruction(superpose(Heap.from_word(alg.graph, (s,)), h), 0) is not None:
            out.append(s)
    return out


def property_w_failures(alg: TLAlgebra, keys: Iterable[Key]) -> list[PropertyWFailure]:
    out = []
    for key in keys:
        for s in weakly_complex_extensions(alg, key):
            val = alg.word_value((s,) + key)
            if not val.in_v_inverse_lattice():
                out.append(PropertyWFailure(key, s, val))
    return out


def check_property_w(graph: CoxeterGraph, max_len: int,
                     alg: TLAlgebra | None = None) -> list[PropertyWFailure]:
    from .star import enumerate_fc
    alg = alg or TLAlgebra(graph)
    keys = [el.key for el in enumerate_fc(graph, max_len)]
    return property_w_failures(alg, keys)


def structure_constants_c(alg: TLAlgebra, keys: Iterable[Key],
                          budget: int) -> dict[tuple[Key, Key], dict[Key, LaurentPoly]]:
    """``c[x] c[y]`` expanded in the c-basis for all pairs with total length at most ``budget``."""
    keys = sorted(keys, key=_order)
    table = {}
    for x in keys:
        for y in keys:
            if len(x) + len(y) > budget:
                continue
            prod = alg.mult(alg.c_element(x), alg.c_element(y))
            table[(x, y)] = alg.to_c_basis(prod)
    return table


def check_nonnegativity(table: Mapping[tuple[Key, Key], Mapping[Key, LaurentPoly]]):
    """Entries ``(x, y, z, coefficient)`` with a negative integer coefficient."""
    bad = []
    for (x, y), row in sorted(table.items(), key=lambda kv: (_order(kv[0][0]), _order(kv[0][1]))):
        for z in sorted(row, key=_order):
            if not row[z].is_nonnegative():
                bad.append((x, y, z, row[z]))
    return bad
