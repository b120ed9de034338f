import random

import pytest
from hypothesis import assume, given, strategies as st

from fcheaps.boundary import kernel_dim
from fcheaps.coxeter import INF, build_family, parse_word
from fcheaps.heap import (ChainSpec, Heap, HeapError, Status, _bits, _mask, balanced_convex_chains,
                          contract, delete_vertices, dihedral_proper_words, dismantling_sequence,
                          down_closure, factor_around, has_property_p2, is_convex,
                          is_convex_by_peeling, is_dismantlable, is_fc_heap, is_fc_word,
                          is_isomorphic, left_descents, left_multiply_status, right_descents,
                          right_multiply_status, subheap, superpose, to_dot, up_closure)
from oracles import braid_class, commutation_class, word_heap_order
from strategies import graph_and_word

CAFF7 = build_family("C_affine_odd", 7)
W_CAFF = parse_word("s1s3s5s2s4s6s1s3s5s7")
A2, A3 = build_family("A_line", 2), build_family("A_line", 3)
B2, B4 = build_family("B_line", 2), build_family("B_line", 4)


def bond(g):
    def m(s, t):
        if s == t:
            return 1
        v = g.m(s, t)
        return None if v == INF else int(v)
    return m


def reduced_and_fc(g, word):
    cls = braid_class(word, bond(g))
    reduced = not any(u[i] == u[i + 1] for u in cls for i in range(len(u) - 1))
    return reduced, reduced and commutation_class(word, bond(g)) == cls


# -- construction ---------------------------------------------------------------


def test_caff_heap_order():
    e = Heap.from_word(CAFF7, W_CAFF)
    assert len(e) == 10
    assert e.less(0, 3)  # vertex 1 (s1) below vertex 4 (s2)
    assert e.check_axioms()


def test_trivial_heaps():
    assert len(Heap.from_word(A3, ())) == 0
    e = Heap.from_word(A3, (0, 2))
    assert e.is_trivial() and not e.comparable(0, 1)


@given(graph_and_word())
def test_order_matches_definition(gw):
    g, word = gw
    e = Heap.from_word(g, word)
    ref = word_heap_order(word, g.adjacent)
    assert all(e.less(i, j) == ref[i][j] for i in range(len(word)) for j in range(len(word)))
    assert e.check_axioms()


@given(graph_and_word(max_len=7))
def test_canonical_word_is_a_commutation_invariant(gw):
    g, word = gw
    cls = commutation_class(word, bond(g))
    keys = {Heap.from_word(g, u).canonical_word() for u in cls}
    assert len(keys) == 1
    # linear extensions of the heap are exactly the commutation class
    e = Heap.from_word(g, word)
    exts = {tuple(e.labels[v] for v in ext) for ext in e.linear_extensions()}
    assert exts == set(cls)


@given(graph_and_word(max_len=6), graph_and_word(max_len=6))
def test_canonical_word_separates_classes(a, b):
    g, u = a
    v = tuple(x % g.rank for x in b[1])
    same = v in commutation_class(u, bond(g))
    assert (Heap.from_word(g, u) == Heap.from_word(g, v)) == same


@given(graph_and_word(max_len=7), st.randoms(use_true_random=False))
def test_random_swaps_give_isomorphic_heaps(gw, rnd):
    g, word = gw
    w = list(word)
    for _ in range(10):
        if len(w) < 2:
            break
        i = rnd.randrange(len(w) - 1)
        if g.m(w[i], w[i + 1]) == 2 and w[i] != w[i + 1]:
            w[i], w[i + 1] = w[i + 1], w[i]
    assert is_isomorphic(Heap.from_word(g, word), Heap.from_word(g, w))


@given(graph_and_word(max_len=6), st.data())
def test_superposition_is_concatenation(gw, data):
    g, u = gw
    v = tuple(data.draw(st.lists(st.integers(0, g.rank - 1), max_size=6)))
    joined = superpose(Heap.from_word(g, u), Heap.from_word(g, v))
    assert is_isomorphic(joined, Heap.from_word(g, u + v))


def test_superpose_examples():
    chain = superpose(Heap.from_word(A2, (0,)), Heap.from_word(A2, (1,)))
    assert chain.less(0, 1)
    anti = superpose(Heap.from_word(A3, (0,)), Heap.from_word(A3, (2,)))
    assert anti.is_trivial()
    e = Heap.from_word(CAFF7, W_CAFF)
    assert is_isomorphic(superpose(e, Heap.from_word(CAFF7, ())), e)
    with pytest.raises(HeapError):
        superpose(Heap.from_word(A2, (0,)), Heap.from_word(A3, (0,)))


def test_subheap_examples():
    e = Heap.from_word(CAFF7, W_CAFF)
    assert is_isomorphic(subheap(e, range(10)), e)
    assert len(subheap(e, [])) == 0
    with pytest.raises(HeapError):
        subheap(e, [10])
    minus5 = delete_vertices(e, [4])
    assert len(minus5) == 9 and minus5.names == (1, 2, 3, 4, 6, 7, 8, 9, 10)


# -- convexity ------------------------------------------------------------------


def brute_convex(e, subset):
    s = set(subset)
    return all(z in s for x in s for y in s for z in range(len(e)) if e.less(x, z) and e.less(z, y))


@given(graph_and_word(max_len=8), st.data())
def test_convexity_definitions_agree(gw, data):
    g, word = gw
    e = Heap.from_word(g, word)
    subset = data.draw(st.sets(st.integers(0, max(len(e) - 1, 0)))) if len(e) else set()
    assert is_convex(e, subset) == brute_convex(e, subset) == is_convex_by_peeling(e, subset)


@given(graph_and_word(max_len=8), st.data())
def test_ideals_and_filters_are_convex(gw, data):
    g, word = gw
    e = Heap.from_word(g, word)
    assume(len(e))
    seed = _mask(data.draw(st.sets(st.integers(0, len(e) - 1))))
    assert is_convex(e, down_closure(e, seed) | seed)
    assert is_convex(e, up_closure(e, seed) | seed)


def test_caff_nonconvex_pair():
    e = Heap.from_word(CAFF7, W_CAFF)
    assert not is_convex(e, [0, 6])


# -- full commutativity -------------------------------------------------------------


@given(graph_and_word(max_len=8))
def test_fc_matches_braid_oracle(gw):
    g, word = gw
    assert is_fc_word(g, word) == reduced_and_fc(g, word)[1]


@given(graph_and_word(max_len=8), st.data())
def test_factors_of_fc_words_are_fc(gw, data):
    g, word = gw
    assume(is_fc_word(g, word))
    i = data.draw(st.integers(0, len(word)))
    j = data.draw(st.integers(i, len(word)))
    assert is_fc_word(g, word[i:j])


def test_fc_examples():
    assert not is_fc_word(A2, (0, 1, 0))
    assert is_fc_word(B2, (0, 1, 0))
    assert is_fc_word(CAFF7, W_CAFF)


# -- descents and multiplication --------------------------------------------------


def test_descent_examples():
    assert left_descents(Heap.from_word(B4, (1, 0))) == {1}
    assert left_descents(Heap.from_word(A3, (0, 2))) == {0, 2}
    assert left_descents(Heap.from_word(A3, ())) == frozenset()
    with pytest.raises(HeapError):
        left_descents(Heap.from_word(A2, (0, 1, 0)))


@given(graph_and_word(max_len=7))
def test_descents_are_first_letters(gw):
    g, word = gw
    assume(is_fc_word(g, word))
    cls = braid_class(word, bond(g))
    e = Heap.from_word(g, word)
    assert left_descents(e) == {u[0] for u in cls if u}
    assert right_descents(e) == {u[-1] for u in cls if u}


@given(graph_and_word(max_len=7), st.data())
def test_multiply_status_matches_oracle(gw, data):
    g, word = gw
    assume(is_fc_word(g, word))
    s = data.draw(st.integers(0, g.rank - 1))
    e = Heap.from_word(g, word)
    for side, status, new in (("left", left_multiply_status(e, s), (s,) + word),
                              ("right", right_multiply_status(e, s), word + (s,))):
        reduced, fc = reduced_and_fc(g, new)
        if not reduced:
            assert status.kind is Status.DESCENT
        elif fc:
            assert status.kind is Status.STILL_FC
        else:
            assert status.kind is Status.WEAKLY_COMPLEX
            chain = status.chain.vertices
            assert len(chain) == g.m(s, status.partner)
            assert is_convex(status.heap, chain)
            assert {status.heap.labels[v] for v in chain} == {s, status.partner}


def test_weakly_complex_example():
    e = Heap.from_word(B4, (1, 0, 1, 2))
    st_ = left_multiply_status(e, 0)
    assert st_.kind is Status.WEAKLY_COMPLEX and st_.partner == 1 and len(st_.chain) == 4
    assert left_multiply_status(Heap.from_word(B4, (0,)), 0).kind is Status.DESCENT
    assert left_multiply_status(Heap.from_word(A3, (0,)), 2).kind is Status.STILL_FC


def test_factor_around():
    e = Heap.from_word(B4, (0, 1, 0, 1, 2))
    prefix, block, suffix = factor_around(e, [0, 1, 2, 3])
    assert (prefix, block, suffix) == ((), (0, 1, 0, 1), (2,))
    with pytest.raises(HeapError):
        factor_around(e, [0, 2])


# -- contraction, P1, P2 ----------------------------------------------------------


@given(graph_and_word(max_len=9))
def test_contraction_endpoints_agree(gw):
    g, word = gw
    e = Heap.from_word(g, word)
    for chain in balanced_convex_chains(e, 3):
        assert is_isomorphic(contract(e, chain), contract(e, chain, keep_top=True))


def test_contraction_laws_examples():
    e = Heap.from_word(A2, (0, 0))
    c = contract(e, ChainSpec((0, 1)))
    assert len(c) == 1 and kernel_dim(e) - kernel_dim(c) == 1
    e = Heap.from_word(A2, (0, 1, 0))
    assert kernel_dim(contract(e, ChainSpec((0, 1, 2)))) == kernel_dim(e)
    assert is_isomorphic(contract(e, ChainSpec((1,))), e)


def test_contraction_errors():
    e = Heap.from_word(A2, (0, 1, 0))
    with pytest.raises(HeapError):
        contract(e, ChainSpec((0, 1)))  # not balanced
    e = Heap.from_word(A3, (0, 1, 2, 1, 0))
    with pytest.raises(HeapError):
        contract(e, ChainSpec((0, 1, 4)))  # not convex


def test_dismantling_caff():
    e = Heap.from_word(CAFF7, W_CAFF)
    seq = dismantling_sequence(e)
    assert seq is not None
    rest = e.all_mask
    for v in seq:
        rest &= ~(1 << v)
    assert subheap(e, list(_bits(rest))).is_trivial()
    assert not has_property_p2(e)


def test_trivial_heap_is_dismantlable():
    assert is_dismantlable(Heap.from_word(A3, (0, 2)))
    assert is_dismantlable(Heap.from_word(A3, ()))
    assert has_property_p2(Heap.from_word(A3, (0, 2)))


def test_p2_rejects_repeated_pair():
    assert not has_property_p2(Heap.from_word(A3, (0, 0)))


@given(graph_and_word(max_len=10))
def test_fc_dismantlable_iff_acyclic(gw):
    g, word = gw
    e = Heap.from_word(g, word)
    assume(is_fc_heap(e))
    assert is_dismantlable(e) == (kernel_dim(e) == 0)


def test_dismantlable_iff_acyclic_exhaustive():
    from fcheaps.star import enumerate_fc
    for g in (build_family("C_affine_odd", 5), build_family("B_line", 5)):
        for el in enumerate_fc(g, 12):
            if len(el.key) >= 6:
                assert is_dismantlable(el.heap) == (kernel_dim(el.heap) == 0), el


# -- export ---------------------------------------------------------------------


def test_dot_output():
    text = to_dot(Heap.from_word(A3, (0, 1, 0)))
    assert text.startswith("digraph heap {")
    assert 's_1^{(2)}' in text and "v1 -> v2;" in text and "v2 -> v3;" in text


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_dihedral_proper_words(m):
    words = dihedral_proper_words(0, 1, m)
    assert len(words) == 2 * m - 1 and len(set(words)) == len(words)
    assert max(len(w) for w in words) == m - 1


def test_random_heaps_are_deterministic():
    rng = random.Random(7)
    word = tuple(rng.randrange(4) for _ in range(12))
    assert Heap.from_word(B4, word).canonical_word() == Heap.from_word(B4, word).canonical_word()
