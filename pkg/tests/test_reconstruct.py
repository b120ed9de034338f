import pytest

from fcheaps.coxeter import load_graph
from fcheaps.heap import Heap, is_dismantlable, is_fc_heap
from fcheaps.reconstruct import (LINE_BONDS, TARGET_VERTEX, TARGET_WORD, describe,
                                 irreducible_witness, is_isolated_boundary, reconstructed_graph,
                                 search)
from fcheaps.star import FCElement, star_reduce_to_commuting

from test_cli import DATA


def test_chosen_graph_data():
    h = Heap.from_word(reconstructed_graph(), TARGET_WORD)
    assert is_fc_heap(h) and is_dismantlable(h)
    d = describe(h)
    assert d["edges"] == [(1, 6), (6, 11), (4, 8), (2, 7), (7, 12), (5, 9), (3, 13)]
    assert d["boundary"] == [4, 5, 6, 7, 8, 9, 10]
    assert d["effective"] == [4, 7, 8]
    assert d["classes"] == [[4, 5], [6, 7], [8, 9]]
    assert d["kernel_dim"] == 0
    assert is_isolated_boundary(h, TARGET_VERTEX - 1)


def test_graph_file_matches_builder():
    g = load_graph(str(DATA / "line_434333.graph"))
    assert g.bonds == reconstructed_graph().bonds


def test_target_word_star_reduces():
    el = FCElement.from_word(reconstructed_graph(), TARGET_WORD)
    assert star_reduce_to_commuting(el) is not None


@pytest.mark.slow
def test_group_is_not_star_reducible():
    w = irreducible_witness(reconstructed_graph(), 11)
    assert w is not None and w.length == 11
    assert str(w) == "s3s5s4s3s2s1s2s3s4s3s5"
    assert star_reduce_to_commuting(w) is None


@pytest.mark.slow
def test_search_finds_the_line():
    found = list(search())
    assert len(found) == 41
    line = tuple(sorted(LINE_BONDS))
    match = [c for c in found if c.edges == line]
    assert len(match) == 1 and match[0].bonds == (4, 3, 4, 3, 3)
    assert sum(1 for c in found if all(t == s + 1 for s, t in c.edges)) == 1
