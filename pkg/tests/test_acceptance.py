"""Acceptance criteria 1-11; each test records one PASS/FAIL line."""

import time
from itertools import product

import pytest
import sympy

import conftest
from fcheaps.boundary import BoundaryComplex, heap_report
from fcheaps.campaign import CampaignConfig, run_campaign
from fcheaps.coxeter import CoxeterGraph, build_family, parse_word
from fcheaps.forbidden import forbidden_scan
from fcheaps.heap import Heap, delete_vertices, is_fc_heap
from fcheaps.invariants import run_battery
from fcheaps.reconstruct import TARGET_VERTEX, TARGET_WORD, is_isolated_boundary, reconstructed_graph
from fcheaps.star import FCElement, count_fc, star_down_left, star_down_right, star_up_left, star_up_right
from fcheaps.tl import TLAlgebra
from oracles import V, bond_function, dihedral, fc_count_by_braids, hecke_product, reduce_mod_ideal

CAMPAIGN_GRAPHS = [build_family("A_line", 6), build_family("B_line", 5), build_family("H_line", 4),
                   build_family("F_line", 5), build_family("C_affine_odd", 5),
                   build_family("complete", 3, 3), build_family("complete", 4, 4)]


def record(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_edges_and_columns():
    t0 = time.perf_counter()
    r = heap_report(Heap.from_word(build_family("C_affine_odd", 7),
                                   parse_word("s1s3s5s2s4s6s1s3s5s7")))
    dt = time.perf_counter() - t0
    ok = (r["edges"] == [[1, 7], [2, 8], [3, 9]]
          and r["boundary_columns"] == [[4], [4, 5], [5, 6]] and dt < 1)
    record(1, ok, f"edges {r['edges']}, columns {r['boundary_columns']}, {dt:.3f}s")


def test_criterion_2_boundary_data():
    t0 = time.perf_counter()
    e = Heap.from_word(build_family("C_affine_odd", 7), parse_word("s1s3s5s2s4s6s1s3s5s7"))
    r = heap_report(e)
    e5 = BoundaryComplex(delete_vertices(e, [4]))
    dt = time.perf_counter() - t0
    classes = r["equivalence_classes"]
    ok = (r["kernel_dim"] == 0 and r["image_dim"] == 3
          and r["boundary_vertices"] == [4, 5, 6] and r["effective_boundary_vertices"] == [4]
          and [4, 5, 6] in classes and sum(len(c) == 1 for c in classes) == 7 and len(classes) == 8
          and r["strongly_acyclic"] is False and e5.kernel_dim >= 1 and dt < 1)
    record(2, ok, f"kernel 0, image 3, boundary {r['boundary_vertices']}, effective "
                  f"{r['effective_boundary_vertices']}, ker E(v5) = {e5.kernel_dim}, {dt:.3f}s")


def test_criterion_3_star_operations():
    t0 = time.perf_counter()
    b4 = build_family("B_line", 4)

    def el(text):
        return FCElement.from_word(b4, parse_word(text))

    w, x, y = el("s2s1"), el("s1s2s1"), el("s2")
    ok = (star_down_left(w, 0, 1) == el("s1") and star_up_left(w, 0, 1) == el("s1s2s1")
          and star_down_right(w, 0, 1) == el("s2") and star_up_right(w, 0, 1) == el("s2s1s2")
          and star_up_left(x, 0, 1) is None and star_up_right(x, 0, 1) is None
          and star_down_left(y, 0, 1) is None and star_down_right(y, 0, 1) is None)
    dt = time.perf_counter() - t0
    record(3, ok and dt < 1, f"four defined and four undefined star operations in B4, {dt:.3f}s")


def _campaign(check: str, max_len: int):
    details, total = [], 0
    for g in CAMPAIGN_GRAPHS:
        r = run_campaign(g, CampaignConfig(max_len, (check,), star_reducible=True))
        n = len(r["violations"][check])
        total += n
        details.append(f"{g.name} {r['counts']['checked'][check]}/{n}")
    return total, details


@pytest.mark.slow
def test_criterion_4_main_theorem():
    total, details = _campaign("main_theorem", 10)
    record(4, total == 0, f"{total} violations at length <= 10 (checked/violations: "
                          f"{', '.join(details)})")


@pytest.mark.slow
def test_criterion_5_property_w():
    total, details = _campaign("property_w", 8)
    record(5, total == 0, f"{total} failures at length <= 8 ({', '.join(details)})")


@pytest.mark.slow
def test_criterion_6_lemma_battery():
    total, checked = 0, 0
    for g in CAMPAIGN_GRAPHS:
        r = run_battery(g, 8)
        total += r.total_violations
        checked += sum(r.checked.values())
    record(6, total == 0, f"{total} counterexamples in {checked} checks at length <= 8")


@pytest.mark.slow
def test_criterion_7_forbidden_configurations():
    graphs = [build_family("B_line", 3), build_family("F_line", 4), build_family("F_line", 5),
              build_family("H_line", 3), build_family("H_line", 4), build_family("C_affine_odd", 3),
              build_family("C_affine_odd", 5)]
    total, details = 0, []
    for g in graphs:
        r = forbidden_scan(g, 12)
        total += len(r.matches)
        details.append(f"{g.name} {r.elements} elements/{len(r.rules)} rules")
    record(7, total == 0, f"{total} matches at length <= 12 ({', '.join(details)})")


def test_criterion_8_dihedral_oracle():
    checked, bad = 0, 0
    for m in (3, 4):
        alg = TLAlgebra(CoxeterGraph.from_bonds(2, {(0, 1): m}))
        elems, length, word, _, _ = dihedral(m)
        assert len(elems) == 2 * m
        w0 = max(elems, key=lambda x: length[x])
        basis = [x for x in elems if x != w0]
        for x, y in product(basis, basis):
            ref = reduce_mod_ideal(m, hecke_product(m, word[x], word[y]))
            got = alg.mult(alg.t(word[x]), alg.t(word[y]))
            ref = {alg.key(word[z]): c for z, c in ref.items()}
            same = set(ref) == set(got.terms) and all(
                sympy.expand(sum(a * V ** e for e, a in got.terms[k].terms()) - c) == 0
                for k, c in ref.items())
            checked += 1
            bad += not same
    record(8, bad == 0, f"{checked} basis products for m = 3, 4 equal the Hecke-algebra oracle")


@pytest.mark.slow
def test_criterion_9_c_basis():
    r = run_campaign(build_family("B_line", 4), CampaignConfig(8, ("structure_constants",),
                                                              star_reducible=True))
    n = r["counts"]["checked"]["structure_constants"]
    bad = len(r["violations"]["structure_constants"])
    record(9, bad == 0 and n > 0, f"B4 length <= 8: {n} c-basis and structure-constant checks, "
                                  f"{bad} violations")


def test_criterion_10_fc_count():
    ours = sum(count_fc(build_family("A_line", 3), 10))
    order, fc = fc_count_by_braids(3, bond_function({(0, 1): 3, (1, 2): 3}))
    record(10, ours == fc == 14 and order == 24,
           f"enumerate_fc gives {ours}; braid-closure oracle gives {fc} of {order}")


def test_criterion_11_reconstruction():
    g = reconstructed_graph()
    h = Heap.from_word(g, TARGET_WORD)
    ok = is_fc_heap(h) and is_isolated_boundary(h, TARGET_VERTEX - 1)
    record(11, ok, f"on the reconstructed line graph (bonds 4,3,4,3,3) vertex {TARGET_VERTEX} is a "
                   f"boundary vertex equivalent to no effective boundary vertex")
