"""Exhaustive verification campaigns over the FC elements of one graph.

Per-element checks may be spread over worker processes; results are merged in
enumeration order so reports do not depend on the worker count.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .boundary import verify_main_theorem
from .coxeter import CoxeterGraph, Word, format_word
from .forbidden import rules_for, scan_heap
from .invariants import battery_for_element, battery_for_word, random_words
from .star import enumerate_fc
from .tl import (CBasisError, TLAlgebra, check_nonnegativity, structure_constants_c,
                 weakly_complex_extensions)

CHECKS = ("main_theorem", "property_w", "structure_constants", "forbidden_configs",
          "lemma_invariants")
PER_ELEMENT = ("main_theorem", "property_w", "forbidden_configs", "lemma_invariants")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    max_len: int
    checks: tuple[str, ...]
    jobs: int = 1
    star_reducible: bool = False
    timings: bool = False
    seed: int = 0
    algebra_len: int = 6
    random_words: int = 40

    def validate(self):
        if self.max_len < 0:
            raise ConfigError("max_len must be non-negative")
        if not self.checks:
            raise ConfigError("select at least one check")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(unknown)} (choose from {', '.join(CHECKS)})")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")


def parse_checks(text: str) -> tuple[str, ...]:
    items = [c.strip() for c in text.split(",") if c.strip()]
    if items == ["all"]:
        return CHECKS
    return tuple(dict.fromkeys(items))


# -- per-element work ---------------------------------------------------------


def _element_checks(graph: CoxeterGraph, key: Word, checks, alg: TLAlgebra, rules,
                    config: CampaignConfig) -> dict[str, tuple[int, list[dict]]]:
    out: dict[str, tuple[int, list[dict]]] = {}
    word = format_word(key)
    heap = alg.heap(key)
    if "main_theorem" in checks:
        verdict = verify_main_theorem(heap, check=False)
        bad = [] if verdict.holds else [{"element": word, "vertex": heap.names[verdict.violation]}]
        out["main_theorem"] = (1, bad)
    if "property_w" in checks:
        ext = weakly_complex_extensions(alg, key)
        bad = []
        for s in ext:
            val = alg.word_value((s,) + key)
            if not val.in_v_inverse_lattice():
                bad.append({"element": word, "generator": s + 1, "value": str(val).split("\n")})
        out["property_w"] = (len(ext), bad)
    if "forbidden_configs" in checks:
        bad = [{"element": word, "rule": r, "detail": d} for r, d in scan_heap(heap, rules)]
        out["forbidden_configs"] = (1, bad)
    if "lemma_invariants" in checks:
        found = battery_for_element(graph, key, alg, config.seed, config.algebra_len,
                                    config.star_reducible)
        bad = [{"element": word, "property": name, "detail": d}
               for name in sorted(found) for d in found[name]]
        out["lemma_invariants"] = (len(found), bad)
    return out


def _run_chunk(graph: CoxeterGraph, keys: list[Word], checks, config: CampaignConfig):
    alg = TLAlgebra(graph)
    rules = rules_for(graph)[0] if "forbidden_configs" in checks else []
    return [_element_checks(graph, k, checks, alg, rules, config) for k in keys]


def _chunks(items: list, jobs: int) -> list[list]:
    size = max(1, -(-len(items) // (jobs * 4)))
    return [items[i:i + size] for i in range(0, len(items), size)]


# -- whole-campaign checks ------------------------------------------------------


def _structure_constants(graph: CoxeterGraph, keys: list[Word], budget: int,
                         alg: TLAlgebra) -> tuple[int, list[dict]]:
    bad: list[dict] = []
    checked = 0
    good_keys = []
    for key in keys:
        checked += 1
        word = format_word(key)
        try:
            c = alg.c_element(key)
        except CBasisError as err:
            bad.append({"element": word, "kind": "c_basis", "detail": str(err)})
            continue
        good_keys.append(key)
        if c.coeff(key) != 1:
            bad.append({"element": word, "kind": "c_basis", "detail": "leading coefficient is not 1"})
        # both directions of the b/c change of basis: integer, unitriangular
        for direction, row in (("c_in_b", alg.to_b_basis(c)),
                               ("b_in_c", alg.to_c_basis(alg.b_element(key)))):
            for y, p in row.items():
                if not p.is_constant():
                    bad.append({"element": word, "kind": direction,
                                "detail": f"entry at {format_word(y)} is {p}, not an integer"})
                if y == key and p != 1:
                    bad.append({"element": word, "kind": direction, "detail": f"diagonal entry {p}"})
                elif y != key and len(y) >= len(key):
                    bad.append({"element": word, "kind": direction,
                                "detail": f"{format_word(y)} is not shorter"})
    table = structure_constants_c(alg, good_keys, budget)
    checked += len(table)
    for x, y, z, p in check_nonnegativity(table):
        bad.append({"element": f"{format_word(x)} * {format_word(y)}", "kind": "negative",
                    "detail": f"coefficient of c[{format_word(z)}] is {p}"})
    return checked, bad


def _lemma_random_words(graph: CoxeterGraph, config: CampaignConfig,
                        alg: TLAlgebra) -> tuple[int, list[dict]]:
    checked = 0
    bad = []
    rng = random.Random(config.seed)
    for word in random_words(graph, config.random_words, config.max_len, rng):
        found = battery_for_word(graph, word, alg, config.seed, config.algebra_len,
                                 config.star_reducible)
        checked += len(found)
        bad.extend({"element": format_word(word), "property": name, "detail": d, "reduced": False}
                   for name in sorted(found) for d in found[name])
    return checked, bad


def run_campaign(graph: CoxeterGraph, config: CampaignConfig) -> dict:
    """Run the selected checks and return the JSON-ready report (schema 1)."""
    config.validate()
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    keys = [el.key for el in enumerate_fc(graph, config.max_len)]
    timings["enumerate"] = time.perf_counter() - t0
    by_length = [0] * (config.max_len + 1)
    for k in keys:
        by_length[len(k)] += 1

    checks = [c for c in CHECKS if c in config.checks]
    checked = {c: 0 for c in checks}
    violations: dict[str, list[dict]] = {c: [] for c in checks}
    advisories: list[str] = []
    elementwise = [c for c in checks if c in PER_ELEMENT]

    if elementwise:
        t0 = time.perf_counter()
        if config.jobs > 1 and len(keys) > 1:
            chunks = _chunks(keys, config.jobs)
            with ProcessPoolExecutor(config.jobs) as pool:
                parts = list(pool.map(_run_chunk, [graph] * len(chunks), chunks,
                                      [elementwise] * len(chunks), [config] * len(chunks)))
            results = [r for part in parts for r in part]
        else:
            results = _run_chunk(graph, keys, elementwise, config)
        for res in results:
            for c, (n, bad) in res.items():
                checked[c] += n
                violations[c].extend(bad)
        timings["per_element"] = time.perf_counter() - t0

    alg = TLAlgebra(graph)
    if "forbidden_configs" in checks:
        advisory = rules_for(graph)[1]
        if advisory:
            advisories.append(advisory)
    if "lemma_invariants" in checks:
        t0 = time.perf_counter()
        n, bad = _lemma_random_words(graph, config, alg)
        checked["lemma_invariants"] += n
        violations["lemma_invariants"].extend(bad)
        timings["lemma_random_words"] = time.perf_counter() - t0
    if "structure_constants" in checks:
        t0 = time.perf_counter()
        n, bad = _structure_constants(graph, keys, config.max_len, alg)
        checked["structure_constants"] = n
        violations["structure_constants"] = bad
        timings["structure_constants"] = time.perf_counter() - t0

    total = sum(len(v) for v in violations.values())
    report = {
        "schema": 1,
        "command": "verify",
        "graph": graph.describe(),
        "max_len": config.max_len,
        "checks": checks,
        "star_reducible": config.star_reducible,
        "counts": {"elements": len(keys), "by_length": by_length, "checked": checked},
        "violations": violations,
        "total_violations": total,
        "advisories": advisories,
    }
    if config.timings:
        report["timings"] = {k: round(v, 3) for k, v in timings.items()}
    return report


def exit_status(report: dict) -> int:
    """1 when violations were found on a graph asserted to be star reducible."""
    return 1 if report["total_violations"] and report["star_reducible"] else 0


def lemma_report(graph: CoxeterGraph, max_len: int, seed: int = 0, jobs: int = 1,
                 timings: bool = False, star_reducible: bool = True) -> dict:
    config = CampaignConfig(max_len, ("lemma_invariants",), jobs=jobs, seed=seed,
                            timings=timings, star_reducible=star_reducible)
    report = run_campaign(graph, config)
    report["command"] = "lemma-invariants"
    return report
