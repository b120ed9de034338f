import json

import pytest

from fcheaps.campaign import (CHECKS, CampaignConfig, ConfigError, exit_status, lemma_report,
                              parse_checks, run_campaign)
from fcheaps.coxeter import build_family
from fcheaps.reconstruct import reconstructed_graph

B3 = build_family("B_line", 3)


def test_parse_checks():
    assert parse_checks("all") == CHECKS
    assert parse_checks("main_theorem, property_w,main_theorem") == ("main_theorem", "property_w")


@pytest.mark.parametrize("config", [
    CampaignConfig(-1, ("main_theorem",)),
    CampaignConfig(3, ()),
    CampaignConfig(3, ("nonsense",)),
    CampaignConfig(3, ("main_theorem",), jobs=0),
])
def test_config_errors(config):
    with pytest.raises(ConfigError):
        run_campaign(B3, config)


def test_all_checks_clean_on_b3():
    report = run_campaign(B3, CampaignConfig(6, CHECKS, star_reducible=True))
    assert report["total_violations"] == 0
    assert report["counts"]["elements"] == sum(report["counts"]["by_length"])
    assert all(report["counts"]["checked"][c] > 0 for c in CHECKS)
    assert "timings" not in report and exit_status(report) == 0
    json.dumps(report)


def test_zero_length_is_vacuous():
    report = run_campaign(B3, CampaignConfig(0, CHECKS, star_reducible=True))
    assert report["counts"]["elements"] == 1 and report["total_violations"] == 0


def test_parallel_run_matches_serial():
    graph = build_family("C_affine_odd", 3)
    checks = ("main_theorem", "property_w", "lemma_invariants")
    serial = run_campaign(graph, CampaignConfig(7, checks, jobs=1, star_reducible=True))
    parallel = run_campaign(graph, CampaignConfig(7, checks, jobs=2, star_reducible=True))
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_timings_are_opt_in():
    report = run_campaign(B3, CampaignConfig(3, ("main_theorem",), timings=True))
    assert set(report["timings"]) >= {"enumerate", "per_element"}


def test_advisory_for_unlisted_family():
    report = run_campaign(build_family("A_line", 3), CampaignConfig(4, ("forbidden_configs",)))
    assert report["advisories"]


def test_reconstruction_violations():
    graph = reconstructed_graph()
    report = run_campaign(graph, CampaignConfig(13, ("main_theorem",)))
    bad = report["violations"]["main_theorem"]
    assert len(bad) == 8
    assert {"element": "s1s3s2s1s5s4s3s2s1s4s3s6s5", "vertex": 12} in bad
    assert exit_status(report) == 0
    asserted = dict(report, star_reducible=True)
    assert exit_status(asserted) == 1


def test_lemma_report():
    report = lemma_report(B3, 5)
    assert report["command"] == "lemma-invariants" and report["total_violations"] == 0
