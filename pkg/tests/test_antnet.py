"""AntNet operators (frozen hand-computed values) and end-to-end behavior."""

import random

import pytest

from antmesh.config import ScenarioConfig
from antmesh.errors import NoNeighbors
from antmesh.protocols.antnet import (bant_reinforce, dest_distribution,
                                      fant_probabilities, heuristic_eta)
from antmesh.simulation import Simulation


# -- launch destination distribution ------------------------------------------

def test_dest_distribution_by_traffic_share():
    assert dest_distribution({5: 250.0, 9: 750.0}) == {5: 0.25, 9: 0.75}


def test_dest_distribution_uniform_fallback_and_empty():
    assert dest_distribution({3: 0.0, 4: 0.0}) == {3: 0.5, 4: 0.5}
    assert dest_distribution({}) == {}


# -- queue heuristic -----------------------------------------------------------

def test_heuristic_eta_prefers_short_queues():
    eta = heuristic_eta({2: 1000.0, 7: 3000.0})
    assert abs(eta[2] - 0.75) < 1e-15
    assert abs(eta[7] - 0.25) < 1e-15


def test_heuristic_eta_idle_links_and_empty():
    eta = heuristic_eta({1: 0.0, 2: 0.0, 3: 0.0, 4: 0.0})
    assert all(abs(v - 0.75) < 1e-15 for v in eta.values())
    with pytest.raises(NoNeighbors):
        heuristic_eta({})


# -- forward-ant choice ---------------------------------------------------------

def test_fant_probabilities_hand_value():
    # tau normalized (0.6, 0.4); eta = (0.75, 0.25); alpha = 0.3, k = 2:
    # p(a) = (0.6 + 0.3*0.75) / (1 + 0.3) = 0.825/1.3
    probs = fant_probabilities({4: 0.6, 8: 0.4}, {4: 1000.0, 8: 3000.0}, 0.3)
    assert abs(probs[4] - 0.825 / 1.3) < 1e-15
    assert abs(probs[8] - 0.475 / 1.3) < 1e-15
    assert abs(sum(probs.values()) - 1.0) < 1e-12


def test_fant_probabilities_scale_invariant_in_tau():
    a = fant_probabilities({1: 0.6, 2: 0.4}, {1: 500.0, 2: 100.0}, 0.45)
    b = fant_probabilities({1: 6000.0, 2: 4000.0}, {1: 500.0, 2: 100.0}, 0.45)
    for j in a:
        assert abs(a[j] - b[j]) < 1e-12


def test_fant_probabilities_zero_tau_uses_heuristic_only():
    probs = fant_probabilities({1: 0.0, 2: 0.0}, {1: 1000.0, 2: 3000.0}, 0.3)
    # tau falls back to uniform: p(1) = (0.5 + 0.3*0.75)/1.3
    assert abs(probs[1] - 0.725 / 1.3) < 1e-15


def test_fant_probabilities_is_distribution_property():
    rng = random.Random(505)
    for _ in range(200):
        k = rng.randrange(1, 7)
        keys = rng.sample(range(20), k)
        tau = {j: rng.uniform(0.0, 5.0) for j in keys}
        queues = {j: float(rng.randrange(0, 10_000)) for j in keys}
        alpha = rng.uniform(0.0, 1.0)
        probs = fant_probabilities(tau, queues, alpha)
        assert abs(sum(probs.values()) - 1.0) < 1e-9
        assert all(v >= 0.0 for v in probs.values())


# -- backward-ant reinforcement -------------------------------------------------

def test_bant_reinforce_hand_values():
    row = {10: 0.1, 11: 0.54, 12: 0.36}
    bant_reinforce(row, 10, 0.5)
    assert abs(row[10] - 0.55) < 1e-15
    assert abs(row[11] - 0.27) < 1e-15
    assert abs(row[12] - 0.18) < 1e-15


def test_bant_reinforce_inserts_missing_neighbor():
    row = {3: 1.0}
    bant_reinforce(row, 5, 0.1)
    assert abs(row[5] - 0.1) < 1e-15
    assert abs(row[3] - 0.9) < 1e-15


def test_bant_reinforce_keeps_rows_stochastic():
    rng = random.Random(77)
    row = {j: 0.25 for j in range(4)}
    for _ in range(5000):
        bant_reinforce(row, rng.randrange(4), rng.uniform(0.01, 0.99))
        assert abs(sum(row.values()) - 1.0) < 1e-9
        assert all(v >= 0.0 for v in row.values())


# -- end to end -----------------------------------------------------------------

def _line_config(**kw):
    cfg = ScenarioConfig(protocol="antnet", nodes=3, sim_time=60.0,
                         pause=1e9, seed=5,
                         positions=((0.0, 0.0), (200.0, 0.0), (400.0, 0.0)))
    cfg.traffic.pairs = ((0, 2),)
    cfg.traffic.rate_pps = 5.0
    cfg.traffic.packet_bytes = 125
    cfg.traffic.warmup_s = 10.0
    for key, value in kw.items():
        setattr(cfg, key, value)
    return cfg


def test_proactive_ants_build_routes_on_a_static_line():
    sim = Simulation(_line_config())
    stats = sim.run()
    assert stats.sent == 250
    assert stats.delivered == stats.sent, stats.dropped_by_reason
    proto = sim.protocol
    # Node 1 learned that destination 2 sits behind neighbor 2.
    row = proto.tables[1].row(2)
    assert row and max(row, key=row.get) == 2
    assert abs(sum(row.values()) - 1.0) < 1e-9
    assert stats.kind_census["Fant"] > 0
    assert stats.kind_census["Bant"] > 0


def test_unreachable_destination_times_out_buffered_data():
    cfg = _line_config(positions=((0.0, 0.0), (200.0, 0.0), (2000.0, 0.0)),
                       sim_time=30.0)
    stats = Simulation(cfg).run()
    assert stats.delivered == 0
    assert stats.dropped_by_reason["NoRoute"] > 0
