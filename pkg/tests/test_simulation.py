"""Simulation wrapper: protocol-facing API guards and run lifecycle."""

import pytest

from antmesh.config import ScenarioConfig
from antmesh.metrics import DropReason
from antmesh.net import PacketKind
from antmesh.simulation import Simulation


def _sim(**kw):
    cfg = ScenarioConfig(protocol="aodv", nodes=3, sim_time=20.0, pause=1e9,
                         seed=8, positions=((0.0, 0.0), (150.0, 0.0),
                                            (300.0, 0.0)))
    cfg.traffic.pairs = ((0, 2),)
    cfg.traffic.rate_pps = 2.0
    cfg.traffic.packet_bytes = 125
    cfg.traffic.warmup_s = 5.0
    for key, value in kw.items():
        setattr(cfg, key, value)
    return Simulation(cfg)


def test_hop_budget_expires_data():
    sim = _sim(data_ttl=2)
    pkt = sim.make_packet(PacketKind.Data, 0, 2, 1000)
    sim.ledger.record_sent(pkt.uid, 0.0)
    assert sim.forward_data(pkt, 0, 1)
    assert sim.forward_data(pkt, 1, 2)
    assert not sim.forward_data(pkt, 2, 1), "third hop exceeds the budget"
    stats = sim.ledger.finalize()
    assert stats.dropped_by_reason["TtlExpired"] == 1


def test_drop_data_is_idempotent():
    sim = _sim()
    pkt = sim.make_packet(PacketKind.Data, 0, 2, 1000)
    sim.ledger.record_sent(pkt.uid, 0.0)
    sim.drop_data(pkt, DropReason.NoRoute)
    sim.drop_data(pkt, DropReason.LinkBreak)  # second report is ignored
    stats = sim.ledger.finalize()
    assert stats.dropped_by_reason["NoRoute"] == 1
    assert stats.dropped_by_reason["LinkBreak"] == 0


def test_ant_bits_follow_config():
    assert _sim().ant_bits() == 27 * 8
    assert _sim(ant_bytes=50).ant_bits() == 400


def test_run_summarizes_and_runs_once():
    sim = _sim()
    stats = sim.run()
    assert stats.sent == 30
    assert stats.delivered == stats.sent
    assert stats.kind_census["Data"] >= stats.sent
    assert stats.kind_census["Hello"] > 0
    assert "avg_connectivity" in stats.extras
    with pytest.raises(AssertionError):
        sim.run()


def test_neighbors_view_matches_network():
    sim = _sim()
    # Radio range is inclusive: node 2 sits at exactly 300 m from node 0.
    assert sim.neighbors(0) == [1, 2]
    assert sim.neighbors(1) == [0, 2]
    assert sim.node_count() == 3
    far = _sim(positions=((0.0, 0.0), (150.0, 0.0), (450.0, 0.0)))
    assert far.neighbors(0) == [1]
    assert far.neighbors(2) == [1]
