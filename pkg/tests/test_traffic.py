"""Constant-bit-rate workload generation and session pairing."""

import pytest

from antmesh.config import ScenarioConfig
from antmesh.engine import Engine
from antmesh.errors import InvalidConfig
from antmesh.metrics import PacketLedger
from antmesh.mobility import MobilityParams, RandomWaypoint
from antmesh.net import Network, RadioParams
from antmesh.routing import Protocol
from antmesh.traffic import CbrSession, TrafficSource, build_sessions, emission_times


def _session(rate=6.0, start=0.0, stop=10.0):
    return CbrSession(src=0, dst=1, rate_pps=rate, start=start, stop=stop,
                      packet_bytes=1000)


def test_ten_seconds_at_six_per_second_is_sixty_packets():
    times = emission_times(_session())
    assert len(times) == 60
    assert times[0] == 0.0
    assert abs(times[-1] - (59 / 6.0)) < 1e-12


def test_emission_interval_is_half_open():
    # An instant landing exactly on the stop time is not emitted.
    times = emission_times(_session(rate=2.0, start=1.0, stop=3.0))
    assert times == [1.0, 1.5, 2.0, 2.5]


def test_emission_phase_follows_warmup():
    times = emission_times(_session(rate=4.0, start=10.0, stop=12.0))
    assert times == [10.0, 10.25, 10.5, 10.75, 11.0, 11.25, 11.5, 11.75]


def test_build_sessions_draws_distinct_pairs():
    cfg = ScenarioConfig(protocol="ara", nodes=12, sim_time=100.0)
    cfg.traffic.sessions = 30
    rng = Engine(master_seed=5).rng("traffic")
    sessions = build_sessions(cfg, rng)
    pairs = [(s.src, s.dst) for s in sessions]
    assert len(pairs) == 30
    assert len(set(pairs)) == 30
    assert all(s != d for s, d in pairs)
    assert all(0 <= s < 12 and 0 <= d < 12 for s, d in pairs)
    assert all(s.start == 10.0 and s.stop == 100.0 for s in sessions)


def test_build_sessions_same_seed_same_pairs():
    cfg = ScenarioConfig(protocol="ara", nodes=20)
    pick = lambda seed: [(s.src, s.dst) for s in
                         build_sessions(cfg, Engine(master_seed=seed).rng("traffic"))]
    assert pick(9) == pick(9)
    assert pick(9) != pick(10)


def test_build_sessions_honors_explicit_pairs():
    cfg = ScenarioConfig(protocol="ara", nodes=5)
    cfg.traffic.pairs = ((0, 4), (4, 0))
    cfg.traffic.rate_pps = 2.5
    cfg.traffic.packet_bytes = 64
    sessions = build_sessions(cfg, Engine(master_seed=1).rng("traffic"))
    assert [(s.src, s.dst) for s in sessions] == [(0, 4), (4, 0)]
    assert all(s.rate_pps == 2.5 and s.packet_bytes == 64 for s in sessions)


def test_warmup_consuming_the_whole_run_is_rejected():
    cfg = ScenarioConfig(protocol="ara", sim_time=5.0)
    cfg.traffic.warmup_s = 5.0
    with pytest.raises(InvalidConfig):
        build_sessions(cfg, Engine(master_seed=1).rng("traffic"))


class _Recorder(Protocol):
    name = "recorder"

    def __init__(self, sim=None):
        self.sessions = []
        self.packets = []

    def on_session(self, src, dst):
        self.sessions.append((src, dst))

    def on_data_to_send(self, src, dst, pkt):
        self.packets.append((src, dst, pkt))


def test_traffic_source_emits_on_schedule():
    eng = Engine(master_seed=3)
    field = RandomWaypoint(eng, MobilityParams(pause=1e9), 2,
                           positions=[(0.0, 0.0), (100.0, 0.0)])
    net = Network(eng, field, RadioParams(),
                  on_deliver=lambda n, p: None,
                  on_link_break=lambda f, t, p: None)
    ledger = PacketLedger()
    proto = _Recorder()
    src = TrafficSource(eng, net, ledger, proto,
                        [CbrSession(src=0, dst=1, rate_pps=6.0, start=2.0,
                                    stop=12.0, packet_bytes=125)])
    src.setup()
    assert proto.sessions == [(0, 1)]
    eng.run_until(20.0)
    assert len(proto.packets) == 60
    first = proto.packets[0][2]
    assert first.size_bits == 1000
    assert first.created_at == 2.0
    assert ledger.is_open(first.uid)
    stats = ledger.finalize()
    assert stats.sent == 60 and stats.in_flight == 60
