"""On-demand ant routing: hop-count deposits, decay, multipath discovery."""

from antmesh.config import ScenarioConfig
from antmesh.net import PacketKind
from antmesh.simulation import Simulation


def _config(positions, pairs, *, mode="flood", sim_time=40.0, seed=13, **kw):
    cfg = ScenarioConfig(protocol="ara", nodes=len(positions),
                         sim_time=sim_time, pause=1e9, seed=seed,
                         positions=tuple(positions))
    cfg.ara.mode = mode
    cfg.traffic.pairs = tuple(pairs)
    cfg.traffic.rate_pps = 5.0
    cfg.traffic.packet_bytes = 125
    cfg.traffic.warmup_s = 5.0
    for key, value in kw.items():
        setattr(cfg, key, value)
    return cfg


LINE4 = ((0.0, 0.0), (200.0, 0.0), (400.0, 0.0), (600.0, 0.0))

# A diamond: 0 reaches 3 through either 1 (top) or 2 (bottom).
DIAMOND = ((0.0, 0.0), (150.0, 120.0), (150.0, -120.0), (300.0, 0.0))


def test_discovery_installs_inverse_hop_deposits():
    sim = Simulation(_config(LINE4, [(0, 3)], sim_time=30.0))
    stats = sim.run()
    assert stats.delivered == stats.sent, stats.dropped_by_reason
    proto = sim.protocol
    # Forward installs along the returning ant: entries toward 3 exist on
    # every hop of the chain and point down the line.
    for node, nxt in ((0, 1), (1, 2), (2, 3)):
        row = proto.tables[node].row(3)
        assert row and max(row, key=row.get) == nxt
    # The route back to the source was installed by the same round trip.
    row_back = proto.tables[2].row(0)
    assert row_back and max(row_back, key=row_back.get) == 1


def test_destination_answers_every_disjoint_arrival():
    sim = Simulation(_config(DIAMOND, [(0, 3)], sim_time=30.0))
    stats = sim.run()
    assert stats.delivered == stats.sent
    row = sim.protocol.tables[0].row(3)
    # Both the top and bottom relays carry pheromone toward 3.
    assert set(row) >= {1, 2}
    assert row[1] > 0.0 and row[2] > 0.0


def test_data_reinforces_the_entry_it_uses():
    sim = Simulation(_config(LINE4, [(0, 3)], sim_time=30.0))
    sim.run()
    # Steady 5 pps kept refreshing the used entry against 0.9/s decay;
    # a used trail holds far more mass than the decayed backward deposit.
    assert sim.protocol.tables[0].get(3, 1) > 1.0


def test_unused_trails_decay_to_nothing():
    sim = Simulation(_config(LINE4, [(0, 3)], sim_time=200.0))
    proto = sim.protocol
    proto.tables[0].set(3, 1, 1.0)
    proto.setup()
    # Drive only the evaporation clock: one tick scales by 0.9 ...
    sim.engine.run_until(1.0)
    assert abs(proto.tables[0].get(3, 1) - 0.9) < 1e-12
    # ... and an unrefreshed trail eventually falls through the floor.
    sim.engine.run_until(140.0)
    assert proto.tables[0].get(3, 1) == 0.0
    assert 1 not in proto.tables[0].row(3)


def test_no_hello_beacons_ever():
    stats = Simulation(_config(LINE4, [(0, 3), (3, 0)], sim_time=25.0)).run()
    assert stats.kind_census.get("Hello", 0) == 0
    assert stats.kind_census.get("Rreq", 0) == 0
    assert stats.kind_census["Fant"] > 0


def test_forward_mode_rides_existing_trails():
    flood = Simulation(_config(LINE4, [(0, 3)], sim_time=30.0)).run()
    guided = Simulation(_config(LINE4, [(0, 3)], mode="forward",
                                sim_time=30.0)).run()
    assert guided.delivered == guided.sent
    assert flood.delivered == flood.sent
    # Guided discovery may still flood when no trail exists (first ant),
    # but never relays more copies than the full flood does.
    assert guided.kind_census["Fant"] <= flood.kind_census["Fant"]


def test_unreachable_destination_times_out():
    far = ((0.0, 0.0), (200.0, 0.0), (400.0, 0.0), (5000.0, 0.0))
    stats = Simulation(_config(far, [(0, 3)], sim_time=20.0)).run()
    assert stats.delivered == 0
    assert stats.dropped_by_reason["NoRoute"] == stats.sent
