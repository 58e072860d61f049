"""Random-waypoint motion: leg geometry, pausing, and vectorized queries."""

import math
import random

from antmesh.engine import Engine, RngStream
from antmesh.mobility import (MobilityParams, Phase, RandomWaypoint,
                              init_positions, next_waypoint, position_at)


def _params(**kw):
    base = dict(area=(500.0, 500.0), v_min=1.0, v_max=20.0, pause=0.0)
    base.update(kw)
    return MobilityParams(**base)


def test_init_positions_uniform_in_area_and_paused():
    rng = RngStream("mobility", 7)
    states = init_positions(40, _params(pause=3.0), rng)
    assert len(states) == 40
    for s in states:
        assert 0.0 <= s.pos[0] <= 500.0
        assert 0.0 <= s.pos[1] <= 500.0
        assert s.phase is Phase.Paused
        assert s.pause_until == 3.0
        assert s.dest == s.pos


def test_next_waypoint_sets_leg_geometry():
    rng = RngStream("mobility", 11)
    s = init_positions(1, _params(), rng)[0]
    next_waypoint(s, _params(), rng, now=5.0)
    assert s.phase is Phase.Moving
    assert 1.0 <= s.speed <= 20.0
    dist = math.dist(s.pos, s.dest)
    assert s.depart_time == 5.0
    assert abs(s.arrive_time - (5.0 + dist / s.speed)) < 1e-12


def test_position_at_interpolates_and_clamps():
    rng = RngStream("mobility", 3)
    s = init_positions(1, _params(), rng)[0]
    start = s.pos
    next_waypoint(s, _params(), rng, now=0.0)
    mid_t = (s.depart_time + s.arrive_time) / 2.0
    mx, my = position_at(s, mid_t)
    assert abs(mx - (start[0] + s.dest[0]) / 2.0) < 1e-9
    assert abs(my - (start[1] + s.dest[1]) / 2.0) < 1e-9
    # Clamped on both sides of the leg.
    assert position_at(s, s.depart_time - 1.0) == start
    ex, ey = position_at(s, s.arrive_time + 1.0)
    assert abs(ex - s.dest[0]) < 1e-9 and abs(ey - s.dest[1]) < 1e-9


def test_nodes_hold_initial_position_through_the_pause():
    eng = Engine(master_seed=5)
    field = RandomWaypoint(eng, _params(pause=10.0), 8)
    starts = [s.pos for s in field.states]
    field.start()
    eng.run_until(9.99)
    for i, p in enumerate(starts):
        assert field.position(i, 9.99) == p


def test_explicit_positions_pin_nodes():
    eng = Engine(master_seed=5)
    pts = [(0.0, 0.0), (200.0, 0.0), (400.0, 0.0)]
    field = RandomWaypoint(eng, _params(pause=1e9), 3, positions=pts)
    field.start()
    eng.run_until(100.0)
    for i, p in enumerate(pts):
        assert field.position(i, 100.0) == p
    assert field.distance(0, 2, 50.0) == 400.0


def test_vectorized_positions_match_scalar_positions():
    eng = Engine(master_seed=21)
    field = RandomWaypoint(eng, _params(pause=0.5), 30)
    field.start()
    check = random.Random(4)
    for t in sorted(check.uniform(0.0, 60.0) for _ in range(12)):
        eng.run_until(t)
        xs, ys = field.positions_at(t)
        for i in range(30):
            px, py = field.position(i, t)
            assert abs(xs[i] - px) < 1e-9
            assert abs(ys[i] - py) < 1e-9


def test_positions_stay_inside_area():
    eng = Engine(master_seed=9)
    field = RandomWaypoint(eng, _params(pause=0.0), 25)
    field.start()
    for t in range(0, 200, 5):
        eng.run_until(float(t))
        xs, ys = field.positions_at(float(t))
        assert (xs >= 0.0).all() and (xs <= 500.0).all()
        assert (ys >= 0.0).all() and (ys <= 500.0).all()


def test_same_seed_reproduces_trajectories():
    def trajectory(seed):
        eng = Engine(master_seed=seed)
        field = RandomWaypoint(eng, _params(pause=0.2), 10)
        field.start()
        out = []
        for t in (5.0, 20.0, 50.0):
            eng.run_until(t)
            xs, ys = field.positions_at(t)
            out.append((xs.tolist(), ys.tolist()))
        return out

    assert trajectory(33) == trajectory(33)
    assert trajectory(33) != trajectory(34)


def test_waypoint_trace_rows():
    eng = Engine(master_seed=2)
    trace = []
    field = RandomWaypoint(eng, _params(pause=1.0), 4, trace=trace)
    field.start()
    eng.run_until(30.0)
    assert trace, "moving nodes must log waypoint departures"
    for t, node, wx, wy, speed, pause in trace:
        assert 0.0 <= t <= 30.0
        assert 0 <= node < 4
        assert 0.0 <= wx <= 500.0 and 0.0 <= wy <= 500.0
        assert 1.0 <= speed <= 20.0
        assert pause == 1.0
