"""Random-waypoint mobility over a rectangular field.

Each node alternates between a pause at its current position and a straight
constant-speed leg to a fresh uniformly drawn waypoint. Positions between
waypoints are linear interpolations, so the field never needs per-tick motion
events; a node's trajectory is fully described by its current leg.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .engine import Engine, EventKind, RngStream


class Phase(Enum):
    Paused = "Paused"
    Moving = "Moving"


@dataclass
class MobilityParams:
    area: tuple[float, float] = (500.0, 500.0)
    v_min: float = 1.0
    v_max: float = 20.0
    pause: float = 0.0


@dataclass
class MobilityState:
    node: int
    pos: tuple[float, float]
    dest: tuple[float, float]
    speed: float
    pause_until: float
    phase: Phase
    depart_time: float = 0.0
    arrive_time: float = 0.0


def init_positions(n: int, params: MobilityParams, rng: RngStream) -> list[MobilityState]:
    """Draw n i.i.d. uniform start positions; every node begins paused."""
    states = []
    w, h = params.area
    for i in range(n):
        pos = (rng.uniform(0.0, w), rng.uniform(0.0, h))
        states.append(
            MobilityState(
                node=i,
                pos=pos,
                dest=pos,
                speed=0.0,
                pause_until=params.pause,
                phase=Phase.Paused,
            )
        )
    return states


def next_waypoint(s: MobilityState, params: MobilityParams, rng: RngStream, now: float) -> MobilityState:
    """Start a new leg: uniform destination, uniform speed, linear travel."""
    w, h = params.area
    dest = (rng.uniform(0.0, w), rng.uniform(0.0, h))
    speed = rng.uniform(params.v_min, params.v_max)
    dx = dest[0] - s.pos[0]
    dy = dest[1] - s.pos[1]
    dist = (dx * dx + dy * dy) ** 0.5
    s.dest = dest
    s.speed = speed
    s.phase = Phase.Moving
    s.depart_time = now
    s.arrive_time = now + (dist / speed if speed > 0 else 0.0)
    return s


def position_at(s: MobilityState, t: float) -> tuple[float, float]:
    """Interpolate along the current leg; clamps outside [depart, arrive]."""
    if s.phase is Phase.Paused or s.arrive_time <= s.depart_time:
        return s.pos
    frac = (t - s.depart_time) / (s.arrive_time - s.depart_time)
    if frac <= 0.0:
        return s.pos
    if frac >= 1.0:
        return s.dest
    return (
        s.pos[0] + frac * (s.dest[0] - s.pos[0]),
        s.pos[1] + frac * (s.dest[1] - s.pos[1]),
    )


class RandomWaypoint:
    """Engine-driven random-waypoint field with vectorized position queries."""

    def __init__(self, engine: Engine, params: MobilityParams, n: int,
                 positions: list[tuple[float, float]] | None = None,
                 trace: list | None = None):
        self.engine = engine
        self.params = params
        self.n = n
        self.rng = engine.rng("mobility")
        if positions is None:
            self.states = init_positions(n, params, self.rng)
        else:
            if len(positions) != n:
                raise ValueError("positions list does not match node count")
            self.states = [
                MobilityState(node=i, pos=tuple(p), dest=tuple(p), speed=0.0,
                              pause_until=params.pause, phase=Phase.Paused)
                for i, p in enumerate(positions)
            ]
        self.trace = trace
        # Parallel leg arrays for vectorized interpolation.
        self._x0 = np.array([s.pos[0] for s in self.states])
        self._y0 = np.array([s.pos[1] for s in self.states])
        self._dx = np.zeros(n)
        self._dy = np.zeros(n)
        self._t0 = np.zeros(n)
        self._inv = np.zeros(n)  # 1/duration while moving, 0 while paused
        self._cache_t = None
        self._cache_xy = None

    def start(self) -> None:
        for s in self.states:
            self.engine.schedule_at(s.pause_until, EventKind.Timer,
                                    lambda i=s.node: self._depart(i))

    def _depart(self, i: int) -> None:
        now = self.engine.now()
        s = self.states[i]
        next_waypoint(s, self.params, self.rng, now)
        self._x0[i], self._y0[i] = s.pos
        self._dx[i] = s.dest[0] - s.pos[0]
        self._dy[i] = s.dest[1] - s.pos[1]
        self._t0[i] = now
        dur = s.arrive_time - s.depart_time
        self._inv[i] = 1.0 / dur if dur > 0 else 0.0
        self._cache_t = None
        if self.trace is not None:
            self.trace.append((now, i, s.dest[0], s.dest[1], s.speed, self.params.pause))
        self.engine.schedule_at(s.arrive_time, EventKind.WaypointArrival,
                                lambda: self._arrive(i))

    def _arrive(self, i: int) -> None:
        now = self.engine.now()
        s = self.states[i]
        s.pos = s.dest
        s.phase = Phase.Paused
        s.pause_until = now + self.params.pause
        self._x0[i], self._y0[i] = s.pos
        self._dx[i] = 0.0
        self._dy[i] = 0.0
        self._t0[i] = now
        self._inv[i] = 0.0
        self._cache_t = None
        self.engine.schedule_at(s.pause_until, EventKind.Timer,
                                lambda: self._depart(i))

    def positions_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        if self._cache_t == t:
            return self._cache_xy
        frac = np.clip((t - self._t0) * self._inv, 0.0, 1.0)
        xy = (self._x0 + frac * self._dx, self._y0 + frac * self._dy)
        self._cache_t = t
        self._cache_xy = xy
        return xy

    def position(self, i: int, t: float) -> tuple[float, float]:
        return position_at(self.states[i], t)

    def distance(self, i: int, j: int, t: float) -> float:
        xi, yi = position_at(self.states[i], t)
        xj, yj = position_at(self.states[j], t)
        return ((xi - xj) ** 2 + (yi - yj) ** 2) ** 0.5
