"""Discrete-event core: a monotone clock, an ordered event queue and named RNG streams.

Events fire in (time, insertion order) so that runs with identical inputs replay
identically. Every source of randomness is a named stream derived from the master
seed, which keeps independent subsystems (mobility, traffic, each protocol) on
identical draw sequences no matter what the other subsystems do.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .errors import InvalidRange, SchedulingInPast


class EventKind(Enum):
    PacketArrival = "PacketArrival"
    Timer = "Timer"
    WaypointArrival = "WaypointArrival"
    TrafficTick = "TrafficTick"
    AntLaunch = "AntLaunch"
    HelloTick = "HelloTick"
    EvaporationTick = "EvaporationTick"


@dataclass(slots=True)
class Event:
    time: float
    seq: int
    kind: EventKind
    fn: Callable[[], None]
    cancelled: bool = False


def stream_seed(master_seed: int, name: str) -> int:
    """Derive a stable 64-bit seed for a named stream from the master seed."""
    digest = hashlib.sha256(f"{master_seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class RngStream:
    """A named pseudo-random stream with validated draw helpers."""

    def __init__(self, name: str, seed: int):
        self.name = name
        self._rng = random.Random(seed)

    def random(self) -> float:
        return self._rng.random()

    def uniform(self, lo: float, hi: float) -> float:
        if lo > hi:
            raise InvalidRange(f"uniform({lo}, {hi}) on stream {self.name!r}")
        if lo == hi:
            return lo
        return self._rng.uniform(lo, hi)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def choice(self, seq):
        return seq[self._rng.randrange(len(seq))]

    def sample(self, seq, k: int):
        return self._rng.sample(seq, k)


def rng_uniform(stream: RngStream, lo: float, hi: float) -> float:
    """Uniform draw on [lo, hi]; degenerate intervals return lo exactly."""
    return stream.uniform(lo, hi)


class Engine:
    """Event queue driver owning the clock and the RNG stream registry."""

    def __init__(self, master_seed: int = 1, log_events: bool = False):
        self.master_seed = master_seed
        self._clock = 0.0
        self._seq = 0
        self._heap: list[tuple[float, int, Event]] = []
        self._streams: dict[str, RngStream] = {}
        self.log_events = log_events
        self.event_log: list[tuple[float, int, str]] = []
        self.processed = 0

    def now(self) -> float:
        return self._clock

    def rng(self, name: str) -> RngStream:
        stream = self._streams.get(name)
        if stream is None:
            stream = RngStream(name, stream_seed(self.master_seed, name))
            self._streams[name] = stream
        return stream

    def schedule_at(self, time: float, kind: EventKind, fn: Callable[[], None]) -> Event:
        if time < self._clock:
            raise SchedulingInPast(f"schedule at t={time} < now={self._clock}")
        ev = Event(time, self._seq, kind, fn)
        self._seq += 1
        heapq.heappush(self._heap, (time, ev.seq, ev))
        return ev

    def schedule(self, delay: float, kind: EventKind, fn: Callable[[], None]) -> Event:
        return self.schedule_at(self._clock + delay, kind, fn)

    def cancel(self, ev: Event) -> None:
        ev.cancelled = True

    def run_until(self, t_end: float) -> int:
        """Process every event with time <= t_end; leaves the clock at t_end."""
        processed = 0
        heap = self._heap
        while heap and heap[0][0] <= t_end:
            _, _, ev = heapq.heappop(heap)
            if ev.cancelled:
                continue
            self._clock = ev.time
            if self.log_events:
                self.event_log.append((ev.time, ev.seq, ev.kind.value))
            ev.fn()
            processed += 1
        if t_end > self._clock:
            self._clock = t_end
        self.processed += processed
        return processed
