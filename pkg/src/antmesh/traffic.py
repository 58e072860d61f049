"""Constant-bit-rate workload generation.

Sessions are distinct (src, dst) pairs drawn once per run from the "traffic"
stream. Emission instants are deterministic: start + k/rate for every k with
start + k/rate < stop, so a 6 pps session over a 10 s window emits exactly 60
packets. The warmup offset gives proactive protocols time to build tables
before the first data packet is measured.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import ScenarioConfig
from .engine import Engine, EventKind
from .errors import InvalidConfig
from .net import Network, PacketKind


@dataclass
class CbrSession:
    src: int
    dst: int
    rate_pps: float
    start: float
    stop: float
    packet_bytes: int


def build_sessions(cfg: ScenarioConfig, rng) -> list[CbrSession]:
    """Draw the configured number of distinct (src, dst) pairs."""
    t = cfg.traffic
    start = t.warmup_s
    stop = cfg.sim_time
    if start >= stop:
        raise InvalidConfig("warmup leaves no time for traffic")
    if t.pairs is not None:
        pairs = list(t.pairs)
    else:
        n = cfg.nodes
        if t.sessions > n * (n - 1):
            raise InvalidConfig("more sessions than distinct (src, dst) pairs")
        chosen: set[tuple[int, int]] = set()
        pairs = []
        while len(pairs) < t.sessions:
            src = rng.randrange(n)
            dst = rng.randrange(n)
            if src == dst or (src, dst) in chosen:
                continue
            chosen.add((src, dst))
            pairs.append((src, dst))
    return [CbrSession(src=s, dst=d, rate_pps=t.rate_pps, start=start,
                       stop=stop, packet_bytes=t.packet_bytes)
            for s, d in pairs]


def emission_times(session: CbrSession) -> list[float]:
    """All emission instants for a session: start + k/rate while < stop."""
    out = []
    k = 0
    step = 1.0 / session.rate_pps
    while True:
        t = session.start + k * step
        if t >= session.stop:
            break
        out.append(t)
        k += 1
    return out


class TrafficSource:
    """Schedules per-session emission events and hands packets to the protocol."""

    def __init__(self, engine: Engine, net: Network, ledger, protocol,
                 sessions: list[CbrSession]):
        self.engine = engine
        self.net = net
        self.ledger = ledger
        self.protocol = protocol
        self.sessions = sessions

    def setup(self) -> None:
        for sess in self.sessions:
            self.protocol.on_session(sess.src, sess.dst)
        for sess in self.sessions:
            self.engine.schedule_at(sess.start, EventKind.TrafficTick,
                                    lambda s=sess, k=0: self._emit(s, k))

    def _emit(self, sess: CbrSession, k: int) -> None:
        now = self.engine.now()
        pkt = self.net.make_packet(PacketKind.Data, sess.src, sess.dst,
                                   sess.packet_bytes * 8)
        self.ledger.record_sent(pkt.uid, now)
        self.protocol.on_data_to_send(sess.src, sess.dst, pkt)
        nxt = sess.start + (k + 1) / sess.rate_pps
        if nxt < sess.stop:
            self.engine.schedule_at(nxt, EventKind.TrafficTick,
                                    lambda: self._emit(sess, k + 1))
