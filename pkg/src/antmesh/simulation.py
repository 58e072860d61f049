"""One full simulation run: wiring, dispatch and the protocol-facing API.

The Simulation object is the only surface protocols talk to. It exposes local
queries (now, neighbors of a node, queue lengths toward a neighbor), transport
(unicast/broadcast/detached control hops), timers, named RNG streams, and data
fate reporting. Protocols never see the mobility field or other nodes' tables.
"""

from __future__ import annotations

import math

from .config import ScenarioConfig
from .engine import Engine, EventKind
from .metrics import DropReason, PacketLedger, SummaryStats
from .mobility import MobilityParams, RandomWaypoint
from .net import Network, Packet, PacketKind, Priority, RadioParams
from .traffic import TrafficSource, build_sessions

AUDIT_INTERVAL = 5.0


class Simulation:
    def __init__(self, cfg: ScenarioConfig, collect_packet_trace: bool = False,
                 collect_waypoint_trace: bool = False, log_events: bool = False):
        cfg.validate()
        self.cfg = cfg
        self.engine = Engine(master_seed=cfg.seed, log_events=log_events)
        self.packet_trace: list | None = [] if collect_packet_trace else None
        self.waypoint_trace: list | None = [] if collect_waypoint_trace else None
        self.mobility = RandomWaypoint(
            self.engine,
            MobilityParams(area=cfg.area, v_min=cfg.v_min, v_max=cfg.v_max,
                           pause=cfg.pause),
            cfg.nodes,
            positions=list(cfg.positions) if cfg.positions is not None else None,
            trace=self.waypoint_trace)
        self.net = Network(
            self.engine, self.mobility,
            RadioParams(range=cfg.range, bandwidth=cfg.bandwidth,
                        per_hop_latency=cfg.latency),
            on_deliver=self._dispatch,
            on_link_break=self._link_break,
            trace=self.packet_trace)
        self.ledger = PacketLedger()
        from .protocols import make_protocol
        self.protocol = make_protocol(cfg.protocol, self)
        self.sessions = build_sessions(cfg, self.engine.rng("traffic"))
        self.traffic = TrafficSource(self.engine, self.net, self.ledger,
                                     self.protocol, self.sessions)
        self._finished = False

    # -- protocol-facing API -------------------------------------------------

    def now(self) -> float:
        return self.engine.now()

    def rng(self, name: str):
        return self.engine.rng(name)

    def neighbors(self, node: int) -> list[int]:
        return self.net.neighbors(node)

    def queue_bits(self, node: int, nbr: int) -> int:
        return self.net.queue_bits(node, nbr)

    def unicast(self, pkt: Packet, frm: int, to: int, priority: Priority) -> float:
        return self.net.unicast(pkt, frm, to, priority)

    def broadcast(self, pkt: Packet, frm: int, priority: Priority) -> int:
        return self.net.broadcast(pkt, frm, priority)

    def send_detached(self, pkt: Packet, frm: int, to: int) -> float:
        return self.net.send_detached(pkt, frm, to)

    def make_packet(self, kind: PacketKind, src: int, dst: int, size_bits: int,
                    payload: object = None) -> Packet:
        return self.net.make_packet(kind, src, dst, size_bits, payload)

    def ant_bits(self) -> int:
        return self.cfg.ant_bytes * 8

    def after(self, delay: float, fn, kind: EventKind = EventKind.Timer):
        return self.engine.schedule(delay, kind, fn)

    def cancel(self, ev) -> None:
        self.engine.cancel(ev)

    def node_count(self) -> int:
        return self.cfg.nodes

    def drop_data(self, pkt: Packet, reason: DropReason) -> None:
        if self.ledger.is_open(pkt.uid):
            self.ledger.record_dropped(pkt.uid, reason)

    def forward_data(self, pkt: Packet, frm: int, to: int) -> bool:
        """Send a data packet one hop, enforcing the hop-count safety valve."""
        if pkt.hops >= self.cfg.data_ttl:
            self.drop_data(pkt, DropReason.TtlExpired)
            return False
        pkt.hops += 1
        self.net.unicast(pkt, frm, to, Priority.Data)
        return True

    # -- dispatch ------------------------------------------------------------

    def _dispatch(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Data and pkt.dst == node:
            if self.ledger.is_open(pkt.uid):
                self.ledger.record_delivered(pkt.uid, self.engine.now())
            return
        self.protocol.on_packet(node, pkt)

    def _link_break(self, frm: int, to: int, pkt: Packet) -> None:
        self.protocol.on_link_break(frm, to, pkt)

    # -- run -----------------------------------------------------------------

    def _audit_tick(self) -> None:
        self.ledger.audit()
        assert self.net.conservation_ok(), "net-layer conservation violated"
        t = self.engine.now() + AUDIT_INTERVAL
        if t <= self.cfg.sim_time:
            self.engine.schedule_at(t, EventKind.Timer, self._audit_tick)

    def run(self) -> SummaryStats:
        assert not self._finished, "a Simulation object runs once"
        self.mobility.start()
        self.protocol.setup()
        self.traffic.setup()
        self.engine.schedule_at(min(AUDIT_INTERVAL, self.cfg.sim_time),
                                EventKind.Timer, self._audit_tick)
        self.engine.run_until(self.cfg.sim_time)
        self._finished = True
        stats = self.ledger.finalize()
        stats.kind_census = {k.value: v for k, v in self.net.sent.items() if v}
        extras = getattr(self.protocol, "extras", None)
        if extras:
            stats.extras.update(extras())
        return stats


def run_config(cfg: ScenarioConfig) -> SummaryStats:
    return Simulation(cfg).run()
