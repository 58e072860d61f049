"""Idealized wireless net layer: disk radio, per-link FIFO queues, two priorities.

Links are directed (i, j) pairs materialized on demand. A packet's delivery
instant is fully determined at enqueue time: control packets wait only behind
control, data packets wait behind everything queued so far. Whether the packet
actually arrives is decided by a range check at the delivery instant; a failed
check drops the packet and notifies the sender, which models link breakage
without any mid-flight bookkeeping.

Two deliberate capacity approximations keep the event count linear in packets:
a control packet that arrives while data is queued jumps ahead without pushing
the already-scheduled data deliveries back, and control broadcasts over idle
links share a single delivery event that does not reserve link time. Control
packets are tiny (tens of bytes), so the error is a fraction of a transmission
slot.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Optional

import numpy as np

from .engine import Engine, EventKind
from .mobility import RandomWaypoint


class PacketKind(Enum):
    Data = "Data"
    Fant = "Fant"
    Bant = "Bant"
    Rreq = "Rreq"
    Rrep = "Rrep"
    Rerr = "Rerr"
    Hello = "Hello"
    RoamingAnt = "RoamingAnt"


class Priority(IntEnum):
    Control = 0
    Data = 1


@dataclass
class RadioParams:
    range: float = 300.0
    bandwidth: float = 2_000_000.0
    per_hop_latency: float = 0.001


@dataclass
class Packet:
    kind: PacketKind
    src: int
    dst: int
    size_bits: int
    created_at: float
    uid: int
    prev_hop: int = -1
    next_hop: int = -1
    upstream: int = -1  # hop before prev_hop, for one-hop-back failure notices
    hops: int = 0
    payload: object = None


class LinkQueue:
    """Directed link state: service frontiers plus pending FIFO bookkeeping."""

    __slots__ = ("ctrl_free_at", "data_free_at", "pending_bits", "fifo")

    def __init__(self):
        self.ctrl_free_at = 0.0
        self.data_free_at = 0.0
        self.pending_bits = [0, 0]  # indexed by Priority
        self.fifo = (deque(), deque())  # pending uids per priority

    def bits_pending(self, priority: Priority) -> int:
        return self.pending_bits[priority]


class Network:
    """Radio neighborhood queries and packet transport between nodes."""

    def __init__(self, engine: Engine, mobility: RandomWaypoint, radio: RadioParams,
                 on_deliver: Callable[[int, Packet], None],
                 on_link_break: Callable[[int, int, Packet], None],
                 trace: list | None = None):
        self.engine = engine
        self.mobility = mobility
        self.radio = radio
        self.on_deliver = on_deliver
        self.on_link_break = on_link_break
        self.trace = trace
        self.links: dict[tuple[int, int], LinkQueue] = {}
        self._uid = itertools.count()
        self.sent: dict[PacketKind, int] = {k: 0 for k in PacketKind}
        self.delivered: dict[PacketKind, int] = {k: 0 for k in PacketKind}
        self.dropped: dict[PacketKind, int] = {k: 0 for k in PacketKind}
        self._nbr_cache_t: float | None = None
        self._nbr_cache: dict[int, list[int]] = {}

    # -- topology ----------------------------------------------------------

    def distance(self, i: int, j: int, t: float | None = None) -> float:
        if t is None:
            t = self.engine.now()
        return self.mobility.distance(i, j, t)

    def neighbors(self, i: int, t: float | None = None) -> list[int]:
        """Node ids within radio range of i at time t, ascending."""
        if t is None:
            t = self.engine.now()
        if self._nbr_cache_t != t:
            self._nbr_cache_t = t
            self._nbr_cache = {}
        cached = self._nbr_cache.get(i)
        if cached is not None:
            return cached
        xs, ys = self.mobility.positions_at(t)
        dx = xs - xs[i]
        dy = ys - ys[i]
        in_range = (dx * dx + dy * dy) <= self.radio.range * self.radio.range
        in_range[i] = False
        out = np.nonzero(in_range)[0].tolist()
        self._nbr_cache[i] = out
        return out

    # -- transport ---------------------------------------------------------

    def next_uid(self) -> int:
        return next(self._uid)

    def make_packet(self, kind: PacketKind, src: int, dst: int, size_bits: int,
                    payload: object = None) -> Packet:
        return Packet(kind=kind, src=src, dst=dst, size_bits=size_bits,
                      created_at=self.engine.now(), uid=self.next_uid(),
                      payload=payload)

    def _link(self, frm: int, to: int) -> LinkQueue:
        lq = self.links.get((frm, to))
        if lq is None:
            lq = LinkQueue()
            self.links[(frm, to)] = lq
        return lq

    def queue_bits(self, i: int, j: int) -> int:
        """Data-priority bits not yet fully transmitted on link (i, j)."""
        lq = self.links.get((i, j))
        return lq.pending_bits[Priority.Data] if lq is not None else 0

    def unicast(self, pkt: Packet, frm: int, to: int, priority: Priority) -> float:
        """Queue pkt on link (frm, to); returns the scheduled delivery instant."""
        now = self.engine.now()
        lq = self._link(frm, to)
        tx = pkt.size_bits / self.radio.bandwidth
        if priority == Priority.Control:
            start = max(now, lq.ctrl_free_at)
            lq.ctrl_free_at = start + tx
        else:
            start = max(now, lq.data_free_at, lq.ctrl_free_at)
            lq.data_free_at = start + tx
        deliver_at = start + tx + self.radio.per_hop_latency
        pkt.upstream = pkt.prev_hop
        pkt.prev_hop = frm
        pkt.next_hop = to
        lq.pending_bits[priority] += pkt.size_bits
        lq.fifo[priority].append(pkt.uid)
        self.sent[pkt.kind] += 1
        if self.trace is not None:
            self.trace.append((now, "send", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
        self.engine.schedule_at(deliver_at, EventKind.PacketArrival,
                                lambda: self._deliver(pkt, frm, to, priority))
        return deliver_at

    def _deliver(self, pkt: Packet, frm: int, to: int, priority: Priority) -> None:
        lq = self.links[(frm, to)]
        lq.pending_bits[priority] -= pkt.size_bits
        head = lq.fifo[priority].popleft()
        assert head == pkt.uid, "link FIFO order violated"
        now = self.engine.now()
        if self.distance(frm, to, now) <= self.radio.range:
            self.delivered[pkt.kind] += 1
            if self.trace is not None:
                self.trace.append((now, "recv", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
            self.on_deliver(to, pkt)
        else:
            self.dropped[pkt.kind] += 1
            if self.trace is not None:
                self.trace.append((now, "drop", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
            self.on_link_break(frm, to, pkt)

    def send_detached(self, pkt: Packet, frm: int, to: int) -> float:
        """Contention-free control hop: scheduled like an idle-link unicast but
        without reserving link time. Used for continuously circulating agents
        whose presence must not perturb other traffic."""
        now = self.engine.now()
        tx = pkt.size_bits / self.radio.bandwidth
        deliver_at = now + tx + self.radio.per_hop_latency
        pkt.upstream = pkt.prev_hop
        pkt.prev_hop = frm
        pkt.next_hop = to
        self.sent[pkt.kind] += 1
        if self.trace is not None:
            self.trace.append((now, "send", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
        self.engine.schedule_at(deliver_at, EventKind.PacketArrival,
                                lambda: self._deliver_detached(pkt, frm, to))
        return deliver_at

    def _deliver_detached(self, pkt: Packet, frm: int, to: int) -> None:
        now = self.engine.now()
        if self.distance(frm, to, now) <= self.radio.range:
            self.delivered[pkt.kind] += 1
            if self.trace is not None:
                self.trace.append((now, "recv", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
            self.on_deliver(to, pkt)
        else:
            self.dropped[pkt.kind] += 1
            if self.trace is not None:
                self.trace.append((now, "drop", pkt.uid, pkt.kind.value, frm, to, pkt.size_bits))
            self.on_link_break(frm, to, pkt)

    def broadcast(self, pkt: Packet, frm: int, priority: Priority) -> int:
        """One copy to every current neighbor; returns the fan-out count.

        Control copies over idle links coalesce into one delivery event; every
        other copy is an ordinary unicast of a clone with its own uid.
        """
        now = self.engine.now()
        nbrs = self.neighbors(frm, now)
        if not nbrs:
            return 0
        if priority == Priority.Control:
            batched = []
            for j in nbrs:
                lq = self.links.get((frm, j))
                if lq is None or lq.ctrl_free_at <= now:
                    batched.append(j)
                else:
                    clone = self.make_packet(pkt.kind, pkt.src, pkt.dst,
                                             pkt.size_bits, pkt.payload)
                    clone.hops = pkt.hops
                    self.unicast(clone, frm, j, priority)
            if batched:
                tx = pkt.size_bits / self.radio.bandwidth
                deliver_at = now + tx + self.radio.per_hop_latency
                pkt.prev_hop = frm
                self.sent[pkt.kind] += len(batched)
                if self.trace is not None:
                    self.trace.append((now, "send", pkt.uid, pkt.kind.value, frm, -1, pkt.size_bits))
                self.engine.schedule_at(deliver_at, EventKind.PacketArrival,
                                        lambda: self._deliver_batch(pkt, frm, batched))
        else:
            for j in nbrs:
                clone = self.make_packet(pkt.kind, pkt.src, pkt.dst,
                                         pkt.size_bits, pkt.payload)
                clone.hops = pkt.hops
                self.unicast(clone, frm, j, priority)
        return len(nbrs)

    def _deliver_batch(self, pkt: Packet, frm: int, targets: list[int]) -> None:
        now = self.engine.now()
        rng2 = self.radio.range * self.radio.range
        xs, ys = self.mobility.positions_at(now)
        for j in targets:
            dx = xs[j] - xs[frm]
            dy = ys[j] - ys[frm]
            if dx * dx + dy * dy <= rng2:
                self.delivered[pkt.kind] += 1
                if self.trace is not None:
                    self.trace.append((now, "recv", pkt.uid, pkt.kind.value, frm, j, pkt.size_bits))
                self.on_deliver(j, pkt)
            else:
                self.dropped[pkt.kind] += 1
                if self.trace is not None:
                    self.trace.append((now, "drop", pkt.uid, pkt.kind.value, frm, j, pkt.size_bits))
                self.on_link_break(frm, j, pkt)

    # -- accounting --------------------------------------------------------

    def pending_by_kind(self) -> dict[PacketKind, int]:
        """Copies sent but not yet delivered or dropped, per packet kind."""
        return {k: self.sent[k] - self.delivered[k] - self.dropped[k]
                for k in PacketKind}

    def conservation_ok(self) -> bool:
        """sent = delivered + dropped + still pending, per packet kind."""
        return all(v >= 0 for v in self.pending_by_kind().values())

    def sent_total(self) -> int:
        return sum(self.sent.values())

    def delivered_total(self) -> int:
        return sum(self.delivered.values())

    def dropped_total(self) -> int:
        return sum(self.dropped.values())
