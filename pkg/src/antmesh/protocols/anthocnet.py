"""AntHocNet: reactive path setup plus a lightweight proactive sampler.

Route discovery floods a forward ant on the data queues; intermediate nodes
relay only the first copy of each ant, so the backward ant retraces one clean
path and installs a pheromone value at every reverse-path node that scores the
remaining path by measured trip time and hop count. While a session is active
a sampler ant re-walks the pheromone field at regular intervals, usually
following the installed gradient but occasionally stepping uniformly at
random, which refreshes existing paths and discovers additional ones. Data is
spread across positive entries by a power-law rule; link failures erase the
local entries and warn the upstream hop only.
"""

from __future__ import annotations

import itertools

from ..engine import EventKind
from ..errors import NoNeighbors
from ..metrics import DropReason
from ..net import Packet, PacketKind, Priority
from ..routing import AntState, PacketBuffer, PheromoneTable, Protocol, sample_weighted

DISCOVERY_TIMEOUT = 1.0


def pheromone_from_quality(trip_time: float, hops: int, hop_cost: float) -> float:
    """Inverse cost of a path: measured trip time plus a fixed per-hop charge."""
    return 2.0 / (trip_time + hops * hop_cost)


def forwarding_weights(row: dict[int, float], beta: float) -> dict[int, float]:
    """Power-law forwarding weights over positive pheromone entries.

    Weights are scaled by the row maximum before exponentiation so large
    pheromone values cannot overflow even at high beta.
    """
    positive = {j: v for j, v in row.items() if v > 0.0}
    if not positive:
        return {}
    mx = max(positive.values())
    return {j: (v / mx) ** beta for j, v in positive.items()}


class AntHocNet(Protocol):
    name = "anthocnet"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        self.p = cfg.anthocnet
        self.hop_cost = cfg.traffic.packet_bytes * 8 / cfg.bandwidth
        self.max_life = 2 * sim.node_count()
        n = sim.node_count()
        self.tables = [PheromoneTable() for _ in range(n)]
        self.seen: list[set[int]] = [set() for _ in range(n)]
        self.buffer = PacketBuffer()
        self.pending: dict[tuple[int, int], object] = {}
        self.lost_samplers: dict[tuple[int, int], int] = {}
        self.rng = sim.rng("anthocnet")
        self._ant_ids = itertools.count()

    def on_session(self, src: int, dst: int) -> None:
        start = self.sim.cfg.traffic.warmup_s
        self.sim.after(start + self.p.sample_interval - self.sim.now(),
                       lambda: self._sample_tick(src, dst), EventKind.AntLaunch)

    # -- reactive setup -------------------------------------------------------

    def reactive_setup(self, src: int, dst: int) -> None:
        if (src, dst) in self.pending:
            return
        now = self.sim.now()
        ant = AntState(ant_id=next(self._ant_ids), source=src, destination=dst,
                       visited=(src,), hop_times=(now,), max_life=self.max_life)
        pkt = self.sim.make_packet(PacketKind.Fant, src, dst,
                                   self.sim.ant_bits(), payload=(ant, False))
        self.seen[src].add(ant.ant_id)
        self.sim.broadcast(pkt, src, Priority.Data)
        ev = self.sim.after(DISCOVERY_TIMEOUT, lambda: self._discovery_deadline(src, dst))
        self.pending[(src, dst)] = ev

    def _discovery_deadline(self, src: int, dst: int) -> None:
        self.pending.pop((src, dst), None)
        for pkt in self.buffer.drain(src, dst):
            self.sim.drop_data(pkt, DropReason.NoRoute)

    # -- proactive sampling ---------------------------------------------------

    def _sample_tick(self, src: int, dst: int) -> None:
        now = self.sim.now()
        if now >= self.sim.cfg.sim_time:
            return
        if now >= self.sim.cfg.traffic.warmup_s:
            if not self._usable_row(src, dst):
                self.reactive_setup(src, dst)
            elif self.lost_samplers.get((src, dst), 0) >= 2:
                # Two samplers in a row vanished without a returning ant:
                # the installed path has silently gone stale, so rebuild it.
                self.lost_samplers[(src, dst)] = 0
                self.reactive_setup(src, dst)
            else:
                self._launch_sampler(src, dst)
        self.sim.after(self.p.sample_interval,
                       lambda: self._sample_tick(src, dst), EventKind.AntLaunch)

    def _launch_sampler(self, src: int, dst: int) -> None:
        key = (src, dst)
        self.lost_samplers[key] = self.lost_samplers.get(key, 0) + 1
        ant = AntState(ant_id=next(self._ant_ids), source=src, destination=dst,
                       visited=(src,), hop_times=(self.sim.now(),),
                       max_life=self.max_life)
        self._sampler_step(src, ant)

    def _sampler_step(self, node: int, ant: AntState) -> None:
        nbrs = [j for j in self.sim.neighbors(node) if j not in ant.visited]
        nxt = None
        if nbrs:
            if self.rng.random() < self.p.explore_prob:
                nxt = nbrs[self.rng.randrange(len(nbrs))]
            else:
                row = self.tables[node].row(ant.destination)
                weights = forwarding_weights({j: row.get(j, 0.0) for j in nbrs}, 1.0)
                if weights:
                    nxt = sample_weighted(weights, self.rng)
        if nxt is None:
            # Dead end: warn the hop that sent the sampler here so it stops
            # pointing at a node that cannot reach the destination.
            if len(ant.visited) >= 2:
                self._notify_upstream(node, ant.visited[-2], ant.destination)
            return
        pkt = self.sim.make_packet(PacketKind.Fant, ant.source, ant.destination,
                                   self.sim.ant_bits(), payload=(ant, True))
        self.sim.unicast(pkt, node, nxt, Priority.Data)

    def _notify_upstream(self, node: int, upstream: int, dest: int) -> None:
        notice = self.sim.make_packet(PacketKind.Rerr, node, upstream,
                                      self.sim.ant_bits(), payload=(dest, node))
        self.sim.unicast(notice, node, upstream, Priority.Control)

    # -- packet handling ------------------------------------------------------

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Fant:
            self._on_fant(node, pkt)
        elif pkt.kind is PacketKind.Bant:
            self._on_bant(node, pkt)
        elif pkt.kind is PacketKind.Data:
            self._forward_or_buffer(node, pkt)
        elif pkt.kind is PacketKind.Rerr:
            dest, via = pkt.payload
            row = self.tables[node].rows.get(dest)
            if row is not None:
                row.pop(via, None)

    def _on_fant(self, node: int, pkt: Packet) -> None:
        ant, proactive = pkt.payload
        if proactive:
            ant = ant.advanced(node, self.sim.now())
            if node == ant.destination:
                self._start_bant(node, ant)
            elif ant.hops <= ant.max_life:
                self._sampler_step(node, ant)
            return
        if ant.ant_id in self.seen[node]:
            return
        self.seen[node].add(ant.ant_id)
        ant = ant.advanced(node, self.sim.now())
        if node == ant.destination:
            self._start_bant(node, ant)
            return
        if ant.hops > ant.max_life:
            return
        relay = self.sim.make_packet(PacketKind.Fant, ant.source, ant.destination,
                                     self.sim.ant_bits(), payload=(ant, False))
        self.sim.broadcast(relay, node, Priority.Data)

    def _start_bant(self, node: int, ant: AntState) -> None:
        path = ant.visited
        if len(path) < 2:
            return
        payload = {"path": path, "times": ant.hop_times,
                   "idx": len(path) - 1, "dest": ant.destination}
        pkt = self.sim.make_packet(PacketKind.Bant, node, path[0],
                                   self.sim.ant_bits(), payload=payload)
        self.sim.unicast(pkt, node, path[len(path) - 2], Priority.Control)

    def _on_bant(self, node: int, pkt: Packet) -> None:
        payload = pkt.payload
        path, times, dest = payload["path"], payload["times"], payload["dest"]
        idx = payload["idx"] - 1
        payload["idx"] = idx
        trip = times[-1] - times[idx]
        hops = len(path) - 1 - idx
        quality = pheromone_from_quality(trip, hops, self.hop_cost)
        self.tables[node].set(dest, pkt.prev_hop, quality)
        if (node, dest) in self.pending:
            ev = self.pending.pop((node, dest))
            self.sim.cancel(ev)
        if idx == 0:
            self.lost_samplers[(node, dest)] = 0
        self._flush(node, dest)
        if idx > 0:
            self.sim.unicast(pkt, node, path[idx - 1], Priority.Control)

    # -- data path ------------------------------------------------------------

    def _usable_row(self, node: int, dst: int) -> dict[int, float]:
        row = self.tables[node].row(dst)
        if not row:
            return {}
        nbrs = self.sim.neighbors(node)
        return {j: w for j in nbrs if (w := row.get(j, 0.0)) > 0.0}

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        self._forward_or_buffer(src, pkt)

    def _forward_or_buffer(self, node: int, pkt: Packet) -> None:
        usable = self._usable_row(node, pkt.dst)
        if usable:
            weights = forwarding_weights(usable, self.p.beta)
            nxt = sample_weighted(weights, self.rng)
            self.sim.forward_data(pkt, node, nxt)
            return
        evicted = self.buffer.push(node, pkt.dst, pkt)
        if evicted is not None:
            self.sim.drop_data(evicted, DropReason.BufferOverflow)
        if node == pkt.src:
            self.reactive_setup(node, pkt.dst)
        else:
            if pkt.prev_hop >= 0 and pkt.prev_hop != node:
                self._notify_upstream(node, pkt.prev_hop, pkt.dst)
            self.sim.after(DISCOVERY_TIMEOUT, lambda: self._buffer_deadline(node, pkt))

    def _buffer_deadline(self, node: int, pkt: Packet) -> None:
        q = self.buffer.slots.get((node, pkt.dst))
        if q is not None and pkt in q:
            q.remove(pkt)
            if not q:
                del self.buffer.slots[(node, pkt.dst)]
            self.sim.drop_data(pkt, DropReason.NoRoute)

    def _flush(self, node: int, dst: int) -> None:
        for pkt in self.buffer.drain(node, dst):
            self._forward_or_buffer(node, pkt)

    # -- failure handling -------------------------------------------------------

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        for row in self.tables[node].rows.values():
            row.pop(neighbor, None)
        if pkt is None or pkt.kind is not PacketKind.Data:
            return
        if pkt.upstream >= 0:
            self._notify_upstream(node, pkt.upstream, pkt.dst)
        usable = self._usable_row(node, pkt.dst)
        if usable:
            weights = forwarding_weights(usable, self.p.beta)
            nxt = sample_weighted(weights, self.rng)
            self.sim.forward_data(pkt, node, nxt)
        else:
            self.sim.drop_data(pkt, DropReason.LinkBreak)
