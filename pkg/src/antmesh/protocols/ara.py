"""ARA: on-demand ant discovery with hop-count pheromone and timed decay.

A source without pheromone floods a forward ant (or, in forward mode, unicasts
it along existing trails where they exist). Intermediate nodes relay only the
first copy of each ant; the destination answers every arriving copy, so each
disjoint arrival path earns its own backward ant and the source ends up with
one pheromone entry per discovered path, weighted by inverse hop count. Data
packets pick the next hop in proportion to pheromone and refresh the entry
they use; all entries decay on a one-second tick and vanish below a floor.
Failed deliveries are retried over alternate entries, then handed back one hop
at a time toward the source, which finally re-discovers. No hello beacons are
ever sent.
"""

from __future__ import annotations

import itertools

from ..engine import EventKind
from ..metrics import DropReason
from ..net import Packet, PacketKind, Priority
from ..routing import AntState, PacketBuffer, PheromoneTable, Protocol, sample_weighted

DISCOVERY_TIMEOUT = 1.0
PHEROMONE_FLOOR = 1e-6
EVAPORATION_INTERVAL = 1.0


class Ara(Protocol):
    name = "ara"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        self.p = cfg.ara
        self.max_hops = cfg.ara_max_hops()
        n = sim.node_count()
        self.tables = [PheromoneTable() for _ in range(n)]
        self.seen: list[set[int]] = [set() for _ in range(n)]
        self.buffer = PacketBuffer()
        self.pending: dict[tuple[int, int], object] = {}
        self.rng = sim.rng("ara")
        self._ant_ids = itertools.count()

    def setup(self) -> None:
        self.sim.after(EVAPORATION_INTERVAL, self._evaporation_tick,
                       EventKind.EvaporationTick)

    def _evaporation_tick(self) -> None:
        factor = self.p.evap_rate ** EVAPORATION_INTERVAL
        for table in self.tables:
            table.evaporate(factor, floor=PHEROMONE_FLOOR)
        self.sim.after(EVAPORATION_INTERVAL, self._evaporation_tick,
                       EventKind.EvaporationTick)

    # -- discovery ------------------------------------------------------------

    def discover(self, src: int, dst: int) -> None:
        if (src, dst) in self.pending:
            return
        now = self.sim.now()
        ant = AntState(ant_id=next(self._ant_ids), source=src, destination=dst,
                       visited=(src,), hop_times=(now,), max_life=self.max_hops)
        self.seen[src].add(ant.ant_id)
        self._fant_forward(src, ant)
        ev = self.sim.after(DISCOVERY_TIMEOUT, lambda: self._discovery_deadline(src, dst))
        self.pending[(src, dst)] = ev

    def _discovery_deadline(self, src: int, dst: int) -> None:
        self.pending.pop((src, dst), None)
        for pkt in self.buffer.drain(src, dst):
            self.sim.drop_data(pkt, DropReason.NoRoute)

    def _fant_forward(self, node: int, ant: AntState) -> None:
        pkt = self.sim.make_packet(PacketKind.Fant, ant.source, ant.destination,
                                   self.sim.ant_bits(), payload=ant)
        if self.p.mode == "forward":
            nbrs = self.sim.neighbors(node)
            row = self.tables[node].row(ant.destination)
            best, best_w = None, 0.0
            for j in nbrs:
                w = row.get(j, 0.0)
                if w > best_w:
                    best, best_w = j, w
            if best is not None:
                self.sim.unicast(pkt, node, best, Priority.Control)
                return
        self.sim.broadcast(pkt, node, Priority.Control)

    def _on_fant(self, node: int, pkt: Packet) -> None:
        ant: AntState = pkt.payload
        if node == ant.destination:
            ant = ant.advanced(node, self.sim.now())
            self._start_bant(node, ant)
            return
        if ant.ant_id in self.seen[node]:
            return
        self.seen[node].add(ant.ant_id)
        ant = ant.advanced(node, self.sim.now())
        if ant.hops >= self.max_hops:
            return
        self._fant_forward(node, ant)

    # -- backward ants ----------------------------------------------------------

    def _start_bant(self, node: int, ant: AntState) -> None:
        path = ant.visited
        m = len(path) - 1
        if m < 1:
            return
        # The responder learns the way back to the ant's source immediately.
        self.tables[node].add(path[0], path[m - 1], self.p.reinforce_unit / m)
        payload = {"path": path, "idx": m}
        pkt = self.sim.make_packet(PacketKind.Bant, node, path[0],
                                   self.sim.ant_bits(), payload=payload)
        self.sim.unicast(pkt, node, path[m - 1], Priority.Control)

    def _on_bant(self, node: int, pkt: Packet) -> None:
        payload = pkt.payload
        path = payload["path"]
        idx = payload["idx"] - 1
        payload["idx"] = idx
        src_orig, dst_orig = path[0], path[-1]
        bant_hops = len(path) - 1 - idx
        self.tables[node].add(dst_orig, pkt.prev_hop,
                              self.p.reinforce_unit / bant_hops)
        if idx > 0:
            self.tables[node].add(src_orig, path[idx - 1],
                                  self.p.reinforce_unit / idx)
            self.sim.unicast(pkt, node, path[idx - 1], Priority.Control)
        else:
            ev = self.pending.pop((node, dst_orig), None)
            if ev is not None:
                self.sim.cancel(ev)
            self._flush(node, dst_orig)

    # -- data path ---------------------------------------------------------------

    def _usable_row(self, node: int, dst: int) -> dict[int, float]:
        row = self.tables[node].row(dst)
        if not row:
            return {}
        nbrs = self.sim.neighbors(node)
        return {j: w for j in nbrs if (w := row.get(j, 0.0)) > 0.0}

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        pkt.payload = [src]
        self._forward_or_recover(src, pkt)

    def _forward_or_recover(self, node: int, pkt: Packet) -> None:
        usable = self._usable_row(node, pkt.dst)
        if usable:
            nxt = sample_weighted(usable, self.rng)
            self.tables[node].add(pkt.dst, nxt, self.p.reinforce_unit)
            self.sim.forward_data(pkt, node, nxt)
            return
        self._route_failure(node, pkt)

    def _route_failure(self, node: int, pkt: Packet) -> None:
        """No usable entry at node: hand back one hop, or re-discover at the source."""
        trace = pkt.payload
        if node == pkt.src:
            evicted = self.buffer.push(node, pkt.dst, pkt)
            if evicted is not None:
                self.sim.drop_data(evicted, DropReason.BufferOverflow)
            self.discover(node, pkt.dst)
            return
        if trace and len(trace) >= 2 and trace[-1] == node:
            upstream = trace[-2]
            trace.pop()
            notice = self.sim.make_packet(PacketKind.Rerr, node, upstream,
                                          self.sim.ant_bits(),
                                          payload=(pkt, node))
            self.sim.unicast(notice, node, upstream, Priority.Control)
        else:
            self.sim.drop_data(pkt, DropReason.NoRoute)

    def _flush(self, node: int, dst: int) -> None:
        for pkt in self.buffer.drain(node, dst):
            self._forward_or_recover(node, pkt)

    # -- packet handling -----------------------------------------------------------

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Fant:
            self._on_fant(node, pkt)
        elif pkt.kind is PacketKind.Bant:
            self._on_bant(node, pkt)
        elif pkt.kind is PacketKind.Data:
            trace = pkt.payload
            if isinstance(trace, list):
                trace.append(node)
            self._forward_or_recover(node, pkt)
        elif pkt.kind is PacketKind.Rerr:
            data_pkt, failed_at = pkt.payload
            row = self.tables[node].rows.get(data_pkt.dst)
            if row is not None:
                row.pop(failed_at, None)
            self._forward_or_recover(node, data_pkt)

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        self.tables[node].erase_neighbor(neighbor)
        if pkt is None:
            return
        if pkt.kind is PacketKind.Data:
            trace = pkt.payload
            if isinstance(trace, list) and trace and trace[-1] != node:
                trace.append(node)
            self._forward_or_recover(node, pkt)
        elif pkt.kind is PacketKind.Rerr:
            data_pkt, _ = pkt.payload
            self.sim.drop_data(data_pkt, DropReason.LinkBreak)
