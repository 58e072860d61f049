"""PACONET: preferred-neighbor ants with travel-time pheromone accounting.

Forward ants walk toward the destination by always taking the unvisited
neighbor holding the most pheromone for that destination, falling back to a
single forced revisit per node when boxed in. Each departure deposits
pheromone on the chosen link in inverse proportion to the ant's accumulated
travel time and mildly evaporates the sibling entries of the same column.
The destination returns a backward ant along the loop-erased walk; every
reverse node deposits pheromone scaled by the remaining trip time. Data
packets follow the single best entry deterministically.
"""

from __future__ import annotations

import itertools

from ..errors import DegenerateTime
from ..metrics import DropReason
from ..net import Packet, PacketKind, Priority
from ..routing import AntState, PacketBuffer, PheromoneTable, Protocol, loop_erase

DISCOVERY_TIMEOUT = 1.0


def fant_select(row: dict[int, float], neighbors: list[int],
                visited: set[int]) -> int | None:
    """Pick the unvisited neighbor with the most pheromone (lowest id on ties)."""
    best, best_w = None, -1.0
    for j in neighbors:
        if j in visited:
            continue
        w = row.get(j, 0.0)
        if w > best_w:
            best, best_w = j, w
    return best


def forced_select(row: dict[int, float], neighbors: list[int]) -> int | None:
    """Pick the best neighbor ignoring visit history (lowest id on ties)."""
    best, best_w = None, -1.0
    for j in neighbors:
        w = row.get(j, 0.0)
        if w > best_w:
            best, best_w = j, w
    return best


def forward_deposit(travel_time: float, epsilon: float) -> float:
    """Pheromone a departing ant leaves on its chosen link."""
    if travel_time <= 0.0:
        raise DegenerateTime(f"travel time {travel_time} must be positive")
    return epsilon / travel_time


class Paconet(Protocol):
    name = "paconet"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        self.p = cfg.paconet
        self.max_hops = cfg.nodes
        n = sim.node_count()
        self.tables = [PheromoneTable() for _ in range(n)]
        self.buffer = PacketBuffer()
        self.pending: dict[tuple[int, int], object] = {}
        self._ant_ids = itertools.count()

    # -- forward ants ------------------------------------------------------------

    def discover(self, src: int, dst: int) -> None:
        if (src, dst) in self.pending or src == dst:
            return
        now = self.sim.now()
        ant = AntState(ant_id=next(self._ant_ids), source=src, destination=dst,
                       visited=(src,), hop_times=(now,), max_life=self.max_hops)
        self._fant_step(src, ant)
        ev = self.sim.after(DISCOVERY_TIMEOUT, lambda: self._discovery_deadline(src, dst))
        self.pending[(src, dst)] = ev

    def _discovery_deadline(self, src: int, dst: int) -> None:
        self.pending.pop((src, dst), None)
        for pkt in self.buffer.drain(src, dst):
            self.sim.drop_data(pkt, DropReason.NoRoute)

    def _fant_step(self, node: int, ant: AntState) -> None:
        nbrs = self.sim.neighbors(node)
        if not nbrs:
            return
        row = self.tables[node].row(ant.destination)
        visited = set(ant.visited)
        nxt = fant_select(row, nbrs, visited)
        if nxt is None:
            if node in ant.forced_at:
                return
            ant.forced_at = ant.forced_at + (node,)
            nxt = forced_select(row, nbrs)
            if nxt is None:
                return
        pkt = self.sim.make_packet(PacketKind.Fant, ant.source, ant.destination,
                                   self.sim.ant_bits(), payload=ant)
        deliver_at = self.sim.unicast(pkt, node, nxt, Priority.Data)
        now = self.sim.now()
        travel = (deliver_at - now) + (now - ant.hop_times[0])
        self.tables[node].add(ant.destination, nxt,
                              forward_deposit(travel, self.p.epsilon))
        self._evaporate_siblings(node, ant.destination, nxt)

    def _evaporate_siblings(self, node: int, dest: int, chosen: int) -> None:
        row = self.tables[node].rows.get(dest)
        if not row:
            return
        keep = 1.0 - self.p.xi
        for j in list(row):
            if j != chosen:
                row[j] *= keep

    def _on_fant(self, node: int, pkt: Packet) -> None:
        ant: AntState = pkt.payload
        ant = ant.advanced(node, self.sim.now())
        pkt.payload = ant
        if node == ant.destination:
            self._start_bant(node, ant)
            return
        if ant.hops >= ant.max_life:
            return
        self._fant_step(node, ant)

    # -- backward ants ------------------------------------------------------------

    def _start_bant(self, node: int, ant: AntState) -> None:
        path, times = loop_erase(ant.visited, ant.hop_times)
        if len(path) < 2:
            return
        total = times[-1] - times[0]
        payload = {"path": path, "times": times, "idx": len(path) - 1,
                   "total": total}
        pkt = self.sim.make_packet(PacketKind.Bant, node, path[0],
                                   self.sim.ant_bits(), payload=payload)
        self.sim.unicast(pkt, node, path[-2], Priority.Control)

    def _on_bant(self, node: int, pkt: Packet) -> None:
        payload = pkt.payload
        path, times = payload["path"], payload["times"]
        idx = payload["idx"] - 1
        payload["idx"] = idx
        remaining = payload["total"] - (times[idx] - times[0])
        if remaining <= 0.0:
            return
        dest = path[-1]
        self.tables[node].add(dest, pkt.prev_hop, self.p.epsilon / remaining)
        if idx > 0:
            self.sim.unicast(pkt, node, path[idx - 1], Priority.Control)
        else:
            ev = self.pending.pop((node, dest), None)
            if ev is not None:
                self.sim.cancel(ev)
            self._flush(node, dest)

    # -- data path ---------------------------------------------------------------

    def _best_next_hop(self, node: int, dst: int) -> int | None:
        row = self.tables[node].rows.get(dst)
        if not row:
            return None
        nbrs = self.sim.neighbors(node)
        best, best_w = None, 0.0
        for j in nbrs:
            w = row.get(j, 0.0)
            if w > best_w:
                best, best_w = j, w
        return best

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        nxt = self._best_next_hop(src, dst)
        if nxt is None:
            evicted = self.buffer.push(src, dst, pkt)
            if evicted is not None:
                self.sim.drop_data(evicted, DropReason.BufferOverflow)
            self.discover(src, dst)
            return
        self.sim.forward_data(pkt, src, nxt)

    def _flush(self, node: int, dst: int) -> None:
        for pkt in self.buffer.drain(node, dst):
            self.on_data_to_send(node, dst, pkt)

    # -- packet handling -----------------------------------------------------------

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Fant:
            self._on_fant(node, pkt)
        elif pkt.kind is PacketKind.Bant:
            self._on_bant(node, pkt)
        elif pkt.kind is PacketKind.Data:
            nxt = self._best_next_hop(node, pkt.dst)
            if nxt is None:
                self.sim.drop_data(pkt, DropReason.NoRoute)
                return
            self.sim.forward_data(pkt, node, nxt)

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        if pkt is not None and pkt.kind is PacketKind.Data:
            self.sim.drop_data(pkt, DropReason.LinkBreak)
