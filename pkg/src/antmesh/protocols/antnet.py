"""AntNet: proactive forward/backward ants over stochastic pheromone rows.

Every delta_t interval each node launches a forward ant toward a destination
drawn in proportion to its recent flow volume (nodes with no local traffic
draw uniformly over the destinations of active sessions). Forward
ants ride the data queues so their trip reflects real congestion, choose next
hops by mixing normalized pheromone with an instantaneous queue heuristic, and
avoid revisits when possible. At the destination the ant turns around; the
backward ant retraces the path on the control queues and shifts each visited
node's pheromone row toward the hop the forward ant used. Data packets are
forwarded by sampling the pheromone row alone; with no usable row they wait
briefly for a backward ant, then drop.
"""

from __future__ import annotations

import itertools
from collections import deque

from ..engine import EventKind
from ..errors import NoNeighbors
from ..metrics import DropReason
from ..net import Packet, PacketKind, Priority
from ..routing import AntState, PacketBuffer, PheromoneTable, Protocol, sample_weighted

FLOW_WINDOW = 30.0
BUFFER_WAIT = 5.0


def dest_distribution(flows: dict[int, float]) -> dict[int, float]:
    """Launch distribution over known destinations, by share of bits sent.

    All-zero flow volumes fall back to uniform over the known destinations;
    with no known destinations there is nothing to launch toward.
    """
    if not flows:
        return {}
    total = sum(flows.values())
    if total > 0.0:
        return {d: f / total for d, f in flows.items()}
    return {d: 1.0 / len(flows) for d in flows}


def heuristic_eta(queues: dict[int, float]) -> dict[int, float]:
    """Queue-based desirability of each neighbor: shorter backlog, higher eta."""
    k = len(queues)
    if k == 0:
        raise NoNeighbors("eta undefined without neighbors")
    total = sum(queues.values())
    if total > 0.0:
        return {j: 1.0 - q / total for j, q in queues.items()}
    return {j: 1.0 - 1.0 / k for j in queues}


def fant_probabilities(tau: dict[int, float], queues: dict[int, float],
                       alpha: float) -> dict[int, float]:
    """Forward-ant choice over a candidate set: normalized pheromone blended
    with the queue heuristic; the denominator keeps the result a distribution."""
    k = len(tau)
    if k == 0:
        raise NoNeighbors("no candidates for the forward ant")
    tau_total = sum(tau.values())
    if tau_total > 0.0:
        tau_norm = {j: v / tau_total for j, v in tau.items()}
    else:
        tau_norm = {j: 1.0 / k for j in tau}
    eta = heuristic_eta(queues)
    denom = 1.0 + alpha * (k - 1)
    return {j: (tau_norm[j] + alpha * eta[j]) / denom for j in tau}


def bant_reinforce(row: dict[int, float], f: int, r: float) -> None:
    """Shift a stochastic row toward f: f gains r of its headroom, the rest
    shrink by (1 - r); a row that summed to one still does."""
    if f not in row:
        row[f] = 0.0
    for j in row:
        if j == f:
            row[j] = row[j] + r * (1.0 - row[j])
        else:
            row[j] = row[j] * (1.0 - r)


class AntNet(Protocol):
    name = "antnet"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        self.p = cfg.antnet
        self.max_life = cfg.antnet_max_life()
        n = sim.node_count()
        self.tables = [PheromoneTable() for _ in range(n)]
        self.flows: list[dict[int, deque]] = [dict() for _ in range(n)]
        self.session_dests: list[int] = []
        self.buffer = PacketBuffer()
        self.rng = sim.rng("antnet")
        self._ant_ids = itertools.count()

    def setup(self) -> None:
        self.sim.after(self.p.delta_t, self._launch_tick, EventKind.AntLaunch)

    def on_session(self, src: int, dst: int) -> None:
        self.flows[src].setdefault(dst, deque())
        if dst not in self.session_dests:
            self.session_dests.append(dst)

    # -- flow bookkeeping ---------------------------------------------------

    def _flow_totals(self, node: int) -> dict[int, float]:
        now = self.sim.now()
        horizon = now - FLOW_WINDOW
        totals = {}
        for dst, q in self.flows[node].items():
            while q and q[0][0] < horizon:
                q.popleft()
            totals[dst] = float(sum(bits for _, bits in q))
        return totals

    # -- forward ants -------------------------------------------------------

    def _launch_tick(self) -> None:
        for node in range(self.sim.node_count()):
            self._launch(node)
        self.sim.after(self.p.delta_t, self._launch_tick, EventKind.AntLaunch)

    def _launch(self, node: int) -> None:
        dist = dest_distribution(self._flow_totals(node))
        if not dist:
            dests = [d for d in self.session_dests if d != node]
            if not dests:
                return
            dist = {d: 1.0 / len(dests) for d in dests}
        dest = sample_weighted(dist, self.rng)
        if dest == node:
            return
        now = self.sim.now()
        ant = AntState(ant_id=next(self._ant_ids), source=node, destination=dest,
                       visited=(node,), hop_times=(now,), max_life=self.max_life)
        self._fant_step(node, ant)

    def _fant_step(self, node: int, ant: AntState) -> None:
        nbrs = self.sim.neighbors(node)
        if not nbrs:
            return
        candidates = [j for j in nbrs if j not in ant.visited]
        if not candidates:
            if node in ant.forced_at:
                return  # one forced revisit per node per ant, then it dies
            ant = AntState(ant.ant_id, ant.source, ant.destination, ant.visited,
                           ant.hop_times, ant.max_life, ant.forced_at + (node,))
            candidates = nbrs
        tau_row = self.tables[node].row(ant.destination)
        tau = {j: tau_row.get(j, 0.0) for j in candidates}
        queues = {j: float(self.sim.queue_bits(node, j)) for j in candidates}
        probs = fant_probabilities(tau, queues, self.p.alpha)
        nxt = sample_weighted(probs, self.rng)
        pkt = self.sim.make_packet(PacketKind.Fant, ant.source, ant.destination,
                                   self.sim.ant_bits(), payload=ant)
        self.sim.unicast(pkt, node, nxt, Priority.Data)

    # -- packet handling ----------------------------------------------------

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Fant:
            self._on_fant(node, pkt)
        elif pkt.kind is PacketKind.Bant:
            self._on_bant(node, pkt)
        elif pkt.kind is PacketKind.Data:
            self._forward_or_buffer(node, pkt)

    def _on_fant(self, node: int, pkt: Packet) -> None:
        ant: AntState = pkt.payload
        if node == ant.source:
            return  # degenerate self-delivery
        ant = ant.advanced(node, self.sim.now())
        if node == ant.destination:
            self._start_bant(node, ant)
            return
        if ant.hops > ant.max_life:
            return
        self._fant_step(node, ant)

    def _start_bant(self, node: int, ant: AntState) -> None:
        path = ant.visited
        if len(path) < 2:
            return
        payload = {"path": path, "idx": len(path) - 1, "dest": ant.destination}
        pkt = self.sim.make_packet(PacketKind.Bant, node, path[0],
                                   self.sim.ant_bits(), payload=payload)
        self.sim.unicast(pkt, node, path[len(path) - 2], Priority.Control)

    def _on_bant(self, node: int, pkt: Packet) -> None:
        payload = pkt.payload
        path = payload["path"]
        idx = payload["idx"] - 1
        payload["idx"] = idx
        dest = payload["dest"]
        self._reinforce(node, dest, pkt.prev_hop)
        self._flush(node, dest)
        if idx > 0:
            self.sim.unicast(pkt, node, path[idx - 1], Priority.Control)

    def _reinforce(self, node: int, dest: int, f: int) -> None:
        table = self.tables[node]
        row = table.rows.get(dest)
        if row is None:
            nbrs = self.sim.neighbors(node)
            row = table.ensure_row(dest)
            if nbrs:
                for j in nbrs:
                    row[j] = 1.0 / len(nbrs)
        bant_reinforce(row, f, self.p.r)

    # -- data path ----------------------------------------------------------

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        q = self.flows[src].setdefault(dst, deque())
        q.append((self.sim.now(), pkt.size_bits))
        self._forward_or_buffer(src, pkt)

    def _usable_row(self, node: int, dst: int) -> dict[int, float]:
        row = self.tables[node].row(dst)
        if not row:
            return {}
        nbrs = self.sim.neighbors(node)
        return {j: w for j in nbrs if (w := row.get(j, 0.0)) > 0.0}

    def _forward_or_buffer(self, node: int, pkt: Packet) -> None:
        usable = self._usable_row(node, pkt.dst)
        if usable:
            nxt = sample_weighted(usable, self.rng)
            self.sim.forward_data(pkt, node, nxt)
            return
        evicted = self.buffer.push(node, pkt.dst, pkt)
        if evicted is not None:
            self.sim.drop_data(evicted, DropReason.BufferOverflow)
        self.sim.after(BUFFER_WAIT, lambda: self._buffer_deadline(node, pkt))

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

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        if pkt is not None and pkt.kind is PacketKind.Data:
            self.sim.drop_data(pkt, DropReason.LinkBreak)
