"""On-demand distance-vector routing, plus a variant with roaming ants.

Aodv is the reference point the ant protocols are measured against: hello
beacons maintain a neighbor table, route requests flood on demand, the
destination (or an intermediate with a live route) answers with a route reply
that installs next hops along the reverse path, and broken links trigger
route-error notices to the precursors of every invalidated entry.

AntAodv runs the same control plane and adds a small population of roaming
ants that random-walk the topology with a tabu history, re-installing the
one-hop route back to wherever each ant just came from. The walk keeps
recently confirmed links fresh in the routing tables between data bursts,
which raises the number of live routes a node holds at any instant.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..engine import EventKind
from ..metrics import DropReason
from ..net import Packet, PacketKind, Priority
from ..routing import PacketBuffer, Protocol

DISCOVERY_DEADLINE = 0.5
RREQ_RETRIES = 2
HELLO_LOSS_MARGIN = 0.1
CONNECTIVITY_INTERVAL = 1.0
ANT_STEP_INTERVAL = 0.25


@dataclass
class RouteEntry:
    next_hop: int
    hops: int
    seqno: int
    expires_at: float
    precursors: set = field(default_factory=set)


class Aodv(Protocol):
    name = "aodv"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        self.p = cfg.aodv
        n = sim.node_count()
        self.tables: list[dict[int, RouteEntry]] = [{} for _ in range(n)]
        self.last_seen: list[dict[int, float]] = [{} for _ in range(n)]
        self.seen_rreq: list[set[tuple[int, int]]] = [set() for _ in range(n)]
        self.own_seq = [0] * n
        self.rreq_id = [0] * n
        self.pending: dict[tuple[int, int], dict] = {}
        self.buffer = PacketBuffer()
        self._conn_sum = 0.0
        self._conn_samples = 0

    def setup(self) -> None:
        self.sim.after(self.p.hello_interval, self._hello_tick, EventKind.HelloTick)
        self.sim.after(CONNECTIVITY_INTERVAL, self._connectivity_tick)

    # -- hello beacons and neighbor upkeep ------------------------------------

    def _hello_tick(self) -> None:
        now = self.sim.now()
        timeout = (2.0 + HELLO_LOSS_MARGIN) * self.p.hello_interval
        for i in range(self.sim.node_count()):
            stale = [j for j, last in self.last_seen[i].items()
                     if last < now - timeout]
            for j in stale:
                del self.last_seen[i][j]
                self._local_break(i, j)
        for i in range(self.sim.node_count()):
            hello = self.sim.make_packet(PacketKind.Hello, i, -1, self.sim.ant_bits())
            self.sim.broadcast(hello, i, Priority.Control)
        if now + self.p.hello_interval <= self.sim.cfg.sim_time:
            self.sim.after(self.p.hello_interval, self._hello_tick,
                           EventKind.HelloTick)

    def _connectivity_tick(self) -> None:
        now = self.sim.now()
        for i in range(self.sim.node_count()):
            self._conn_sum += sum(1 for e in self.tables[i].values()
                                  if e.expires_at > now)
            self._conn_samples += 1
        if now + CONNECTIVITY_INTERVAL <= self.sim.cfg.sim_time:
            self.sim.after(CONNECTIVITY_INTERVAL, self._connectivity_tick)

    def extras(self) -> dict:
        avg = self._conn_sum / self._conn_samples if self._conn_samples else 0.0
        return {"avg_connectivity": avg}

    # -- route table -----------------------------------------------------------

    def _valid(self, node: int, dst: int) -> RouteEntry | None:
        e = self.tables[node].get(dst)
        if e is not None and e.expires_at > self.sim.now():
            return e
        return None

    def _install(self, node: int, dest: int, next_hop: int, hops: int,
                 seqno: int) -> bool:
        """Adopt a route when it is fresher, shorter, or a same-hop refresh."""
        now = self.sim.now()
        e = self.tables[node].get(dest)
        if e is not None and e.expires_at > now:
            if seqno < e.seqno:
                return False
            if seqno == e.seqno and hops >= e.hops and next_hop != e.next_hop:
                return False
        keep = e.precursors if e is not None and e.next_hop == next_hop else set()
        self.tables[node][dest] = RouteEntry(next_hop, hops, seqno,
                                             now + self.p.route_ttl, keep)
        return True

    def _local_break(self, node: int, nbr: int) -> None:
        """Invalidate routes through nbr and notify their precursors."""
        dead = [(d, e) for d, e in self.tables[node].items() if e.next_hop == nbr]
        if not dead:
            return
        agg: dict[int, list[int]] = {}
        for d, e in dead:
            del self.tables[node][d]
            for p in e.precursors:
                agg.setdefault(p, []).append(d)
        for p, dests in agg.items():
            if p == nbr:
                continue
            rerr = self.sim.make_packet(PacketKind.Rerr, node, p,
                                        self.sim.ant_bits(), payload=tuple(dests))
            self.sim.unicast(rerr, node, p, Priority.Control)

    # -- discovery ---------------------------------------------------------------

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        e = self._valid(src, dst)
        if e is not None:
            e.expires_at = self.sim.now() + self.p.route_ttl
            self.sim.forward_data(pkt, src, e.next_hop)
            return
        evicted = self.buffer.push(src, dst, pkt)
        if evicted is not None:
            self.sim.drop_data(evicted, DropReason.BufferOverflow)
        if (src, dst) not in self.pending:
            self.pending[(src, dst)] = {"retries": 0, "event": None}
            self._send_rreq(src, dst)

    def _send_rreq(self, src: int, dst: int) -> None:
        self.own_seq[src] += 1
        rid = self.rreq_id[src]
        self.rreq_id[src] += 1
        self.seen_rreq[src].add((src, rid))
        payload = {"origin": src, "rid": rid, "dest": dst,
                   "oseq": self.own_seq[src], "hops": 0}
        pkt = self.sim.make_packet(PacketKind.Rreq, src, dst,
                                   self.sim.ant_bits(), payload=payload)
        self.sim.broadcast(pkt, src, Priority.Control)
        self.pending[(src, dst)]["event"] = self.sim.after(
            DISCOVERY_DEADLINE, lambda: self._discovery_deadline(src, dst))

    def _discovery_deadline(self, src: int, dst: int) -> None:
        st = self.pending.get((src, dst))
        if st is None:
            return
        st["retries"] += 1
        if st["retries"] > RREQ_RETRIES:
            del self.pending[(src, dst)]
            for pkt in self.buffer.drain(src, dst):
                self.sim.drop_data(pkt, DropReason.NoRoute)
            return
        self._send_rreq(src, dst)

    def _on_rreq(self, node: int, pkt: Packet) -> None:
        p = pkt.payload
        key = (p["origin"], p["rid"])
        if key in self.seen_rreq[node]:
            return
        self.seen_rreq[node].add(key)
        hops = p["hops"] + 1
        self._install(node, p["origin"], pkt.prev_hop, hops, p["oseq"])
        if node == p["dest"]:
            self.own_seq[node] += 1
            self._send_rrep(node, p["dest"], p["origin"],
                            self.own_seq[node], 0, pkt.prev_hop)
            return
        e = self._valid(node, p["dest"])
        if e is not None:
            e.precursors.add(pkt.prev_hop)
            self._send_rrep(node, p["dest"], p["origin"], e.seqno, e.hops,
                            pkt.prev_hop)
            return
        if hops < self.sim.node_count():
            fwd = self.sim.make_packet(PacketKind.Rreq, p["origin"], p["dest"],
                                       self.sim.ant_bits(),
                                       payload={**p, "hops": hops})
            self.sim.broadcast(fwd, node, Priority.Control)

    def _send_rrep(self, node: int, dest: int, origin: int, dseq: int,
                   hops: int, to: int) -> None:
        payload = {"dest": dest, "origin": origin, "dseq": dseq, "hops": hops}
        pkt = self.sim.make_packet(PacketKind.Rrep, node, origin,
                                   self.sim.ant_bits(), payload=payload)
        self.sim.unicast(pkt, node, to, Priority.Control)

    def _on_rrep(self, node: int, pkt: Packet) -> None:
        p = pkt.payload
        hops = p["hops"] + 1
        self._install(node, p["dest"], pkt.prev_hop, hops, p["dseq"])
        if node == p["origin"]:
            st = self.pending.pop((node, p["dest"]), None)
            if st is not None and st["event"] is not None:
                self.sim.cancel(st["event"])
            self._flush(node, p["dest"])
            return
        rev = self._valid(node, p["origin"])
        if rev is None:
            return
        fwd = self.tables[node].get(p["dest"])
        if fwd is not None:
            fwd.precursors.add(rev.next_hop)
        rev.precursors.add(pkt.prev_hop)
        p["hops"] = hops
        self.sim.unicast(pkt, node, rev.next_hop, Priority.Control)

    def _flush(self, node: int, dst: int) -> None:
        for pkt in self.buffer.drain(node, dst):
            e = self._valid(node, dst)
            if e is None:
                self.sim.drop_data(pkt, DropReason.NoRoute)
            else:
                e.expires_at = self.sim.now() + self.p.route_ttl
                self.sim.forward_data(pkt, node, e.next_hop)

    # -- packet handling -----------------------------------------------------------

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.Hello:
            self.last_seen[node][pkt.prev_hop] = self.sim.now()
        elif pkt.kind is PacketKind.Rreq:
            self._on_rreq(node, pkt)
        elif pkt.kind is PacketKind.Rrep:
            self._on_rrep(node, pkt)
        elif pkt.kind is PacketKind.Rerr:
            self._on_rerr(node, pkt)
        elif pkt.kind is PacketKind.Data:
            e = self._valid(node, pkt.dst)
            if e is None:
                self.sim.drop_data(pkt, DropReason.NoRoute)
                rerr = self.sim.make_packet(PacketKind.Rerr, node, pkt.prev_hop,
                                            self.sim.ant_bits(),
                                            payload=(pkt.dst,))
                self.sim.unicast(rerr, node, pkt.prev_hop, Priority.Control)
            else:
                e.expires_at = self.sim.now() + self.p.route_ttl
                self.sim.forward_data(pkt, node, e.next_hop)

    def _on_rerr(self, node: int, pkt: Packet) -> None:
        sender = pkt.prev_hop
        agg: dict[int, list[int]] = {}
        for d in pkt.payload:
            e = self.tables[node].get(d)
            if e is None or e.next_hop != sender:
                continue
            del self.tables[node][d]
            for p in e.precursors:
                agg.setdefault(p, []).append(d)
        for p, dests in agg.items():
            rerr = self.sim.make_packet(PacketKind.Rerr, node, p,
                                        self.sim.ant_bits(), payload=tuple(dests))
            self.sim.unicast(rerr, node, p, Priority.Control)

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        self.last_seen[node].pop(neighbor, None)
        self._local_break(node, neighbor)
        if pkt is not None and pkt.kind is PacketKind.Data:
            self.sim.drop_data(pkt, DropReason.LinkBreak)


class AntAodv(Aodv):
    name = "antaodv"

    def __init__(self, sim):
        super().__init__(sim)
        cfg = sim.cfg
        n = sim.node_count()
        count = min(cfg.antaodv_ant_count(), n)
        self.window = cfg.antaodv_history_window()
        self.ants: list[dict] = []
        if count > 0:
            self.arng = sim.rng("antaodv.ants")
            for start in self.arng.sample(range(n), count):
                self.ants.append({"at": start,
                                  "history": deque([start], maxlen=self.window)})

    def setup(self) -> None:
        super().setup()
        if self.ants:
            self.sim.after(ANT_STEP_INTERVAL, self._ant_tick, EventKind.AntLaunch)

    def _ant_tick(self) -> None:
        for idx, ant in enumerate(self.ants):
            self._step_ant(idx, ant)
        if self.sim.now() + ANT_STEP_INTERVAL <= self.sim.cfg.sim_time:
            self.sim.after(ANT_STEP_INTERVAL, self._ant_tick, EventKind.AntLaunch)

    def _step_ant(self, idx: int, ant: dict) -> None:
        node = ant["at"]
        nbrs = self.sim.neighbors(node)
        if not nbrs:
            return
        hist = ant["history"]
        recency = {}
        for pos, v in enumerate(hist):
            recency[v] = pos
        fresh = [j for j in nbrs if j not in recency]
        if fresh:
            nxt = self.arng.choice(fresh)
        else:
            oldest = min(recency.get(j, -1) for j in nbrs)
            nxt = self.arng.choice([j for j in nbrs
                                    if recency.get(j, -1) == oldest])
        pkt = self.sim.make_packet(PacketKind.RoamingAnt, node, nxt,
                                   self.sim.ant_bits(), payload=idx)
        self.sim.send_detached(pkt, node, nxt)

    def _on_roaming(self, node: int, pkt: Packet) -> None:
        came_from = pkt.prev_hop
        ant = self.ants[pkt.payload]
        ant["at"] = node
        ant["history"].append(node)
        e = self.tables[node].get(came_from)
        seq = e.seqno if e is not None else 0
        self._install(node, came_from, came_from, 1, seq)

    def on_packet(self, node: int, pkt: Packet) -> None:
        if pkt.kind is PacketKind.RoamingAnt:
            self._on_roaming(node, pkt)
        else:
            super().on_packet(node, pkt)
