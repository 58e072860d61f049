"""Shared routing vocabulary: pheromone tables, ant state, weighted sampling.

Every ant-based protocol stores per-node (destination, neighbor) -> mass maps
and draws next hops by roulette selection, so those pieces live here once. The
Protocol base class fixes the hook surface a protocol may touch: its own state,
the packet in hand, the local neighbor set and queue lengths, and its named RNG
streams. Nothing here exposes engine-global topology.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

from .errors import AllZeroWeights, EmptyRow, NoNeighbors
from .net import Packet, PacketKind, Priority


def sample_weighted(weights: dict[int, float], rng) -> int:
    """Roulette draw over a key -> nonnegative weight map."""
    total = 0.0
    for w in weights.values():
        total += w
    if total <= 0.0:
        raise AllZeroWeights(f"cannot sample from {weights}")
    x = rng.random() * total
    acc = 0.0
    last = None
    for k, w in weights.items():
        acc += w
        last = k
        if x < acc:
            return k
    return last  # guard against float accumulation at the top edge


def normalize_row(row: dict[int, float]) -> dict[int, float]:
    """Scale a row to sum to one, preserving entry order and ratios."""
    if not row:
        raise EmptyRow("cannot normalize an empty row")
    total = sum(row.values())
    if total <= 0.0:
        raise AllZeroWeights("cannot normalize an all-zero row")
    return {k: v / total for k, v in row.items()}


def loop_erase(path: tuple[int, ...], times: tuple[float, ...] | None = None):
    """Remove cycles from a walk, keeping the first occurrence of each node.

    With ``times`` (parallel to ``path``), returns the pair of erased path and
    the times of the surviving entries; without it, just the erased path.
    """
    out: list[int] = []
    keep: list[int] = []
    seen: dict[int, int] = {}
    for i, node in enumerate(path):
        if node in seen:
            cut = seen[node] + 1
            del out[cut:]
            del keep[cut:]
            for dropped in list(seen):
                if seen[dropped] > seen[node]:
                    del seen[dropped]
        else:
            seen[node] = len(out)
            out.append(node)
            keep.append(i)
    if times is None:
        return tuple(out)
    return tuple(out), tuple(times[i] for i in keep)


class PheromoneTable:
    """Per-node (destination, neighbor) -> nonnegative mass."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, dict[int, float]] = {}

    def row(self, dest: int) -> dict[int, float]:
        return self.rows.get(dest, {})

    def ensure_row(self, dest: int) -> dict[int, float]:
        r = self.rows.get(dest)
        if r is None:
            r = {}
            self.rows[dest] = r
        return r

    def get(self, dest: int, nbr: int) -> float:
        return self.rows.get(dest, {}).get(nbr, 0.0)

    def set(self, dest: int, nbr: int, value: float) -> None:
        if value < 0.0:
            raise ValueError("pheromone mass must be nonnegative")
        self.ensure_row(dest)[nbr] = value

    def add(self, dest: int, nbr: int, delta: float) -> None:
        r = self.ensure_row(dest)
        r[nbr] = r.get(nbr, 0.0) + delta

    def erase_neighbor(self, nbr: int) -> None:
        for r in self.rows.values():
            r.pop(nbr, None)

    def evaporate(self, factor: float, floor: float = 0.0) -> None:
        for dest, r in self.rows.items():
            dead = []
            for nbr in r:
                r[nbr] *= factor
                if r[nbr] < floor:
                    dead.append(nbr)
            for nbr in dead:
                del r[nbr]


@dataclass
class AntState:
    """Mobile agent payload carried inside Fant/Bant packets."""

    ant_id: int
    source: int
    destination: int
    visited: tuple[int, ...]
    hop_times: tuple[float, ...]
    max_life: int
    forced_at: tuple[int, ...] = ()

    @property
    def hops(self) -> int:
        return len(self.visited) - 1

    def advanced(self, node: int, t: float) -> "AntState":
        return replace(self, visited=self.visited + (node,),
                       hop_times=self.hop_times + (t,))


class PacketBuffer:
    """Per (node, destination) holding area for data awaiting a route."""

    def __init__(self, cap: int = 64):
        self.cap = cap
        self.slots: dict[tuple[int, int], deque] = {}

    def push(self, node: int, dst: int, pkt: Packet) -> Packet | None:
        """Buffer pkt; returns an evicted packet when the buffer overflows."""
        q = self.slots.setdefault((node, dst), deque())
        q.append(pkt)
        if len(q) > self.cap:
            return q.popleft()
        return None

    def drain(self, node: int, dst: int) -> list[Packet]:
        q = self.slots.pop((node, dst), None)
        return list(q) if q else []

    def peek(self, node: int, dst: int) -> int:
        q = self.slots.get((node, dst))
        return len(q) if q else 0


class Protocol:
    """Hook surface every routing protocol implements.

    The simulation calls these with node-local context only; handlers must not
    reach into other nodes' state. ``sim`` provides now()/rng()/neighbors()/
    queue_bits()/unicast()/broadcast() plus data-fate reporting.
    """

    name = "base"

    def __init__(self, sim):
        self.sim = sim

    def setup(self) -> None:
        """Schedule periodic activity before the clock starts."""

    def on_session(self, src: int, dst: int) -> None:
        """A traffic session (src -> dst) was configured."""

    def on_data_to_send(self, src: int, dst: int, pkt: Packet) -> None:
        raise NotImplementedError

    def on_packet(self, node: int, pkt: Packet) -> None:
        raise NotImplementedError

    def on_link_break(self, node: int, neighbor: int, pkt: Packet | None) -> None:
        """Delivery toward neighbor failed while sending pkt (None = probe)."""
