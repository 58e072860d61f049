"""Scenario configuration: dataclass defaults plus a line-oriented file parser.

Files are ``key = value`` lines with ``#`` comments. Dotted keys configure one
component (``traffic.rate_pps``, ``antnet.r``). Unknown keys and out-of-bound
values are hard errors so a typo can never silently fall back to a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ParseError, TypeMismatch, UnknownKey, InvalidConfig

PROTOCOLS = ("antnet", "anthocnet", "ara", "paconet", "aodv", "antaodv")


@dataclass
class TrafficConfig:
    sessions: int = 10
    rate_pps: float = 4.0
    packet_bytes: int = 512
    warmup_s: float = 10.0
    pairs: tuple[tuple[int, int], ...] | None = None


@dataclass
class AntnetConfig:
    delta_t: float = 0.5
    # The heuristic's share of a forward-ant choice grows with neighbor count
    # (denominator 1 + alpha*(k-1)), so alpha must stay well under 1/k for
    # pheromone to dominate in dense neighborhoods.
    alpha: float = 0.01
    r: float = 0.1
    max_life: int | None = None  # defaults to 2 * nodes


@dataclass
class AnthocnetConfig:
    beta: float = 20.0
    sample_interval: float = 1.0
    explore_prob: float = 0.1


@dataclass
class AraConfig:
    mode: str = "flood"  # flood | forward
    max_hops: int | None = None  # defaults to nodes
    evap_rate: float = 0.9
    reinforce_unit: float = 1.0


@dataclass
class PaconetConfig:
    epsilon: float = 1.0
    xi: float = 0.1


@dataclass
class AodvConfig:
    hello_interval: float = 1.0
    route_ttl: float = 10.0


@dataclass
class AntAodvConfig:
    ant_count: int | None = None  # defaults to ceil(nodes / 10)
    history_window: int | None = None  # defaults to nodes


@dataclass
class ScenarioConfig:
    protocol: str = ""
    nodes: int = 50
    area: tuple[float, float] = (500.0, 500.0)
    sim_time: float = 300.0
    range: float = 300.0
    bandwidth: float = 2_000_000.0
    latency: float = 0.001
    v_min: float = 1.0
    v_max: float = 20.0
    pause: float = 0.0
    seed: int = 1
    ant_bytes: int = 27
    data_ttl: int = 64
    positions: tuple[tuple[float, float], ...] | None = None
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    antnet: AntnetConfig = field(default_factory=AntnetConfig)
    anthocnet: AnthocnetConfig = field(default_factory=AnthocnetConfig)
    ara: AraConfig = field(default_factory=AraConfig)
    paconet: PaconetConfig = field(default_factory=PaconetConfig)
    aodv: AodvConfig = field(default_factory=AodvConfig)
    antaodv: AntAodvConfig = field(default_factory=AntAodvConfig)

    def validate(self) -> "ScenarioConfig":
        if self.protocol not in PROTOCOLS:
            raise TypeMismatch(
                f"protocol must be one of {', '.join(PROTOCOLS)}; got {self.protocol!r}")
        if self.nodes < 1:
            raise TypeMismatch("nodes must be >= 1")
        if self.v_min > self.v_max:
            raise TypeMismatch("v_min must not exceed v_max")
        if self.positions is not None and len(self.positions) != self.nodes:
            raise TypeMismatch("positions must list exactly one x,y pair per node")
        if self.traffic.pairs is not None:
            for s, d in self.traffic.pairs:
                if s == d or not (0 <= s < self.nodes and 0 <= d < self.nodes):
                    raise TypeMismatch(f"invalid traffic pair {s}-{d}")
        n = self.nodes
        if self.traffic.pairs is None and self.traffic.sessions > n * (n - 1):
            raise InvalidConfig("more sessions than distinct (src, dst) pairs")
        return self

    # Derived defaults that depend on the node count.

    def antnet_max_life(self) -> int:
        return self.antnet.max_life if self.antnet.max_life is not None else 2 * self.nodes

    def ara_max_hops(self) -> int:
        return self.ara.max_hops if self.ara.max_hops is not None else self.nodes

    def antaodv_ant_count(self) -> int:
        c = self.antaodv.ant_count
        return c if c is not None else math.ceil(self.nodes / 10)

    def antaodv_history_window(self) -> int:
        w = self.antaodv.history_window
        return w if w is not None else self.nodes


def _parse_bool(raw: str) -> bool:
    if raw.lower() in ("true", "yes", "1"):
        return True
    if raw.lower() in ("false", "no", "0"):
        return False
    raise ValueError(raw)


def _parse_area(raw: str) -> tuple[float, float]:
    parts = raw.lower().split("x")
    if len(parts) != 2:
        raise ValueError(raw)
    return (float(parts[0]), float(parts[1]))


def _parse_pairs(raw: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split("-")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def _parse_positions(raw: str) -> tuple[tuple[float, float], ...]:
    pts = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        x, y = chunk.split(",")
        pts.append((float(x), float(y)))
    return tuple(pts)


def _bounded(lo, hi, lo_open=False, hi_open=False):
    def check(v):
        ok_lo = v > lo if lo_open else v >= lo
        ok_hi = v < hi if hi_open else v <= hi
        return ok_lo and ok_hi
    return check


INF = float("inf")

# key -> (section attr or None, field, converter, bound check, description)
_SCHEMA: dict[str, tuple] = {
    "protocol": (None, "protocol", str.lower, lambda v: True),
    "nodes": (None, "nodes", int, _bounded(1, INF)),
    "area": (None, "area", _parse_area, lambda v: v[0] > 0 and v[1] > 0),
    "sim_time": (None, "sim_time", float, _bounded(0, INF, lo_open=True)),
    "range": (None, "range", float, _bounded(0, INF, lo_open=True)),
    "bandwidth": (None, "bandwidth", float, _bounded(0, INF, lo_open=True)),
    "latency": (None, "latency", float, _bounded(0, INF)),
    "v_min": (None, "v_min", float, _bounded(0, INF)),
    "v_max": (None, "v_max", float, _bounded(0, INF)),
    "pause": (None, "pause", float, _bounded(0, INF)),
    "seed": (None, "seed", int, lambda v: True),
    "ant_bytes": (None, "ant_bytes", int, _bounded(1, INF)),
    "data_ttl": (None, "data_ttl", int, _bounded(1, INF)),
    "positions": (None, "positions", _parse_positions, lambda v: True),
    "traffic.sessions": ("traffic", "sessions", int, _bounded(0, INF)),
    "traffic.rate_pps": ("traffic", "rate_pps", float, _bounded(0, INF, lo_open=True)),
    "traffic.packet_bytes": ("traffic", "packet_bytes", int, _bounded(1, INF)),
    "traffic.warmup_s": ("traffic", "warmup_s", float, _bounded(0, INF)),
    "traffic.pairs": ("traffic", "pairs", _parse_pairs, lambda v: True),
    "antnet.delta_t": ("antnet", "delta_t", float, _bounded(0, INF, lo_open=True)),
    "antnet.alpha": ("antnet", "alpha", float, _bounded(0, INF)),
    "antnet.r": ("antnet", "r", float, _bounded(0, 1, lo_open=True, hi_open=True)),
    "antnet.max_life": ("antnet", "max_life", int, _bounded(1, INF)),
    "anthocnet.beta": ("anthocnet", "beta", float, _bounded(1, INF)),
    "anthocnet.sample_interval": ("anthocnet", "sample_interval", float,
                                  _bounded(0, INF, lo_open=True)),
    "anthocnet.explore_prob": ("anthocnet", "explore_prob", float, _bounded(0, 0.5)),
    "ara.mode": ("ara", "mode", str.lower, lambda v: v in ("flood", "forward")),
    "ara.max_hops": ("ara", "max_hops", int, _bounded(1, INF)),
    "ara.evap_rate": ("ara", "evap_rate", float,
                      _bounded(0, 1, lo_open=True, hi_open=True)),
    "ara.reinforce_unit": ("ara", "reinforce_unit", float, _bounded(0, INF, lo_open=True)),
    "paconet.epsilon": ("paconet", "epsilon", float, _bounded(0, INF, lo_open=True)),
    "paconet.xi": ("paconet", "xi", float, _bounded(0, 1, lo_open=True, hi_open=True)),
    "aodv.hello_interval": ("aodv", "hello_interval", float, _bounded(0, INF, lo_open=True)),
    "aodv.route_ttl": ("aodv", "route_ttl", float, _bounded(0, INF, lo_open=True)),
    "antaodv.ant_count": ("antaodv", "ant_count", int, _bounded(0, INF)),
    "antaodv.history_window": ("antaodv", "history_window", int, _bounded(1, INF)),
}


def parse_scenario_text(text: str, source: str = "<string>") -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA:
            raise UnknownKey(f"{source}:{lineno}: unknown key {key!r}")
        section, attr, convert, check = _SCHEMA[key]
        try:
            value = convert(raw)
        except (ValueError, TypeError) as exc:
            raise TypeMismatch(
                f"{source}:{lineno}: bad value for {key!r}: {raw!r}") from exc
        if not check(value):
            raise TypeMismatch(
                f"{source}:{lineno}: value out of bounds for {key!r}: {raw!r}")
        target = cfg if section is None else getattr(cfg, section)
        setattr(target, attr, value)
    return cfg.validate()


def parse_scenario(path: str) -> ScenarioConfig:
    with open(path) as fh:
        return parse_scenario_text(fh.read(), source=path)
