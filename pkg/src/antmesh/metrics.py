"""Data-packet accounting: ledger, summary statistics and CSV export.

Only application data enters the ledger; control traffic is counted separately
by the net layer. Every sent uid ends a run in exactly one terminal state:
delivered, dropped with a reason, or still in flight when the clock stops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import NoDeliveries, NoTraffic


class DropReason(Enum):
    NoRoute = "NoRoute"
    LinkBreak = "LinkBreak"
    BufferOverflow = "BufferOverflow"
    TtlExpired = "TtlExpired"
    InFlightAtEnd = "InFlightAtEnd"


@dataclass
class SummaryStats:
    sent: int
    delivered: int
    dropped_by_reason: dict[str, int]
    delays: list[float]
    in_flight: int = 0
    kind_census: dict[str, int] = field(default_factory=dict)
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def dropped(self) -> int:
        return sum(self.dropped_by_reason.values())


class PacketLedger:
    """End-to-end fate tracking for data packets keyed by uid."""

    def __init__(self):
        self.sent_at: dict[int, float] = {}
        self.delivered_at: dict[int, float] = {}
        self.dropped: dict[int, DropReason] = {}
        self.finalized = False

    def record_sent(self, uid: int, t: float) -> None:
        assert uid not in self.sent_at, "duplicate uid"
        self.sent_at[uid] = t

    def record_delivered(self, uid: int, t: float) -> None:
        assert uid in self.sent_at and uid not in self.delivered_at \
            and uid not in self.dropped, "delivery without a live sent record"
        self.delivered_at[uid] = t

    def record_dropped(self, uid: int, reason: DropReason) -> None:
        assert uid in self.sent_at and uid not in self.delivered_at \
            and uid not in self.dropped, "drop without a live sent record"
        self.dropped[uid] = reason

    def is_open(self, uid: int) -> bool:
        return uid in self.sent_at and uid not in self.delivered_at \
            and uid not in self.dropped

    def audit(self) -> None:
        """Conservation identity: sent = delivered + dropped + open."""
        open_count = len(self.sent_at) - len(self.delivered_at) - len(self.dropped)
        assert open_count >= 0, "ledger conservation violated"

    def finalize(self) -> SummaryStats:
        """Close the run: everything still open becomes in-flight."""
        self.audit()
        in_flight = 0
        by_reason = {r.value: 0 for r in DropReason}
        for uid in self.sent_at:
            if uid in self.delivered_at:
                continue
            if uid in self.dropped:
                by_reason[self.dropped[uid].value] += 1
            else:
                in_flight += 1
                by_reason[DropReason.InFlightAtEnd.value] += 1
        delays = [self.delivered_at[u] - self.sent_at[u]
                  for u in sorted(self.delivered_at)]
        self.finalized = True
        return SummaryStats(sent=len(self.sent_at), delivered=len(self.delivered_at),
                            dropped_by_reason=by_reason, delays=delays,
                            in_flight=in_flight)


def pdr(stats: SummaryStats) -> float:
    """Delivered fraction of sent data packets; in-flight stays in the denominator."""
    if stats.sent == 0:
        raise NoTraffic("no data packets were sent")
    return stats.delivered / stats.sent


def avg_delay(stats: SummaryStats) -> float:
    """Mean application-to-application delay over delivered packets only."""
    if not stats.delays:
        raise NoDeliveries("no data packets were delivered")
    return sum(stats.delays) / len(stats.delays)


@dataclass
class RunRecord:
    protocol: str
    seed: int
    sweep_param: str
    sweep_value: float
    stats: SummaryStats


CSV_HEADER = "protocol,seed,sweep_param,sweep_value,sent,delivered,dropped,pdr,avg_delay_s"


def fmt9(x: float) -> str:
    """Nine significant digits, the fixed numeric width of every CSV we emit."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def csv_rows(records: list[RunRecord]) -> list[str]:
    lines = [CSV_HEADER]
    for r in records:
        s = r.stats
        ratio = s.delivered / s.sent if s.sent else float("nan")
        delay = (sum(s.delays) / len(s.delays)) if s.delays else float("nan")
        lines.append(",".join([
            r.protocol, str(r.seed), r.sweep_param, fmt9(r.sweep_value),
            str(s.sent), str(s.delivered), str(s.dropped),
            fmt9(ratio), fmt9(delay),
        ]))
    return lines


def export_csv(records: list[RunRecord], path: str) -> None:
    """Header plus one row per run, deterministic bytes for identical inputs."""
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(csv_rows(records)) + "\n")
