"""Packet-fate ledger, summary metrics, and CSV export."""

import math

import pytest

from antmesh.metrics import (CSV_HEADER, DropReason, PacketLedger, RunRecord,
                             SummaryStats, avg_delay, csv_rows, export_csv,
                             fmt9, pdr)
from antmesh.errors import NoDeliveries, NoTraffic


def _stats(**kw):
    base = dict(sent=0, delivered=0, dropped_by_reason={}, delays=[])
    base.update(kw)
    return SummaryStats(**base)


def test_ledger_tracks_three_fates():
    led = PacketLedger()
    led.record_sent(1, 10.0)
    led.record_sent(2, 11.0)
    led.record_sent(3, 12.0)
    led.record_delivered(1, 10.5)
    led.record_dropped(2, DropReason.NoRoute)
    assert led.is_open(3) and not led.is_open(1) and not led.is_open(2)
    stats = led.finalize()
    assert stats.sent == 3 and stats.delivered == 1
    assert stats.dropped_by_reason["NoRoute"] == 1
    assert stats.dropped_by_reason["InFlightAtEnd"] == 1
    assert stats.in_flight == 1
    assert stats.dropped == 2
    assert stats.delays == [0.5]


def test_ledger_rejects_inconsistent_records():
    led = PacketLedger()
    led.record_sent(1, 0.0)
    with pytest.raises(AssertionError):
        led.record_sent(1, 1.0)
    with pytest.raises(AssertionError):
        led.record_delivered(2, 1.0)
    led.record_delivered(1, 1.0)
    with pytest.raises(AssertionError):
        led.record_dropped(1, DropReason.LinkBreak)


def test_pdr_and_delay():
    stats = _stats(sent=4, delivered=3, delays=[0.1, 0.2, 0.3])
    assert abs(pdr(stats) - 0.75) < 1e-15
    assert abs(avg_delay(stats) - 0.2) < 1e-15
    with pytest.raises(NoTraffic):
        pdr(_stats())
    with pytest.raises(NoDeliveries):
        avg_delay(_stats(sent=1))


def test_fmt9_nine_significant_digits():
    assert fmt9(1.0) == "1"
    assert fmt9(0.123456789123) == "0.123456789"
    assert fmt9(float("nan")) == "nan"
    assert fmt9(2.0 / 3.0) == "0.666666667"


def test_csv_rows_shape_and_nan_handling():
    rec = RunRecord("ara", 7, "max_speed", 5.0,
                    _stats(sent=10, delivered=8,
                           dropped_by_reason={"NoRoute": 2},
                           delays=[0.01, 0.03]))
    empty = RunRecord("ara", 8, "max_speed", 5.0, _stats())
    rows = csv_rows([rec, empty])
    assert rows[0] == CSV_HEADER
    assert rows[1] == "ara,7,max_speed,5,10,8,2,0.8,0.02"
    assert rows[2] == "ara,8,max_speed,5,0,0,0,nan,nan"


def test_export_csv_is_byte_deterministic(tmp_path):
    rec = RunRecord("antnet", 1, "pause_time", 30.0,
                    _stats(sent=5, delivered=5, delays=[0.2] * 5))
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    export_csv([rec], str(p1))
    export_csv([rec], str(p2))
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    assert b1.endswith(b"\n")
    assert b"\r" not in b1
    assert b1.decode().splitlines()[0] == CSV_HEADER


def test_finalize_reports_every_reason_key():
    stats = PacketLedger().finalize()
    assert set(stats.dropped_by_reason) == {r.value for r in DropReason}
    assert math.isnan(float("nan"))  # anchor: delays list stays empty
    assert stats.delays == []
