"""Experiment harness: single runs, parameter sweeps, protocol comparisons.

Sweeps vary one mobility knob (top speed or pause time) over a value grid and
a seed list. Every (protocol, value, seed) cell is an independent simulation;
because mobility and traffic draw from their own named RNG streams, two
protocols run with the same seed see byte-identical node movement and packet
schedules, so cross-protocol comparisons are paired. Results come back sorted
by (protocol, value, seed) regardless of worker scheduling.
"""

from __future__ import annotations

import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .config import ScenarioConfig
from .errors import InvalidConfig
from .metrics import RunRecord, SummaryStats, avg_delay, pdr
from .simulation import Simulation

SWEEP_PARAMS = ("max_speed", "pause_time")


def run_scenario(cfg: ScenarioConfig) -> SummaryStats:
    """Run one simulation to completion and return its summary."""
    return Simulation(cfg).run()


def _cell_config(cfg: ScenarioConfig, param: str, value: float,
                 seed: int) -> ScenarioConfig:
    if param == "max_speed":
        return replace(cfg, v_max=value, v_min=min(cfg.v_min, value), seed=seed)
    if param == "pause_time":
        return replace(cfg, pause=value, seed=seed)
    raise InvalidConfig(f"sweep parameter must be one of {SWEEP_PARAMS}, "
                        f"got {param!r}")


def _run_cell(args: tuple[ScenarioConfig, str, float]) -> RunRecord:
    cfg, param, value = args
    stats = Simulation(cfg).run()
    return RunRecord(protocol=cfg.protocol, seed=cfg.seed, sweep_param=param,
                     sweep_value=value, stats=stats)


def resolve_jobs(jobs: int | None) -> int:
    if jobs is not None:
        return max(1, jobs)
    env = os.environ.get("ANTMESH_JOBS")
    if env:
        return max(1, int(env))
    return 1


def _run_cells(cells: list[tuple[ScenarioConfig, str, float]],
               jobs: int | None) -> list[RunRecord]:
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(cells) <= 1:
        records = [_run_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_cell, cells))
    records.sort(key=lambda r: (r.protocol, r.sweep_value, r.seed))
    return records


def check_sweep_spec(values: list[float], seeds: list[int]) -> None:
    if not values:
        raise InvalidConfig("sweep needs at least one value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidConfig(f"sweep values must be strictly increasing: {values}")
    if not seeds:
        raise InvalidConfig("sweep needs at least one seed")


def sweep(cfg: ScenarioConfig, param: str, values: list[float],
          seeds: list[int], jobs: int | None = None) -> list[RunRecord]:
    """Run cfg's protocol over a grid of mobility values and seeds."""
    check_sweep_spec(values, seeds)
    cells = [(_cell_config(cfg, param, v, s), param, v)
             for v in values for s in seeds]
    return _run_cells(cells, jobs)


def compare(cfg: ScenarioConfig, protocols: list[str], param: str,
            values: list[float], seeds: list[int],
            jobs: int | None = None) -> list[RunRecord]:
    """Run several protocols over the same mobility grid with paired seeds."""
    check_sweep_spec(values, seeds)
    if not protocols:
        raise InvalidConfig("compare needs at least one protocol")
    cells = [(replace(_cell_config(cfg, param, v, s), protocol=proto), param, v)
             for proto in protocols for v in values for s in seeds]
    return _run_cells(cells, jobs)


def aggregate(records: list[RunRecord]) -> list[dict]:
    """Mean and sample-std of PDR and delay per (protocol, sweep value).

    Runs with no deliveries contribute nothing to the delay average; a cell
    where every run starved reports delay nan.
    """
    groups: dict[tuple[str, float], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.protocol, r.sweep_value), []).append(r)
    out = []
    for (proto, value) in sorted(groups):
        rs = groups[(proto, value)]
        pdrs = [pdr(r.stats) for r in rs]
        delays = [avg_delay(r.stats) for r in rs if r.stats.delays]
        out.append({
            "protocol": proto,
            "value": value,
            "runs": len(rs),
            "pdr_mean": statistics.fmean(pdrs),
            "pdr_std": statistics.stdev(pdrs) if len(pdrs) > 1 else 0.0,
            "delay_mean": statistics.fmean(delays) if delays else float("nan"),
            "delay_std": statistics.stdev(delays) if len(delays) > 1 else 0.0,
        })
    return out
