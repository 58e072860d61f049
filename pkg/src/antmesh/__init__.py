"""antmesh: deterministic ad hoc network simulation for ant-colony routing.

A discrete-event radio network of mobile nodes running one of six routing
protocols (four ant-colony designs, a hybrid, and a distance-vector baseline),
with reproducible random-waypoint mobility, CBR traffic, delivery/delay
accounting, parameter sweeps, CSV export, and SVG plotting.
"""

from .config import ScenarioConfig, parse_scenario, parse_scenario_text
from .harness import aggregate, compare, run_scenario, sweep
from .metrics import RunRecord, SummaryStats, avg_delay, export_csv, pdr
from .simulation import Simulation

__version__ = "0.1.0"

__all__ = [
    "ScenarioConfig", "parse_scenario", "parse_scenario_text",
    "Simulation", "run_scenario", "sweep", "compare", "aggregate",
    "RunRecord", "SummaryStats", "pdr", "avg_delay", "export_csv",
    "__version__",
]
