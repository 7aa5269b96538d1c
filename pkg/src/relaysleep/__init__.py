"""Sleep scheduling for renewable-powered relay stations in a macro cell.

The package models one grid-powered base station ringed by battery-and-
harvest relays, evaluates grid energy and blocking probability slot by
slot, and plans per-relay sleep ratios over a finite horizon with exact,
decomposed, and greedy solvers.  See the command line entry point
``relaysleep`` for the file-level interface.
"""

from .energymodel import (
    Action,
    BatteryTransition,
    PowerParams,
    battery_step,
    battery_transition,
    bs_slot_energy,
    enumerate_actions,
    max_sleep_ratio,
    rs_active_power,
    rs_slot_energy,
)
from .errors import (
    InfeasibleActionError,
    InfeasibleScenarioError,
    ScenarioSchemaError,
    StateSpaceBudgetError,
)
from .loadmodel import (
    ResourceSplit,
    SlotTraffic,
    blocking_geometric,
    bs_demand_per_user,
    effective_bs_arrival,
    expected_utilization,
    relay_gain,
    relay_gains,
    resource_split,
    rs_blocking,
    rs_demand_per_user,
    station_load,
    system_blocking,
)
from .policy import (
    CostWeights,
    SleepPolicy,
    SlotEvaluation,
    ValueTable,
    battery_grid,
    evaluate_policy,
    exact_dp,
    greedy,
    reduced_dp,
    slot_evaluation,
    solve,
    stage_cost,
)
from .queuesim import StationCheck, TailEstimate, simulate_slot_blocking, simulate_tail_probability
from .scenario import (
    Scenario,
    ScenarioConstants,
    default_scenario,
    diurnal_fraction,
    precompute,
    solar_fraction,
)
from .topology import (
    CellLayout,
    LinkModel,
    LinkParams,
    bandwidth_demand,
    build_layout,
    link_rate,
    pathloss_gain,
    radial_inverse_rate_integral,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BatteryTransition",
    "CellLayout",
    "CostWeights",
    "InfeasibleActionError",
    "InfeasibleScenarioError",
    "LinkModel",
    "LinkParams",
    "PowerParams",
    "ResourceSplit",
    "Scenario",
    "ScenarioConstants",
    "ScenarioSchemaError",
    "SleepPolicy",
    "SlotEvaluation",
    "SlotTraffic",
    "StateSpaceBudgetError",
    "StationCheck",
    "TailEstimate",
    "ValueTable",
    "bandwidth_demand",
    "battery_grid",
    "battery_step",
    "battery_transition",
    "blocking_geometric",
    "bs_demand_per_user",
    "bs_slot_energy",
    "build_layout",
    "default_scenario",
    "diurnal_fraction",
    "effective_bs_arrival",
    "enumerate_actions",
    "evaluate_policy",
    "exact_dp",
    "expected_utilization",
    "greedy",
    "link_rate",
    "max_sleep_ratio",
    "pathloss_gain",
    "precompute",
    "radial_inverse_rate_integral",
    "reduced_dp",
    "relay_gain",
    "relay_gains",
    "resource_split",
    "rs_active_power",
    "rs_blocking",
    "rs_demand_per_user",
    "rs_slot_energy",
    "simulate_slot_blocking",
    "simulate_tail_probability",
    "slot_evaluation",
    "solar_fraction",
    "solve",
    "stage_cost",
    "station_load",
    "system_blocking",
    "__version__",
]
