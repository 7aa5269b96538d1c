"""Scenario container: geometry, profiles, batteries, and cached analytics.

A scenario fixes everything the planner needs for a horizon of ``I`` slots:
the cell layout and link model, the power model, per-slot arrival and
harvest profiles, the bandwidth pool, battery sizes, and the cost weights.
``precompute`` caches every quantity that does not depend on the sleep
decision (demand kernels, bandwidth splits, relay loads and active powers)
so the solvers only re-evaluate the sleep-dependent parts per action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import energymodel, loadmodel, topology
from .energymodel import PowerParams
from .errors import InfeasibleScenarioError
from .loadmodel import ResourceSplit, SlotTraffic
from .topology import CellLayout, LinkModel, LinkParams


@dataclass
class Scenario:
    """One planning problem instance."""

    layout: CellLayout
    links: LinkModel
    power: PowerParams
    slot_lengths_s: np.ndarray  # (I,)
    bs_arrivals: np.ndarray  # (I,) arrivals/s in the BS-only area
    rs_arrivals: np.ndarray  # (I, N) arrivals/s per relay disc
    harvest_w: np.ndarray  # (I, N) harvest power per relay
    total_bandwidth_hz: float
    service_rate: float  # per second
    rate_requirement_bps: float
    battery_capacity_j: float
    battery_initial_j: np.ndarray  # (N,)
    action_unit_j: float  # battery draw granularity
    blocking_weight: float  # cost (J) charged per unit of weighted blocking
    slot_weights: np.ndarray  # (I,), sums to 1

    def __post_init__(self) -> None:
        self.slot_lengths_s = np.asarray(self.slot_lengths_s, dtype=float)
        self.bs_arrivals = np.asarray(self.bs_arrivals, dtype=float)
        self.rs_arrivals = np.asarray(self.rs_arrivals, dtype=float)
        self.harvest_w = np.asarray(self.harvest_w, dtype=float)
        self.battery_initial_j = np.asarray(self.battery_initial_j, dtype=float)
        self.slot_weights = np.asarray(self.slot_weights, dtype=float)
        self.validate()

    @property
    def n_slots(self) -> int:
        return int(self.slot_lengths_s.shape[0])

    @property
    def n_rs(self) -> int:
        return self.layout.rs_count

    def validate(self) -> None:
        i, n = self.n_slots, self.n_rs
        if i < 1:
            raise InfeasibleScenarioError("need at least one slot")
        for name, arr, shape in (
            ("bs_arrivals", self.bs_arrivals, (i,)),
            ("rs_arrivals", self.rs_arrivals, (i, n)),
            ("harvest_w", self.harvest_w, (i, n)),
            ("battery_initial_j", self.battery_initial_j, (n,)),
            ("slot_weights", self.slot_weights, (i,)),
        ):
            if arr.shape != shape:
                raise InfeasibleScenarioError(f"{name} has shape {arr.shape}, expected {shape}")
        if np.any(self.slot_lengths_s <= 0.0):
            raise InfeasibleScenarioError("slot lengths must be > 0")
        if np.any(self.bs_arrivals < 0.0) or np.any(self.rs_arrivals < 0.0):
            raise InfeasibleScenarioError("arrival rates must be >= 0")
        if np.any(self.bs_arrivals + self.rs_arrivals.sum(axis=1) <= 0.0):
            raise InfeasibleScenarioError("every slot needs some traffic to split bandwidth")
        if np.any(self.harvest_w < 0.0):
            raise InfeasibleScenarioError("harvest power must be >= 0")
        if self.total_bandwidth_hz <= 0.0:
            raise InfeasibleScenarioError("total_bandwidth_hz must be > 0")
        if self.service_rate <= 0.0:
            raise InfeasibleScenarioError("service_rate must be > 0")
        if self.rate_requirement_bps <= 0.0:
            raise InfeasibleScenarioError("rate_requirement_bps must be > 0")
        if self.battery_capacity_j <= 0.0:
            raise InfeasibleScenarioError("battery_capacity_j must be > 0")
        if np.any(self.battery_initial_j < 0.0) or np.any(self.battery_initial_j > self.battery_capacity_j * (1 + 1e-12)):
            raise InfeasibleScenarioError("initial battery levels must lie in [0, capacity]")
        if self.action_unit_j <= 0.0:
            raise InfeasibleScenarioError("action_unit_j must be > 0")
        if self.blocking_weight < 0.0:
            raise InfeasibleScenarioError("blocking_weight must be >= 0")
        if np.any(self.slot_weights < 0.0) or not math.isclose(float(self.slot_weights.sum()), 1.0, rel_tol=1e-9):
            raise InfeasibleScenarioError("slot_weights must be >= 0 and sum to 1")

    def traffic(self, slot: int) -> SlotTraffic:
        return SlotTraffic(
            bs_rate=float(self.bs_arrivals[slot]),
            rs_rates=tuple(float(x) for x in self.rs_arrivals[slot]),
            service_rate=self.service_rate,
            rate_requirement_bps=self.rate_requirement_bps,
        )

    def with_traffic_scale(self, scale: float) -> "Scenario":
        """Copy with every arrival profile multiplied by ``scale``."""
        if scale <= 0.0:
            raise ValueError("traffic scale must be > 0")
        return replace(self, bs_arrivals=self.bs_arrivals * scale, rs_arrivals=self.rs_arrivals * scale)

    def with_blocking_weight(self, weight: float) -> "Scenario":
        return replace(self, blocking_weight=float(weight))


@dataclass(frozen=True)
class ScenarioConstants:
    """Everything reusable across sleep decisions, cached once per scenario."""

    relay_gains: np.ndarray  # (N,)
    rs_demand_hz: float  # per-user demand inside a relay disc
    dl_integrals: tuple[float, float, float]  # (inner, outer, backhaul_rate)
    splits: tuple[ResourceSplit, ...]  # per slot
    rs_loads: np.ndarray  # (I, N)
    rs_utils_hz: np.ndarray  # (I, N)
    rs_saturated: np.ndarray  # (I, N) bool
    rs_active_power_w: np.ndarray  # (I, N)
    rs_tail_block: np.ndarray  # (I, N) admission tail with the relay awake


def precompute(scenario: Scenario) -> ScenarioConstants:
    """Cache the sleep-independent analytics for every slot."""
    lay, links = scenario.layout, scenario.links
    gains = loadmodel.relay_gains(lay, links)
    rs_demand = loadmodel.rs_demand_per_user(lay, links, scenario.rate_requirement_bps)
    integrals = loadmodel._dl_integrals(lay, links)

    n_i, n_r = scenario.n_slots, scenario.n_rs
    splits = []
    rs_loads = np.zeros((n_i, n_r))
    rs_utils = np.zeros((n_i, n_r))
    rs_sat = np.zeros((n_i, n_r), dtype=bool)
    rs_power = np.zeros((n_i, n_r))
    rs_tail = np.zeros((n_i, n_r))
    for i in range(n_i):
        traffic = scenario.traffic(i)
        split = loadmodel.resource_split(traffic, scenario.total_bandwidth_hz)
        splits.append(split)
        for n in range(n_r):
            load = loadmodel.station_load(traffic.rs_rates[n], scenario.service_rate)
            limit = split.rs_limits_hz[n]
            rs_loads[i, n] = load
            if limit > 0.0:
                util, sat = loadmodel.expected_utilization(load, rs_demand, limit)
                rs_utils[i, n] = util
                rs_sat[i, n] = sat
                rs_power[i, n] = energymodel.rs_active_power(util, limit, scenario.power)
                rs_tail[i, n] = loadmodel.blocking_geometric(load, limit, rs_demand)
            else:
                # No arrivals in this disc this slot: no bandwidth share either.
                rs_utils[i, n] = 0.0
                rs_power[i, n] = scenario.power.rs_static_w
                rs_tail[i, n] = 0.0
    return ScenarioConstants(
        relay_gains=gains,
        rs_demand_hz=rs_demand,
        dl_integrals=integrals,
        splits=tuple(splits),
        rs_loads=rs_loads,
        rs_utils_hz=rs_utils,
        rs_saturated=rs_sat,
        rs_active_power_w=rs_power,
        rs_tail_block=rs_tail,
    )


def diurnal_fraction(hour: float, trough_hour: float = 4.0, peak_hour: float = 20.0, trough_frac: float = 0.1) -> float:
    """Smooth day-shape in [trough_frac, 1]: trough at 04:00, peak at 20:00.

    Half-cosine rise from trough to peak and fall back, each over its own
    span, so the curve is smooth at both extremes.
    """
    h = (hour - trough_hour) % 24.0
    rise = (peak_hour - trough_hour) % 24.0
    x = h / rise if h <= rise else 1.0 - (h - rise) / (24.0 - rise)
    return trough_frac + (1.0 - trough_frac) * 0.5 * (1.0 - math.cos(math.pi * x))


def solar_fraction(hour: float) -> float:
    """Harvest shape: max(0, sin(pi (t - 6) / 12)); daylight 06:00-18:00."""
    return max(0.0, math.sin(math.pi * (hour - 6.0) / 12.0))


# Default knob values.  Link/power numbers follow common LTE macro planning
# figures and an EARTH-style affine power model; profile scales are chosen so
# the evening peak presses against the BS bandwidth share while the relays'
# daily harvest covers only part of their always-on demand, which is the
# regime where sleep scheduling matters.  The planning day starts at noon so
# the whole sunset-to-sunrise stretch is one contiguous scarcity window.
DEFAULT_BS_PEAK_RATE = 480.0  # arrivals/s, BS-only area
DEFAULT_RS_PEAK_RATE = 12.0  # arrivals/s per relay disc
DEFAULT_RS_TX_W = 1.0  # relay amplifier power; see default_scenario()
DEFAULT_HARVEST_PEAK_W = 150.0
DEFAULT_BATTERY_CAPACITY_J = 1.2e6
DEFAULT_ACTION_UNIT_J = 4.0e3
DEFAULT_BLOCKING_WEIGHT = 8.0e7
DEFAULT_START_HOUR = 12.0


def default_scenario() -> Scenario:
    """The bundled 24-hour scenario: six edge relays, solar harvest, evening peak."""
    layout = topology.build_layout(bs_radius_m=800.0, rs_radius_m=100.0, rs_count=6)
    links = LinkModel(
        dl=LinkParams(pathloss_intercept_db=91.3, pathloss_slope_db=3.4, tx_power_w=40.0),
        al=LinkParams(pathloss_intercept_db=76.8, pathloss_slope_db=7.4, tx_power_w=DEFAULT_RS_TX_W),
        bl=LinkParams(pathloss_intercept_db=88.3, pathloss_slope_db=3.1, tx_power_w=40.0),
        noise_density_dbm_hz=-64.5,
        spread_bandwidth_hz=1.0,
    )
    # The relay transmit power is a watt-class micro amplifier; the access
    # link and the relay power model share the value, so hot discs both fill
    # their access bandwidth and cap the sleep-vs-awake battery relief.
    power = PowerParams(
        bs_static_w=750.0,
        bs_load_slope=19.3,
        bs_tx_w=40.0,
        rs_static_w=40.0,
        rs_load_slope=9.6,
        rs_tx_w=DEFAULT_RS_TX_W,
        rs_sleep_w=10.0,
    )
    n_slots, n_rs = 24, layout.rs_count
    hours = (DEFAULT_START_HOUR + np.arange(n_slots) + 0.5) % 24.0  # slot midpoints
    shape = np.array([diurnal_fraction(h) for h in hours])
    sun = np.array([solar_fraction(h) for h in hours])
    return Scenario(
        layout=layout,
        links=links,
        power=power,
        slot_lengths_s=np.full(n_slots, 3600.0),
        bs_arrivals=DEFAULT_BS_PEAK_RATE * shape,
        rs_arrivals=np.tile((DEFAULT_RS_PEAK_RATE * shape)[:, None], (1, n_rs)),
        harvest_w=np.tile((DEFAULT_HARVEST_PEAK_W * sun)[:, None], (1, n_rs)),
        total_bandwidth_hz=30.0e6,
        service_rate=1.0,
        rate_requirement_bps=200.0e3,
        battery_capacity_j=DEFAULT_BATTERY_CAPACITY_J,
        battery_initial_j=np.full(n_rs, DEFAULT_BATTERY_CAPACITY_J / 2.0),
        action_unit_j=DEFAULT_ACTION_UNIT_J,
        blocking_weight=DEFAULT_BLOCKING_WEIGHT,
        slot_weights=np.full(n_slots, 1.0 / n_slots),
    )
