"""Sleep-ratio planning: stage costs, policy evaluation, and the solvers.

The planner picks a sleep ratio per relay per slot to minimize

    sum_i [ E_bs(i) + psi * w_i * P_block(i) ]

subject to each relay's battery dynamics.  Relay energy is renewable and
free; the cost couples relays only through the BS energy and the blocking
mixture.  Three solvers:

* ``exact_dp``      -- backward induction over the joint battery grid
                       (exponential in relay count; budget-gated),
* ``reduced_dp``    -- per-relay backward induction against a one-relay
                       stand-in for the system cost, then a joint forward pass,
* ``greedy``        -- the same one-relay cost minimized slot by slot with no
                       future term.

Planning runs on a battery grid in multiples of the action unit; transitions
snap to the nearest level and the snap error is logged.  Decisions are
extracted forward from the *true* (continuous) battery level by re-minimizing
against the grid value table, and every solver's reported metrics come from
the exact forward evaluation of its sleep matrix, never from the grid values.
Among cost-equal actions the smallest sleep ratio wins (lexicographically,
for joint actions).
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import energymodel, loadmodel
from .energymodel import ENERGY_TOL_J
from .errors import StateSpaceBudgetError
from .scenario import Scenario, ScenarioConstants, precompute

# Default cap on joint state-action pairs per stage for the exact solver.
DEFAULT_DP_BUDGET = 2_000_000


@dataclass(frozen=True)
class CostWeights:
    """Objective weights: joules charged per unit blocking, spread over slots."""

    blocking_weight: float
    slot_weights: np.ndarray  # (I,), sums to 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "slot_weights", np.asarray(self.slot_weights, dtype=float))
        if self.blocking_weight < 0.0:
            raise ValueError("blocking_weight must be >= 0")
        w = self.slot_weights
        if w.ndim != 1 or np.any(w < 0.0) or not math.isclose(float(w.sum()), 1.0, rel_tol=1e-9):
            raise ValueError("slot_weights must be a 1-D nonnegative vector summing to 1")

    @classmethod
    def from_scenario(cls, scenario: Scenario, blocking_weight: float | None = None) -> "CostWeights":
        return cls(
            blocking_weight=scenario.blocking_weight if blocking_weight is None else float(blocking_weight),
            slot_weights=scenario.slot_weights.copy(),
        )


@dataclass(frozen=True)
class SlotEvaluation:
    """Full-system analytics for one slot under a given sleep vector."""

    bs_arrival_eff: float
    bs_demand_hz: float
    bs_load: float
    bs_util_hz: float
    bs_util_frac: float
    bs_saturated: bool
    bs_threshold: int  # admission threshold in users
    bs_block: float
    rs_blocks: np.ndarray  # (N,)
    system_block: float
    bs_energy_j: float


def slot_evaluation(
    scenario: Scenario, const: ScenarioConstants, slot: int, sleep_ratios: np.ndarray
) -> SlotEvaluation:
    """Evaluate the analytic chain for one slot: loads, blocking, BS energy."""
    phi = np.asarray(sleep_ratios, dtype=float)
    if phi.shape != (scenario.n_rs,):
        raise ValueError(f"dimension mismatch: expected {scenario.n_rs} sleep ratios, got shape {phi.shape}")
    traffic = scenario.traffic(slot)
    split = const.splits[slot]
    length = float(scenario.slot_lengths_s[slot])
    power = scenario.power

    lam_eff = loadmodel.effective_bs_arrival(traffic, phi, const.relay_gains)
    demand = loadmodel.bs_demand_per_user(
        scenario.layout, scenario.links, traffic, phi, const.relay_gains, integrals=const.dl_integrals
    )
    load = loadmodel.station_load(lam_eff, scenario.service_rate)
    util, saturated = loadmodel.expected_utilization(load, demand, split.bs_limit_hz)
    if split.bs_limit_hz > 0.0:
        frac = util / split.bs_limit_hz
        energy = energymodel.bs_slot_energy(util, split.bs_limit_hz, power, length)
        threshold = math.ceil(split.bs_limit_hz / demand)
        bs_block = loadmodel.blocking_geometric(load, split.bs_limit_hz, demand)
    else:
        # No direct arrivals this slot: the split grants the BS no bandwidth,
        # so shifted traffic is all blocked and only static power burns.
        frac = 0.0
        energy = power.bs_static_w * length
        threshold = 0
        bs_block = 1.0 if lam_eff > 0.0 else 0.0

    rs_blocks = phi + (1.0 - phi) * const.rs_tail_block[slot]
    system = loadmodel.system_blocking(traffic, bs_block, rs_blocks)
    return SlotEvaluation(
        bs_arrival_eff=lam_eff,
        bs_demand_hz=demand,
        bs_load=load,
        bs_util_hz=util,
        bs_util_frac=frac,
        bs_saturated=saturated,
        bs_threshold=threshold,
        bs_block=bs_block,
        rs_blocks=rs_blocks,
        system_block=system,
        bs_energy_j=energy,
    )


def stage_cost(
    scenario: Scenario,
    weights: CostWeights,
    slot: int,
    sleep_ratios: np.ndarray,
    const: ScenarioConstants | None = None,
    battery_j: np.ndarray | None = None,
) -> float:
    """One slot's cost: BS grid energy plus weighted system blocking.

    When ``battery_j`` is given, each sleep ratio is checked against the
    least sleep the battery plus harvest can sustain (InfeasibleActionError
    propagates from the battery ledger otherwise).
    """
    if const is None:
        const = precompute(scenario)
    phi = np.asarray(sleep_ratios, dtype=float)
    if battery_j is not None:
        length = float(scenario.slot_lengths_s[slot])
        for n in range(scenario.n_rs):
            energymodel.battery_transition(
                float(battery_j[n]),
                float(scenario.harvest_w[slot, n]),
                float(phi[n]),
                float(const.rs_active_power_w[slot, n]),
                scenario.power.rs_sleep_w,
                length,
                scenario.battery_capacity_j,
            )
    ev = slot_evaluation(scenario, const, slot, phi)
    return ev.bs_energy_j + weights.blocking_weight * float(weights.slot_weights[slot]) * ev.system_block


def _single_rs_cost_vec(
    scenario: Scenario,
    const: ScenarioConstants,
    weights: CostWeights,
    slot: int,
    n: int,
    sleep_ratios: np.ndarray,
) -> np.ndarray:
    """One-relay stand-in for the stage cost, vectorized over sleep ratios.

    The system is collapsed to the BS plus relay ``n`` alone: the BS energy
    and the blocking mixture keep only this relay's contributions (the
    bandwidth split stays the full-system one, which is sleep-independent).
    Exact for a single-relay scenario.
    """
    phi = np.asarray(sleep_ratios, dtype=float)
    lam0 = float(scenario.bs_arrivals[slot])
    lam_n = float(scenario.rs_arrivals[slot, n])
    length = float(scenario.slot_lengths_s[slot])
    split = const.splits[slot]
    w0th = split.bs_limit_hz
    mu = scenario.service_rate
    inner, outer, backhaul_rate = const.dl_integrals
    gain = float(const.relay_gains[n])
    r0 = scenario.rate_requirement_bps
    lay = scenario.layout
    power = scenario.power

    # Bandwidth demand rate (Hz/s) of the one-relay system, by serving mode.
    # Operation order mirrors the full-system chain so a one-relay scenario
    # reproduces its stage costs bit for bit.
    direct = 2.0 * r0 * inner / lay.rs_distance_m**2 * lam0
    backhaul = r0 * (lam_n * (1.0 - phi) / (gain * backhaul_rate))
    fallback = 2.0 * r0 * outer / (lay.rs_count * lay.rs_radius_m**2) * (lam_n * phi)
    lam_eff = lam0 + lam_n * ((1.0 - phi) / gain + phi)

    with np.errstate(divide="ignore", invalid="ignore"):
        demand = (direct + backhaul + fallback) / np.where(lam_eff > 0.0, lam_eff, np.inf)
        load = lam_eff / (lam_eff + mu)
        if w0th > 0.0:
            mean_draw = demand * load / (1.0 - load)
            util = np.minimum(mean_draw, w0th)
            frac = np.minimum(util / w0th, 1.0)
            energy = (power.bs_static_w + power.bs_load_slope * power.bs_tx_w * frac) * length
            threshold = np.ceil(w0th / demand)
            bs_block = np.where(lam_eff > 0.0, load**threshold, 0.0)
        else:
            energy = np.full_like(phi, power.bs_static_w * length)
            bs_block = np.where(lam_eff > 0.0, 1.0, 0.0)
    rs_block = phi + (1.0 - phi) * const.rs_tail_block[slot, n]
    lam_total = lam0 + lam_n
    if lam_total > 0.0:
        system = (lam0 * bs_block + lam_n * rs_block) / lam_total
    else:
        system = np.zeros_like(phi)
    return energy + weights.blocking_weight * float(weights.slot_weights[slot]) * system


@dataclass
class SleepPolicy:
    """A solved (or supplied) sleep schedule with its exact forward evaluation."""

    algorithm: str
    sleep_ratios: np.ndarray  # (I, N)
    battery_j: np.ndarray  # (I+1, N): start-of-slot levels, then final
    slot_lengths_s: np.ndarray  # (I,)
    bs_energy_j: np.ndarray  # (I,)
    rs_energy_j: np.ndarray  # (I, N)
    stage_costs: np.ndarray  # (I,)
    bs_arrival_eff: np.ndarray  # (I,)
    bs_util_frac: np.ndarray  # (I,)
    bs_saturated: np.ndarray  # (I,) bool
    block_bs: np.ndarray  # (I,)
    block_rs: np.ndarray  # (I, N)
    block_system: np.ndarray  # (I,)
    clamped: np.ndarray  # (I, N) bool: requested sleep raised to the feasible floor
    deficit: np.ndarray  # (I, N) bool: battery could not sustain even full sleep
    spilled_j: np.ndarray  # (I, N)
    wall_time_s: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def total_cost(self) -> float:
        return float(self.stage_costs.sum())

    @property
    def total_grid_energy_j(self) -> float:
        return float(self.bs_energy_j.sum())

    @property
    def total_rs_energy_j(self) -> float:
        return float(self.rs_energy_j.sum())

    @property
    def mean_blocking(self) -> float:
        return float(self.block_system.mean())

    @property
    def mean_grid_power_w(self) -> float:
        return self.total_grid_energy_j / float(self.slot_lengths_s.sum())


def evaluate_policy(
    scenario: Scenario,
    weights: CostWeights,
    sleep_ratios: np.ndarray,
    algorithm: str = "fixed-policy",
    const: ScenarioConstants | None = None,
    diagnostics: dict | None = None,
) -> SleepPolicy:
    """Exact forward simulation of a sleep matrix on the true battery dynamics.

    Sleep ratios below what the battery plus harvest can sustain are raised
    to the feasible floor (flagged per slot and relay); a battery that
    cannot even cover sleep power runs dry and flags a deficit.
    """
    start = time.perf_counter()
    if const is None:
        const = precompute(scenario)
    phi_req = np.asarray(sleep_ratios, dtype=float)
    n_i, n_r = scenario.n_slots, scenario.n_rs
    if phi_req.shape != (n_i, n_r):
        raise ValueError(f"dimension mismatch: sleep matrix must be ({n_i}, {n_r}), got {phi_req.shape}")
    if np.any(phi_req < -1e-12) or np.any(phi_req > 1.0 + 1e-12):
        raise ValueError("sleep ratios must lie in [0, 1]")
    phi_req = np.clip(phi_req, 0.0, 1.0)

    power = scenario.power
    cap = scenario.battery_capacity_j
    battery = np.zeros((n_i + 1, n_r))
    battery[0] = scenario.battery_initial_j
    phi_used = np.zeros((n_i, n_r))
    rs_energy = np.zeros((n_i, n_r))
    spilled = np.zeros((n_i, n_r))
    clamped = np.zeros((n_i, n_r), dtype=bool)
    deficit = np.zeros((n_i, n_r), dtype=bool)
    bs_energy = np.zeros(n_i)
    stage = np.zeros(n_i)
    lam_eff = np.zeros(n_i)
    util_frac = np.zeros(n_i)
    saturated = np.zeros(n_i, dtype=bool)
    p_bs = np.zeros(n_i)
    p_rs = np.zeros((n_i, n_r))
    p_sys = np.zeros(n_i)

    for i in range(n_i):
        length = float(scenario.slot_lengths_s[i])
        for n in range(n_r):
            p_active = float(const.rs_active_power_w[i, n])
            harvest = float(scenario.harvest_w[i, n])
            avail = battery[i, n] + harvest * length
            if avail < power.rs_sleep_w * length - ENERGY_TOL_J:
                phi_used[i, n] = 1.0  # forced: not even sleep power is covered
            else:
                floor = energymodel.max_sleep_ratio(battery[i, n], harvest, p_active, power.rs_sleep_w, length)
                phi_used[i, n] = max(phi_req[i, n], floor)
            if phi_used[i, n] > phi_req[i, n] + 1e-12:
                clamped[i, n] = True

        ev = slot_evaluation(scenario, const, i, phi_used[i])
        bs_energy[i] = ev.bs_energy_j
        lam_eff[i] = ev.bs_arrival_eff
        util_frac[i] = ev.bs_util_frac
        saturated[i] = ev.bs_saturated
        p_bs[i] = ev.bs_block
        p_rs[i] = ev.rs_blocks
        p_sys[i] = ev.system_block
        stage[i] = ev.bs_energy_j + weights.blocking_weight * float(weights.slot_weights[i]) * ev.system_block

        for n in range(n_r):
            tr = energymodel.battery_transition(
                battery[i, n],
                float(scenario.harvest_w[i, n]),
                float(phi_used[i, n]),
                float(const.rs_active_power_w[i, n]),
                power.rs_sleep_w,
                length,
                cap,
                allow_deficit=True,
            )
            battery[i + 1, n] = tr.level_j
            rs_energy[i, n] = tr.consumed_j
            spilled[i, n] = tr.spilled_j
            if tr.deficit_j > ENERGY_TOL_J:
                deficit[i, n] = True

    return SleepPolicy(
        algorithm=algorithm,
        sleep_ratios=phi_used,
        battery_j=battery,
        slot_lengths_s=scenario.slot_lengths_s.copy(),
        bs_energy_j=bs_energy,
        rs_energy_j=rs_energy,
        stage_costs=stage,
        bs_arrival_eff=lam_eff,
        bs_util_frac=util_frac,
        bs_saturated=saturated,
        block_bs=p_bs,
        block_rs=p_rs,
        block_system=p_sys,
        clamped=clamped,
        deficit=deficit,
        spilled_j=spilled,
        wall_time_s=time.perf_counter() - start,
        diagnostics=diagnostics or {},
    )


# ---------------------------------------------------------------------------
# Battery grid plumbing shared by the planners.


def battery_grid(scenario: Scenario) -> np.ndarray:
    """Battery levels in multiples of the action unit, 0 up to the capacity."""
    unit = scenario.action_unit_j
    count = int(math.floor(scenario.battery_capacity_j / unit + 1e-9)) + 1
    return np.arange(count) * unit


def _snap_indices(levels_j: np.ndarray | float, unit: float, n_levels: int) -> np.ndarray:
    """Nearest grid index for each level (half-up, deterministic)."""
    idx = np.floor(np.asarray(levels_j, dtype=float) / unit + 0.5).astype(int)
    return np.clip(idx, 0, n_levels - 1)


@dataclass
class ValueTable:
    """Per-relay grid value function: values[i][k] is the best cost-to-go."""

    rs_index: int
    levels_j: np.ndarray  # (K,)
    values: np.ndarray  # (I+1, K); row I is the terminal zero
    snap_count: int = 0
    snap_max_j: float = 0.0


def _stage_action_grid(
    scenario: Scenario, const: ScenarioConstants, slot: int, n: int, top_j: float
) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Full draw grid for (slot, relay) up to the grid top: (draws, sleeps, lower, hi)."""
    power = scenario.power
    length = float(scenario.slot_lengths_s[slot])
    harvest = float(scenario.harvest_w[slot, n])
    p_active = float(const.rs_active_power_w[slot, n])
    unit = scenario.action_unit_j

    lower = (power.rs_sleep_w - harvest) * length
    hi = (p_active - harvest) * length
    grid_hi = min(hi, top_j)
    draws: list[float] = []
    if lower <= grid_hi + ENERGY_TOL_J:
        k = 0
        while True:
            d = lower + k * unit
            if d > grid_hi + ENERGY_TOL_J:
                break
            draws.append(min(d, grid_hi))
            k += 1
        if not draws or grid_hi - draws[-1] > ENERGY_TOL_J:
            draws.append(grid_hi)
    draws_arr = np.asarray(draws)
    sleeps = np.array(
        [energymodel.max_sleep_ratio(d, harvest, p_active, power.rs_sleep_w, length) for d in draws]
    )
    return draws_arr, sleeps, lower, hi


def _solve_rs_table(
    scenario: Scenario, const: ScenarioConstants, weights: CostWeights, n: int
) -> ValueTable:
    """Backward induction for relay ``n`` against the one-relay stage cost."""
    levels = battery_grid(scenario)
    top = float(levels[-1])
    unit = scenario.action_unit_j
    n_levels = levels.shape[0]
    n_i = scenario.n_slots
    power = scenario.power
    values = np.zeros((n_i + 1, n_levels))
    snap_count = 0
    snap_max = 0.0

    for i in range(n_i - 1, -1, -1):
        length = float(scenario.slot_lengths_s[i])
        harvest = float(scenario.harvest_w[i, n])
        p_active = float(const.rs_active_power_w[i, n])
        draws, sleeps, lower, hi = _stage_action_grid(scenario, const, i, n, top)
        v_next = values[i + 1]
        best = np.full(n_levels, np.inf)

        if draws.size:
            costs = _single_rs_cost_vec(scenario, const, weights, i, n, sleeps)
            nxt = np.clip(levels[:, None] - draws[None, :], 0.0, top)
            idx = _snap_indices(nxt, unit, n_levels)
            err = np.abs(nxt - levels[idx])
            feasible = draws[None, :] <= levels[:, None] + ENERGY_TOL_J
            snapped = feasible & (err > 1e-9)
            snap_count += int(snapped.sum())
            if snapped.any():
                snap_max = max(snap_max, float(err[snapped].max()))
            vals = costs[None, :] + v_next[idx]
            vals = np.where(feasible, vals, np.inf)
            best = vals.min(axis=1)

        # Full-drain endpoint for levels below the zero-sleep draw.
        drainable = (levels >= lower - ENERGY_TOL_J) & (levels < hi - ENERGY_TOL_J)
        if drainable.any():
            phi_drain = np.array(
                [
                    energymodel.max_sleep_ratio(b, harvest, p_active, power.rs_sleep_w, length)
                    for b in levels[drainable]
                ]
            )
            cost_drain = _single_rs_cost_vec(scenario, const, weights, i, n, phi_drain)
            best[drainable] = np.minimum(best[drainable], cost_drain + v_next[0])

        # Forced deficit sleep where the battery cannot cover sleep power.
        forced = levels < lower - ENERGY_TOL_J
        if forced.any():
            cost_forced = float(_single_rs_cost_vec(scenario, const, weights, i, n, np.array([1.0]))[0])
            best[forced] = cost_forced + v_next[0]

        values[i] = best

    return ValueTable(rs_index=n, levels_j=levels, values=values, snap_count=snap_count, snap_max_j=snap_max)


def _forward_per_rs(
    scenario: Scenario,
    const: ScenarioConstants,
    weights: CostWeights,
    tables: list[ValueTable] | None,
) -> np.ndarray:
    """Forward pass from the true batteries; re-minimizes each slot per relay.

    With value tables this extracts the decomposed DP policy; without them it
    is the greedy rule (no future term).  Ties go to the smallest sleep ratio.
    """
    n_i, n_r = scenario.n_slots, scenario.n_rs
    power = scenario.power
    cap = scenario.battery_capacity_j
    unit = scenario.action_unit_j
    phi = np.zeros((n_i, n_r))
    battery = scenario.battery_initial_j.astype(float).copy()
    for i in range(n_i):
        length = float(scenario.slot_lengths_s[i])
        for n in range(n_r):
            harvest = float(scenario.harvest_w[i, n])
            p_active = float(const.rs_active_power_w[i, n])
            actions = energymodel.enumerate_actions(
                battery[n], harvest, p_active, power.rs_sleep_w, length, cap, unit
            )
            sleeps = np.array([a.sleep_ratio for a in actions])
            draws = np.array([a.draw_j for a in actions])
            costs = _single_rs_cost_vec(scenario, const, weights, i, n, sleeps)
            if tables is not None:
                table = tables[n]
                top = float(table.levels_j[-1])
                nxt = np.clip(battery[n] - draws, 0.0, top)
                idx = _snap_indices(nxt, unit, table.levels_j.shape[0])
                costs = costs + table.values[i + 1][idx]
            order = np.argsort(sleeps, kind="stable")  # ties resolve to least sleep
            best = order[int(np.argmin(costs[order]))]
            phi[i, n] = sleeps[best]
            battery[n] = energymodel.battery_transition(
                battery[n], harvest, float(sleeps[best]), p_active, power.rs_sleep_w, length, cap,
                allow_deficit=actions[best].forced,
            ).level_j
    return phi


def reduced_dp(scenario: Scenario, weights: CostWeights | None = None) -> SleepPolicy:
    """Per-relay backward induction with a joint forward evaluation.

    Each relay plans against the one-relay stand-in cost on its own battery
    grid; the combined schedule is then evaluated exactly on the full system.
    """
    if weights is None:
        weights = CostWeights.from_scenario(scenario)
    const = precompute(scenario)
    tables = [_solve_rs_table(scenario, const, weights, n) for n in range(scenario.n_rs)]
    phi = _forward_per_rs(scenario, const, weights, tables)
    diag = {
        "snap_count": int(sum(t.snap_count for t in tables)),
        "snap_max_j": float(max((t.snap_max_j for t in tables), default=0.0)),
        "grid_levels": int(tables[0].levels_j.shape[0]) if tables else 0,
        "value_tables": tables,
    }
    return evaluate_policy(scenario, weights, phi, algorithm="reduced-dp", const=const, diagnostics=diag)


def greedy(scenario: Scenario, weights: CostWeights | None = None) -> SleepPolicy:
    """Slot-by-slot minimization of the one-relay cost; no lookahead."""
    if weights is None:
        weights = CostWeights.from_scenario(scenario)
    const = precompute(scenario)
    phi = _forward_per_rs(scenario, const, weights, tables=None)
    return evaluate_policy(scenario, weights, phi, algorithm="greedy", const=const)


def exact_dp(
    scenario: Scenario,
    weights: CostWeights | None = None,
    budget: int = DEFAULT_DP_BUDGET,
) -> SleepPolicy:
    """Backward induction over the joint battery grid of all relays.

    Exact up to the grid discretization, exponential in the relay count:
    the per-stage product of states and joint actions must fit ``budget``.
    """
    if weights is None:
        weights = CostWeights.from_scenario(scenario)
    const = precompute(scenario)
    n_i, n_r = scenario.n_slots, scenario.n_rs
    power = scenario.power
    cap = scenario.battery_capacity_j
    unit = scenario.action_unit_j
    levels = battery_grid(scenario)
    top = float(levels[-1])
    n_levels = levels.shape[0]

    # Budget check before any allocation: states x joint actions per stage.
    n_states = n_levels**n_r
    worst_actions = 1
    for n in range(n_r):
        per_slot_max = 1
        for i in range(n_i):
            draws, _, _, _ = _stage_action_grid(scenario, const, i, n, top)
            per_slot_max = max(per_slot_max, draws.shape[0] + 2)
        worst_actions *= per_slot_max
    if n_states * worst_actions > budget:
        raise StateSpaceBudgetError(
            f"joint grid needs {n_states} states x {worst_actions} joint actions per stage, "
            f"over the budget of {budget}; use reduced-dp or a coarser action unit"
        )

    # Per (slot, relay, level): candidate (draw, sleep, next_index) triples.
    def candidates(i: int, n: int, level: float) -> list[tuple[float, float, int]]:
        acts = energymodel.enumerate_actions(
            level,
            float(scenario.harvest_w[i, n]),
            float(const.rs_active_power_w[i, n]),
            power.rs_sleep_w,
            float(scenario.slot_lengths_s[i]),
            cap,
            unit,
        )
        out = []
        for a in acts:
            nxt = min(max(level - a.draw_j, 0.0), top)
            out.append((a.draw_j, a.sleep_ratio, int(_snap_indices(nxt, unit, n_levels)[()])))
        out.sort(key=lambda t: t[1])  # ascending sleep for lexicographic ties
        return out

    cost_cache: dict[tuple[float, ...], float] = {}

    def joint_cost(i: int, phis: tuple[float, ...]) -> float:
        hit = cost_cache.get(phis)
        if hit is None:
            hit = stage_cost(scenario, weights, i, np.array(phis), const=const)
            cost_cache[phis] = hit
        return hit

    # Backward induction, keeping every stage's table for the forward pass.
    all_values: list[dict[tuple[int, ...], float]] = [
        {s: 0.0 for s in itertools.product(range(n_levels), repeat=n_r)} for _ in range(n_i + 1)
    ]
    for i in range(n_i - 1, -1, -1):
        cost_cache.clear()
        per_level = [[candidates(i, n, float(levels[k])) for k in range(n_levels)] for n in range(n_r)]
        for state in itertools.product(range(n_levels), repeat=n_r):
            options = [per_level[n][state[n]] for n in range(n_r)]
            best = np.inf
            for combo in itertools.product(*options):
                phis = tuple(c[1] for c in combo)
                nxt = tuple(c[2] for c in combo)
                total = joint_cost(i, phis) + all_values[i + 1][nxt]
                if total < best:
                    best = total
            all_values[i][state] = best

    # Forward extraction from the true joint battery state.
    phi = np.zeros((n_i, n_r))
    battery = scenario.battery_initial_j.astype(float).copy()
    for i in range(n_i):
        cost_cache.clear()
        length = float(scenario.slot_lengths_s[i])
        options = []
        for n in range(n_r):
            acts = energymodel.enumerate_actions(
                battery[n],
                float(scenario.harvest_w[i, n]),
                float(const.rs_active_power_w[i, n]),
                power.rs_sleep_w,
                length,
                cap,
                unit,
            )
            opts = []
            for a in acts:
                nxt = min(max(battery[n] - a.draw_j, 0.0), top)
                opts.append((a.draw_j, a.sleep_ratio, int(_snap_indices(nxt, unit, n_levels)[()]), a.forced))
            opts.sort(key=lambda t: t[1])
            options.append(opts)
        best_val, best_combo = np.inf, None
        for combo in itertools.product(*options):
            phis = tuple(c[1] for c in combo)
            nxt = tuple(c[2] for c in combo)
            total = joint_cost(i, phis) + all_values[i + 1][nxt]
            if total < best_val:
                best_val, best_combo = total, combo
        assert best_combo is not None
        for n in range(n_r):
            phi[i, n] = best_combo[n][1]
            battery[n] = energymodel.battery_transition(
                battery[n],
                float(scenario.harvest_w[i, n]),
                float(best_combo[n][1]),
                float(const.rs_active_power_w[i, n]),
                power.rs_sleep_w,
                length,
                cap,
                allow_deficit=best_combo[n][3],
            ).level_j

    diag = {"grid_levels": n_levels, "joint_states": n_states, "budget": budget, "value_stage0": all_values[0]}
    return evaluate_policy(scenario, weights, phi, algorithm="exact-dp", const=const, diagnostics=diag)


def solve(scenario: Scenario, algorithm: str, weights: CostWeights | None = None, budget: int = DEFAULT_DP_BUDGET) -> SleepPolicy:
    """Dispatch to a solver by CLI name."""
    if algorithm == "exact-dp":
        return exact_dp(scenario, weights, budget=budget)
    if algorithm == "reduced-dp":
        return reduced_dp(scenario, weights)
    if algorithm == "greedy":
        return greedy(scenario, weights)
    raise ValueError(f"unknown algorithm {algorithm!r}")
