"""Station power draw, relay batteries, and the per-slot sleep action grid.

EARTH-style affine power model: a station burns a static floor plus a term
proportional to the fraction of its bandwidth share in use.  The BS is on the
grid; each relay runs from a battery charged by its harvester.  A relay's
action in a slot is the energy ``draw`` it takes from the battery; together
with the harvest this fixes the sleep ratio ``phi`` through the energy
balance

    draw + H*L = (1 - phi) * P_active * L + phi * P_sleep * L

so larger draws buy more awake time.  Negative draws store surplus harvest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleActionError

# Feasibility slack (J) for float round-off in energy balances.
ENERGY_TOL_J = 1e-6


@dataclass(frozen=True)
class PowerParams:
    """Static/dynamic power coefficients for both station classes (watts)."""

    bs_static_w: float
    bs_load_slope: float  # dimensionless multiplier on bs_tx_w
    bs_tx_w: float
    rs_static_w: float
    rs_load_slope: float
    rs_tx_w: float
    rs_sleep_w: float

    def __post_init__(self) -> None:
        for name in ("bs_static_w", "bs_load_slope", "bs_tx_w", "rs_static_w", "rs_load_slope", "rs_tx_w"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if self.rs_sleep_w <= 0.0:
            raise ValueError("rs_sleep_w must be > 0")
        if self.rs_static_w + self.rs_load_slope * self.rs_tx_w <= self.rs_sleep_w:
            raise ValueError("relay active power must exceed sleep power")


def bs_slot_energy(util_hz: float, limit_hz: float, params: PowerParams, length_s: float) -> float:
    """Grid energy (J) the BS burns in one slot.

    (P_static + slope * P_tx * W/Wth) * L; the load term scales with the
    fraction of the BS bandwidth share in use.
    """
    if length_s < 0.0:
        raise ValueError("length_s must be >= 0")
    if limit_hz <= 0.0:
        raise ValueError("limit_hz must be > 0")
    if util_hz < 0.0 or util_hz > limit_hz * (1.0 + 1e-12):
        raise ValueError("util_hz must lie in [0, limit_hz]")
    frac = min(util_hz / limit_hz, 1.0)
    return (params.bs_static_w + params.bs_load_slope * params.bs_tx_w * frac) * length_s


def rs_active_power(util_hz: float, limit_hz: float, params: PowerParams) -> float:
    """Relay power draw (W) while awake at the given utilization."""
    if limit_hz <= 0.0:
        raise ValueError("limit_hz must be > 0")
    frac = min(max(util_hz / limit_hz, 0.0), 1.0)
    return params.rs_static_w + params.rs_load_slope * params.rs_tx_w * frac


def rs_slot_energy(active_power_w: float, sleep_power_w: float, sleep_ratio: float, length_s: float) -> float:
    """Relay energy (J) over one slot: awake fraction at P_active, rest at P_sleep.

    Affine and decreasing in the sleep ratio whenever P_active > P_sleep.
    """
    if not 0.0 <= sleep_ratio <= 1.0:
        raise ValueError("sleep_ratio must lie in [0, 1]")
    if length_s < 0.0:
        raise ValueError("length_s must be >= 0")
    return (active_power_w * (1.0 - sleep_ratio) + sleep_power_w * sleep_ratio) * length_s


def max_sleep_ratio(
    draw_j: float,
    harvest_w: float,
    active_power_w: float,
    sleep_power_w: float,
    length_s: float,
) -> float:
    """Sleep ratio that exactly spends ``draw + H*L`` over the slot.

    phi = clamp( (P_active - (draw/L + H)) / (P_active - P_sleep), 0, 1 ).
    The lower clamp fires when the budget covers full activity (surplus
    charges the battery); the upper clamp is full sleep.
    """
    if length_s <= 0.0:
        raise ValueError("length_s must be > 0")
    if active_power_w <= sleep_power_w:
        raise ValueError("degenerate powers: active power must exceed sleep power")
    budget_w = draw_j / length_s + harvest_w
    phi = (active_power_w - budget_w) / (active_power_w - sleep_power_w)
    return min(max(phi, 0.0), 1.0)


@dataclass(frozen=True)
class BatteryTransition:
    """Energy ledger for one relay over one slot (all joules)."""

    level_j: float  # stored energy after the slot
    harvested_j: float
    consumed_j: float  # energy actually burned (reduced when the battery runs dry)
    drawn_j: float  # net battery discharge, if any
    stored_j: float  # net battery charge, if any
    spilled_j: float  # harvest lost to a full battery
    deficit_j: float  # shortfall vs the nominal consumption (forced-sleep slots only)


def battery_transition(
    level_j: float,
    harvest_w: float,
    sleep_ratio: float,
    active_power_w: float,
    sleep_power_w: float,
    length_s: float,
    capacity_j: float,
    allow_deficit: bool = False,
) -> BatteryTransition:
    """Apply one slot's net energy flow to a relay battery.

    Conservation at 1e-9 J: harvested + drawn == consumed + stored + spilled.
    Raises InfeasibleActionError when the slot would need more energy than
    the battery plus harvest can provide, unless ``allow_deficit`` (used for
    the forced full-sleep action on a dead battery, which floors at zero).
    """
    if capacity_j <= 0.0:
        raise ValueError("capacity_j must be > 0")
    if not 0.0 <= level_j <= capacity_j * (1.0 + 1e-12):
        raise ValueError(f"battery level {level_j} outside [0, {capacity_j}]")
    harvested = harvest_w * length_s
    nominal = rs_slot_energy(active_power_w, sleep_power_w, sleep_ratio, length_s)
    pre = level_j + harvested - nominal
    if pre < -ENERGY_TOL_J and not allow_deficit:
        raise InfeasibleActionError(
            f"infeasible action: needs {nominal:.6g} J but only {level_j + harvested:.6g} J available"
        )
    deficit = max(0.0, -pre)
    spilled = max(0.0, pre - capacity_j)
    new_level = min(max(pre, 0.0), capacity_j)
    delta = new_level - level_j
    return BatteryTransition(
        level_j=new_level,
        harvested_j=harvested,
        consumed_j=nominal - deficit,
        drawn_j=max(-delta, 0.0),
        stored_j=max(delta, 0.0),
        spilled_j=spilled,
        deficit_j=deficit,
    )


def battery_step(
    level_j: float,
    harvest_w: float,
    sleep_ratio: float,
    active_power_w: float,
    sleep_power_w: float,
    length_s: float,
    capacity_j: float,
) -> float:
    """Next battery level; clamped to [0, capacity].  Raises on infeasible draws."""
    return battery_transition(
        level_j, harvest_w, sleep_ratio, active_power_w, sleep_power_w, length_s, capacity_j
    ).level_j


@dataclass(frozen=True)
class Action:
    """One candidate slot action: battery draw (J) and the sleep ratio it buys."""

    draw_j: float  # negative = charging
    sleep_ratio: float
    forced: bool = False  # battery could not sustain even full sleep


def enumerate_actions(
    level_j: float,
    harvest_w: float,
    active_power_w: float,
    sleep_power_w: float,
    length_s: float,
    capacity_j: float,
    action_unit_j: float,
) -> list[Action]:
    """Candidate draws for one relay slot, ascending (sleep ratio descending).

    The grid runs from the full-sleep draw -(H - Ps)*L up to
    min(level, (P_active - H)*L) in steps of ``action_unit_j``, with the
    exact upper endpoint appended so full activity (or a full drain) is
    always reachable.  Draws are capped by the stored energy, not the
    capacity: the battery cannot give what it does not hold.  When even full
    sleep is out of reach the single forced action drains the battery and
    flags the deficit.
    """
    if action_unit_j <= 0.0:
        raise ValueError("action_unit_j must be > 0")
    if length_s <= 0.0:
        raise ValueError("length_s must be > 0")
    if active_power_w <= sleep_power_w:
        raise ValueError("degenerate powers: active power must exceed sleep power")

    lower = (sleep_power_w - harvest_w) * length_s  # draw needed for full sleep
    hi_active = (active_power_w - harvest_w) * length_s  # draw needed for zero sleep
    upper = min(level_j, hi_active)

    if upper < lower - ENERGY_TOL_J:
        # Battery + harvest cannot even cover sleep power for the slot.
        return [Action(draw_j=level_j, sleep_ratio=1.0, forced=True)]

    draws: list[float] = []
    k = 0
    while True:
        d = lower + k * action_unit_j
        if d > upper + ENERGY_TOL_J:
            break
        draws.append(min(d, upper))
        k += 1
    if not draws or upper - draws[-1] > ENERGY_TOL_J:
        draws.append(upper)

    actions: list[Action] = []
    last_phi = None
    for d in draws:
        phi = max_sleep_ratio(d, harvest_w, active_power_w, sleep_power_w, length_s)
        if last_phi is not None and abs(phi - last_phi) <= 1e-12:
            continue  # clamped duplicates collapse; keep the cheaper draw
        actions.append(Action(draw_j=d, sleep_ratio=phi))
        last_phi = phi
    return actions
