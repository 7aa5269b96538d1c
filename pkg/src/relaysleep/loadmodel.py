"""Traffic, bandwidth demand, and blocking analytics for one time slot.

Each station serves a processor-sharing queue: arrivals are Poisson, holding
times exponential with rate ``mu``, and the number in system follows the
geometric law ``P(K = k) = rho^k (1 - rho)`` with load ``rho = lam/(lam+mu)``
(chosen so the mean occupancy equals lam/mu).  A user is lost when admitting
it would push the station past its bandwidth share, which by PASTA happens
with probability ``rho^ceil(Wth/gamma)`` -- the tail of the untruncated
occupancy law, not an Erlang-style truncated loss system.  ``gamma`` is the
mean per-user bandwidth demand averaged over the station's serving area.

Relay sleep shifts work onto the BS two ways: awake relay traffic arrives at
the BS through the backhaul (scaled down by the relay gain ``J``), and
sleeping relay traffic falls back to the direct link over the outer annulus.
Users that arrive inside a sleeping relay's disc also count as blocked for
the sleeping fraction of the slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import topology
from .topology import AL, BL, DL, CellLayout, LinkModel


@dataclass(frozen=True)
class SlotTraffic:
    """Arrival rates and service parameters for one slot."""

    bs_rate: float  # arrivals/s in the BS-only area
    rs_rates: tuple[float, ...]  # arrivals/s inside each relay disc
    service_rate: float  # 1 / mean holding time, per second
    rate_requirement_bps: float  # target bit rate per user

    def __post_init__(self) -> None:
        if self.bs_rate < 0.0 or any(r < 0.0 for r in self.rs_rates):
            raise ValueError("arrival rates must be >= 0")
        if self.service_rate <= 0.0:
            raise ValueError("service_rate must be > 0")
        if self.rate_requirement_bps < 0.0:
            raise ValueError("rate_requirement_bps must be >= 0")

    @property
    def total_rate(self) -> float:
        return self.bs_rate + float(sum(self.rs_rates))


@dataclass(frozen=True)
class ResourceSplit:
    """Bandwidth shares, proportional to offered arrival rates."""

    bs_limit_hz: float
    rs_limits_hz: tuple[float, ...]
    total_hz: float


def resource_split(traffic: SlotTraffic, total_bandwidth_hz: float) -> ResourceSplit:
    """Split the system band across stations in proportion to arrivals."""
    if total_bandwidth_hz <= 0.0:
        raise ValueError("total_bandwidth_hz must be > 0")
    total = traffic.total_rate
    if total <= 0.0:
        raise ValueError("zero total traffic: cannot split bandwidth")
    scale = total_bandwidth_hz / total
    return ResourceSplit(
        bs_limit_hz=traffic.bs_rate * scale,
        rs_limits_hz=tuple(r * scale for r in traffic.rs_rates),
        total_hz=total_bandwidth_hz,
    )


def _dl_integrals(layout: CellLayout, links: LinkModel) -> tuple[float, float, float]:
    """(inner, outer, backhaul_rate): the direct-link demand kernels.

    inner  = integral of l/C_dl over [0, R-2r]   (BS-only disc)
    outer  = integral of l/C_dl over [R-2r, R]   (relay annulus, fallback)
    backhaul_rate = C_bl at the ring distance R-2r
    """
    ring = layout.rs_distance_m
    inner = topology.radial_inverse_rate_integral(DL, 0.0, ring, links)
    outer = topology.radial_inverse_rate_integral(DL, ring, layout.bs_radius_m, links)
    backhaul_rate = topology.link_rate(BL, ring, links)
    return inner, outer, backhaul_rate


def relay_gain(layout: CellLayout, links: LinkModel, n: int = 0) -> float:
    """Demand multiple J >= 0 of serving relay-disc users direct vs backhauled.

    J = [integral l/C_dl over the annulus] / [(1/C_bl) * integral l over it].
    J > 1 means the backhaul is the cheaper way to carry that traffic.  The
    ring is symmetric, so the value is the same for every relay index.
    """
    if not 0 <= n < layout.rs_count:
        raise ValueError(f"relay index {n} out of range for {layout.rs_count} relays")
    ring = layout.rs_distance_m
    _, outer, backhaul_rate = _dl_integrals(layout, links)
    plain = (layout.bs_radius_m**2 - ring**2) / 2.0  # integral of l dl over the annulus
    return outer * backhaul_rate / plain


def relay_gains(layout: CellLayout, links: LinkModel) -> np.ndarray:
    """Relay gain for every relay (identical on the symmetric ring)."""
    return np.full(layout.rs_count, relay_gain(layout, links, 0))


def effective_bs_arrival(
    traffic: SlotTraffic,
    sleep_ratios: Sequence[float],
    gains: Sequence[float],
) -> float:
    """BS arrival rate including backhauled and sleep-shifted relay traffic.

    lam0_eff = lam0 + sum_n lam_n * ((1 - phi_n)/J_n + phi_n)
    """
    lam = np.asarray(traffic.rs_rates, dtype=float)
    phi = np.asarray(sleep_ratios, dtype=float)
    j = np.asarray(gains, dtype=float)
    if not (lam.shape == phi.shape == j.shape):
        raise ValueError("dimension mismatch between rs_rates, sleep_ratios, and gains")
    if np.any(phi < 0.0) or np.any(phi > 1.0):
        raise ValueError("sleep ratios must lie in [0, 1]")
    if np.any(j <= 0.0):
        raise ValueError("relay gains must be > 0")
    return float(traffic.bs_rate + np.sum(lam * ((1.0 - phi) / j + phi)))


def bs_demand_per_user(
    layout: CellLayout,
    links: LinkModel,
    traffic: SlotTraffic,
    sleep_ratios: Sequence[float],
    gains: Sequence[float],
    integrals: tuple[float, float, float] | None = None,
) -> float:
    """Mean bandwidth demand (Hz) of one user served by the BS.

    Ratio of the BS's total expected bandwidth draw to its expected
    occupancy, with three contributions: direct users spread over the inner
    disc, backhauled relay traffic at the ring rate, and sleeping-relay
    users falling back to the direct link over the outer annulus.  Computed
    from arrival-rate-weighted (unnormalized) sums so a zero direct-arrival
    rate stays well defined.
    """
    inner, outer, backhaul_rate = integrals if integrals is not None else _dl_integrals(layout, links)
    r0 = traffic.rate_requirement_bps
    ring = layout.rs_distance_m
    lam0 = traffic.bs_rate
    lam = np.asarray(traffic.rs_rates, dtype=float)
    phi = np.asarray(sleep_ratios, dtype=float)
    j = np.asarray(gains, dtype=float)
    if not (lam.shape == phi.shape == j.shape):
        raise ValueError("dimension mismatch between rs_rates, sleep_ratios, and gains")

    direct = 2.0 * r0 * inner / ring**2 * lam0
    backhaul = r0 * float(np.sum(lam * (1.0 - phi) / (j * backhaul_rate)))
    fallback = 2.0 * r0 * outer / (layout.rs_count * layout.rs_radius_m**2) * float(np.sum(lam * phi))
    served = lam0 + float(np.sum(lam * ((1.0 - phi) / j + phi)))
    if served <= 0.0:
        raise ValueError("zero total traffic: per-user demand undefined")
    return (direct + backhaul + fallback) / served


def rs_demand_per_user(layout: CellLayout, links: LinkModel, rate_requirement_bps: float) -> float:
    """Mean bandwidth demand (Hz) of one user served by a relay.

    (2 r0 / r^2) * integral of l / C_al(l) dl over [0, r]: users uniform on
    the relay disc, served on the access link.
    """
    kernel = topology.radial_inverse_rate_integral(AL, 0.0, layout.rs_radius_m, links)
    return 2.0 * rate_requirement_bps * kernel / layout.rs_radius_m**2


def station_load(arrival_rate: float, service_rate: float) -> float:
    """Load rho = lam / (lam + mu); always in [0, 1) for mu > 0."""
    if arrival_rate < 0.0:
        raise ValueError("arrival_rate must be >= 0")
    if service_rate <= 0.0:
        raise ValueError("service_rate must be > 0")
    return arrival_rate / (arrival_rate + service_rate)


def expected_utilization(load: float, demand_per_user_hz: float, limit_hz: float) -> tuple[float, bool]:
    """Expected bandwidth in use: min(limit, gamma * rho / (1 - rho)).

    Returns (bandwidth_hz, saturated).  A load >= 1 is reported as fully
    saturated rather than raised, so planning can keep moving through
    overload slots.
    """
    if demand_per_user_hz < 0.0 or limit_hz < 0.0:
        raise ValueError("demand and limit must be >= 0")
    if load < 0.0:
        raise ValueError("load must be >= 0")
    if load >= 1.0:
        return limit_hz, True
    mean_draw = demand_per_user_hz * load / (1.0 - load)
    if mean_draw >= limit_hz:
        return limit_hz, True
    return mean_draw, False


def blocking_geometric(load: float, limit_hz: float, demand_per_user_hz: float) -> float:
    """Blocking probability rho^ceil(Wth / gamma).

    Tail of the geometric occupancy law at the admission threshold; the
    ceiling is taken exactly as computed (an integer quotient stays put).
    """
    if demand_per_user_hz <= 0.0:
        raise ValueError("demand_per_user_hz must be > 0")
    if limit_hz < 0.0:
        raise ValueError("limit_hz must be >= 0")
    if load < 0.0:
        raise ValueError("load must be >= 0")
    if load >= 1.0:
        return 1.0
    threshold = math.ceil(limit_hz / demand_per_user_hz)
    return load**threshold  # 0^0 == 1: zero bandwidth blocks everything


def rs_blocking(sleep_ratio: float, load: float, limit_hz: float, demand_per_user_hz: float) -> float:
    """Blocking seen by users in a relay disc: phi + (1 - phi) * tail.

    The sleeping fraction of arrivals counts as blocked outright; the rest
    face the relay's own admission tail.
    """
    if not 0.0 <= sleep_ratio <= 1.0:
        raise ValueError("sleep_ratio must lie in [0, 1]")
    tail = blocking_geometric(load, limit_hz, demand_per_user_hz)
    return sleep_ratio + (1.0 - sleep_ratio) * tail


def system_blocking(traffic: SlotTraffic, bs_block: float, rs_blocks: Sequence[float]) -> float:
    """Arrival-rate-weighted mixture of per-region blocking probabilities."""
    lam = np.asarray(traffic.rs_rates, dtype=float)
    blocks = np.asarray(rs_blocks, dtype=float)
    if lam.shape != blocks.shape:
        raise ValueError("dimension mismatch between rs_rates and rs_blocks")
    total = traffic.total_rate
    if total <= 0.0:
        raise ValueError("zero total traffic: system blocking undefined")
    return float((traffic.bs_rate * bs_block + np.sum(lam * blocks)) / total)
