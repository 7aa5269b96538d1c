"""Bandwidth split, effective-load, and blocking-probability tests.

What is proven here:

1. The bandwidth split is exactly proportional to arriving traffic: an
   equal split under symmetric load, everything to the BS when relays see
   no arrivals, and the {1,1,2}/4 hand case.
2. Relay gain: identical downlink/backhaul efficiencies give J = 1, a
   half-rate downlink gives J = 2, and the default geometry's value is
   pinned to a frozen golden cross-checked by a dense trapezoid oracle.
3. Effective BS arrivals: both all-asleep and unit-gain cases collapse to
   the plain total, the hand case 1 + 0.25 + 1 = 2.25 holds, and the rate
   is non-decreasing in every sleep ratio whenever J >= 1.
4. Per-user BS demand: r0/c closed form in a single constant-efficiency
   region, the huge-gain limit keeps only the direct term, the zero-BS-rate
   corner stays defined (unnormalized sums), and the default scenario's
   slot-0 value at phi = 0.5 is pinned to a frozen golden.
5. Per-user relay demand: r0/c closed form, zero requirement costs zero,
   and the default-links value is pinned to a frozen golden equal to
   40x the access-link kernel.
6. Station load lam/(lam+mu) hand values; expected utilization mean-draw
   formula with clamping and saturation flags; blocking rho^ceil(limit/
   demand) including the 0.0625 hand power, the zero-limit edge (prob 1),
   and exact-integer ceiling ties.
7. Relay blocking phi + (1-phi)*tail (0.53125 hand case) and the
   arrival-weighted system mixture (0.2 hand case).
8. Random-draw properties: every probability lands in [0,1]; blocking is
   non-decreasing in load and non-increasing in the limit.
"""

from __future__ import annotations

import numpy as np
import pytest

from conftest import flat_links, small_layout
from relaysleep.loadmodel import (
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
from relaysleep.scenario import default_scenario

# Frozen default-geometry goldens (R=800, r=100, N=6, default link budget).
# J is cross-checked against a 4e6-point trapezoid oracle in
# test_relay_gain_default_golden; the demand values follow from the kernel
# goldens pinned in test_topology.py.
J_DEFAULT = 1.3795214807462017
GAMMA_N_DEFAULT = 106104.50477191783  # Hz at r0 = 200 kbps
GAMMA_0_SLOT0_HALF_SLEEP = 69901.7299680645  # Hz, default scenario slot 0
LAMBDA_EFF_SLOT0_HALF_SLEEP = 322.06341807029986  # users/s


def traffic(bs: float, rs: tuple[float, ...], mu: float = 1.0, r0: float = 1.0e4) -> SlotTraffic:
    return SlotTraffic(bs_rate=bs, rs_rates=rs, service_rate=mu, rate_requirement_bps=r0)


def test_resource_split_proportional() -> None:
    sym = resource_split(traffic(2.0, (1.0, 1.0)), 30.0e6)
    assert sym.bs_limit_hz == pytest.approx(15.0e6, rel=1e-15)
    assert sum(sym.rs_limits_hz) + sym.bs_limit_hz == pytest.approx(30.0e6, rel=1e-15)

    alone = resource_split(traffic(5.0, (0.0, 0.0)), 1.0e6)
    assert alone.bs_limit_hz == 1.0e6
    assert alone.rs_limits_hz == (0.0, 0.0)

    hand = resource_split(traffic(1.0, (1.0, 2.0)), 4.0)
    assert hand.bs_limit_hz == pytest.approx(1.0, rel=1e-15)
    assert hand.rs_limits_hz[0] == pytest.approx(1.0, rel=1e-15)
    assert hand.rs_limits_hz[1] == pytest.approx(2.0, rel=1e-15)

    with pytest.raises(ValueError):
        resource_split(traffic(0.0, (0.0,)), 1.0e6)
    with pytest.raises(ValueError):
        resource_split(traffic(1.0, (1.0,)), 0.0)


def test_relay_gain_constant_kernels() -> None:
    lay = small_layout(1)
    # Same constant efficiency on DL and BL: the two kernels cancel, J = 1.
    assert relay_gain(lay, flat_links(dl_bps_hz=2.0, bl_bps_hz=2.0)) == pytest.approx(1.0, rel=1e-10)
    # DL at half the BL efficiency doubles the demand multiple.
    assert relay_gain(lay, flat_links(dl_bps_hz=1.5, bl_bps_hz=3.0)) == pytest.approx(2.0, rel=1e-10)


def test_relay_gain_default_golden() -> None:
    s = default_scenario()
    assert relay_gain(s.layout, s.links) == pytest.approx(J_DEFAULT, rel=1e-12)
    # Ring symmetry: every relay sees the same geometry.
    gains = relay_gains(s.layout, s.links)
    assert gains.shape == (6,)
    assert np.all(gains == gains[0])

    # Independent oracle: dense trapezoid for both kernels.
    ring, edge = s.layout.rs_distance_m, s.layout.bs_radius_m
    l = np.linspace(ring, edge, 4_000_001)
    noise_w = 10.0 ** (-64.5 / 10.0) * 1e-3
    c_dl = np.log2(1.0 + 40.0 * 10.0 ** (-(91.3 + 3.4 * np.log10(l)) / 10.0) / noise_w)
    c_bl = float(np.log2(1.0 + 40.0 * 10.0 ** (-(88.3 + 3.1 * np.log10(ring)) / 10.0) / noise_w))
    oracle = float(np.trapezoid(l / c_dl, l)) * c_bl / ((edge**2 - ring**2) / 2.0)
    assert J_DEFAULT == pytest.approx(oracle, rel=1e-9)


def test_effective_bs_arrival_cases() -> None:
    tr = traffic(1.0, (2.0,))
    # All relays asleep: everything lands on the BS.
    assert effective_bs_arrival(tr, [1.0], [4.0]) == pytest.approx(3.0, rel=1e-15)
    # Unit gain, fully awake: backhaul demand equals direct demand.
    assert effective_bs_arrival(tr, [0.0], [1.0]) == pytest.approx(3.0, rel=1e-15)
    # Hand case: 1 + (1/4)*2*0.5 + 2*0.5 = 2.25.
    assert effective_bs_arrival(tr, [0.5], [4.0]) == pytest.approx(2.25, rel=1e-15)

    with pytest.raises(ValueError):
        effective_bs_arrival(tr, [1.5], [1.0])
    with pytest.raises(ValueError):
        effective_bs_arrival(tr, [0.5, 0.5], [1.0])
    with pytest.raises(ValueError):
        effective_bs_arrival(tr, [0.5], [0.0])


def test_effective_bs_arrival_monotone_in_sleep(rng: np.random.Generator) -> None:
    for _ in range(200):
        n = int(rng.integers(1, 5))
        tr = traffic(float(rng.uniform(0.0, 5.0)), tuple(rng.uniform(0.0, 3.0, n)))
        gains = rng.uniform(1.0, 5.0, n)  # J >= 1: sleeping never reduces BS load
        phi = rng.uniform(0.0, 1.0, n)
        base = effective_bs_arrival(tr, phi, gains)
        k = int(rng.integers(0, n))
        bumped = phi.copy()
        bumped[k] = min(1.0, phi[k] + float(rng.uniform(0.0, 1.0)))
        assert effective_bs_arrival(tr, bumped, gains) >= base - 1e-12


def test_bs_demand_closed_form_single_region() -> None:
    lay = small_layout(1)
    links = flat_links(dl_bps_hz=2.0)
    # No relay traffic, awake relay: only direct users over the inner disc.
    # Constant efficiency c: gamma0 = 2 r0 (ring^2 / 2c) / ring^2 / 1 = r0/c.
    tr = traffic(3.0, (0.0,), r0=1.0e4)
    got = bs_demand_per_user(lay, links, tr, [0.0], [1.0])
    assert got == pytest.approx(1.0e4 / 2.0, rel=1e-10)


def test_bs_demand_huge_gain_keeps_direct_term_only() -> None:
    lay = small_layout(1)
    links = flat_links(dl_bps_hz=2.0)
    tr = traffic(3.0, (2.0,), r0=1.0e4)
    got = bs_demand_per_user(lay, links, tr, [0.0], [1.0e12])
    # Backhaul load and demand both vanish as J grows: direct term only.
    assert got == pytest.approx(1.0e4 / 2.0, rel=1e-9)


def test_bs_demand_zero_bs_rate_stays_defined() -> None:
    lay = small_layout(1)
    links = flat_links(dl_bps_hz=2.0, bl_bps_hz=4.0)
    tr = traffic(0.0, (2.0,), r0=1.0e4)
    got = bs_demand_per_user(lay, links, tr, [0.5], [1.0])
    # Hand evaluation of the unnormalized three-term ratio:
    # backhaul = r0 * lam (1-phi) / (J C_bl); fallback = 2 r0 K_outer/(N r^2) lam phi;
    # served = lam ((1-phi)/J + phi).
    ring, edge, r = 300.0, 400.0, 50.0
    outer = (edge**2 - ring**2) / (2.0 * 2.0)
    backhaul = 1.0e4 * 2.0 * 0.5 / 4.0
    fallback = 2.0 * 1.0e4 * outer / r**2 * 2.0 * 0.5
    served = 2.0 * (0.5 + 0.5)
    assert got == pytest.approx((backhaul + fallback) / served, rel=1e-10)
    # With no traffic at all the ratio is undefined.
    with pytest.raises(ValueError):
        bs_demand_per_user(lay, links, traffic(0.0, (0.0,)), [0.0], [1.0])


def test_bs_demand_default_scenario_golden() -> None:
    s = default_scenario()
    tr = s.traffic(0)
    phi = np.full(6, 0.5)
    gains = relay_gains(s.layout, s.links)
    assert effective_bs_arrival(tr, phi, gains) == pytest.approx(
        LAMBDA_EFF_SLOT0_HALF_SLEEP, rel=1e-12
    )
    assert bs_demand_per_user(s.layout, s.links, tr, phi, gains) == pytest.approx(
        GAMMA_0_SLOT0_HALF_SLEEP, rel=1e-12
    )


def test_rs_demand_per_user() -> None:
    lay = small_layout(1)
    # Constant access efficiency c: gamma_n = r0 / c.
    assert rs_demand_per_user(lay, flat_links(al_bps_hz=2.0), 1.0e4) == pytest.approx(
        5.0e3, rel=1e-10
    )
    assert rs_demand_per_user(lay, flat_links(), 0.0) == 0.0
    s = default_scenario()
    assert rs_demand_per_user(s.layout, s.links, 2.0e5) == pytest.approx(
        GAMMA_N_DEFAULT, rel=1e-12
    )


def test_station_load_hand_values() -> None:
    assert station_load(0.0, 1.0) == 0.0
    assert station_load(1.0, 1.0) == 0.5
    assert station_load(3.0, 1.0) == 0.75
    with pytest.raises(ValueError):
        station_load(-1.0, 1.0)
    with pytest.raises(ValueError):
        station_load(1.0, 0.0)


def test_expected_utilization() -> None:
    assert expected_utilization(0.0, 1.0, 10.0) == (0.0, False)
    # Mean one customer in the queue at rho = 0.5.
    assert expected_utilization(0.5, 1.0, 10.0) == (pytest.approx(1.0), False)
    # Clamped to the limit: 2 * 0.9/0.1 = 18 > 10.
    assert expected_utilization(0.9, 2.0, 10.0) == (10.0, True)
    assert expected_utilization(1.0, 2.0, 10.0) == (10.0, True)
    with pytest.raises(ValueError):
        expected_utilization(-0.1, 1.0, 10.0)


def test_blocking_geometric_hand_values() -> None:
    assert blocking_geometric(0.0, 10.0, 1.0) == 0.0
    # threshold ceil(4/1) = 4: 0.5^4.
    assert blocking_geometric(0.5, 4.0, 1.0) == pytest.approx(0.0625, rel=1e-15)
    # Zero limit: ceil(0) = 0 users admitted, everything blocks (0^0 = 1).
    assert blocking_geometric(0.5, 0.0, 1.0) == 1.0
    assert blocking_geometric(0.0, 0.0, 1.0) == 1.0
    # Exact-integer quotient keeps its own ceiling; just above it steps up.
    assert blocking_geometric(0.5, 3.0, 1.0) == pytest.approx(0.125, rel=1e-15)
    assert blocking_geometric(0.5, 3.0 + 1e-9, 1.0) == pytest.approx(0.0625, rel=1e-15)
    assert blocking_geometric(1.0, 10.0, 1.0) == 1.0  # saturated
    with pytest.raises(ValueError):
        blocking_geometric(0.5, 10.0, 0.0)


def test_rs_blocking_hand_values() -> None:
    assert rs_blocking(1.0, 0.5, 4.0, 1.0) == 1.0
    assert rs_blocking(0.0, 0.5, 4.0, 1.0) == pytest.approx(0.0625, rel=1e-15)
    assert rs_blocking(0.5, 0.5, 4.0, 1.0) == pytest.approx(0.53125, rel=1e-15)
    with pytest.raises(ValueError):
        rs_blocking(1.1, 0.5, 4.0, 1.0)


def test_system_blocking_mixture() -> None:
    tr = traffic(1.0, (1.0,))
    assert system_blocking(tr, 0.1, [0.3]) == pytest.approx(0.2, rel=1e-15)
    # Equal components return themselves; no relay traffic returns the BS term.
    assert system_blocking(traffic(2.0, (3.0, 5.0)), 0.4, [0.4, 0.4]) == pytest.approx(0.4, rel=1e-15)
    assert system_blocking(traffic(2.0, (0.0,)), 0.7, [0.9]) == pytest.approx(0.7, rel=1e-15)
    with pytest.raises(ValueError):
        system_blocking(traffic(0.0, (0.0,)), 0.1, [0.1])


def test_probability_ranges_random(rng: np.random.Generator) -> None:
    for _ in range(300):
        load = float(rng.uniform(0.0, 1.2))  # includes saturated draws
        limit = float(rng.uniform(0.0, 20.0))
        demand = float(rng.uniform(0.05, 5.0))
        phi = float(rng.uniform(0.0, 1.0))
        p = blocking_geometric(load, limit, demand)
        q = rs_blocking(phi, load, limit, demand)
        assert 0.0 <= p <= 1.0
        assert 0.0 <= q <= 1.0
        assert q >= phi - 1e-15  # sleeping floor


def test_blocking_monotone_random(rng: np.random.Generator) -> None:
    for _ in range(300):
        limit = float(rng.uniform(0.0, 20.0))
        demand = float(rng.uniform(0.05, 5.0))
        lo, hi = np.sort(rng.uniform(0.0, 0.999, 2))
        assert blocking_geometric(hi, limit, demand) >= blocking_geometric(lo, limit, demand)
        load = float(rng.uniform(0.0, 0.999))
        wlo, whi = np.sort(rng.uniform(0.0, 20.0, 2))
        assert blocking_geometric(load, whi, demand) <= blocking_geometric(load, wlo, demand)
        # rs_blocking non-decreasing in phi at fixed tail.
        p_lo, p_hi = np.sort(rng.uniform(0.0, 1.0, 2))
        assert rs_blocking(p_hi, load, whi, demand) >= rs_blocking(p_lo, load, whi, demand) - 1e-15
