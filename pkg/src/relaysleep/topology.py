"""Cell geometry and the link-rate model.

One macro cell: a grid-powered base station (BS) at the centre of a disc of
radius ``R``, ringed by ``N`` renewable-powered relay stations (RS) placed
evenly on a circle of radius ``R - 2r``.  Each relay serves a disc of radius
``r``; users elsewhere are served by the BS directly.

Three link kinds carry traffic:

* ``DL`` -- BS to user (direct link),
* ``AL`` -- RS to user (access link),
* ``BL`` -- BS to RS (backhaul link, fixed length ``R - 2r``).

Path loss follows a log-distance law ``A + B*log10(d)`` in dB with ``d`` in
metres.  Spectral efficiency is ``log2(1 + SINR)`` where the SINR spreads the
transmit power over a configurable reference band and compares the resulting
power density against the noise density:

    SINR = (Pt / W_spread) * g(d) / (N0 + I / W_spread)

This keeps the efficiency a pure function of link kind and distance, so a
user's bandwidth demand does not depend on how much bandwidth the station
happens to grant.  The default ``spread_bandwidth_hz`` of 1 Hz treats the
configured noise density as the total in-band noise power, which is the only
reading under which the default link budget closes (received power at the
cell edge is around -55 dBm); widen it if your noise figure is a true
per-Hz density over a MHz-scale channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

# Link kinds.
DL = "DL"  # BS -> user
AL = "AL"  # RS -> user
BL = "BL"  # BS -> RS
LINK_KINDS = (DL, AL, BL)

# Quadrature tolerance for the radial demand integrals.
INTEGRAL_REL_TOL = 1e-8


@dataclass(frozen=True)
class CellLayout:
    """Geometry of one macro cell with edge relays.

    The relay ring sits at distance ``R - 2r`` from the BS so each relay disc
    of radius ``r`` touches the cell edge.
    """

    bs_radius_m: float  # R
    rs_radius_m: float  # r, relay coverage disc radius
    rs_count: int  # N

    @property
    def rs_distance_m(self) -> float:
        """BS-to-relay distance (the relay ring radius)."""
        return self.bs_radius_m - 2.0 * self.rs_radius_m

    @property
    def rs_angles_rad(self) -> tuple[float, ...]:
        """Relay bearings, evenly spaced starting at angle 0."""
        n = self.rs_count
        return tuple(2.0 * math.pi * k / n for k in range(n))

    @property
    def rs_area_m2(self) -> float:
        return math.pi * self.rs_radius_m**2

    @property
    def bs_only_area_m2(self) -> float:
        """Area served directly by the BS (cell minus all relay discs)."""
        return math.pi * self.bs_radius_m**2 - self.rs_count * self.rs_area_m2


def build_layout(bs_radius_m: float, rs_radius_m: float, rs_count: int) -> CellLayout:
    """Validate and build a cell layout.

    Raises ValueError (invalid geometry) when the relay ring would collapse
    (R <= 2r), radii are non-positive, or the relay discs fill the cell.
    """
    if rs_radius_m <= 0.0 or bs_radius_m <= 0.0:
        raise ValueError(f"invalid geometry: radii must be positive, got R={bs_radius_m}, r={rs_radius_m}")
    if bs_radius_m <= 2.0 * rs_radius_m:
        raise ValueError(f"invalid geometry: need R > 2r, got R={bs_radius_m}, r={rs_radius_m}")
    if rs_count < 1 or int(rs_count) != rs_count:
        raise ValueError(f"invalid geometry: rs_count must be a positive integer, got {rs_count}")
    if rs_count * math.pi * rs_radius_m**2 >= math.pi * bs_radius_m**2:
        raise ValueError(f"invalid geometry: {rs_count} relay discs of radius {rs_radius_m} do not fit in R={bs_radius_m}")
    return CellLayout(float(bs_radius_m), float(rs_radius_m), int(rs_count))


@dataclass(frozen=True)
class LinkParams:
    """Per-link path loss and transmit power."""

    pathloss_intercept_db: float  # A
    pathloss_slope_db: float  # B, dB per decade of distance in metres
    tx_power_w: float
    interference_w: float = 0.0

    def __post_init__(self) -> None:
        if self.tx_power_w < 0.0:
            raise ValueError("tx_power_w must be >= 0")
        if self.interference_w < 0.0:
            raise ValueError("interference_w must be >= 0")
        if self.pathloss_slope_db < 0.0:
            raise ValueError("pathloss_slope_db must be >= 0")


@dataclass(frozen=True)
class LinkModel:
    """Link parameters for the three link kinds plus the shared noise model."""

    dl: LinkParams
    al: LinkParams
    bl: LinkParams
    noise_density_dbm_hz: float = -64.5
    spread_bandwidth_hz: float = 1.0  # band over which transmit power is spread

    def __post_init__(self) -> None:
        if self.spread_bandwidth_hz <= 0.0:
            raise ValueError("spread_bandwidth_hz must be > 0")

    def params(self, kind: str) -> LinkParams:
        if kind == DL:
            return self.dl
        if kind == AL:
            return self.al
        if kind == BL:
            return self.bl
        raise ValueError(f"unknown link kind {kind!r}; expected one of {LINK_KINDS}")

    @property
    def noise_w_per_hz(self) -> float:
        # dBm/Hz -> W/Hz
        return 10.0 ** (self.noise_density_dbm_hz / 10.0) * 1e-3


def pathloss_gain(kind: str, distance_m: float, model: LinkModel) -> float:
    """Linear power gain 10^(-(A + B*log10(d))/10) for the given link kind."""
    if distance_m <= 0.0:
        raise ValueError(f"non-positive distance {distance_m}")
    p = model.params(kind)
    loss_db = p.pathloss_intercept_db + p.pathloss_slope_db * math.log10(distance_m)
    return 10.0 ** (-loss_db / 10.0)


def link_rate(kind: str, distance_m: float, model: LinkModel) -> float:
    """Spectral efficiency log2(1 + SINR) in bit/s/Hz at the given distance.

    Strictly decreasing in distance (for a positive path-loss slope) and
    strictly increasing in transmit power when interference is zero.
    """
    p = model.params(kind)
    gain = pathloss_gain(kind, distance_m, model)
    w = model.spread_bandwidth_hz
    noise_w = model.noise_w_per_hz * w
    sinr = p.tx_power_w * gain / (noise_w + p.interference_w)
    return math.log2(1.0 + sinr)


def bandwidth_demand(kind: str, distance_m: float, rate_requirement_bps: float, model: LinkModel) -> float:
    """Bandwidth (Hz) one user needs to sustain its target bit rate.

    demand = r0 / C(d).  Raises ValueError (zero-rate link) when the
    efficiency underflows to zero.
    """
    if rate_requirement_bps < 0.0:
        raise ValueError("rate_requirement_bps must be >= 0")
    rate = link_rate(kind, distance_m, model)
    if rate <= 0.0:
        raise ValueError(f"zero-rate link: {kind} at {distance_m} m has no usable capacity")
    return rate_requirement_bps / rate


def radial_inverse_rate_integral(kind: str, lo_m: float, hi_m: float, model: LinkModel) -> float:
    """Integral of l / C(l) dl over [lo_m, hi_m] for the given link kind.

    This is the kernel of every area-averaged bandwidth demand: integrating
    user distance times per-Hz slowness over a radial band.  All such
    integrals route through this one helper.  Relative error <= 1e-8.
    """
    if lo_m < 0.0 or hi_m <= lo_m:
        raise ValueError(f"need 0 <= lo < hi, got [{lo_m}, {hi_m}]")

    def integrand(l: float) -> float:
        if l <= 0.0:
            return 0.0  # l/C -> 0 as l -> 0 (efficiency blows up at zero range)
        return l / link_rate(kind, l, model)

    # The efficiency is monotone in distance; probing the far end catches underflow.
    probes = np.linspace(max(lo_m, 1e-9 * (hi_m - lo_m)), hi_m, 7)
    for l in probes:
        if link_rate(kind, float(l), model) <= 0.0:
            raise ValueError(f"integrand singularity: zero efficiency for {kind} at {l} m")

    value, _abserr = integrate.quad(integrand, lo_m, hi_m, epsabs=0.0, epsrel=INTEGRAL_REL_TOL, limit=200)
    return value
