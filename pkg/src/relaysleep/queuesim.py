"""Monte Carlo check of the analytic blocking law.

The load model treats each station's occupancy as geometric with ratio
rho = lam / (lam + mu) and reports blocking as the tail probability at the
admission threshold.  That law is exactly the stationary distribution of a
birth-death queue with birth rate ``lam`` in every state and death rate
``lam + mu`` in every state above zero, so simulating that queue gives an
independent estimate of the same quantity.  Arrivals always join (the law
is untruncated); an arrival is counted as blocked when it finds at least
``threshold`` users in the system, which by PASTA estimates the stationary
tail.  A time-average of the same indicator is tracked as a cross-check on
the event-average.

Randomness comes from counter-based Philox streams spawned off one seed, so
every estimate is reproducible and stations/replications are independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .policy import slot_evaluation
from .scenario import Scenario, ScenarioConstants, precompute

_CHUNK = 1 << 15


class _Draws:
    """Chunked pre-drawn uniforms and unit exponentials from one generator."""

    def __init__(self, rng: np.random.Generator, chunk: int = _CHUNK) -> None:
        self._rng = rng
        self._chunk = chunk
        self._u = rng.random(chunk)
        self._e = rng.standard_exponential(chunk)
        self._iu = 0
        self._ie = 0

    def uniform(self) -> float:
        if self._iu == self._chunk:
            self._u = self._rng.random(self._chunk)
            self._iu = 0
        v = self._u[self._iu]
        self._iu += 1
        return v

    def exponential(self) -> float:
        if self._ie == self._chunk:
            self._e = self._rng.standard_exponential(self._chunk)
            self._ie = 0
        v = self._e[self._ie]
        self._ie += 1
        return v


@dataclass(frozen=True)
class TailEstimate:
    """Simulated tail probability with its batch-means standard error."""

    estimate: float
    stderr: float
    time_average: float
    arrivals: int


def _batch_stderr(hits: np.ndarray, batches: int = 32) -> float:
    n = hits.shape[0]
    if n < 2:
        return 0.0
    m = n // batches
    if m < 2:
        return float(hits.std(ddof=1) / math.sqrt(n))
    means = hits[: batches * m].reshape(batches, m).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))


def simulate_tail_probability(
    arrival_rate: float,
    service_rate: float,
    threshold: int,
    horizon: int = 100_000,
    seed: int | np.random.SeedSequence = 0,
    warmup: int = 2_000,
) -> TailEstimate:
    """Estimate P(occupancy >= threshold) for the geometric-law queue.

    Simulates the embedded birth-death chain (birth ``lam`` everywhere,
    death ``lam + mu`` above zero) for ``warmup + horizon`` arrivals and
    averages the blocked indicator over the last ``horizon`` of them.
    """
    if arrival_rate <= 0.0:
        raise ValueError("arrival_rate must be > 0")
    if service_rate <= 0.0:
        raise ValueError("service_rate must be > 0")
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if threshold == 0:
        return TailEstimate(estimate=1.0, stderr=0.0, time_average=1.0, arrivals=horizon)

    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    draws = _Draws(np.random.Generator(np.random.Philox(seq)))
    lam = float(arrival_rate)
    death = lam + float(service_rate)
    total_rate = lam + death
    p_arrival = lam / total_rate

    hits = np.zeros(horizon, dtype=np.uint8)
    n = 0
    arrivals = 0
    total = warmup + horizon
    t_above = 0.0
    t_all = 0.0
    while arrivals < total:
        counting = arrivals >= warmup
        if n == 0:
            dt = draws.exponential() / lam
            if counting:
                t_all += dt
            # state 0 is always below a positive threshold
            arrivals += 1
            if arrivals > warmup:
                hits[arrivals - warmup - 1] = 0
            n = 1
        else:
            dt = draws.exponential() / total_rate
            if counting:
                t_all += dt
                if n >= threshold:
                    t_above += dt
            if draws.uniform() < p_arrival:
                arrivals += 1
                if arrivals > warmup:
                    hits[arrivals - warmup - 1] = 1 if n >= threshold else 0
                n += 1
            else:
                n -= 1

    time_avg = t_above / t_all if t_all > 0.0 else 0.0
    return TailEstimate(
        estimate=float(hits.mean()),
        stderr=_batch_stderr(hits),
        time_average=time_avg,
        arrivals=horizon,
    )


@dataclass(frozen=True)
class StationCheck:
    """Analytic-vs-simulated blocking for one station (or the mixture)."""

    station: str
    arrival_rate: float
    threshold: int
    sleep_ratio: float
    analytic: float
    estimate: float
    stderr: float
    z_score: float
    resolvable: bool = True
    arrivals_needed: int = 0


def _z(analytic: float, estimate: float, stderr: float) -> float:
    diff = estimate - analytic
    if stderr <= 0.0:
        return 0.0 if abs(diff) <= 1e-12 else math.inf
    return diff / stderr


def _tail_resolution(
    lam: float, mu: float, threshold: int, sleep: float, arrivals: int
) -> tuple[bool, int]:
    """Whether a run of ``arrivals`` per replication can resolve this tail.

    A z test against the geometric tail carries information only when the
    chain (a) diffuses to the threshold's neighbourhood inside the discarded
    warmup and (b) crosses the threshold a few dozen independent times in the
    measured stretch.  Outside that regime the replication spread collapses
    and the z statistic is vacuous, so the row must be excluded rather than
    scored.  Returns (resolvable, arrivals needed per replication when not).
    """
    if threshold == 0 or lam <= 0.0:
        return True, 0
    rho = lam / (lam + mu)
    p_tail = rho**threshold
    if sleep > 0.0 and (1.0 - sleep) * p_tail <= 1e-4:
        # The sleep coin dominates the row; the tail is invisible at z scale.
        return True, 0
    crossing_rate = (1.0 - rho) * rho ** (threshold - 1)  # upcrossings per arrival
    reach = min(float(threshold), lam / mu) ** 2  # diffusive first-passage, in arrivals
    warmup = max(200, arrivals // 10)
    needed = float(arrivals)
    if arrivals * crossing_rate < 25.0:
        needed = max(needed, 25.0 / crossing_rate)
    if warmup < reach:
        needed = max(needed, 10.0 * reach)
    if needed <= arrivals:
        return True, 0
    return False, int(float(f"{needed:.1e}"))


def simulate_slot_blocking(
    scenario: Scenario,
    slot: int,
    sleep_ratios: np.ndarray,
    replications: int = 5,
    arrivals: int = 20_000,
    seed: int = 0,
    const: ScenarioConstants | None = None,
) -> list[StationCheck]:
    """Validate one slot's analytic blocking against simulation, per station.

    Each station runs ``replications`` independent queue simulations; the
    sleeping-relay shortfall is layered on as a Bernoulli(phi) coin per
    arrival (an arrival is blocked if the coin says the relay was off or the
    queue tail was hit).  The final row mixes stations by arrival rate, like
    the system blocking probability.
    """
    if const is None:
        const = precompute(scenario)
    phi = np.asarray(sleep_ratios, dtype=float)
    ev = slot_evaluation(scenario, const, slot, phi)
    mu = scenario.service_rate
    split = const.splits[slot]
    root = np.random.SeedSequence(seed)
    station_seqs = root.spawn(1 + scenario.n_rs)

    def run_station(lam: float, threshold: int, sleep: float, seq: np.random.SeedSequence) -> tuple[float, float]:
        reps = seq.spawn(replications)
        means = []
        for rep_seq in reps:
            tail_seq, coin_seq = rep_seq.spawn(2)
            blocked = _tail_indicators(lam, mu, threshold, arrivals, tail_seq)
            if sleep > 0.0:
                coins = np.random.Generator(np.random.Philox(coin_seq)).random(arrivals) < sleep
                blocked = coins | blocked
            means.append(float(blocked.mean()))
        arr = np.asarray(means)
        stderr = float(arr.std(ddof=1) / math.sqrt(replications)) if replications > 1 else 0.0
        return float(arr.mean()), stderr

    checks: list[StationCheck] = []
    lam0 = float(scenario.bs_arrivals[slot])
    lam_eff = ev.bs_arrival_eff
    est0, se0 = run_station(lam_eff, ev.bs_threshold, 0.0, station_seqs[0])
    ok0, need0 = _tail_resolution(lam_eff, mu, ev.bs_threshold, 0.0, arrivals)
    checks.append(
        StationCheck(
            station="bs",
            arrival_rate=lam_eff,
            threshold=ev.bs_threshold,
            sleep_ratio=0.0,
            analytic=ev.bs_block,
            estimate=est0,
            stderr=se0,
            z_score=_z(ev.bs_block, est0, se0),
            resolvable=ok0,
            arrivals_needed=need0,
        )
    )

    for n in range(scenario.n_rs):
        lam_n = float(scenario.rs_arrivals[slot, n])
        limit = float(split.rs_limits_hz[n])
        threshold = math.ceil(limit / const.rs_demand_hz) if limit > 0.0 else 0
        analytic = float(ev.rs_blocks[n])
        if lam_n <= 0.0:
            checks.append(
                StationCheck(
                    station=f"rs{n}",
                    arrival_rate=0.0,
                    threshold=threshold,
                    sleep_ratio=float(phi[n]),
                    analytic=analytic,
                    estimate=math.nan,
                    stderr=0.0,
                    z_score=0.0,
                )
            )
            continue
        est, se = run_station(lam_n, threshold, float(phi[n]), station_seqs[1 + n])
        ok_n, need_n = _tail_resolution(lam_n, mu, threshold, float(phi[n]), arrivals)
        checks.append(
            StationCheck(
                station=f"rs{n}",
                arrival_rate=lam_n,
                threshold=threshold,
                sleep_ratio=float(phi[n]),
                analytic=analytic,
                estimate=est,
                stderr=se,
                z_score=_z(analytic, est, se),
                resolvable=ok_n,
                arrivals_needed=need_n,
            )
        )

    lam_total = lam0 + float(scenario.rs_arrivals[slot].sum())
    weights = [lam0 / lam_total] + [float(r.arrival_rate) / lam_total for r in checks[1:]]
    sys_est = 0.0
    sys_var = 0.0
    sys_ok = True
    sys_need = 0
    for w, row in zip(weights, checks):
        if math.isnan(row.estimate):
            continue
        sys_est += w * row.estimate
        sys_var += (w * row.stderr) ** 2
        if w > 0.0 and not row.resolvable:
            # The mixture inherits any component bias the run cannot resolve.
            sys_ok = False
            sys_need = max(sys_need, row.arrivals_needed)
    sys_se = math.sqrt(sys_var)
    checks.append(
        StationCheck(
            station="system",
            arrival_rate=lam_total,
            threshold=0,
            sleep_ratio=float(phi.mean()),
            analytic=ev.system_block,
            estimate=sys_est,
            stderr=sys_se,
            z_score=_z(ev.system_block, sys_est, sys_se),
            resolvable=sys_ok,
            arrivals_needed=sys_need,
        )
    )
    return checks


def _tail_indicators(
    lam: float, mu: float, threshold: int, count: int, seed: np.random.SeedSequence
) -> np.ndarray:
    """Per-arrival blocked indicators from a fresh chain run (no warmup split)."""
    if threshold == 0:
        return np.ones(count, dtype=bool)
    draws = _Draws(np.random.Generator(np.random.Philox(seed)))
    death = lam + mu
    total_rate = lam + death
    p_arrival = lam / total_rate
    out = np.zeros(count, dtype=bool)
    n = 0
    arrivals = 0
    # Cold start: the walk needs ~(lam/mu)^2 steps to reach its stationary
    # band, so scale the discarded stretch with the run length.
    warmup = max(200, count // 10)
    total = warmup + count
    while arrivals < total:
        if n == 0:
            arrivals += 1
            if arrivals > warmup:
                out[arrivals - warmup - 1] = False
            n = 1
        else:
            if draws.uniform() < p_arrival:
                arrivals += 1
                if arrivals > warmup:
                    out[arrivals - warmup - 1] = n >= threshold
                n += 1
            else:
                n -= 1
    return out
