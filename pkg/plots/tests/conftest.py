"""Shared fixtures for the chart renderer tests.

The builders here write small CSV files shaped like the planner's two
output contracts (per-slot rows and sweep rows) without importing the
planner package. The renderer is exercised purely through files, the same
way a user pipes one tool's output into the other.
"""

from __future__ import annotations

import csv
import os

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

TRADEOFF_HEADER = ["axis", "value", "algorithm", "mean_grid_power_w", "mean_blocking", "total_cost_j"]

PER_SLOT_HEADER = [
    "slot",
    "length_s",
    "arrival_bs_per_s",
    "arrival_rs0_per_s",
    "harvest_rs0_w",
    "sleep_rs0",
    "battery_rs0_j",
    "bs_energy_j",
    "rs_energy0_j",
    "bs_arrival_eff_per_s",
    "bs_util_frac",
    "bs_saturated",
    "block_bs",
    "block_rs0",
    "block_system",
    "stage_cost_j",
    "clamped_any",
    "deficit_any",
]


def write_csv(path, header, rows) -> str:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return str(path)


def fmt(value: float) -> str:
    # mirror the planner's cell format: repr for floats
    return repr(float(value))


def tradeoff_rows(n_values: int = 3, algorithms=("greedy", "reduced-dp")) -> list[list[str]]:
    """Sweep-shaped rows with floats that do not have short decimal forms."""
    rows = []
    for k in range(n_values):
        for algo in algorithms:
            value = k * 0.1
            power = 1000.0 + k / 3.0 + (0.5 if algo == "greedy" else 0.0)
            blocking = 0.1 + k * 0.07 / 3.0
            cost = power * 86400.0 + blocking * 4e7
            rows.append(["psi", fmt(value), algo, fmt(power), fmt(blocking), fmt(cost)])
    return rows


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    """Echo the acceptance verdict lines after the run, when any exist."""
    try:
        from test_acceptance import REPORT
    except Exception:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)


def per_slot_rows(n_slots: int = 4) -> list[list[str]]:
    """Per-slot shaped rows for one relay, with awkward float cells."""
    rows = []
    for i in range(n_slots):
        length = 3600.0
        arrival_bs = 10.0 + i / 7.0
        arrival_rs = 2.0 + i / 9.0
        harvest = 5.0 * i / 3.0
        energy = 3.6e6 + i * 1234.5678
        block_bs = 0.05 + i / 300.0
        rows.append(
            [
                str(i),
                fmt(length),
                fmt(arrival_bs),
                fmt(arrival_rs),
                fmt(harvest),
                fmt(0.25 * i),
                fmt(100.0 - i / 3.0),
                fmt(energy),
                fmt(900.0 + i),
                fmt(arrival_bs + 0.5),
                fmt(0.3 + i / 50.0),
                "0",
                fmt(block_bs),
                fmt(block_bs / 2.0),
                fmt(block_bs * 0.9),
                fmt(energy + 1.0),
                "0",
                "0",
            ]
        )
    return rows
