"""Chart rendering for the relay sleep planner's CSV outputs.

Three chart kinds are supported, one per CSV shape the planner emits:

``timeseries``
    A per-slot CSV (one row per time slot).  Plots grid power and blocking
    probabilities against the slot index.  Grid power is derived from the
    file as ``bs_energy_j / length_s`` per row; every other series is a
    column taken verbatim.

``tradeoff``
    A sweep CSV (one row per sweep cell).  Plots mean blocking on the x
    axis against mean grid power on the y axis, one curve per algorithm,
    rows kept in file order within each curve.

``profiles``
    A per-slot CSV again, but showing the inputs instead of the results:
    arrival rates per station and harvest power per relay, against the
    slot index.

Every render writes exactly one image plus a sidecar JSON file at
``<image path> + ".json"``.  The sidecar holds the exact numbers that were
plotted, as parsed from the CSV (floats round-trip through ``repr``, so a
value in the sidecar equals the corresponding CSV cell bit for bit).  The
sidecar also names the chart kind and the input file's basename, and its
bytes are deterministic for a given input, so repeated renders of the same
CSV produce identical sidecars.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "CHART_KINDS",
    "ChartSpec",
    "EmptyInputError",
    "MissingColumnError",
    "render",
]

CHART_KINDS = ("timeseries", "tradeoff", "profiles")

# Derived series: not a CSV column, computed as bs_energy_j / length_s.
GRID_POWER_SERIES = "mean_grid_power_w"

DEFAULT_TIMESERIES = (GRID_POWER_SERIES, "block_bs", "block_system")


class EmptyInputError(ValueError):
    """The input CSV has no data rows (or no bytes at all)."""


class MissingColumnError(ValueError):
    """A column the chart needs is absent from the CSV header."""


@dataclass(frozen=True)
class ChartSpec:
    """One chart request: what to draw, from where, to where.

    ``series`` optionally narrows which series are plotted.  It applies to
    the ``timeseries`` and ``profiles`` kinds, whose series are columns of
    the input file; the ``tradeoff`` kind always plots its fixed pair of
    axes and rejects a selection.
    """

    kind: str
    input_csv: str
    output_image: str
    series: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in CHART_KINDS:
            raise ValueError(f"unknown chart kind {self.kind!r}, expected one of {', '.join(CHART_KINDS)}")
        if self.series and self.kind == "tradeoff":
            raise ValueError("series selection applies to timeseries and profiles charts only")


def _read_table(path: str) -> tuple[list[str], list[dict[str, str]]]:
    # newline="" per the csv module contract
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path} is empty") from None
        rows = [dict(zip(header, row, strict=True)) for row in reader]
    if not rows:
        raise EmptyInputError(f"{path} has a header but no data rows")
    return header, rows


def _column(rows: list[dict[str, str]], name: str, path: str) -> list[float]:
    if name not in rows[0]:
        raise MissingColumnError(f"{path} has no column {name!r}")
    try:
        return [float(row[name]) for row in rows]
    except ValueError as exc:
        raise ValueError(f"column {name!r} in {path} is not numeric: {exc}") from None


def _timeseries_values(rows: list[dict[str, str]], name: str, path: str) -> list[float]:
    if name == GRID_POWER_SERIES:
        energy = _column(rows, "bs_energy_j", path)
        length = _column(rows, "length_s", path)
        return [e / t for e, t in zip(energy, length)]
    return _column(rows, name, path)


def _profile_series_names(header: list[str]) -> list[str]:
    names = [c for c in header if c == "arrival_bs_per_s" or c.startswith("arrival_rs")]
    names += [c for c in header if c.startswith("harvest_rs")]
    return names


def _plot_timeseries(spec: ChartSpec, header: list[str], rows: list[dict[str, str]]) -> dict:
    slots = _column(rows, "slot", spec.input_csv)
    names = spec.series or DEFAULT_TIMESERIES
    series = {name: _timeseries_values(rows, name, spec.input_csv) for name in names}

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax_prob = None
    for name, values in series.items():
        if name == GRID_POWER_SERIES or name.endswith(("_w", "_j", "_per_s")):
            ax.plot(slots, values, marker="o", label=name)
        else:
            if ax_prob is None:
                ax_prob = ax.twinx()
                ax_prob.set_ylabel("probability / fraction")
            ax_prob.plot(slots, values, marker="s", linestyle="--", label=name)
    ax.set_xlabel("slot")
    ax.set_ylabel("power [W] / rate")
    handles, labels = ax.get_legend_handles_labels()
    if ax_prob is not None:
        h2, l2 = ax_prob.get_legend_handles_labels()
        handles += h2
        labels += l2
    ax.legend(handles, labels, loc="best", fontsize=8)
    ax.set_title("per-slot results")
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=120)
    plt.close(fig)

    return {"x": {"name": "slot", "values": slots}, "series": series}


def _plot_tradeoff(spec: ChartSpec, header: list[str], rows: list[dict[str, str]]) -> dict:
    for required in ("algorithm", "value", "mean_grid_power_w", "mean_blocking"):
        if required not in header:
            raise MissingColumnError(f"{spec.input_csv} has no column {required!r}")

    # one curve per algorithm, in first-appearance order, rows in file order
    curves: dict[str, dict[str, list[float]]] = {}
    for row in rows:
        algo = row["algorithm"]
        curve = curves.setdefault(algo, {"value": [], "mean_blocking": [], "mean_grid_power_w": []})
        for col in ("value", "mean_blocking", "mean_grid_power_w"):
            try:
                curve[col].append(float(row[col]))
            except ValueError as exc:
                raise ValueError(f"column {col!r} in {spec.input_csv} is not numeric: {exc}") from None

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for algo, curve in curves.items():
        ax.plot(curve["mean_blocking"], curve["mean_grid_power_w"], marker="o", label=algo)
    ax.set_xlabel("mean blocking probability")
    ax.set_ylabel("mean grid power [W]")
    ax.set_title("grid power vs. blocking")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=120)
    plt.close(fig)

    return {"series": curves}


def _plot_profiles(spec: ChartSpec, header: list[str], rows: list[dict[str, str]]) -> dict:
    slots = _column(rows, "slot", spec.input_csv)
    names = list(spec.series) if spec.series else _profile_series_names(header)
    if not names:
        raise MissingColumnError(f"{spec.input_csv} has no arrival_* or harvest_* columns")
    series = {name: _column(rows, name, spec.input_csv) for name in names}

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax_harvest = None
    for name, values in series.items():
        if name.startswith("harvest"):
            if ax_harvest is None:
                ax_harvest = ax.twinx()
                ax_harvest.set_ylabel("harvest [W]")
            ax_harvest.plot(slots, values, marker="^", linestyle="--", label=name)
        else:
            ax.plot(slots, values, marker="o", label=name)
    ax.set_xlabel("slot")
    ax.set_ylabel("arrivals [1/s]")
    handles, labels = ax.get_legend_handles_labels()
    if ax_harvest is not None:
        h2, l2 = ax_harvest.get_legend_handles_labels()
        handles += h2
        labels += l2
    ax.legend(handles, labels, loc="best", fontsize=7)
    ax.set_title("slot profiles")
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=120)
    plt.close(fig)

    return {"x": {"name": "slot", "values": slots}, "series": series}


_PLOTTERS = {
    "timeseries": _plot_timeseries,
    "tradeoff": _plot_tradeoff,
    "profiles": _plot_profiles,
}


def _write_sidecar(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def render(spec: ChartSpec) -> tuple[str, str]:
    """Render one chart and its sidecar, returning both paths.

    The CSV is read and validated before anything is written, so a failed
    render leaves no output files behind.  The sidecar lands next to the
    image at ``spec.output_image + ".json"`` and records the input file's
    basename (not its path, so sidecar bytes do not depend on where the
    input lives), the chart kind, and every plotted series as parsed
    floats.
    """
    header, rows = _read_table(spec.input_csv)
    payload = _PLOTTERS[spec.kind](spec, header, rows)
    payload["kind"] = spec.kind
    payload["source"] = os.path.basename(spec.input_csv)
    sidecar = spec.output_image + ".json"
    _write_sidecar(sidecar, payload)
    return spec.output_image, sidecar
