"""Chart rendering for relay sleep-planning CSV outputs."""

from relayplots.render import CHART_KINDS, ChartSpec, EmptyInputError, MissingColumnError, render

__all__ = [
    "CHART_KINDS",
    "ChartSpec",
    "EmptyInputError",
    "MissingColumnError",
    "render",
]
