"""Figure generation for emission-spectrum CSV sweeps."""
from __future__ import annotations

from .panels import (
    PanelData,
    PanelSpec,
    PlotInputError,
    build_figure,
    load_panel,
    parse_layout,
    read_metadata,
    read_spectrum_csv,
    render_panels,
)

__version__ = "0.1.0"

__all__ = [
    "PanelData",
    "PanelSpec",
    "PlotInputError",
    "build_figure",
    "load_panel",
    "parse_layout",
    "read_metadata",
    "read_spectrum_csv",
    "render_panels",
]
