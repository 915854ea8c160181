"""Heatmap panels of emission-spectrum sweeps.

Input is the spectrum CSV contract (header ``alpha_deg,lambda_um,density``,
angle-outer row order) plus its ``<csv>.meta`` INI sidecar, from which the
cone angle theta0 and the density-unit label are taken. This package never
computes physics; a panel is a pure function of the file contents.
"""
from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass

import numpy as np

EXPECTED_HEADER = "alpha_deg,lambda_um,density"


class PlotInputError(ValueError):
    """Malformed CSV/metadata or data that cannot be rendered as requested."""


@dataclass(frozen=True)
class PanelSpec:
    csv_path: str
    title: str = ""
    color_scale: str = "log"  # densities span decades
    output_image_path: str = "panel.png"

    def __post_init__(self):
        if self.color_scale not in ("linear", "log"):
            raise PlotInputError(f"color_scale must be linear|log, got {self.color_scale!r}")


@dataclass(frozen=True)
class PanelData:
    alphas_deg: np.ndarray
    lambdas_um: np.ndarray
    density: np.ndarray  # shape (n_alpha, n_lambda)
    theta0_deg: float | None
    units: str


def read_spectrum_csv(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parse a spectrum CSV into (alphas_deg, lambdas_um, density grid)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header != EXPECTED_HEADER:
                raise PlotInputError(f"{path}: expected header {EXPECTED_HEADER!r}")
            body = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise PlotInputError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise PlotInputError(f"{path}: not a numeric 3-column CSV: {exc}") from exc
    if body.size == 0:
        raise PlotInputError(f"{path}: no data rows")
    if body.shape[1] != 3:
        raise PlotInputError(f"{path}: expected 3 columns, got {body.shape[1]}")

    alphas = np.unique(body[:, 0])
    lambdas = np.unique(body[:, 1])
    n_a, n_l = len(alphas), len(lambdas)
    if n_a * n_l != body.shape[0]:
        raise PlotInputError(f"{path}: rows do not form an {n_a} x {n_l} grid")
    # contract: angle-outer, wavelength-inner, both ascending
    want_a = np.repeat(alphas, n_l)
    want_l = np.tile(lambdas, n_a)
    if not (np.array_equal(body[:, 0], want_a) and np.array_equal(body[:, 1], want_l)):
        raise PlotInputError(f"{path}: rows not in angle-outer sorted order")
    return alphas, lambdas, body[:, 2].reshape(n_a, n_l)


def read_metadata(csv_path: str) -> tuple[float | None, str]:
    """(theta0_deg, density-units label) from the sidecar; tolerant of absence."""
    meta_path = csv_path + ".meta"
    units = "density"
    if not os.path.exists(meta_path):
        return None, units
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read(meta_path, encoding="utf-8")
    except configparser.Error as exc:
        raise PlotInputError(f"{meta_path}: {exc}") from exc
    theta0 = None
    if cp.has_section("run"):
        units = cp.get("run", "density_units", fallback=units)
        raw = cp.get("run", "theta0_deg", fallback=None)
        if raw is not None:
            theta0 = float(raw)
    # fall back to the config echo when the run block lacks the angle
    if theta0 is None and cp.has_option("perturbation", "beta"):
        beta = float(cp.get("perturbation", "beta"))
        if beta > 1.0:
            theta0 = math.degrees(math.acos(1.0 / beta))
    return theta0, units


def load_panel(spec: PanelSpec) -> PanelData:
    alphas, lambdas, density = read_spectrum_csv(spec.csv_path)
    if np.any(density < 0.0) or not np.all(np.isfinite(density)):
        raise PlotInputError(f"{spec.csv_path}: densities must be finite and >= 0")
    if spec.color_scale == "log" and not np.any(density > 0.0):
        raise PlotInputError(
            f"{spec.csv_path}: log color scale needs at least one positive density"
        )
    theta0, units = read_metadata(spec.csv_path)
    return PanelData(alphas, lambdas, density, theta0, units)


def parse_layout(layout: str) -> tuple[int, int]:
    try:
        rows_s, cols_s = layout.lower().split("x")
        rows, cols = int(rows_s), int(cols_s)
    except ValueError as exc:
        raise PlotInputError(f"layout must look like 2x3, got {layout!r}") from exc
    if rows < 1 or cols < 1:
        raise PlotInputError(f"layout must be positive, got {layout!r}")
    return rows, cols


def build_figure(specs: list[PanelSpec], layout: str = "1x1"):
    """Compose the panel figure; returns the matplotlib Figure (not saved)."""
    import matplotlib

    matplotlib.use("Agg", force=False)
    from matplotlib import pyplot as plt
    from matplotlib.colors import LogNorm, Normalize

    rows, cols = parse_layout(layout)
    if not specs:
        raise PlotInputError("no panels given")
    if len(specs) > rows * cols:
        raise PlotInputError(f"{len(specs)} panels do not fit a {rows}x{cols} layout")

    fig, axes = plt.subplots(
        rows, cols, figsize=(4.0 * cols, 3.2 * rows),
        squeeze=False, constrained_layout=True,
    )
    for ax in axes.ravel()[len(specs):]:
        ax.set_axis_off()

    for spec, ax in zip(specs, axes.ravel()):
        data = load_panel(spec)
        dens = data.density
        if spec.color_scale == "log":
            floor = float(dens[dens > 0.0].min())
            norm = LogNorm(vmin=floor, vmax=float(dens.max()))
            shown = np.maximum(dens, floor)
        else:
            norm = Normalize(vmin=0.0, vmax=float(dens.max()) or 1.0)
            shown = dens
        mesh = ax.pcolormesh(
            data.lambdas_um, data.alphas_deg, shown,
            norm=norm, cmap="inferno", shading="nearest", rasterized=True,
        )
        if data.theta0_deg is not None:
            ax.axhline(
                data.theta0_deg, color="w", linestyle="--", linewidth=1.0,
                label=r"$\theta_0$",
            )
            ax.legend(loc="upper right", fontsize=7, framealpha=0.4)
        ax.set_xlabel("wavelength (um)")
        ax.set_ylabel("emission angle (deg)")
        if spec.title:
            ax.set_title(spec.title, fontsize=9)
        fig.colorbar(mesh, ax=ax, label=data.units)
    return fig


def render_panels(
    specs: list[PanelSpec], layout: str = "1x1", out_path: str | None = None
) -> str:
    """Render the composite image; returns the written path.

    The PNG is byte-stable: identical inputs produce identical files (fixed
    Software tag, no timestamps).
    """
    fig = build_figure(specs, layout)
    path = out_path or specs[0].output_image_path
    try:
        fig.savefig(path, dpi=150, metadata={"Software": "ripplot"})
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)
    return path
