"""Command-line interface: spectrum, peak, counts, partner, validate.

Configuration is a flat INI file; every physical key carries its unit in the
name (sigma_um, length_cm, rep_rate_hz, ...). Angles are degrees here and
radians inside. Densities are written with 17 significant digits and config
floats with repr(), so identical configs give byte-identical output and the
metadata sidecar reconstructs the RunConfig exactly.

Exit codes: 0 success, 2 invalid input, 3 convergence degradation (> 1% of
grid cells unconverged), 4 kinematic no-solution. The validate command exits
0 only when every oracle passes.
"""
from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import core, pairs, spectra
from . import validate as oracles
from .errors import (
    BelowThreshold,
    DegenerateConstraint,
    InvalidParam,
    NoPartnerSolution,
)
from .quadrature import QuadratureOptions

VERSION = "0.1.0"
_DENSITY_FMT = "%.17g"


@dataclass(frozen=True)
class RunConfig:
    # medium
    n0: float = 1.5
    n2: float | None = None
    # perturbation; eta and intensity_w_cm2 are alternatives (see resolved_eta)
    eta: float | None = 0.01
    intensity_w_cm2: float | None = None
    sigma_um: float = 1.0
    beta: float = 1.1
    length_cm: float = 5.0
    # grid
    alpha_min_deg: float = 0.0
    alpha_max_deg: float = 90.0
    n_alpha: int = 100
    lambda_min_um: float = 0.5
    lambda_max_um: float = 10.0
    n_lambda: int = 100
    # quadrature
    rel_tol: float = 1e-6
    max_refinements: int = 12
    r_cutoff_sigmas: float = 10.0
    initial_nodes_r: int = 64
    initial_nodes_theta: int = 64
    # detector
    half_angle_deg: float = 20.0
    det_lambda_min_um: float = 1.0
    det_lambda_max_um: float = 12.0
    rep_rate_hz: float = 1000.0
    # flags
    polarization_sum: bool = False
    per_lambda_density: bool = False

    def resolved_eta(self) -> float:
        if self.eta is None and self.intensity_w_cm2 is None:
            raise InvalidParam("supply eta or intensity_w_cm2")
        if self.intensity_w_cm2 is not None:
            if self.n2 is None:
                raise InvalidParam("intensity_w_cm2 needs n2 in [medium]")
            eta_kerr = core.kerr_eta(self.n2, self.intensity_w_cm2)
            if self.eta is not None and abs(self.eta - eta_kerr) > 1e-9 * abs(self.eta):
                raise InvalidParam(
                    f"eta = {self.eta} and n2*I = {eta_kerr} disagree beyond 1e-9"
                )
            return self.eta if self.eta is not None else eta_kerr
        return self.eta

    def medium(self) -> core.MediumParams:
        return core.MediumParams(n0=self.n0, n2=self.n2)

    def perturbation(self) -> core.PerturbationParams:
        return core.PerturbationParams.with_length_cm(
            eta=self.resolved_eta(),
            sigma=self.sigma_um,
            beta=self.beta,
            length_cm=self.length_cm,
        )

    def quadrature(self) -> QuadratureOptions:
        return QuadratureOptions(
            rel_tol=self.rel_tol,
            max_refinements=self.max_refinements,
            r_cutoff_sigmas=self.r_cutoff_sigmas,
            initial_nodes_r=self.initial_nodes_r,
            initial_nodes_theta=self.initial_nodes_theta,
        )

    def detector(self) -> spectra.DetectorSpec:
        return spectra.DetectorSpec(
            half_angle=math.radians(self.half_angle_deg),
            lambda_min=self.det_lambda_min_um,
            lambda_max=self.det_lambda_max_um,
            rep_rate=self.rep_rate_hz,
        )


# section -> {ini key: (RunConfig field, type tag)}; "optfloat" keys may be absent
_SCHEMA: dict[str, dict[str, tuple[str, str]]] = {
    "medium": {"n0": ("n0", "float"), "n2": ("n2", "optfloat")},
    "perturbation": {
        "eta": ("eta", "optfloat"),
        "intensity_w_cm2": ("intensity_w_cm2", "optfloat"),
        "sigma_um": ("sigma_um", "float"),
        "beta": ("beta", "float"),
        "length_cm": ("length_cm", "float"),
    },
    "grid": {
        "alpha_min_deg": ("alpha_min_deg", "float"),
        "alpha_max_deg": ("alpha_max_deg", "float"),
        "n_alpha": ("n_alpha", "int"),
        "lambda_min_um": ("lambda_min_um", "float"),
        "lambda_max_um": ("lambda_max_um", "float"),
        "n_lambda": ("n_lambda", "int"),
    },
    "quadrature": {
        "rel_tol": ("rel_tol", "float"),
        "max_refinements": ("max_refinements", "int"),
        "r_cutoff_sigmas": ("r_cutoff_sigmas", "float"),
        "initial_nodes_r": ("initial_nodes_r", "int"),
        "initial_nodes_theta": ("initial_nodes_theta", "int"),
    },
    "detector": {
        "half_angle_deg": ("half_angle_deg", "float"),
        "lambda_min_um": ("det_lambda_min_um", "float"),
        "lambda_max_um": ("det_lambda_max_um", "float"),
        "rep_rate_hz": ("rep_rate_hz", "float"),
    },
    "flags": {
        "polarization_sum": ("polarization_sum", "bool"),
        "per_lambda_density": ("per_lambda_density", "bool"),
    },
}


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise InvalidParam(f"not a boolean: {raw!r}")


def config_from_text(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidParam(f"malformed config: {exc}") from exc
    overrides: dict[str, object] = {}
    for section, keys in _SCHEMA.items():
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            if key not in keys:
                raise InvalidParam(f"unknown key [{section}] {key}")
            field, kind = keys[key]
            try:
                if kind == "int":
                    overrides[field] = int(raw)
                elif kind == "bool":
                    overrides[field] = _parse_bool(raw)
                else:
                    overrides[field] = float(raw)
            except ValueError as exc:
                raise InvalidParam(f"bad value for [{section}] {key}: {raw!r}") from exc
    # an explicit intensity without an explicit eta replaces the eta default
    if "intensity_w_cm2" in overrides and "eta" not in overrides:
        overrides["eta"] = None
    return replace(RunConfig(), **overrides)


def parse_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_text(fh.read())


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def serialize_config(cfg: RunConfig) -> str:
    lines: list[str] = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (field, _) in keys.items():
            value = getattr(cfg, field)
            if value is None:
                continue
            lines.append(f"{key} = {_fmt_value(value)}")
        lines.append("")
    return "\n".join(lines)


def metadata_text(cfg: RunConfig, command: str, run_fields: dict[str, str]) -> str:
    below = cfg.beta <= 1.0
    lines = [
        "[artifact]",
        "name = riprad",
        f"version = {VERSION}",
        "format = 1",
        "",
        "[run]",
        f"command = {command}",
        f"below_threshold = {'true' if below else 'false'}",
    ]
    if below:
        lines.append("note = below threshold: beta <= 1, all densities exactly zero")
    else:
        theta0 = math.acos(1.0 / cfg.beta)
        lines.append(f"theta0_rad = {theta0!r}")
        lines.append(f"theta0_deg = {math.degrees(theta0)!r}")
    if cfg.per_lambda_density:
        lines.append("density_units = per steradian per um of vacuum wavelength")
    else:
        lines.append("density_units = per steradian per (rad/um)")
    lines.append("lambda_convention = vacuum, lambda = 2*pi*n0/k; in-medium = lambda/n0")
    for key, value in run_fields.items():
        lines.append(f"{key} = {value}")
    lines.extend(["", ""])
    return "\n".join(lines) + serialize_config(cfg)


def parse_metadata(path: str) -> RunConfig:
    """Reconstruct the RunConfig from a metadata sidecar (or a config file)."""
    return parse_config(path)


def _density_view(grid: spectra.SpectrumGrid, cfg: RunConfig) -> np.ndarray:
    if not cfg.per_lambda_density:
        return grid.density
    jac = 2.0 * math.pi * cfg.n0 / grid.lambdas**2  # |dk/dlambda|
    return grid.density * jac[None, :]


def write_spectrum_csv(path: str, grid: spectra.SpectrumGrid, cfg: RunConfig) -> None:
    dens = _density_view(grid, cfg)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("alpha_deg,lambda_um,density\n")
        for i in range(len(grid.alphas)):
            a_deg = repr(math.degrees(float(grid.alphas[i])))
            for j in range(len(grid.lambdas)):
                fh.write(
                    f"{a_deg},{float(grid.lambdas[j])!r},{_DENSITY_FMT % dens[i, j]}\n"
                )


def _build_grid(cfg: RunConfig, threads: int) -> spectra.SpectrumGrid:
    return spectra.spectrum_grid(
        cfg.medium(),
        cfg.perturbation(),
        (math.radians(cfg.alpha_min_deg), math.radians(cfg.alpha_max_deg)),
        (cfg.lambda_min_um, cfg.lambda_max_um),
        cfg.n_alpha,
        cfg.n_lambda,
        cfg.quadrature(),
        threads=threads,
        polarization_sum=cfg.polarization_sum,
    )


def _emit(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_spectrum(cfg: RunConfig, out_path: str, threads: int) -> int:
    grid = _build_grid(cfg, threads)
    write_spectrum_csv(out_path, grid, cfg)
    total = grid.density.size
    bad = grid.unconverged_cells
    meta = metadata_text(
        cfg,
        "spectrum",
        {"cells_total": str(total), "cells_unconverged": str(bad)},
    )
    with open(out_path + ".meta", "w", encoding="utf-8", newline="") as fh:
        fh.write(meta)
    sys.stdout.write(f"wrote {out_path} ({total} cells, {bad} unconverged)\n")
    return 3 if bad > 0.01 * total else 0


def cmd_peak(cfg: RunConfig, out_path: str | None, threads: int) -> int:
    grid = _build_grid(cfg, threads)
    if cfg.per_lambda_density:
        grid = spectra.SpectrumGrid(
            grid.alphas,
            grid.lambdas,
            _density_view(grid, cfg),
            grid.params_snapshot,
            grid.convergence_flags,
        )
    lam, alpha, value = spectra.find_peak(grid)
    text = (
        f"lambda_max_um = {lam!r}\n"
        f"alpha_max_deg = {math.degrees(alpha)!r}\n"
        f"value = {_DENSITY_FMT % value}\n"
    )
    _emit(text, out_path)
    return 0


def cmd_counts(cfg: RunConfig, out_path: str | None) -> int:
    photons, per_second = spectra.integrated_counts(
        cfg.medium(),
        cfg.perturbation(),
        cfg.detector(),
        cfg.quadrature(),
        polarization_sum=cfg.polarization_sum,
    )
    text = (
        f"photons_per_pulse = {_DENSITY_FMT % photons}\n"
        f"counts_per_second = {_DENSITY_FMT % per_second}\n"
    )
    _emit(text, out_path)
    return 0


def cmd_partner(
    cfg: RunConfig,
    alpha_deg: float,
    lambda_um: float,
    partner_alpha_deg: float,
    partner_phi_deg: float,
    out_path: str | None,
) -> int:
    medium = cfg.medium()
    mode = core.mode_from_angle_wavelength(
        math.radians(alpha_deg), lambda_um, medium
    )
    partner = pairs.solve_partner(
        mode,
        math.radians(partner_alpha_deg),
        math.radians(partner_phi_deg % 360.0),
        cfg.beta,
    )
    pair = pairs.make_pair(mode, partner, cfg.beta)
    text = (
        f"k_prime_rad_per_um = {partner.k!r}\n"
        f"lambda_prime_um = {core.wavelength_of(partner, medium)!r}\n"
        f"partner_alpha_deg = {math.degrees(partner.alpha)!r}\n"
        f"g_photon = {pairs.g_value(mode, cfg.beta)!r}\n"
        f"g_partner = {pairs.g_value(partner, cfg.beta)!r}\n"
        f"residual = {pair.residual!r}\n"
    )
    _emit(text, out_path)
    return 0


def cmd_validate(cfg: RunConfig, out_path: str | None, budget: float | None) -> int:
    budgets = {"pair_integral": budget} if budget is not None else None
    reports = oracles.run_validation_suite(
        cfg.medium(), cfg.perturbation(), budgets=budgets, opts=cfg.quadrature()
    )
    blocks = []
    for idx, r in enumerate(reports, start=1):
        blocks.append(
            f"[oracle.{idx}]\n"
            f"quantity_name = {r.quantity_name}\n"
            f"reference_value = {r.reference_value!r}\n"
            f"artifact_value = {r.artifact_value!r}\n"
            f"rel_error = {r.rel_error!r}\n"
            f"budget = {r.budget!r}\n"
            f"passed = {'true' if r.passed else 'false'}\n"
        )
    text = "\n".join(blocks)
    _emit(text, out_path)
    return 0 if all(r.passed for r in reports) else 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="INI config file; defaults match Fig. 1(a)")
    sub.add_argument("--out", help="output path")
    sub.add_argument("--threads", type=int, default=1, help="worker processes for grids")
    sub.add_argument("--tol", type=float, help="override quadrature rel_tol")


def _load(args: argparse.Namespace) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    if args.tol is not None:
        cfg = replace(cfg, rel_tol=args.tol)
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="riprad",
        description="Photon-pair emission spectra of a superluminal Gaussian "
        "refractive-index perturbation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "peak", "counts", "partner", "validate"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "partner":
            p.add_argument("--alpha-deg", type=float, required=True)
            p.add_argument("--lambda-um", type=float, required=True)
            p.add_argument("--partner-alpha-deg", type=float, required=True)
            p.add_argument("--partner-phi-deg", type=float, default=0.0)
        if name == "validate":
            p.add_argument("--budget", type=float, help="override the pair-integral budget")
    args = parser.parse_args(argv)

    try:
        cfg = _load(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.out or "spectrum.csv", args.threads)
        if args.command == "peak":
            return cmd_peak(cfg, args.out, args.threads)
        if args.command == "counts":
            return cmd_counts(cfg, args.out)
        if args.command == "partner":
            return cmd_partner(
                cfg,
                args.alpha_deg,
                args.lambda_um,
                args.partner_alpha_deg,
                args.partner_phi_deg,
                args.out,
            )
        if args.command == "validate":
            return cmd_validate(cfg, args.out, args.budget)
    except InvalidParam as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoPartnerSolution, DegenerateConstraint, BelowThreshold) as exc:
        print(f"no kinematic solution: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
