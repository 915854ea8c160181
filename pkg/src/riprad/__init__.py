"""Photon-pair emission from a superluminally moving Gaussian index bump."""
from __future__ import annotations

from .core import (
    KinematicFactors,
    MediumParams,
    PerturbationParams,
    PhotonMode,
    PolarizationBasis,
    emission_integrand,
    f_of_r,
    kerr_eta,
    kinematics,
    mode_from_angle_wavelength,
    wavelength_of,
    xi_exact,
    xi_linearized,
)
from .errors import (
    BelowThreshold,
    DegenerateConstraint,
    InvalidParam,
    NonConvergence,
    NoPartnerSolution,
    PerturbativeValidity,
)
from .pairs import (
    PhotonPair,
    g_value,
    joint_pair_density,
    make_pair,
    polarization_sum_factor,
    solve_partner,
)
from .quadrature import QuadratureOptions, QuadratureResult, integrate_1d, integrate_I
from .spectra import (
    DetectorSpec,
    SpectrumGrid,
    density_at,
    find_peak,
    integrated_counts,
    spectrum_grid,
)
from .validate import OracleReport, brute_force_density, run_validation_suite, xi_fourier_analytic

__version__ = "0.1.0"

__all__ = [
    "BelowThreshold",
    "DegenerateConstraint",
    "DetectorSpec",
    "InvalidParam",
    "KinematicFactors",
    "MediumParams",
    "NoPartnerSolution",
    "NonConvergence",
    "OracleReport",
    "PerturbationParams",
    "PerturbativeValidity",
    "PhotonMode",
    "PhotonPair",
    "PolarizationBasis",
    "QuadratureOptions",
    "QuadratureResult",
    "SpectrumGrid",
    "brute_force_density",
    "density_at",
    "emission_integrand",
    "f_of_r",
    "find_peak",
    "g_value",
    "integrate_1d",
    "integrate_I",
    "integrated_counts",
    "joint_pair_density",
    "kerr_eta",
    "kinematics",
    "make_pair",
    "mode_from_angle_wavelength",
    "polarization_sum_factor",
    "run_validation_suite",
    "solve_partner",
    "spectrum_grid",
    "wavelength_of",
    "xi_exact",
    "xi_fourier_analytic",
    "xi_linearized",
]
