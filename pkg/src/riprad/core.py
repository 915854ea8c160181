"""Domain types and closed-form expressions for superluminal RIP pair emission.

Unit conventions, used everywhere in this package:

- lengths in micrometres (um); the interaction length L is stored in um even
  though interfaces accept centimetres,
- wavenumbers k in rad/um; ``omega`` fields hold omega/c = k/n0 (also rad/um),
  so the speed of light never appears in a formula,
- angles in radians internally, degrees only at the CLI,
- wavelengths are vacuum wavelengths, lambda = 2*pi*n0/k; the in-medium
  wavelength is lambda/n0.

The moving perturbation is a Gaussian index bump of amplitude eta and radius
sigma travelling along +x at speed ratio beta = n0*v/c; emission exists only
for beta > 1, with cone angle theta0 = arccos(1/beta) and gamma^2 = 1/(beta^2-1).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BelowThreshold, InvalidParam, PerturbativeValidity

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MediumParams:
    """Background medium: refractive index n0 and optional Kerr index n2 (cm^2/W)."""

    n0: float
    n2: float | None = None

    def __post_init__(self):
        if not (self.n0 >= 1.0 and math.isfinite(self.n0)):
            raise InvalidParam(f"n0 must be >= 1, got {self.n0}")
        if self.n2 is not None and not (self.n2 >= 0.0 and math.isfinite(self.n2)):
            raise InvalidParam(f"n2 must be >= 0 when present, got {self.n2}")


@dataclass(frozen=True)
class PerturbationParams:
    """Moving index perturbation: amplitude eta, radius sigma (um), speed ratio
    beta = n0*v/c, and interaction length length_L (um)."""

    eta: float
    sigma: float
    beta: float
    length_L: float

    def __post_init__(self):
        for name in ("eta", "sigma", "beta", "length_L"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise InvalidParam(f"{name} must be positive and finite, got {v}")

    @classmethod
    def with_length_cm(cls, eta: float, sigma: float, beta: float, length_cm: float):
        # 1 cm = 1e4 um, exact in binary floating point
        return cls(eta=eta, sigma=sigma, beta=beta, length_L=length_cm * 1.0e4)


def check_perturbative(medium: MediumParams, pert: PerturbationParams) -> None:
    """Warn (never reject) when eta/n0 >= 0.1 and the linearization degrades."""
    ratio = pert.eta / medium.n0
    if ratio >= 0.1:
        warnings.warn(
            f"eta/n0 = {ratio:.3g} >= 0.1; first-order xi is inaccurate",
            PerturbativeValidity,
            stacklevel=3,
        )


@dataclass(frozen=True)
class KinematicFactors:
    """beta, gamma^2 = 1/(beta^2-1) and cone half-angle theta0 = arccos(1/beta)."""

    beta: float
    gamma_sq: float
    theta0: float

    def __post_init__(self):
        if not self.beta > 1.0:
            raise BelowThreshold(f"beta = {self.beta} <= 1: no emission")


def kinematics(medium: MediumParams, beta: float) -> KinematicFactors:
    """Kinematic factors for speed ratio beta = n0*v/c.

    Raises
    ------
    BelowThreshold
        For beta <= 1. Callers computing densities map this to exactly 0.
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise InvalidParam(f"beta must be positive and finite, got {beta}")
    if beta <= 1.0:
        raise BelowThreshold(f"beta = {beta} <= 1: no emission")
    return KinematicFactors(
        beta=beta,
        gamma_sq=1.0 / (beta * beta - 1.0),
        theta0=math.acos(1.0 / beta),
    )


def kerr_eta(n2: float, intensity: float) -> float:
    """eta = n2 * I for Kerr index n2 (cm^2/W) and pump intensity I (W/cm^2)."""
    if n2 < 0.0 or intensity < 0.0:
        raise InvalidParam("n2 and intensity must be non-negative")
    return n2 * intensity


@dataclass(frozen=True)
class PhotonMode:
    """One emitted photon: wavenumber magnitude k (rad/um), polar angle alpha
    from the propagation axis x, and azimuth phi.

    Derived fields follow the dispersion omega = c*k/n0; ``omega(n0)`` returns
    omega/c in rad/um so no constant c is needed.
    """

    k: float
    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise InvalidParam(f"k must be positive, got {self.k}")
        if not 0.0 <= self.alpha <= math.pi:
            raise InvalidParam(f"alpha must lie in [0, pi], got {self.alpha}")
        if not 0.0 <= self.phi < TWO_PI:
            raise InvalidParam(f"phi must lie in [0, 2*pi), got {self.phi}")

    @property
    def k_x(self) -> float:
        return self.k * math.cos(self.alpha)

    @property
    def k_perp(self) -> float:
        return self.k * math.sin(self.alpha)

    def omega(self, n0: float) -> float:
        """omega/c = k/n0, in rad/um."""
        return self.k / n0

    def vector(self) -> np.ndarray:
        """Cartesian wavevector (k_x, k_y, k_z)."""
        kp = self.k_perp
        return np.array(
            [self.k_x, kp * math.cos(self.phi), kp * math.sin(self.phi)]
        )

    def unit(self) -> np.ndarray:
        return self.vector() / self.k


def mode_from_angle_wavelength(
    alpha: float, lambda_vac: float, medium: MediumParams, phi: float = 0.0
) -> PhotonMode:
    """Mode at polar angle alpha with vacuum wavelength lambda_vac (um).

    k = 2*pi*n0/lambda_vac, so that omega = c*k/n0 corresponds to the vacuum
    wavelength 2*pi*c/omega.
    """
    if not (lambda_vac > 0.0 and math.isfinite(lambda_vac)):
        raise InvalidParam(f"wavelength must be positive, got {lambda_vac}")
    return PhotonMode(k=TWO_PI * medium.n0 / lambda_vac, alpha=alpha, phi=phi)


def wavelength_of(mode: PhotonMode, medium: MediumParams) -> float:
    """Vacuum wavelength 2*pi*n0/k (um); inverse of mode_from_angle_wavelength."""
    return TWO_PI * medium.n0 / mode.k


@dataclass(frozen=True)
class PolarizationBasis:
    """Two unit vectors orthogonal to k-hat and to each other."""

    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def for_mode(cls, mode: PhotonMode) -> "PolarizationBasis":
        khat = mode.unit()
        ref = np.array([0.0, 0.0, 1.0])
        if abs(khat @ ref) > 0.9:
            ref = np.array([1.0, 0.0, 0.0])
        e1 = np.cross(ref, khat)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(khat, e1)
        return cls(e1=e1, e2=e2)


def xi_exact(position, medium: MediumParams, pert: PerturbationParams) -> float:
    """Interaction strength xi = (1/eps - 1/eps_b)/2 at comoving point (u, y, z).

    eps = n0^2 + 2*n0*eta*exp(-(u^2+y^2+z^2)/(2 sigma^2)); eps_b = n0^2.
    Negative everywhere for eta > 0 (an index bump lowers 1/eps).
    """
    u, y, z = (float(c) for c in position)
    n0 = medium.n0
    gauss = math.exp(-(u * u + y * y + z * z) / (2.0 * pert.sigma**2))
    eps = n0 * n0 + 2.0 * n0 * pert.eta * gauss
    return 0.5 * (1.0 / eps - 1.0 / (n0 * n0))


def xi_linearized(position, medium: MediumParams, pert: PerturbationParams) -> float:
    """First order of xi_exact in eta: -(eta/n0^3) * exp(-|r|^2 / (2 sigma^2))."""
    check_perturbative(medium, pert)
    u, y, z = (float(c) for c in position)
    gauss = math.exp(-(u * u + y * y + z * z) / (2.0 * pert.sigma**2))
    return -(pert.eta / medium.n0**3) * gauss


def _delta(mode: PhotonMode, kin: KinematicFactors) -> float:
    # Delta = k - beta*k_x, written as k*(1 - beta*cos(alpha)) to avoid
    # cancellation near the cone
    return mode.k * (1.0 - kin.beta * math.cos(mode.alpha))


def f_of_r(r, mode: PhotonMode, kin: KinematicFactors, sigma: float):
    """Scaled partner axial wavenumber f(r), vectorized over r (dimensionless).

    f(r) = beta*gamma^2*sigma*Delta + sqrt(gamma^4*sigma^2*Delta^2 + gamma^2*r^2)
    with Delta = k - beta*k_x. Continuous and non-decreasing in r; f(0) has the
    sign of Delta.
    """
    r = np.asarray(r, dtype=float)
    g2 = kin.gamma_sq
    sd = sigma * _delta(mode, kin)
    return kin.beta * g2 * sd + np.sqrt(g2 * g2 * sd * sd + g2 * r * r)


def emission_integrand(r, theta, mode: PhotonMode, kin: KinematicFactors, sigma: float):
    """Integrand of the reduced pair integral I(beta, sigma, k) at (r, theta).

    Broadcasts over r and theta (pass r as a column and theta as a row to get
    the full quadrature matrix in one call). All four factors are non-negative
    for beta > 1; the removable singularity at r = f = 0 (possible only
    on-cone) is defined as 0 by continuity.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    beta, g2 = kin.beta, kin.gamma_sq
    k, kx, kp = mode.k, mode.k_x, mode.k_perp
    skx = sigma * kx
    skp = sigma * kp
    sd = sigma * _delta(mode, kin)

    f = f_of_r(r, mode, kin, sigma)
    root = np.sqrt(g2 * g2 * sd * sd + g2 * r * r)  # root term of f, sqrt(g^4 s^2 D^2 + g^2 r^2)
    x = r * r + f * f
    cos_t = np.cos(theta)

    # sigma^2*k_perp^2 + r^2 + 2*r*sigma*k_perp*cos >= (r - sigma*k_perp)^2, so
    # expo >= 0 and exp() can only underflow, never overflow
    expo = skp * skp + r * r + 2.0 * r * skp * cos_t + (skx + f) ** 2
    angular = (kp * r * cos_t + kx * f) ** 2 / (k * k * np.where(x > 0.0, x, 1.0))
    angular = np.where(x > 0.0, angular, 0.0)
    # root = 0 only when sd = 0 and r = 0; the ratio limit is then 0
    bracket = beta + g2 * sd / np.where(root > 0.0, root, 1.0)
    out = r * np.sqrt(x) * np.exp(-expo) * angular * bracket
    if out.ndim == 0:
        return float(out)
    return out
