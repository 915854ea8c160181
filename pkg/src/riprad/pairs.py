"""Photon-pair correlation kinematics.

Each emitted pair satisfies g(a) + g(b) = 0 with g = beta*k_x - k, the
wavenumber form of k_x*v - omega (they differ by the positive constant c/n0,
so every sign statement carries over). sign(g) > 0 means inside the cone
(alpha < theta0), 0 on the cone, < 0 outside: the partner of an inside-cone
photon always lies outside the cone and vice versa.

The joint density here is explicitly unnormalized (the constraint-manifold
measure is left open); only ratios between pairs are meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MediumParams, PerturbationParams, PhotonMode, PolarizationBasis
from .errors import BelowThreshold, DegenerateConstraint, InvalidParam, NoPartnerSolution

_REL_EPS = 1e-12


@dataclass(frozen=True)
class PhotonPair:
    """Two correlated modes plus the constraint residual g(a) + g(b)."""

    a: PhotonMode
    b: PhotonMode
    residual: float

    def __post_init__(self):
        if abs(self.residual) > 1e-9 * (self.a.k + self.b.k):
            raise InvalidParam(
                f"pair violates the correlation constraint: residual = {self.residual}"
            )


def g_value(mode: PhotonMode, beta: float) -> float:
    """g = beta*k_x - k (rad/um); positive inside the cone, zero on it."""
    return mode.k * (beta * math.cos(mode.alpha) - 1.0)


def make_pair(a: PhotonMode, b: PhotonMode, beta: float) -> PhotonPair:
    return PhotonPair(a=a, b=b, residual=g_value(a, beta) + g_value(b, beta))


def solve_partner(
    mode: PhotonMode, partner_alpha: float, partner_phi: float, beta: float
) -> PhotonMode:
    """Partner mode in direction (partner_alpha, partner_phi) balancing g.

    k' = -g(mode) / (beta*cos(partner_alpha) - 1) where positive.

    Raises
    ------
    NoPartnerSolution
        Both directions on the same side of the cone (the sign condition
        fails): partners of inside-cone photons exist only outside, and vice
        versa.
    DegenerateConstraint
        Mode and partner direction both exactly on the cone; 0 = 0 admits any
        k' and no unique partner exists.
    """
    if not beta > 1.0:
        raise BelowThreshold(f"beta = {beta} <= 1: no pair kinematics")
    g = g_value(mode, beta)
    den = beta * math.cos(partner_alpha) - 1.0
    mode_on_cone = abs(g) <= _REL_EPS * mode.k
    direction_on_cone = abs(den) <= _REL_EPS * beta
    if mode_on_cone and direction_on_cone:
        raise DegenerateConstraint("both photons on the cone: any k' satisfies 0 = 0")
    if mode_on_cone or direction_on_cone:
        # k' = 0 or k' = inf; neither is a photon
        raise NoPartnerSolution("no positive partner wavenumber in this direction")
    k_prime = -g / den
    if k_prime <= 0.0:
        raise NoPartnerSolution(
            "both directions on the same side of the cone: no positive k'"
        )
    return PhotonMode(k=k_prime, alpha=partner_alpha, phi=partner_phi)


def polarization_sum_factor(a: PhotonMode, b: PhotonMode) -> float:
    """Sum over the two polarizations of a of [1 - (b_hat . e_mu)^2].

    Built from an explicit orthonormal basis; transversality collapses it to
    the closed form 1 + (a_hat . b_hat)^2, which is verified on every call.
    """
    basis = PolarizationBasis.for_mode(a)
    bhat = b.unit()
    val = 2.0 - float(bhat @ basis.e1) ** 2 - float(bhat @ basis.e2) ** 2
    closed = 1.0 + float(a.unit() @ bhat) ** 2
    if abs(val - closed) > 1e-12:
        raise AssertionError(
            f"polarization basis inconsistent with closed form: {val} vs {closed}"
        )
    return val


def joint_pair_density(
    pair: PhotonPair, medium: MediumParams, pert: PerturbationParams
) -> float:
    """Unnormalized joint density of a constrained pair.

    (k_a*k_b/n0^2) * exp(-sigma^2 |k_a + k_b|^2) * polarization factor, times
    2^5 sigma^6 pi^2 (eta^2/n0^6) / beta^2. Use only for ratios between pairs.
    """
    if abs(pair.residual) > 1e-9 * (pair.a.k + pair.b.k):
        raise InvalidParam("pair residual exceeds tolerance")
    n0 = medium.n0
    qvec = pair.a.vector() + pair.b.vector()
    q_sq = float(qvec @ qvec)
    const = 32.0 * pert.sigma**6 * math.pi**2 * pert.eta**2 / (n0**6 * pert.beta**2)
    return (
        const
        * (pair.a.k * pair.b.k / n0**2)
        * math.exp(-pert.sigma**2 * q_sq)
        * polarization_sum_factor(pair.a, pair.b)
    )
