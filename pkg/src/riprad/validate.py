"""Independent brute-force oracles for the reduced closed forms.

Two oracles certify the two nontrivial reductions:

1. The Fourier transform of the linearized interaction profile against the
   analytic Gaussian transform.
2. The full 3D partner-momentum integral, with the squared delta replaced by
   its finite-interaction-length regularization [delta(x)]^2 -> (L/2pi),
   N_w(x) standing in for the remaining delta, against the reduced 2D
   integral behind density_at. This is the single most important unstated
   step between the pair-number formula and the printed spectral density, so
   it is encoded here from its own side of the derivation (the constant chain
   below never reuses the reduced-form prefactor).

The delta broadening w converges O(w^2) except near the cone at beta close to
1, where the constraint surface crosses the k' = 0 pinch; default sample
points avoid that regime (see the decisions ledger).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import core, spectra
from .core import MediumParams, PerturbationParams, PhotonMode
from .errors import BelowThreshold, InvalidParam, NonConvergence
from .quadrature import QuadratureOptions, integrate_I


@dataclass(frozen=True)
class OracleReport:
    quantity_name: str
    reference_value: float
    artifact_value: float
    rel_error: float
    budget: float
    passed: bool


def _report(name: str, reference: float, artifact: float, budget: float) -> OracleReport:
    reference, artifact = float(reference), float(artifact)
    rel = abs(artifact - reference) / max(abs(reference), 1e-300)
    return OracleReport(name, reference, artifact, rel, budget, rel <= budget)


def xi_fourier_analytic(
    q_u: float, k_y: float, k_z: float, medium: MediumParams, pert: PerturbationParams
) -> float:
    """FT of the linearized xi: -(eta/n0^3) (2pi)^{3/2} sigma^3 e^{-sigma^2 q^2/2}."""
    s = pert.sigma
    q_sq = q_u * q_u + k_y * k_y + k_z * k_z
    return -(pert.eta / medium.n0**3) * (2.0 * math.pi) ** 1.5 * s**3 * math.exp(
        -(s * s) * q_sq / 2.0
    )


def xi_fourier_numeric(
    q_u: float,
    k_y: float,
    k_z: float,
    medium: MediumParams,
    pert: PerturbationParams,
    n_nodes: int = 96,
    half_width_sigmas: float = 8.5,
) -> float:
    """Direct 3D quadrature of the defining integral int d3r xi_lin e^{i q.r}.

    xi_lin is even, so the transform is real and the integrand reduces to
    xi_lin * cos(q.r); tensor Gauss-Legendre on the truncated cube.
    """
    s = pert.sigma
    r = half_width_sigmas * s
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    x = x * r
    w = w * r
    u = x[:, None, None]
    y = x[None, :, None]
    z = x[None, None, :]
    gauss = np.exp(-(u * u + y * y + z * z) / (2.0 * s * s))
    phase = np.cos(q_u * u + k_y * y + k_z * z)
    amp = -(pert.eta / medium.n0**3)
    www = w[:, None, None] * w[None, :, None] * w[None, None, :]
    return float(amp * np.sum(www * gauss * phase))


@dataclass(frozen=True)
class PairGridSpec:
    """Discretization of the 3D partner integral in spherical q coordinates.

    q = k + k' is integrated on a radial midpoint grid, Gauss-Legendre in
    mu = cos(theta_q) and midpoint in the azimuth; q_max only needs to clear
    the e^{-sigma^2 q^2} support.
    """

    n_q: int
    n_mu: int = 160
    n_phi: int = 96
    q_max: float = 0.0  # 0 means 8.5/sigma

    def __post_init__(self):
        if self.n_q < 16 or self.n_mu < 16 or self.n_phi < 16:
            raise InvalidParam("pair grid too coarse to mean anything")


def default_delta_width(pert: PerturbationParams) -> float:
    # all inverse length scales in the integrand go like 1/sigma
    return 0.03 / pert.sigma


def brute_force_density(
    mode: PhotonMode,
    medium: MediumParams,
    pert: PerturbationParams,
    delta_width: float | None = None,
    grid: PairGridSpec | None = None,
    width_audit_budget: float | None = None,
) -> float:
    """Direct 3D evaluation of the pair integral, comparable to density_at.

    Replaces [delta]^2 by (L/2pi) * N_w with N_w a normalized Gaussian of
    width delta_width, applies the continuum limit sum_k' -> V d3k'/(2pi)^3
    (V cancels against the mode normalization), and multiplies by the k^2 dk
    dOmega measure with the omega_k omega_k' product. Returns 0 for beta <= 1
    (empty delta support).

    With width_audit_budget set, re-evaluates at delta_width/2 and warns
    NonConvergence when the two differ by more than the budget relatively.
    """
    beta = pert.beta
    if beta <= 1.0:
        return 0.0
    if delta_width is None:
        delta_width = default_delta_width(pert)
    sigma = pert.sigma
    if grid is None:
        q_max = 8.5 / sigma
        grid = PairGridSpec(n_q=int(math.ceil(q_max / (delta_width / 3.0))))
    q_max = grid.q_max if grid.q_max > 0.0 else 8.5 / sigma

    def raw(w: float, n_q: int) -> float:
        k = mode.k
        kvec = mode.vector()
        q = (np.arange(n_q) + 0.5) * (q_max / n_q)
        mu, w_mu = np.polynomial.legendre.leggauss(grid.n_mu)
        phi = (np.arange(grid.n_phi) + 0.5) * (2.0 * math.pi / grid.n_phi)
        d_q = q_max / n_q
        d_phi = 2.0 * math.pi / grid.n_phi
        total = 0.0
        for m, wm in zip(mu, w_mu):
            s_mu = math.sqrt(1.0 - m * m)
            qx = q[:, None] * m
            qy = q[:, None] * s_mu * np.cos(phi)[None, :]
            qz = q[:, None] * s_mu * np.sin(phi)[None, :]
            kpx = qx - kvec[0]
            kpy = qy - kvec[1]
            kpz = qz - kvec[2]
            kp = np.sqrt(kpx * kpx + kpy * kpy + kpz * kpz)
            arg = qx - (k + kp) / beta
            n_w = np.exp(-(arg * arg) / (2.0 * w * w)) / (w * math.sqrt(2.0 * math.pi))
            cos_sq = np.where(
                kp > 0.0,
                ((kvec[0] * kpx + kvec[1] * kpy + kvec[2] * kpz) / (k * np.where(kp > 0.0, kp, 1.0)))
                ** 2,
                0.0,
            )
            shell = kp * np.exp(-(sigma * sigma) * (q[:, None] ** 2)) * n_w * cos_sq
            total += wm * float(np.sum(shell * (q[:, None] ** 2))) * d_q * d_phi
        return total

    # constant chain from the pair-number side, kept independent of spectra's
    # prefactor: Nkmu constant, [delta]^2 -> L/2pi, continuum measure, and the
    # k^2 dk dOmega conversion with omega_k*omega_k'/c^2 = k*k'/n0^2 (the n0^2
    # and one k' live inside the integrand's normalization already)
    const = 32.0 * math.pi**2 * sigma**6 * pert.eta**2 / (beta**2 * medium.n0**6)
    const *= pert.length_L / (2.0 * math.pi)
    const /= (2.0 * math.pi) ** 3
    const *= mode.k**3

    value = const * raw(delta_width, grid.n_q)
    if width_audit_budget is not None:
        halved = const * raw(delta_width / 2.0, 2 * grid.n_q)
        change = abs(halved - value) / max(abs(halved), 1e-300)
        if change > width_audit_budget:
            warnings.warn(
                f"brute_force_density: halving delta_width moved the result by "
                f"{change:.3g} (> {width_audit_budget:.3g})",
                NonConvergence,
                stacklevel=2,
            )
    return value


def default_sample_points(
    medium: MediumParams, pert: PerturbationParams
) -> list[tuple[float, float]]:
    """(alpha, lambda_vac) oracle anchors adapted to beta.

    For beta < 1.2 the broadened delta is biased on and outside the cone (the
    k' = 0 pinch sits on the constraint surface there), so the anchors stay
    inside the cone; for larger beta they straddle it.
    """
    kin = core.kinematics(medium, pert.beta)
    lam = 3.0 * pert.sigma
    th0 = kin.theta0
    if pert.beta < 1.2:
        fracs = (0.4, 0.6, 0.8)
        return [(f * th0, lam) for f in fracs]
    return [(0.6 * th0, lam), (th0, lam), (min(th0 + math.radians(8.0), math.pi), lam)]


def run_validation_suite(
    medium: MediumParams,
    pert: PerturbationParams,
    sample_points: list[tuple[float, float]] | None = None,
    budgets: dict[str, float] | None = None,
    opts: QuadratureOptions = QuadratureOptions(),
    delta_width: float | None = None,
) -> list[OracleReport]:
    """Both oracles plus the quadrature self-convergence audit.

    Failures are reported (passed=False), never raised. Needs at least three
    sample points; the default set adapts to beta.
    """
    below = pert.beta <= 1.0
    if sample_points is None:
        sample_points = (
            [(0.2, 3.0 * pert.sigma), (0.4, 3.0 * pert.sigma), (0.6, 3.0 * pert.sigma)]
            if below
            else default_sample_points(medium, pert)
        )
    if len(sample_points) < 3:
        raise InvalidParam("validation needs at least 3 sample points")
    b = {
        "pair_integral": 0.05 if pert.beta < 1.2 else 0.02,
        "fourier": 1e-6,
        "self_convergence": 1e-5,
    }
    if budgets:
        b.update(budgets)

    reports: list[OracleReport] = []
    for alpha, lam in sample_points:
        mode = core.mode_from_angle_wavelength(alpha, lam, medium)
        art = spectra.density_at(mode, medium, pert, opts)
        ref = brute_force_density(mode, medium, pert, delta_width=delta_width)
        reports.append(
            _report(
                f"pair_integral alpha={math.degrees(alpha):.2f}deg lambda={lam:.4g}um",
                ref,
                art,
                b["pair_integral"],
            )
        )

    rng = np.random.default_rng(7)
    worst = None
    for _ in range(20):
        q = rng.uniform(-2.5, 2.5, size=3) / pert.sigma
        ref = xi_fourier_numeric(q[0], q[1], q[2], medium, pert)
        art = xi_fourier_analytic(q[0], q[1], q[2], medium, pert)
        rel = abs(art - ref) / max(abs(ref), 1e-300)
        if worst is None or rel > worst[0]:
            worst = (rel, ref, art)
    reports.append(
        _report("xi_fourier_transform(worst of 20 random q)", worst[1], worst[2], b["fourier"])
    )

    if below:
        reports.append(_report("quadrature_self_convergence", 0.0, 0.0, b["self_convergence"]))
        return reports
    kin = core.kinematics(medium, pert.beta)
    worst_sc = None
    for alpha, lam in sample_points:
        mode = core.mode_from_angle_wavelength(alpha, lam, medium)
        res = integrate_I(mode, kin, pert.sigma, opts)
        if not res.converged:
            # no converged state to audit; report the refinement residual itself
            rel = res.est_rel_error
            pairvals = (res.value, res.value)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NonConvergence)
                doubled = integrate_I(
                    mode,
                    kin,
                    pert.sigma,
                    QuadratureOptions(
                        rel_tol=opts.rel_tol,
                        max_refinements=1,
                        r_cutoff_sigmas=opts.r_cutoff_sigmas,
                        initial_nodes_r=opts.initial_nodes_r * 2**res.refinements_used,
                        initial_nodes_theta=opts.initial_nodes_theta * 2**res.refinements_used,
                    ),
                )
            rel = abs(doubled.value - res.value) / max(abs(doubled.value), 1e-300)
            pairvals = (doubled.value, res.value)
        if worst_sc is None or rel > worst_sc[0]:
            worst_sc = (rel, *pairvals)
    rel, ref, art = worst_sc
    reports.append(
        OracleReport(
            "quadrature_self_convergence", float(ref), float(art), float(rel),
            b["self_convergence"], rel <= b["self_convergence"],
        )
    )
    return reports
