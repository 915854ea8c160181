"""Domain types, kinematics and the closed-form integrand building blocks."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riprad import (
    BelowThreshold,
    InvalidParam,
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
from riprad.errors import PerturbativeValidity

MED = MediumParams(n0=1.5)
PERT = PerturbationParams(eta=1e-2, sigma=1.0, beta=1.1, length_L=5e4)


class TestParams:
    def test_n0_below_one_rejected(self):
        with pytest.raises(InvalidParam):
            MediumParams(n0=0.99)

    def test_negative_n2_rejected(self):
        with pytest.raises(InvalidParam):
            MediumParams(n0=1.5, n2=-1e-16)

    @pytest.mark.parametrize("field", ["eta", "sigma", "beta", "length_L"])
    def test_perturbation_positive(self, field):
        kwargs = dict(eta=1e-2, sigma=1.0, beta=1.1, length_L=5e4)
        kwargs[field] = 0.0
        with pytest.raises(InvalidParam):
            PerturbationParams(**kwargs)

    def test_length_cm_conversion_exact(self):
        p = PerturbationParams.with_length_cm(eta=1e-2, sigma=1.0, beta=1.1, length_cm=5.0)
        assert p.length_L == 5.0e4

    def test_large_eta_warns_not_raises(self):
        with pytest.warns(PerturbativeValidity):
            xi_linearized((0, 0, 0), MED, PerturbationParams(0.2, 1.0, 1.1, 5e4))

    def test_kerr_eta(self):
        assert kerr_eta(3e-16, 1e13) == pytest.approx(3e-3, rel=1e-15)


class TestKinematics:
    def test_gamma_sq_at_1p1(self):
        kin = kinematics(MED, 1.1)
        assert kin.gamma_sq == pytest.approx(1.0 / 0.21, rel=1e-12)

    def test_cone_angle_at_1p1(self):
        kin = kinematics(MED, 1.1)
        assert kin.theta0 == pytest.approx(math.acos(1.0 / 1.1), rel=0, abs=0)
        assert math.degrees(kin.theta0) == pytest.approx(24.6199773, abs=1e-6)

    def test_cone_angle_at_2(self):
        assert kinematics(MED, 2.0).theta0 == pytest.approx(math.pi / 3, rel=1e-15)

    @pytest.mark.parametrize("beta", [1.0, 0.5, 1.0 - 1e-15])
    def test_below_threshold(self, beta):
        with pytest.raises(BelowThreshold):
            kinematics(MED, beta)

    def test_nonsense_beta(self):
        with pytest.raises(InvalidParam):
            kinematics(MED, float("nan"))


class TestModes:
    def test_components_example(self):
        # alpha = 0.43 rad, lambda = 3 um, n0 = 1.5 -> k = pi
        mode = mode_from_angle_wavelength(0.43, 3.0, MED)
        assert mode.k == pytest.approx(math.pi, rel=1e-15)
        assert mode.k_x == pytest.approx(2.8556001, abs=5e-7)
        assert mode.k_perp == pytest.approx(1.3096383, abs=5e-7)

    def test_wavelength_round_trip(self):
        mode = mode_from_angle_wavelength(0.7, 2.35, MED)
        assert wavelength_of(mode, MED) == pytest.approx(2.35, rel=1e-12)

    def test_k_decomposition(self):
        mode = PhotonMode(k=2.0, alpha=1.1)
        assert math.hypot(mode.k_x, mode.k_perp) == pytest.approx(2.0, rel=1e-14)

    def test_omega_is_k_over_n0(self):
        mode = PhotonMode(k=3.0, alpha=0.2)
        assert mode.omega(1.5) == 2.0

    @pytest.mark.parametrize(
        "kwargs",
        [dict(k=0.0, alpha=0.1), dict(k=1.0, alpha=-0.1), dict(k=1.0, alpha=3.2),
         dict(k=1.0, alpha=0.1, phi=7.0)],
    )
    def test_domain_checks(self, kwargs):
        with pytest.raises(InvalidParam):
            PhotonMode(**kwargs)


@given(
    alpha=st.floats(0.0, math.pi),
    phi=st.floats(0.0, 6.283185),
    k=st.floats(0.01, 100.0),
)
@settings(max_examples=200, deadline=None)
def test_polarization_basis_orthonormal(alpha, phi, k):
    mode = PhotonMode(k=k, alpha=alpha, phi=phi)
    basis = PolarizationBasis.for_mode(mode)
    khat = mode.unit()
    for v in (basis.e1, basis.e2):
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        assert abs(v @ khat) < 1e-12
    assert abs(basis.e1 @ basis.e2) < 1e-12


class TestXi:
    def test_exact_at_origin(self):
        # eps(0) = n0^2 + 2 n0 eta = 2.28; xi = (1/2.28 - 1/2.25)/2
        want = 0.5 * (1.0 / 2.28 - 1.0 / 2.25)
        assert xi_exact((0, 0, 0), MED, PERT) == pytest.approx(want, rel=1e-15)

    def test_linearized_at_origin(self):
        assert xi_linearized((0, 0, 0), MED, PERT) == pytest.approx(
            -PERT.eta / MED.n0**3, rel=1e-15
        )

    def test_linearization_error_is_first_order(self):
        # relative gap ~ eta/n0^2 at the origin, well under 1.5% here
        exact = xi_exact((0, 0, 0), MED, PERT)
        lin = xi_linearized((0, 0, 0), MED, PERT)
        assert abs(exact - lin) / abs(lin) < 0.015
        assert exact > lin  # exact is the weaker (less negative) one

    @given(
        u=st.floats(-5, 5), y=st.floats(-5, 5), z=st.floats(-5, 5),
        eta=st.floats(1e-6, 0.05),
    )
    @settings(max_examples=150, deadline=None)
    def test_bounds_and_sign(self, u, y, z, eta):
        pert = PerturbationParams(eta=eta, sigma=1.0, beta=1.1, length_L=5e4)
        v_exact = xi_exact((u, y, z), MED, pert)
        v_lin = xi_linearized((u, y, z), MED, pert)
        assert v_exact <= 0.0 and v_lin <= 0.0
        assert v_lin >= -eta / MED.n0**3 - 1e-18
        # 1e-15 slack: xi_exact subtracts two O(1/n0^2) terms, so its absolute
        # rounding floor is ~1e-16 regardless of how small xi itself is
        assert v_exact >= v_lin - 1e-15  # second order raises xi


class TestFOfR:
    KIN = kinematics(MED, 1.1)

    def test_on_cone_reduces_to_gamma_r(self):
        mode = PhotonMode(k=2.0, alpha=self.KIN.theta0)
        r = np.array([0.0, 0.5, 3.0])
        want = math.sqrt(self.KIN.gamma_sq) * r
        assert np.allclose(f_of_r(r, mode, self.KIN, 1.0), want, rtol=1e-10, atol=1e-12)

    def test_at_r_zero(self):
        mode = PhotonMode(k=2.0, alpha=1.2)  # outside the cone, Delta > 0
        delta = mode.k * (1.0 - self.KIN.beta * math.cos(mode.alpha))
        want = self.KIN.gamma_sq * delta * (self.KIN.beta + 1.0)
        assert f_of_r(0.0, mode, self.KIN, 1.0) == pytest.approx(want, rel=1e-13)

    def test_at_r_zero_inside(self):
        mode = PhotonMode(k=2.0, alpha=0.1)  # inside, Delta < 0
        delta = mode.k * (1.0 - self.KIN.beta * math.cos(mode.alpha))
        want = self.KIN.gamma_sq * delta * (self.KIN.beta - 1.0)
        assert f_of_r(0.0, mode, self.KIN, 1.0) == pytest.approx(want, rel=1e-13)

    @given(
        alpha=st.floats(0.0, math.pi), k=st.floats(0.05, 20.0),
        r1=st.floats(0.0, 30.0), dr=st.floats(1e-6, 10.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_r(self, alpha, k, r1, dr):
        mode = PhotonMode(k=k, alpha=alpha)
        assert f_of_r(r1 + dr, mode, self.KIN, 1.0) >= f_of_r(r1, mode, self.KIN, 1.0)


class TestIntegrand:
    KIN = kinematics(MED, 1.1)

    @given(
        r=st.floats(0.0, 25.0), theta=st.floats(0.0, 2.0 * math.pi),
        alpha=st.floats(0.0, math.pi), k=st.floats(0.05, 10.0),
    )
    @settings(max_examples=300, deadline=None)
    def test_non_negative(self, r, theta, alpha, k):
        mode = PhotonMode(k=k, alpha=alpha)
        val = emission_integrand(r, theta, mode, self.KIN, 1.0)
        assert val >= 0.0
        assert math.isfinite(val)

    @given(
        r=st.floats(0.0, 25.0), theta=st.floats(0.0, math.pi),
        alpha=st.floats(0.0, math.pi), k=st.floats(0.05, 10.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_reflection_symmetry_in_theta(self, r, theta, alpha, k):
        # integrand depends on theta only through cos(theta)
        mode = PhotonMode(k=k, alpha=alpha)
        a = emission_integrand(r, theta, mode, self.KIN, 1.0)
        b = emission_integrand(r, 2.0 * math.pi - theta, mode, self.KIN, 1.0)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)

    def test_broadcasts(self):
        mode = PhotonMode(k=2.0, alpha=0.4)
        r = np.linspace(0.0, 5.0, 7)[:, None]
        theta = np.linspace(0.0, 2 * math.pi, 9)[None, :]
        m = emission_integrand(r, theta, mode, self.KIN, 1.0)
        assert m.shape == (7, 9)
        assert np.all(m >= 0.0)

    def test_no_overflow_far_out(self):
        # exponent is a complete square; huge r can only underflow to 0
        mode = PhotonMode(k=50.0, alpha=0.3)
        val = emission_integrand(1e4, 1.0, mode, self.KIN, 1.0)
        assert val == 0.0
