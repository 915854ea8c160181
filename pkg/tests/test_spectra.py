"""Spectral-angular density, grid sweeps, peak location and detector counts."""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest

from riprad import (
    DetectorSpec,
    InvalidParam,
    MediumParams,
    PerturbationParams,
    QuadratureOptions,
    SpectrumGrid,
    density_at,
    find_peak,
    integrated_counts,
    mode_from_angle_wavelength,
    spectrum_grid,
)

MED = MediumParams(n0=1.5)
PERT = PerturbationParams(eta=1e-2, sigma=1.0, beta=1.1, length_L=5e4)
OPTS = QuadratureOptions()
# loose-tolerance options keep sweep tests fast; values stay good to ~1e-4
CHEAP = QuadratureOptions(rel_tol=1e-4, initial_nodes_r=32, initial_nodes_theta=32)


def _mode(alpha_deg, lam):
    return mode_from_angle_wavelength(math.radians(alpha_deg), lam, MED)


class TestDensityAt:
    def test_below_threshold_is_exactly_zero(self):
        below = PerturbationParams(eta=1e-2, sigma=1.0, beta=0.9, length_L=5e4)
        assert density_at(_mode(15, 3.0), MED, below, OPTS) == 0.0

    def test_at_threshold_is_exactly_zero(self):
        at = PerturbationParams(eta=1e-2, sigma=1.0, beta=1.0, length_L=5e4)
        assert density_at(_mode(15, 3.0), MED, at, OPTS) == 0.0

    def test_positive_inside_cone(self):
        assert density_at(_mode(15, 3.0), MED, PERT, OPTS) > 0.0

    def test_eta_squared_scaling_exact(self):
        # doubling eta multiplies the prefactor by exactly 4; the integral I
        # does not involve eta, so the densities are bit-related
        d1 = density_at(_mode(15, 3.0), MED, PERT, OPTS)
        d2 = density_at(_mode(15, 3.0), MED, replace(PERT, eta=2e-2), OPTS)
        assert d2 == 4.0 * d1

    def test_length_scaling_exact(self):
        d1 = density_at(_mode(15, 3.0), MED, PERT, OPTS)
        d2 = density_at(_mode(15, 3.0), MED, replace(PERT, length_L=1e5), OPTS)
        assert d2 == 2.0 * d1

    def test_polarization_flag_doubles(self):
        d1 = density_at(_mode(15, 3.0), MED, PERT, OPTS)
        d2 = density_at(_mode(15, 3.0), MED, PERT, OPTS, polarization_sum=True)
        assert d2 == 2.0 * d1

    def test_outside_cone_small_but_nonzero(self):
        inside = density_at(_mode(15, 3.0), MED, PERT, OPTS)
        outside = density_at(_mode(40, 3.0), MED, PERT, OPTS)
        assert 0.0 < outside < 1e-3 * inside


class TestSpectrumGrid:
    def test_shapes_and_axes(self):
        g = spectrum_grid(MED, PERT, (0.0, 0.5), (2.0, 6.0), 5, 4, CHEAP)
        assert g.density.shape == (5, 4)
        assert g.convergence_flags.shape == (5, 4)
        assert g.alphas[0] == 0.0 and g.alphas[-1] == 0.5
        assert g.lambdas[0] == 2.0 and g.lambdas[-1] == 6.0

    def test_matches_pointwise_bitwise(self):
        g = spectrum_grid(MED, PERT, (0.1, 0.4), (2.0, 5.0), 3, 3, CHEAP)
        for i, a in enumerate(g.alphas):
            for j, lam in enumerate(g.lambdas):
                mode = mode_from_angle_wavelength(float(a), float(lam), MED)
                assert g.density[i, j] == density_at(mode, MED, PERT, CHEAP)

    def test_threads_do_not_change_values(self):
        g1 = spectrum_grid(MED, PERT, (0.05, 0.45), (2.0, 6.0), 4, 3, CHEAP, threads=1)
        g4 = spectrum_grid(MED, PERT, (0.05, 0.45), (2.0, 6.0), 4, 3, CHEAP, threads=4)
        assert np.array_equal(g1.density, g4.density)
        assert np.array_equal(g1.convergence_flags, g4.convergence_flags)

    def test_below_threshold_all_zero(self):
        below = PerturbationParams(eta=1e-2, sigma=1.0, beta=1.0, length_L=5e4)
        g = spectrum_grid(MED, below, (0.0, 1.0), (1.0, 5.0), 3, 3, CHEAP)
        assert np.all(g.density == 0.0)
        assert np.all(g.convergence_flags)

    def test_nonnegative(self):
        g = spectrum_grid(MED, PERT, (0.0, 1.3), (1.0, 9.0), 5, 5, CHEAP)
        assert np.all(g.density >= 0.0)

    @pytest.mark.parametrize(
        "bad",
        [dict(alpha_range=(0.5, 0.1)), dict(lambda_range=(-1.0, 5.0)),
         dict(n_alpha=1), dict(n_lambda=0)],
    )
    def test_range_validation(self, bad):
        kwargs = dict(alpha_range=(0.0, 0.5), lambda_range=(2.0, 6.0),
                      n_alpha=3, n_lambda=3)
        kwargs.update(bad)
        with pytest.raises(InvalidParam):
            spectrum_grid(MED, PERT, kwargs["alpha_range"], kwargs["lambda_range"],
                          kwargs["n_alpha"], kwargs["n_lambda"], CHEAP)

    def test_snapshot_records_inputs(self):
        g = spectrum_grid(MED, PERT, (0.0, 0.5), (2.0, 6.0), 2, 2, CHEAP)
        assert g.params_snapshot["perturbation"] == PERT
        assert g.params_snapshot["medium"] == MED
        assert g.params_snapshot["options"] == CHEAP


class TestFindPeak:
    @staticmethod
    def _synthetic(lam0, alpha0, w=0.8):
        alphas = np.linspace(0.1, 0.6, 11)
        lambdas = np.linspace(2.0, 8.0, 25)
        A, L = np.meshgrid(alphas, lambdas, indexing="ij")
        dens = np.exp(-((L - lam0) / w) ** 2 - ((A - alpha0) / 0.1) ** 2)
        return SpectrumGrid(
            alphas=alphas, lambdas=lambdas, density=dens,
            params_snapshot={}, convergence_flags=np.ones_like(dens, dtype=bool),
        )

    def test_recovers_off_grid_peak(self):
        # true peak lambda deliberately between grid nodes (spacing 0.25)
        g = self._synthetic(lam0=4.37, alpha0=0.35)
        lam, alpha, value = find_peak(g)
        assert abs(lam - 4.37) < 0.01  # parabolic refinement beats the spacing
        assert alpha == pytest.approx(0.35, abs=0.026)
        assert value >= np.max(g.density) * 0.999

    def test_peak_on_grid_node(self):
        g = self._synthetic(lam0=4.25, alpha0=0.35)
        lam, _, _ = find_peak(g)
        assert lam == pytest.approx(4.25, abs=1e-6)

    def test_all_zero_raises(self):
        g = self._synthetic(4.0, 0.3)
        zero = SpectrumGrid(g.alphas, g.lambdas, np.zeros_like(g.density),
                            {}, np.ones_like(g.density, dtype=bool))
        with pytest.raises(InvalidParam):
            find_peak(zero)

    def test_unconverged_cells_excluded(self):
        g = self._synthetic(lam0=4.25, alpha0=0.35)
        i, j = np.unravel_index(np.argmax(g.density), g.density.shape)
        flags = g.convergence_flags.copy()
        flags[i, j] = False
        masked = SpectrumGrid(g.alphas, g.lambdas, g.density, {}, flags)
        lam, alpha, _ = find_peak(masked)
        assert (lam, alpha) != (g.lambdas[j], g.alphas[i])

    def test_all_unconverged_raises(self):
        g = self._synthetic(4.0, 0.3)
        dead = SpectrumGrid(g.alphas, g.lambdas, g.density, {},
                            np.zeros_like(g.density, dtype=bool))
        with pytest.raises(InvalidParam):
            find_peak(dead)


class TestIntegratedCounts:
    DET = DetectorSpec(half_angle=math.radians(20.0), lambda_min=1.0,
                       lambda_max=12.0, rep_rate=1000.0)

    def test_counts_positive_and_rate_linear(self):
        per_pulse, per_second = integrated_counts(MED, PERT, self.DET, CHEAP)
        assert per_pulse > 0.0
        assert per_second == per_pulse * 1000.0

    def test_below_threshold_zero(self):
        below = PerturbationParams(eta=1e-2, sigma=1.0, beta=1.0, length_L=5e4)
        assert integrated_counts(MED, below, self.DET, CHEAP) == (0.0, 0.0)

    def test_wider_band_collects_more(self):
        narrow = DetectorSpec(math.radians(20.0), 2.0, 6.0, 1000.0)
        wide = DetectorSpec(math.radians(20.0), 1.0, 12.0, 1000.0)
        n, _ = integrated_counts(MED, PERT, narrow, CHEAP)
        w, _ = integrated_counts(MED, PERT, wide, CHEAP)
        assert w > n

    def test_wider_cone_collects_more(self):
        small = DetectorSpec(math.radians(10.0), 1.0, 12.0, 1000.0)
        large = DetectorSpec(math.radians(30.0), 1.0, 12.0, 1000.0)
        s, _ = integrated_counts(MED, PERT, small, CHEAP)
        l, _ = integrated_counts(MED, PERT, large, CHEAP)
        assert l > s

    def test_detector_validation(self):
        with pytest.raises(InvalidParam):
            DetectorSpec(half_angle=-0.1, lambda_min=1.0, lambda_max=12.0, rep_rate=1e3)
        with pytest.raises(InvalidParam):
            DetectorSpec(half_angle=0.5, lambda_min=5.0, lambda_max=2.0, rep_rate=1e3)
        with pytest.raises(InvalidParam):
            DetectorSpec(half_angle=0.5, lambda_min=1.0, lambda_max=12.0, rep_rate=-1.0)
