"""Calibration-fit tests.

The flux-spectrum round trips use noiseless and seeded-noise synthetic data
from the model itself; the voltage calibration unit tests use analytic
notch-shaped curves (the full simulator round trip runs in the acceptance
suite). Fit determinism is asserted bitwise.
"""

import math

import numpy as np
import pytest

from conftest import EC_GHZ, EJ_GHZ, TWO_PI, mhz
from lzsim.calibration import (
    LinearMap,
    SpectroscopyPoint,
    bessel_j_zero,
    bessel_zero_voltage_calibration,
    ec_from_two_photon_splitting,
    fit_flux_spectrum,
    fit_linear_map,
)
from lzsim.errors import (
    DegenerateAbscissa,
    InsufficientCurves,
    InsufficientData,
    NoMinimumFound,
    ValidationError,
)
from lzsim.special import bessel_j
from lzsim.xmon_model import QubitSpec, transition_frequency

J0_FIRST_ZERO = 2.4048255576957728


def spectrum_points(ec, ej, fluxes, noise_sigma_ghz=0.0, seed=None):
    q = QubitSpec(ec, ej)
    freqs = np.array([transition_frequency(q, f) / TWO_PI / 1e9 for f in fluxes])
    if noise_sigma_ghz:
        rng = np.random.default_rng(seed)
        freqs = freqs + noise_sigma_ghz * rng.standard_normal(len(fluxes))
    return [SpectroscopyPoint(flux=f, frequency_ghz=v) for f, v in zip(fluxes, freqs)]


class TestFitFluxSpectrum:
    FLUXES = np.linspace(-0.35, 0.35, 29)

    def test_noiseless_round_trip(self):
        ec, ej, residual = fit_flux_spectrum(spectrum_points(EC_GHZ, EJ_GHZ, self.FLUXES))
        assert abs(ec - EC_GHZ) / EC_GHZ < 1e-6
        assert abs(ej - EJ_GHZ) / EJ_GHZ < 1e-6
        assert residual < 1e-9

    def test_noisy_round_trip_fixed_seed(self):
        points = spectrum_points(EC_GHZ, EJ_GHZ, self.FLUXES,
                                 noise_sigma_ghz=1e-3, seed=42)
        ec, ej, residual = fit_flux_spectrum(points)
        assert abs(ec - EC_GHZ) / EC_GHZ < 5e-3
        assert abs(ej - EJ_GHZ) / EJ_GHZ < 5e-3
        assert residual == pytest.approx(1e-3, rel=0.5)

    def test_two_photon_seeding_changes_nothing_noiseless(self):
        points = spectrum_points(EC_GHZ, EJ_GHZ, self.FLUXES)
        ec_a, ej_a, _ = fit_flux_spectrum(points)
        ec_b, ej_b, _ = fit_flux_spectrum(points, two_photon_splitting_ghz=0.132)
        assert ec_a == pytest.approx(ec_b, rel=1e-8)
        assert ej_a == pytest.approx(ej_b, rel=1e-8)

    @pytest.mark.parametrize("ec,ej", [(0.1, 5.0), (0.264, 13.822), (0.5, 30.0)])
    def test_round_trip_across_parameter_box(self, ec, ej):
        got_ec, got_ej, _ = fit_flux_spectrum(spectrum_points(ec, ej, self.FLUXES))
        assert abs(got_ec - ec) / ec < 1e-6
        assert abs(got_ej - ej) / ej < 1e-6

    def test_deterministic(self):
        points = spectrum_points(EC_GHZ, EJ_GHZ, self.FLUXES,
                                 noise_sigma_ghz=1e-3, seed=11)
        assert fit_flux_spectrum(points) == fit_flux_spectrum(points)

    def test_too_few_points(self):
        with pytest.raises(InsufficientData):
            fit_flux_spectrum(spectrum_points(EC_GHZ, EJ_GHZ, [0.0, 0.1, 0.2, 0.3]))

    def test_too_little_span(self):
        fluxes = np.linspace(0.20, 0.29, 10)
        with pytest.raises(InsufficientData):
            fit_flux_spectrum(spectrum_points(EC_GHZ, EJ_GHZ, fluxes))


class TestEcFromTwoPhotonSplitting:
    def test_reference_sample(self):
        assert ec_from_two_photon_splitting(132e6) == pytest.approx(0.264e9, rel=1e-12)

    def test_zero(self):
        assert ec_from_two_photon_splitting(0.0) == 0.0

    def test_linear(self):
        assert ec_from_two_photon_splitting(2 * 50e6) == pytest.approx(
            2 * ec_from_two_photon_splitting(50e6), rel=1e-12)


def notch_curve(omega, slope, voltages, depth_scale=100.0):
    """Saturating steady-population model: P = S/(2(1+S)), S ~ (J0 * scale)^2."""
    amps = slope * np.asarray(voltages)
    j0 = np.array([bessel_j(0, a / omega) for a in amps])
    s = depth_scale * j0 ** 2
    return s / (2.0 * (1.0 + s))


class TestBesselZeroVoltageCalibration:
    SLOPE = mhz(2.5)  # rad/s per mV
    OMEGAS = [mhz(f) for f in (10.0, 15.0, 20.0, 25.0, 30.0)]

    def curves(self, omegas=None):
        out = []
        for om in (omegas or self.OMEGAS):
            volts = np.arange(3.0, 36.01, 0.25)
            out.append((om, volts, notch_curve(om, self.SLOPE, volts)))
        return out

    def test_recovers_slope(self):
        result = bessel_zero_voltage_calibration(self.curves())
        assert abs(result.slope - self.SLOPE) / self.SLOPE < 0.01
        assert abs(result.intercept) < 0.02 * self.SLOPE * 3.0

    def test_first_zero_location_per_curve(self):
        # With the known map, each located dip sits at A/omega = j0_1.
        result = bessel_zero_voltage_calibration(self.curves())
        for om in self.OMEGAS:
            v_zero = (J0_FIRST_ZERO * om - result.intercept) / result.slope
            assert self.SLOPE * v_zero / om == pytest.approx(J0_FIRST_ZERO, abs=0.02)

    def test_order_independence(self):
        curves = self.curves()
        a = bessel_zero_voltage_calibration(curves)
        b = bessel_zero_voltage_calibration(list(reversed(curves)))
        assert a == b

    def test_second_zero_index(self):
        # At 10 and 15 MHz the window holds the second dip too.
        curves = self.curves(omegas=[mhz(10.0), mhz(15.0)])
        result = bessel_zero_voltage_calibration(curves, zero_index=2)
        assert abs(result.slope - self.SLOPE) / self.SLOPE < 0.01

    def test_scale_covariance(self):
        curves = self.curves()
        doubled = [(om, 2.0 * v, p) for om, v, p in curves]
        a = bessel_zero_voltage_calibration(curves)
        b = bessel_zero_voltage_calibration(doubled)
        assert b.slope == pytest.approx(0.5 * a.slope, rel=1e-9)

    def test_requires_two_frequencies(self):
        with pytest.raises(InsufficientCurves):
            bessel_zero_voltage_calibration(self.curves(omegas=[mhz(10.0)]))

    def test_missing_dip(self):
        om = mhz(30.0)
        volts = np.arange(3.0, 20.0, 0.25)  # first dip sits at 28.9 mV
        with pytest.raises(NoMinimumFound):
            bessel_zero_voltage_calibration(
                [(om, volts, notch_curve(om, self.SLOPE, volts)),
                 (mhz(25.0), volts, notch_curve(mhz(25.0), self.SLOPE, volts))])

    def test_bessel_j_zero_values(self):
        assert bessel_j_zero(1) == pytest.approx(2.4048255576957728, abs=1e-10)
        assert bessel_j_zero(2) == pytest.approx(5.5200781102863106, abs=1e-10)


class TestFitLinearMap:
    def test_two_points_exact(self):
        result = fit_linear_map([(0.0, 1.0), (2.0, 5.0)])
        assert result.slope == pytest.approx(2.0, rel=1e-14)
        assert result.intercept == pytest.approx(1.0, rel=1e-14)
        assert result.residual_rms == pytest.approx(0.0, abs=1e-12)

    def test_exact_line(self):
        xs = np.linspace(-3.0, 6.0, 10)
        result = fit_linear_map([(x, 3.0 * x + 1.0) for x in xs])
        assert result.slope == pytest.approx(3.0, abs=1e-12)
        assert result.intercept == pytest.approx(1.0, abs=1e-12)

    def test_noisy_fixed_seed(self):
        rng = np.random.default_rng(5)
        xs = np.linspace(0.0, 10.0, 50)
        ys = 2.5 * xs - 4.0 + 0.1 * rng.standard_normal(len(xs))
        result = fit_linear_map(list(zip(xs, ys)))
        assert result.slope == pytest.approx(2.5, abs=0.02)
        assert result.intercept == pytest.approx(-4.0, abs=0.1)

    def test_evaluation(self):
        m = LinearMap(slope=2.0, intercept=-1.0, residual_rms=0.0)
        assert m(3.0) == 5.0

    def test_degenerate(self):
        with pytest.raises(DegenerateAbscissa):
            fit_linear_map([(1.0, 2.0), (1.0, 3.0)])

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            LinearMap(slope=math.inf, intercept=0.0, residual_rms=0.0)
