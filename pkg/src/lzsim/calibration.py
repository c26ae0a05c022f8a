"""Parameter-calibration procedures, runnable on simulator-generated data.

* ``fit_flux_spectrum`` recovers (E_C, E_J) from qubit-frequency-vs-flux
  spectroscopy points.
* ``ec_from_two_photon_splitting`` converts the single/two-photon spectral
  splitting into a charging energy (the splitting is approximately E_C/2h).
* ``bessel_zero_voltage_calibration`` maps modulation-pulse voltage to the
  transition-frequency modulation amplitude A: in the small-coupling regime
  the steady excitation vanishes where J_0(A/omega) does, so each deep
  population dip pins A = x_k * omega at a known Bessel zero x_k.
* ``fit_linear_map`` is the shared ordinary-least-squares line.

All fits are deterministic: identical inputs give bitwise-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, least_squares

from .errors import (
    DegenerateAbscissa,
    FitDiverged,
    InsufficientCurves,
    InsufficientData,
    NoMinimumFound,
    ValidationError,
)
from .special import bessel_j

__all__ = [
    "SpectroscopyPoint",
    "LinearMap",
    "fit_flux_spectrum",
    "ec_from_two_photon_splitting",
    "bessel_zero_voltage_calibration",
    "locate_dip_voltage",
    "fit_linear_map",
    "bessel_j_zero",
]


@dataclass(frozen=True)
class SpectroscopyPoint:
    """One spectroscopy sample: dimensionless flux and transition frequency
    as an ordinary frequency in GHz."""

    flux: float
    frequency_ghz: float

    def __post_init__(self) -> None:
        if not abs(self.flux) < 0.5:
            raise ValidationError("SpectroscopyPoint requires |flux| < 0.5")
        if self.frequency_ghz <= 0.0:
            raise ValidationError("SpectroscopyPoint requires frequency > 0")


@dataclass(frozen=True)
class LinearMap:
    """y = slope * x + intercept with the fit's root-mean-square residual."""

    slope: float
    intercept: float
    residual_rms: float

    def __post_init__(self) -> None:
        for name in ("slope", "intercept", "residual_rms"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"LinearMap.{name} must be finite")
        if self.residual_rms < 0.0:
            raise ValidationError("LinearMap.residual_rms must be >= 0")

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept


def _spectrum_model(ec: float, ej: float, flux: np.ndarray) -> np.ndarray:
    inner = np.maximum(8.0 * ec * ej * np.abs(np.cos(np.pi * flux)), 0.0)
    return np.sqrt(inner) - ec


def fit_flux_spectrum(points: Sequence[SpectroscopyPoint],
                      two_photon_splitting_ghz: float | None = None,
                      ) -> tuple[float, float, float]:
    """Nonlinear least squares of the flux-frequency relation over (E_C, E_J).

    Returns (ec_ghz, ej_ghz, residual_rms_ghz). Seeding: E_C from twice the
    two-photon splitting when supplied, else 0.25 GHz; E_J from the largest
    observed frequency read back through the model at zero flux.
    """
    if len(points) < 5:
        raise InsufficientData(f"need >= 5 spectroscopy points, got {len(points)}")
    flux = np.array([p.flux for p in points], dtype=float)
    freq = np.array([p.frequency_ghz for p in points], dtype=float)
    if np.ptp(flux) < 0.1:
        raise InsufficientData(
            f"flux span {np.ptp(flux):.3g} too small, need >= 0.1"
        )
    ec0 = 2.0 * two_photon_splitting_ghz if two_photon_splitting_ghz else 0.25
    fmax = float(np.max(freq))
    ej0 = (fmax + ec0) ** 2 / (8.0 * ec0)
    result = least_squares(
        lambda prm: _spectrum_model(prm[0], prm[1], flux) - freq,
        np.array([ec0, ej0]),
        method="lm", xtol=1e-12, ftol=1e-12,
    )
    ec, ej = (float(c) for c in result.x)
    if not result.success or not (ec > 0.0 and ej > 0.0):
        raise FitDiverged(f"flux-spectrum fit failed: {result.message}")
    residual = float(np.sqrt(np.mean(result.fun ** 2)))
    return ec, ej, residual


def ec_from_two_photon_splitting(delta_f: float) -> float:
    """Charging energy E_C/h (Hz) from the splitting (Hz) between the
    single-photon 0->1 line and the two-photon 0->2 line: E_C = 2 h delta_f."""
    if delta_f < 0.0:
        raise ValidationError("splitting must be >= 0")
    return 2.0 * delta_f


# McMahon's expansion gives a bracket for the k-th zero of J_0.
def bessel_j_zero(k: int) -> float:
    """k-th positive zero of J_0 (k = 1, 2, ...), via bracketed root finding."""
    if k < 1:
        raise ValidationError("zero index must be >= 1")
    guess = (k - 0.25) * math.pi
    return float(brentq(lambda x: bessel_j(0, x), guess - 0.6, guess + 0.6,
                        xtol=1e-13, rtol=1e-15))


def _deep_minima(populations: np.ndarray) -> list[int]:
    """Indices of interior local minima that dip well below the curve's
    typical level, in increasing abscissa order."""
    baseline = float(np.median(populations))
    threshold = 0.5 * baseline
    found = []
    for i in range(1, len(populations) - 1):
        if (populations[i] < populations[i - 1] and
                populations[i] <= populations[i + 1] and
                populations[i] < threshold):
            found.append(i)
    return found


def _parabolic_vertex(x: np.ndarray, y: np.ndarray, i: int) -> float:
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if denom == 0.0:
        return float(x1)
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    return float(x1 - 0.5 * num / denom)


def locate_dip_voltage(voltages: Sequence[float], populations: Sequence[float],
                       zero_index: int = 1) -> float:
    """Voltage of the ``zero_index``-th deep population minimum of one curve,
    refined by parabolic interpolation through the three samples around it."""
    v = np.asarray(voltages, dtype=float)
    p = np.asarray(populations, dtype=float)
    if len(v) != len(p) or len(v) < 3:
        raise ValidationError("need >= 3 (voltage, population) samples")
    if np.any(np.diff(v) <= 0.0):
        raise ValidationError("curve voltages must be strictly increasing")
    minima = _deep_minima(p)
    if len(minima) < zero_index:
        raise NoMinimumFound(
            f"found {len(minima)} deep minima, need {zero_index}"
        )
    return _parabolic_vertex(v, p, minima[zero_index - 1])


def bessel_zero_voltage_calibration(
        curves: Sequence[tuple[float, Sequence[float], Sequence[float]]],
        zero_index: int = 1) -> LinearMap:
    """Fit the voltage-to-amplitude line from steady-population dip positions.

    ``curves`` is a sequence of (omega, voltages, populations) with omega the
    angular modulation frequency (rad/s) of that curve. For each curve the
    ``zero_index``-th deep population minimum (counting from low voltage) is
    located by parabolic interpolation through the three samples around it
    and assigned the amplitude A = x_k * omega, where x_k is the matching
    zero of J_0. The (voltage, A) pairs from all curves are combined into an
    ordinary least-squares line.
    """
    if zero_index < 1:
        raise ValidationError("zero_index must be >= 1")
    omegas = [c[0] for c in curves]
    if len(set(omegas)) < 2:
        raise InsufficientCurves(
            f"need curves at >= 2 distinct modulation frequencies, got {len(set(omegas))}"
        )
    x_zero = bessel_j_zero(zero_index)
    pairs = []
    for omega, voltages, populations in sorted(curves, key=lambda c: c[0]):
        try:
            v_dip = locate_dip_voltage(voltages, populations, zero_index)
        except NoMinimumFound as exc:
            raise NoMinimumFound(
                f"curve at omega/2pi = {omega / (2 * math.pi):.4g} Hz: {exc}"
            ) from exc
        pairs.append((v_dip, x_zero * omega))
    return fit_linear_map(pairs)


def fit_linear_map(points: Sequence[tuple[float, float]]) -> LinearMap:
    """Ordinary least-squares line through (x, y) points."""
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if len(x) < 2 or np.ptp(x) == 0.0:
        raise DegenerateAbscissa("need >= 2 distinct x values")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    return LinearMap(slope=float(slope), intercept=float(intercept),
                     residual_rms=residual)
