"""Closed-form interference quantities and trace/spectrum post-processing.

The closed forms live on the resonant slow-modulation problem: a two-level
system with gap Omega swept through its avoided crossing by A cos(omega t).
Two independent predictions of the slow Rabi-like envelope frequency are
implemented:

* ``rabi_like_frequency_lz`` - Omega_0 = 2 omega sqrt(P_LZ) / pi, with
  P_LZ = exp(-2 pi delta) and delta = Omega^2 / (4 v).
* ``rabi_like_frequency_gv`` - Omega_0 = omega beta / pi from the
  double-passage phase chain (arg Gamma, complete elliptic integral).

Post-processing utilities: damped-sine envelope fitting, the mirror
asymmetry of steady-state spectra in detuning, and the phase offset that a
constant line delay adds to the modulation phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    AsymmetricGrid,
    DetuningExceedsAmplitude,
    FitDiverged,
    InsufficientData,
    ValidationError,
)
from .special import complete_elliptic_e, complex_gamma_arg

if TYPE_CHECKING:
    from .dynamics import Trace
    from .sweep import SweepResult

__all__ = [
    "LzsPoint",
    "DampedSineFit",
    "GvChain",
    "ADIABATIC",
    "BOUNDARY",
    "NON_ADIABATIC",
    "sweep_velocity",
    "adiabaticity_delta",
    "landau_zener_probability",
    "classify_regime",
    "rabi_like_frequency_lz",
    "rabi_like_frequency_gv",
    "gv_chain",
    "fit_damped_sine",
    "spectrum_asymmetry",
    "delay_phase_offset",
]

TWO_PI = 2.0 * math.pi

ADIABATIC = "adiabatic"
BOUNDARY = "boundary"
NON_ADIABATIC = "non_adiabatic"

# Regime thresholds on r = Omega^2/(A omega): the literature only gives
# asymptotic inequalities, a factor-4 buffer separates the two experimental
# operating points cleanly (r ~ 6.6 vs r ~ 0.94).
_REGIME_UPPER = 4.0
_REGIME_LOWER = 0.25


@dataclass(frozen=True)
class LzsPoint:
    """One interference operating point, all angular rates in rad/s."""

    rabi: float
    amplitude: float
    omega: float
    detuning: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude <= 0.0:
            raise ValidationError("LzsPoint requires amplitude > 0")
        if self.omega <= 0.0:
            raise ValidationError("LzsPoint requires omega > 0")
        if self.rabi < 0.0:
            raise ValidationError("LzsPoint requires rabi >= 0")
        if abs(self.detuning) >= self.amplitude:
            raise DetuningExceedsAmplitude(
                f"|detuning| = {abs(self.detuning):.4g} must be < amplitude = "
                f"{self.amplitude:.4g}"
            )


def sweep_velocity(p: LzsPoint) -> float:
    """Level sweep velocity v = A omega sqrt(1 - (eps0/A)^2) in rad^2/s^2."""
    ratio = p.detuning / p.amplitude
    return p.amplitude * p.omega * math.sqrt(1.0 - ratio * ratio)


def adiabaticity_delta(p: LzsPoint) -> float:
    """Adiabaticity parameter delta = Omega^2 / (4 v); >> 1 is slow passage."""
    return p.rabi * p.rabi / (4.0 * sweep_velocity(p))


def landau_zener_probability(delta: float) -> float:
    """Single-passage Landau-Zener probability exp(-2 pi delta)."""
    if delta < 0.0:
        raise ValidationError("delta must be >= 0")
    return math.exp(-2.0 * math.pi * delta)


def classify_regime(p: LzsPoint) -> str:
    """'adiabatic' when Omega^2 >> A omega, 'non_adiabatic' when <<, else
    'boundary'. The ratio thresholds are 4 and 1/4."""
    r = p.rabi * p.rabi / (p.amplitude * p.omega)
    if r > _REGIME_UPPER:
        return ADIABATIC
    if r < _REGIME_LOWER:
        return NON_ADIABATIC
    return BOUNDARY


def rabi_like_frequency_lz(p: LzsPoint) -> float:
    """Envelope frequency Omega_0 = 2 omega sqrt(P_LZ) / pi (rad/s)."""
    plz = landau_zener_probability(adiabaticity_delta(p))
    return 2.0 * p.omega * math.sqrt(plz) / math.pi


@dataclass(frozen=True)
class GvChain:
    """Intermediate quantities of the double-passage phase chain."""

    alpha: float
    chi: float
    phi_lz: float
    theta: float
    elliptic_e: float
    phi_ad: float
    transition_probability: float
    beta: float
    omega0: float


def gv_chain(p: LzsPoint, elliptic_convention: str = "parameter") -> GvChain:
    """Evaluate the full chain behind ``rabi_like_frequency_gv``.

    The chain is stated for resonant drive only; detuning must be zero.
    ``elliptic_convention`` selects how E(cos Theta) is read: 'parameter'
    treats cos Theta as the parameter m (the convention that reproduces the
    reference operating point), 'modulus' as the modulus k (m = k^2). Both
    are exposed for inspection.
    """
    if p.detuning != 0.0:
        raise ValidationError("the envelope-frequency chain is stated at detuning = 0")
    if p.rabi <= 0.0:
        raise ValidationError("gv_chain requires rabi > 0")
    if elliptic_convention not in ("parameter", "modulus"):
        raise ValidationError(
            f"elliptic_convention must be 'parameter' or 'modulus', got {elliptic_convention!r}"
        )
    alpha = p.rabi / math.sqrt(2.0 * p.amplitude * p.omega)
    a2h = 0.5 * alpha * alpha
    chi = math.acos(math.exp(-math.pi * a2h))
    phi_lz = complex_gamma_arg(a2h) + 0.25 * math.pi + a2h * (math.log(a2h) - 1.0)
    theta = math.atan(p.rabi / p.amplitude)
    m = math.cos(theta) if elliptic_convention == "parameter" else math.cos(theta) ** 2
    ell = complete_elliptic_e(m)
    phi_ad = math.sqrt(p.rabi ** 2 + p.amplitude ** 2) * ell / (2.0 * p.omega)
    prob = math.sin(chi) ** 2 * math.sin(phi_lz + 2.0 * phi_ad) ** 2
    beta = math.acos(1.0 - 2.0 * prob)
    return GvChain(
        alpha=alpha,
        chi=chi,
        phi_lz=phi_lz,
        theta=theta,
        elliptic_e=ell,
        phi_ad=phi_ad,
        transition_probability=prob,
        beta=beta,
        omega0=p.omega * beta / math.pi,
    )


def rabi_like_frequency_gv(p: LzsPoint, elliptic_convention: str = "parameter") -> float:
    """Envelope frequency Omega_0 = omega beta / pi (rad/s) from the
    double-passage phase chain; resonant drive only."""
    return gv_chain(p, elliptic_convention).omega0


# ---------------------------------------------------------------------------
# Damped-sine fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DampedSineFit:
    """Least-squares parameters of offset + amplitude e^{-decay t} cos(2 pi f t + phase).

    ``frequency`` is an ordinary frequency in Hz; ``decay_rate`` in 1/s.
    """

    frequency: float
    decay_rate: float
    amplitude: float
    offset: float
    phase: float
    residual_rms: float


_FIT_MAX_ITER = 200
_FIT_XTOL = 1e-10


def _damped_sine(params: np.ndarray, t: np.ndarray) -> np.ndarray:
    f, g, a, o, ph = params
    return o + a * np.exp(-g * t) * np.cos(TWO_PI * f * t + ph)


def fit_damped_sine(trace: "Trace",
                    initial_guess: DampedSineFit | None = None,
                    max_residual_rms: float | None = None) -> DampedSineFit:
    """Fit a damped cosine to a population trace.

    The frequency is seeded from the dominant discrete-spectrum peak of the
    mean-subtracted trace unless an ``initial_guess`` is supplied. A
    constant trace takes the documented degenerate path: amplitude ~ 0,
    frequency 0. Raises FitDiverged on non-convergence, a non-finite result,
    or (when ``max_residual_rms`` is given) a residual above the threshold.
    """
    t = np.asarray(trace.times, dtype=float)
    v = np.asarray(trace.populations, dtype=float)
    if len(t) < 32:
        raise InsufficientData(f"need >= 32 samples, got {len(t)}")
    detrended = v - v.mean()
    if initial_guess is None:
        spectrum = np.fft.rfft(detrended)
        power = np.abs(spectrum)
        power[0] = 0.0
        peak = int(np.argmax(power))
        if power[peak] <= 1e-12 * len(v):
            # Degenerate flat input: no oscillation to fit.
            return DampedSineFit(
                frequency=0.0,
                decay_rate=0.0,
                amplitude=0.0,
                offset=float(v.mean()),
                phase=0.0,
                residual_rms=float(np.sqrt(np.mean(detrended ** 2))),
            )
        df = 1.0 / (t[-1] - t[0] + (t[1] - t[0]))
        x0 = np.array([
            peak * df,
            1.0 / (t[-1] - t[0]),
            math.sqrt(2.0) * detrended.std(),
            v.mean(),
            float(np.angle(spectrum[peak])),
        ])
    else:
        x0 = np.array([
            initial_guess.frequency,
            initial_guess.decay_rate,
            initial_guess.amplitude,
            initial_guess.offset,
            initial_guess.phase,
        ])
    duration = t[-1] - t[0]
    if x0[0] > 0.0 and duration * x0[0] < 1.5:
        raise InsufficientData(
            f"trace covers {duration * x0[0]:.2f} putative periods, need >= 1.5"
        )
    result = least_squares(
        lambda prm: _damped_sine(prm, t) - v, x0,
        method="lm", xtol=_FIT_XTOL, max_nfev=_FIT_MAX_ITER * (len(x0) + 1),
    )
    if not result.success or not np.all(np.isfinite(result.x)):
        raise FitDiverged(f"damped-sine fit did not converge: {result.message}")
    f, g, a, o, ph = (float(c) for c in result.x)
    if f < 0.0:
        f, ph = -f, -ph
    if a < 0.0:
        a, ph = -a, ph + math.pi
    if g < 0.0:
        if g * duration < -0.01:
            raise FitDiverged(f"fitted envelope grows (decay {g:.3g} 1/s)")
        g = 0.0
    ph = math.remainder(ph, TWO_PI)
    residual = float(np.sqrt(np.mean(result.fun ** 2)))
    if max_residual_rms is not None and residual > max_residual_rms:
        raise FitDiverged(
            f"residual rms {residual:.3g} above threshold {max_residual_rms:.3g}"
        )
    return DampedSineFit(
        frequency=f, decay_rate=g, amplitude=a, offset=o, phase=ph,
        residual_rms=residual,
    )


# ---------------------------------------------------------------------------
# Spectrum asymmetry and delay compensation
# ---------------------------------------------------------------------------

def spectrum_asymmetry(result: "SweepResult") -> float:
    """Mirror asymmetry of a steady-state spectrum in detuning.

    The first sweep axis must be a detuning grid symmetric about zero
    (mirror-paired within 1e-12 of the axis scale); returns the mean of
    |P(+eps0, A) - P(-eps0, A)| over all strictly positive detunings and all
    amplitudes.
    """
    detunings = np.asarray(result.grid.axis1.values, dtype=float)
    values = np.asarray(result.values, dtype=float)
    order = np.argsort(detunings)
    d = detunings[order]
    v = values[order, :]
    n = len(d)
    scale = max(1.0, float(np.max(np.abs(d))))
    if np.any(np.abs(d + d[::-1]) > 1e-12 * scale):
        raise AsymmetricGrid("detuning grid is not mirror-symmetric about zero")
    diffs = [np.abs(v[n - 1 - i, :] - v[i, :]) for i in range(n // 2)]
    return float(np.mean(diffs))


def delay_phase_offset(omega: float, delay: float) -> float:
    """Phase offset (omega * delay) mod 2 pi accumulated by a constant
    line delay between the modulation and drive pulses; in [0, 2 pi)."""
    r = math.remainder(omega * delay, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r
