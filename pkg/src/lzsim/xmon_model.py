"""Flux-to-frequency map of a dual-junction, flux-tunable qubit.

The transition frequency follows sqrt(8 E_C E_J |cos(pi Phi/Phi_0)|) - E_C
with both energies quoted as ordinary frequencies (E/h, GHz). A slow ac flux
component modulates the transition around its dc value; in the near-linear
region this reduces to omega_0 - A cos(omega t + phase) with a closed-form
modulation amplitude A.

All returned frequencies are angular (rad/s). The flux domain is restricted
to the primary lobe |Phi/Phi_0| < 0.5 (identical junctions assumed); callers
working on other lobes must fold the flux first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveFrequency, ValidationError

__all__ = [
    "QubitSpec",
    "FluxBias",
    "transition_frequency",
    "plasma_frequency",
    "modulation_amplitude",
    "effective_frequency",
    "linearity_error",
]

TWO_PI = 2.0 * math.pi

# Points per modulation period used by linearity_error; fixed for determinism.
LINEARITY_GRID_POINTS = 1024


@dataclass(frozen=True)
class QubitSpec:
    """Static qubit constants.

    ec_ghz, ej_ghz: charging and Josephson energies as frequencies (E/h, GHz),
    with ej/ec > 1 (transmon regime). gamma1, gamma_phi: energy relaxation and
    pure dephasing rates, plain exponential rates in 1/s.
    """

    ec_ghz: float
    ej_ghz: float
    gamma1: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self) -> None:
        if not (self.ec_ghz > 0.0 and self.ej_ghz > 0.0):
            raise ValidationError("QubitSpec requires ec_ghz > 0 and ej_ghz > 0")
        if not self.ej_ghz / self.ec_ghz > 1.0:
            raise ValidationError(
                f"QubitSpec requires ej/ec > 1, got {self.ej_ghz / self.ec_ghz:.3g}"
            )
        if self.gamma1 < 0.0 or self.gamma_phi < 0.0:
            raise ValidationError("QubitSpec rates must be >= 0")


@dataclass(frozen=True)
class FluxBias:
    """Flux operating point: dc bias plus a cosine ac component.

    phi_dc, phi_ac are in units of the flux quantum; omega_mod is the angular
    modulation frequency (rad/s) and phase its initial phase (rad). The full
    excursion must stay inside the primary lobe: |phi_dc| + phi_ac < 0.5.
    """

    phi_dc: float
    phi_ac: float = 0.0
    omega_mod: float = TWO_PI * 1.0e6
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.phi_ac < 0.0:
            raise ValidationError("FluxBias requires phi_ac >= 0")
        if abs(self.phi_dc) + self.phi_ac >= 0.5:
            raise ValidationError(
                "flux excursion leaves the primary lobe: |phi_dc| + phi_ac must be < 0.5"
            )
        if self.omega_mod <= 0.0:
            raise ValidationError("FluxBias requires omega_mod > 0")


def transition_frequency(q: QubitSpec, flux: float) -> float:
    """Angular 0->1 transition frequency (rad/s) at dimensionless flux Phi/Phi_0."""
    if abs(flux) >= 0.5:
        raise ValidationError(f"flux must satisfy |Phi/Phi_0| < 0.5, got {flux}")
    root = math.sqrt(8.0 * q.ec_ghz * q.ej_ghz * abs(math.cos(math.pi * flux)))
    if root <= q.ec_ghz:
        raise NonPositiveFrequency(
            f"transition frequency not positive at flux {flux}: the model left its valid range"
        )
    return TWO_PI * (root - q.ec_ghz) * 1e9


def plasma_frequency(q: QubitSpec, phi_dc: float) -> float:
    """Angular plasma frequency sqrt(8 E_C E_J cos(pi phi_dc))/hbar (rad/s)."""
    c = math.cos(math.pi * phi_dc)
    if c <= 0.0:
        raise NonPositiveFrequency(f"cos(pi phi_dc) <= 0 at phi_dc = {phi_dc}")
    return TWO_PI * math.sqrt(8.0 * q.ec_ghz * q.ej_ghz * c) * 1e9


def modulation_amplitude(q: QubitSpec, bias: FluxBias) -> float:
    """First-order transition-frequency modulation amplitude A (rad/s).

    A = omega_p * phase_amplitude * tan(pi phi_dc) / 2, with the dimensionless
    phase amplitude pi*phi_ac. Vanishes at phi_ac = 0 and at the optimal point
    phi_dc = 0.
    """
    wp = plasma_frequency(q, bias.phi_dc)
    return 0.5 * wp * (math.pi * bias.phi_ac) * math.tan(math.pi * bias.phi_dc)


def effective_frequency(q: QubitSpec, bias: FluxBias, t: float) -> float:
    """Linearized instantaneous transition frequency omega_0 - A cos(omega t + phase)."""
    omega0 = plasma_frequency(q, bias.phi_dc) - TWO_PI * q.ec_ghz * 1e9
    amp = modulation_amplitude(q, bias)
    return omega0 - amp * math.cos(bias.omega_mod * t + bias.phase)


def linearity_error(q: QubitSpec, bias: FluxBias) -> float:
    """Worst relative deviation of the linearized frequency over one period.

    max_t |exact omega_10(Phi(t)) - (omega_0 - A cos)| / A on a fixed
    1024-point grid. Zero when phi_ac = 0.
    """
    if bias.phi_ac == 0.0:
        return 0.0
    amp = modulation_amplitude(q, bias)
    omega0 = plasma_frequency(q, bias.phi_dc) - TWO_PI * q.ec_ghz * 1e9
    if amp == 0.0:
        # phi_dc = 0 with phi_ac > 0: purely second-order response, no
        # meaningful linearization scale.
        raise ValidationError("linearity_error needs phi_dc != 0 so that A > 0")
    theta = np.linspace(0.0, TWO_PI, LINEARITY_GRID_POINTS, endpoint=False)
    cos_t = np.cos(theta)
    flux = bias.phi_dc + bias.phi_ac * cos_t
    root = np.sqrt(8.0 * q.ec_ghz * q.ej_ghz * np.abs(np.cos(np.pi * flux)))
    if np.any(root <= q.ec_ghz):
        raise NonPositiveFrequency(
            "flux excursion reaches non-positive transition frequency"
        )
    exact = TWO_PI * (root - q.ec_ghz) * 1e9
    linear = omega0 - amp * cos_t
    return float(np.max(np.abs(exact - linear)) / abs(amp))
