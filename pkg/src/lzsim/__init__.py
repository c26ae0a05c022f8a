"""Simulator and analysis toolkit for phase-sensitive Landau-Zener-type
interference in a flux-modulated two-level superconducting qubit.

Submodules:

* ``xmon_model`` - flux to transition-frequency map and its linearization.
* ``dynamics`` - rotating- and lab-frame master-equation integration.
* ``analysis`` - closed-form envelope frequencies, special functions,
  damped-sine fitting, spectrum asymmetry.
* ``calibration`` - spectroscopy and modulation-amplitude calibration fits.
* ``sweep`` - phase-vs-time maps and steady-state spectra.
* ``cli`` - command-line front end (``lzsim``).
"""

from .analysis import (
    DampedSineFit,
    LzsPoint,
    adiabaticity_delta,
    classify_regime,
    delay_phase_offset,
    fit_damped_sine,
    landau_zener_probability,
    rabi_like_frequency_gv,
    rabi_like_frequency_lz,
    spectrum_asymmetry,
    sweep_velocity,
)
from .calibration import (
    LinearMap,
    SpectroscopyPoint,
    bessel_zero_voltage_calibration,
    ec_from_two_photon_splitting,
    fit_flux_spectrum,
    fit_linear_map,
)
from .dynamics import (
    GROUND,
    DriveSpec,
    ModulationSpec,
    QubitState,
    Trace,
    evolve,
    evolve_lab_frame,
    lab_hamiltonian,
    lindblad_rhs,
    population,
    rotating_hamiltonian,
)
from .special import bessel_j, complete_elliptic_e, complex_gamma_arg
from .sweep import (
    Axis,
    SweepGrid,
    SweepResult,
    steady_state_population,
    sweep_phase_time,
    sweep_spectrum,
)
from .xmon_model import (
    FluxBias,
    QubitSpec,
    effective_frequency,
    linearity_error,
    modulation_amplitude,
    plasma_frequency,
    transition_frequency,
)

__version__ = "0.1.0"

__all__ = [
    "QubitSpec", "FluxBias", "transition_frequency", "plasma_frequency",
    "modulation_amplitude", "effective_frequency", "linearity_error",
    "DriveSpec", "ModulationSpec", "QubitState", "Trace", "GROUND",
    "rotating_hamiltonian", "lab_hamiltonian", "lindblad_rhs", "population",
    "evolve", "evolve_lab_frame",
    "LzsPoint", "DampedSineFit", "sweep_velocity", "adiabaticity_delta",
    "landau_zener_probability", "classify_regime", "rabi_like_frequency_lz",
    "rabi_like_frequency_gv", "fit_damped_sine", "spectrum_asymmetry",
    "delay_phase_offset",
    "complex_gamma_arg", "complete_elliptic_e", "bessel_j",
    "SpectroscopyPoint", "LinearMap", "fit_flux_spectrum",
    "ec_from_two_photon_splitting", "bessel_zero_voltage_calibration",
    "fit_linear_map",
    "Axis", "SweepGrid", "SweepResult", "steady_state_population",
    "sweep_phase_time", "sweep_spectrum",
]
