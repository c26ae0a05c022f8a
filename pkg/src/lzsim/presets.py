"""Bundled parameter presets for the reference operating points.

Units follow the CLI boundary convention: ordinary frequencies in MHz,
times in us, phases in rad, rates in 1/s. ``fig4`` is the adiabatic-limit
phase sweep, ``fig5`` the adiabatic/non-adiabatic boundary point whose long
trace shows the slow Rabi-like envelope, and ``fig6a``/``fig6b`` the
steady-state spectra at two modulation phases.
"""

import math

# Measured decoherence of the device at the operating bias: T1 = 26.4 us,
# driven pure-dephasing rate 0.18e6 1/s.
GAMMA1_PER_S = 1.0 / 26.4e-6
GAMMA_PHI_PER_S = 0.18e6

_DECOHERENCE = {
    "qubit.gamma1_per_s": GAMMA1_PER_S,
    "qubit.gamma_phi_per_s": GAMMA_PHI_PER_S,
}

PRESETS: dict[str, dict] = {
    "fig4": {
        **_DECOHERENCE,
        "drive.rabi_mhz": 26.2,
        "drive.detuning_mhz": 0.0,
        "mod.amplitude_mhz": 72.0,
        "mod.frequency_mhz": 1.44,
        "mod.phase_rad": 0.5 * math.pi,
        "run.t_end_us": 3.0,
        "run.sample_dt_us": 0.002,
        "sweep.phi_start_rad": 0.2 * math.pi,
        "sweep.phi_stop_rad": 0.7 * math.pi,
        "sweep.phi_points": 26,
    },
    "fig5": {
        **_DECOHERENCE,
        "drive.rabi_mhz": 12.0,
        "drive.detuning_mhz": 0.0,
        "mod.amplitude_mhz": 63.75,
        "mod.frequency_mhz": 2.4,
        "mod.phase_rad": 0.5 * math.pi,
        "run.t_end_us": 40.0,
        "run.sample_dt_us": 0.01,
        "sweep.phi_start_rad": 0.2 * math.pi,
        "sweep.phi_stop_rad": 0.7 * math.pi,
        "sweep.phi_points": 26,
    },
    "fig6a": {
        **_DECOHERENCE,
        "drive.rabi_mhz": 12.0,
        "mod.frequency_mhz": 6.0,
        "mod.phase_rad": 0.4 * math.pi,
        "sweep.detuning_start_mhz": -40.0,
        "sweep.detuning_stop_mhz": 40.0,
        "sweep.detuning_points": 81,
        # The voltage-to-amplitude slope of the original 3-36 mV sweep is
        # not published; the amplitude axis covers A/omega from 0.5 to 15
        # at omega/2pi = 6 MHz, spanning the adiabatic-to-crossover range.
        "sweep.amplitude_start_mhz": 3.0,
        "sweep.amplitude_stop_mhz": 90.0,
        "sweep.amplitude_points": 34,
        "sweep.t_total_us": 40.0,
        "sweep.n_avg_periods": 5,
    },
}

PRESETS["fig6b"] = {**PRESETS["fig6a"], "mod.phase_rad": 0.9 * math.pi}
