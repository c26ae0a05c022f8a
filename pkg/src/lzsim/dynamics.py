"""Two-level driven-dissipative dynamics.

The qubit state is a Bloch vector (x, y, z) with sigma_z = |0><0| - |1><1|,
so the ground state is (0, 0, 1) and the excited-state population is
(1 - z)/2. Relaxation (rate gamma1) decays |1> -> |0>, i.e. z -> +1; pure
dephasing (rate gamma_phi) damps the transverse components. Both rates are
plain exponential rates in 1/s.

Two frames are integrated:

* ``evolve`` - rotating frame at the drive frequency after the rotating-wave
  approximation: H = -[eps0 - A cos(om t + phi)] sz/2 + Omega sx/2 (rad/s,
  hbar = 1).
* ``evolve_lab_frame`` - the untransformed Hamiltonian with transverse term
  Omega cos(omega_d t) sx, for short validation traces.

Traces are deterministic: the same inputs give bitwise-identical output on
any thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _integrator
from .errors import (
    ExcessiveStepCount,
    InvariantViolation,
    MissingDriveFrequency,
    StepSizeUnderflow,
    ValidationError,
)
from .xmon_model import QubitSpec

__all__ = [
    "DriveSpec",
    "ModulationSpec",
    "QubitState",
    "Trace",
    "GROUND",
    "rotating_hamiltonian",
    "lab_hamiltonian",
    "lindblad_rhs",
    "population",
    "default_sample_dt",
    "evolve",
    "evolve_lab_frame",
]

TWO_PI = 2.0 * math.pi

# Hard cap on integration steps for a single trace (~20 s of compute).
_MAX_STEPS = 200_000_000
# Lab-frame runs are rejected up front when even an optimistic step count
# (8 steps per cycle of the fastest rate) exceeds this.
_PROJECTED_STEP_LIMIT = 100_000_000

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _fold_phase(phase: float) -> float:
    """Fold a phase into [0, 2pi). Exact (IEEE remainder), so phases that
    differ by a representable multiple of 2pi fold to the same float."""
    r = math.remainder(phase, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class ModulationSpec:
    """Longitudinal (transition-frequency) modulation: amplitude A and
    angular frequency omega in rad/s, initial phase in rad."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude < 0.0:
            raise ValidationError("ModulationSpec requires amplitude >= 0")
        if self.omega <= 0.0:
            raise ValidationError("ModulationSpec requires omega > 0")
        object.__setattr__(self, "phase", _fold_phase(self.phase))


@dataclass(frozen=True)
class DriveSpec:
    """Transverse drive: Rabi angular frequency and detuning eps0 = omega0 -
    omega_d (rad/s). ``drive_frequency`` is the absolute drive frequency,
    needed only for lab-frame runs; when set, the detuning must be a small
    fraction of it for the rotating-wave picture to make sense."""

    rabi: float
    detuning: float = 0.0
    drive_frequency: float | None = None

    def __post_init__(self) -> None:
        if self.rabi < 0.0:
            raise ValidationError("DriveSpec requires rabi >= 0")
        if self.drive_frequency is not None:
            if self.drive_frequency <= 0.0:
                raise ValidationError("DriveSpec requires drive_frequency > 0")
            if abs(self.detuning) > 0.05 * self.drive_frequency:
                raise ValidationError(
                    "lab-frame runs need |detuning| << drive_frequency"
                )


@dataclass(frozen=True)
class QubitState:
    """Density operator as a Bloch vector; trace is 1 by construction."""

    bloch: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        x, y, z = self.bloch
        if x * x + y * y + z * z > 1.0 + 1e-9:
            raise ValidationError(
                f"Bloch vector leaves the unit ball: |r|^2 = {x * x + y * y + z * z!r}"
            )


GROUND = QubitState((0.0, 0.0, 1.0))


@dataclass(frozen=True)
class Trace:
    """Sampled time evolution: times (s), excited-state populations, and
    optionally the full Bloch history (n, 3). ``max_bloch_norm`` is the
    largest Bloch norm the integrator saw at any accepted step."""

    times: np.ndarray
    populations: np.ndarray
    bloch: np.ndarray | None = None
    max_bloch_norm: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.times) != len(self.populations):
            raise ValidationError("Trace times and populations must have equal length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0.0):
            raise ValidationError("Trace times must be strictly increasing")
        if np.any(self.populations < -1e-9) or np.any(self.populations > 1.0 + 1e-9):
            raise ValidationError("Trace populations must lie in [0, 1] within 1e-9")


def rotating_hamiltonian(mod: ModulationSpec, drive: DriveSpec, t: float) -> np.ndarray:
    """Rotating-frame Hamiltonian (2x2, rad/s, hbar = 1) at time t:
    -[eps0 - A cos(om t + phi)] sz/2 + Omega sx/2."""
    eps = drive.detuning - mod.amplitude * math.cos(mod.omega * t + mod.phase)
    return -0.5 * eps * _SIGMA_Z + 0.5 * drive.rabi * _SIGMA_X


def lab_hamiltonian(omega0: float, mod: ModulationSpec, drive: DriveSpec, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian: -[omega0 - A cos(om t + phi)] sz/2 +
    Omega cos(omega_d t) sx."""
    if drive.drive_frequency is None:
        raise MissingDriveFrequency("lab_hamiltonian requires drive_frequency")
    eps = omega0 - mod.amplitude * math.cos(mod.omega * t + mod.phase)
    return -0.5 * eps * _SIGMA_Z + drive.rabi * math.cos(drive.drive_frequency * t) * _SIGMA_X


def lindblad_rhs(state: QubitState, h: np.ndarray, gamma1: float, gamma_phi: float) -> np.ndarray:
    """Bloch-vector time derivative under Hamiltonian ``h`` (2x2 Hermitian,
    rad/s) plus relaxation and dephasing:

        dx = (unitary) - (gamma1/2 + gamma_phi) x
        dy = (unitary) - (gamma1/2 + gamma_phi) y
        dz = (unitary) + gamma1 (1 - z)
    """
    x, y, z = state.bloch
    bx = 2.0 * h[0, 1].real
    by = -2.0 * h[0, 1].imag
    bz = (h[0, 0] - h[1, 1]).real
    gp = 0.5 * gamma1 + gamma_phi
    return np.array([
        by * z - bz * y - gp * x,
        bz * x - bx * z - gp * y,
        bx * y - by * x + gamma1 * (1.0 - z),
    ])


def population(state: QubitState) -> float:
    """Excited-state population (1 - z)/2, clamped to [0, 1]."""
    p = 0.5 * (1.0 - state.bloch[2])
    return min(1.0, max(0.0, p))


def default_sample_dt(mod: ModulationSpec, drive: DriveSpec) -> float:
    """Default sampling interval: 1 ns, or finer so that the fastest of
    omega, Omega and A gets >= 64 samples per cycle."""
    fastest = max(mod.omega, mod.amplitude, drive.rabi)
    if fastest <= 0.0:
        return 1e-9
    return min(1e-9, TWO_PI / (64.0 * fastest))


def _sample_times(t_end: float, sample_dt: float) -> np.ndarray:
    n = int(math.floor(t_end / sample_dt + 1e-9))
    ts = np.arange(n + 1, dtype=float) * sample_dt
    if ts[-1] > t_end:
        ts[-1] = t_end
    return ts


def _check_common(t_end: float, sample_dt: float, tol: float) -> None:
    if t_end <= 0.0:
        raise ValidationError("t_end must be positive")
    if sample_dt <= 0.0:
        raise ValidationError("sample_dt must be positive")
    if not 1e-12 <= tol <= 1e-4:
        raise ValidationError("tol must lie in [1e-12, 1e-4]")


def _run(frame: int, level: float, mod: ModulationSpec, drive: DriveSpec,
         q: QubitSpec, initial: QubitState, t_end: float, sample_dt: float,
         tol: float, store_bloch: bool) -> Trace:
    ts = _sample_times(t_end, sample_dt)
    out = np.empty((len(ts), 3), dtype=float)
    norm_cap = 1.0 + 100.0 * tol
    wd = drive.drive_frequency if frame == _integrator.FRAME_LAB else 0.0
    x0, y0, z0 = initial.bloch
    status, _, max_norm = _integrator.integrate_bloch(
        frame, level, mod.amplitude, mod.omega, mod.phase, drive.rabi, wd,
        q.gamma1, 0.5 * q.gamma1 + q.gamma_phi,
        x0, y0, z0, t_end, ts, tol, norm_cap, _MAX_STEPS, out,
    )
    if status == _integrator.STEP_UNDERFLOW:
        raise StepSizeUnderflow(f"integration stalled before t_end = {t_end}")
    if status == _integrator.NORM_VIOLATION:
        raise InvariantViolation(
            f"Bloch norm {max_norm!r} exceeded 1 + 100*tol = {norm_cap!r}"
        )
    if status == _integrator.STEP_LIMIT:
        raise ExcessiveStepCount(f"more than {_MAX_STEPS} steps needed")
    populations = 0.5 * (1.0 - out[:, 2])
    return Trace(
        times=ts,
        populations=populations,
        bloch=out if store_bloch else None,
        max_bloch_norm=max_norm,
    )


def evolve(initial: QubitState, mod: ModulationSpec, drive: DriveSpec,
           q: QubitSpec, t_end: float, sample_dt: float | None = None,
           tol: float = 1e-9, store_bloch: bool = False) -> Trace:
    """Integrate the rotating-frame master equation from t = 0 to t_end.

    Returns a Trace sampled at multiples of ``sample_dt`` (default: see
    ``default_sample_dt``). Local error is controlled to ``tol`` by the
    embedded Runge-Kutta pair; the Bloch norm is monitored every step.
    """
    if sample_dt is None:
        sample_dt = default_sample_dt(mod, drive)
    _check_common(t_end, sample_dt, tol)
    return _run(_integrator.FRAME_ROTATING, drive.detuning, mod, drive, q,
                initial, t_end, sample_dt, tol, store_bloch)


def evolve_lab_frame(initial: QubitState, omega0: float, mod: ModulationSpec,
                     drive: DriveSpec, q: QubitSpec, t_end: float,
                     sample_dt: float | None = None, tol: float = 1e-9,
                     store_bloch: bool = False) -> Trace:
    """Integrate the lab-frame master equation (no rotating-wave
    approximation). Intended for short validation traces; raises
    ExcessiveStepCount when the projected step count is unreasonable."""
    if drive.drive_frequency is None:
        raise MissingDriveFrequency("evolve_lab_frame requires drive_frequency")
    if sample_dt is None:
        sample_dt = min(default_sample_dt(mod, drive),
                        TWO_PI / (64.0 * drive.drive_frequency))
    _check_common(t_end, sample_dt, tol)
    fastest = max(drive.drive_frequency, mod.omega, mod.amplitude, drive.rabi, abs(omega0))
    projected = 8.0 * t_end * fastest / TWO_PI
    if projected > _PROJECTED_STEP_LIMIT:
        raise ExcessiveStepCount(
            f"projected step count {projected:.3g} exceeds {_PROJECTED_STEP_LIMIT:g}; "
            "shorten t_end"
        )
    return _run(_integrator.FRAME_LAB, omega0, mod, drive, q,
                initial, t_end, sample_dt, tol, store_bloch)
