"""Parameter-sweep engine: phase-vs-time population maps and steady-state
detuning-vs-amplitude spectra.

Cells are independent single-trace integrations, scheduled on a thread pool
(the integrator core releases the GIL). Results land by pre-assigned index,
so values are bitwise-identical for any worker count or axis ordering.
"""

from __future__ import annotations

import datetime
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .calibration import LinearMap
from .dynamics import GROUND, DriveSpec, ModulationSpec, Trace, evolve
from .errors import NotConverged, ValidationError
from .xmon_model import QubitSpec

__all__ = [
    "Axis",
    "SweepGrid",
    "SweepResult",
    "steady_state_population",
    "sweep_phase_time",
    "sweep_spectrum",
]

TWO_PI = 2.0 * math.pi

# Steady-state averages use this many dense samples per modulation period.
SAMPLES_PER_PERIOD = 256
# Two disjoint averaging windows may differ by at most this much.
CONVERGENCE_WINDOW_TOL = 0.005


@dataclass(frozen=True)
class Axis:
    """Named, ordered sweep axis with a unit label."""

    name: str
    values: np.ndarray
    unit: str

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) < 1:
            raise ValidationError(f"axis {self.name!r} needs a 1-D value list")
        if len(values) > 1:
            d = np.diff(values)
            if not (np.all(d > 0.0) or np.all(d < 0.0)):
                raise ValidationError(f"axis {self.name!r} must be strictly monotone")


@dataclass(frozen=True)
class SweepGrid:
    """Two sweep axes plus the record of everything held constant."""

    axis1: Axis
    axis2: Axis
    fixed: dict


@dataclass(frozen=True)
class SweepResult:
    """2-D array of scalars on a SweepGrid, with run metadata."""

    grid: SweepGrid
    values: np.ndarray
    metadata: dict

    def __post_init__(self) -> None:
        shape = (len(self.grid.axis1.values), len(self.grid.axis2.values))
        if self.values.shape != shape:
            raise ValidationError(
                f"values shape {self.values.shape} does not match grid {shape}"
            )
        if self.metadata.get("kind") == "population":
            if np.any(self.values < -1e-9) or np.any(self.values > 1.0 + 1e-9):
                raise ValidationError("population values must lie in [0, 1] within 1e-9")


def _worker_count(workers: int | None) -> int:
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValidationError("workers must be >= 1")
    return workers


def _run_cells(cells: Sequence, fn: Callable, workers: int | None) -> list:
    n = _worker_count(workers)
    if n <= 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, cells))


def _steady_average(trace: Trace, n_avg_periods: int) -> tuple[float, float]:
    """Period-window averages from a dense trace: returns (mean over the
    final window, |difference| between the two last disjoint windows)."""
    t, p = trace.times, trace.populations
    n_win = n_avg_periods * SAMPLES_PER_PERIOD
    if len(t) < 2 * n_win + 1:
        raise ValidationError("trace too short for two disjoint averaging windows")
    w1 = float(np.trapezoid(p[-n_win - 1:], t[-n_win - 1:])
               / (t[-1] - t[-n_win - 1]))
    w2 = float(np.trapezoid(p[-2 * n_win - 1:-n_win], t[-2 * n_win - 1:-n_win])
               / (t[-n_win - 1] - t[-2 * n_win - 1]))
    return w1, abs(w1 - w2)


def _steady_cell(mod: ModulationSpec, drive: DriveSpec, q: QubitSpec,
                 t_total: float, n_avg_periods: int, tol: float
                 ) -> tuple[float, float, float]:
    period = TWO_PI / mod.omega
    trace = evolve(GROUND, mod, drive, q, t_total,
                   sample_dt=period / SAMPLES_PER_PERIOD, tol=tol)
    value, win_diff = _steady_average(trace, n_avg_periods)
    return value, win_diff, trace.max_bloch_norm


def _check_steady_preconditions(mod: ModulationSpec, q: QubitSpec,
                                t_total: float, n_avg_periods: int) -> None:
    if n_avg_periods < 1:
        raise ValidationError("n_avg_periods must be >= 1")
    period = TWO_PI / mod.omega
    if n_avg_periods * period >= t_total / 4.0:
        raise ValidationError(
            "averaging window must cover < 1/4 of the drive: shorten "
            "n_avg_periods or lengthen t_total"
        )
    total_rate = q.gamma1 + q.gamma_phi
    if total_rate <= 0.0:
        raise ValidationError(
            "a steady state needs dissipation: gamma1 + gamma_phi > 0"
        )
    if t_total * total_rate < 5.0:
        raise ValidationError(
            f"t_total = {t_total:.3g} s spans only {t_total * total_rate:.2f} "
            "combined decay constants, need >= 5 to plausibly reach steady state"
        )


def steady_state_population(mod: ModulationSpec, drive: DriveSpec, q: QubitSpec,
                            t_total: float = 40e-6, n_avg_periods: int = 5,
                            tol: float = 1e-9) -> float:
    """Drive from the ground state for ``t_total`` and return the population
    averaged over the final ``n_avg_periods`` full modulation periods.

    The average over the preceding (disjoint) window must agree within
    0.005, else NotConverged is raised.
    """
    _check_steady_preconditions(mod, q, t_total, n_avg_periods)
    value, win_diff, _ = _steady_cell(mod, drive, q, t_total, n_avg_periods, tol)
    if win_diff > CONVERGENCE_WINDOW_TOL:
        raise NotConverged(
            f"steady-state windows differ by {win_diff:.4g} > {CONVERGENCE_WINDOW_TOL}"
        )
    return value


def _metadata(tol: float, extra: dict) -> dict:
    md = {
        "kind": "population",
        "tol": tol,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    md.update(extra)
    return md


def sweep_phase_time(phis: Sequence[float], mod: ModulationSpec,
                     drive: DriveSpec, q: QubitSpec, t_end: float,
                     sample_dt: float | None = None, tol: float = 1e-9,
                     workers: int | None = None) -> SweepResult:
    """Population map over (modulation phase) x (time).

    ``mod`` supplies amplitude and frequency; its phase field is replaced by
    each entry of ``phis``. One integration per phase; rows land by index.
    """
    if len(phis) < 1:
        raise ValidationError("phis must be non-empty")

    def one(phi: float) -> Trace:
        m = ModulationSpec(amplitude=mod.amplitude, omega=mod.omega, phase=phi)
        try:
            return evolve(GROUND, m, drive, q, t_end, sample_dt=sample_dt, tol=tol)
        except Exception as exc:
            raise type(exc)(f"phase sweep failed at phi = {phi!r}: {exc}") from exc

    traces = _run_cells(list(phis), one, workers)
    times = traces[0].times
    values = np.stack([tr.populations for tr in traces])
    grid = SweepGrid(
        axis1=Axis("phase", np.asarray(phis, dtype=float), "rad"),
        axis2=Axis("time", times, "s"),
        fixed={
            "amplitude": mod.amplitude, "omega": mod.omega,
            "rabi": drive.rabi, "detuning": drive.detuning,
            "gamma1": q.gamma1, "gamma_phi": q.gamma_phi,
        },
    )
    md = _metadata(tol, {
        "t_end": t_end,
        "max_bloch_norm": max(tr.max_bloch_norm for tr in traces),
    })
    return SweepResult(grid=grid, values=values, metadata=md)


def sweep_spectrum(detunings: Sequence[float], amplitudes: Sequence[float],
                   mod: ModulationSpec, drive: DriveSpec, q: QubitSpec,
                   t_total: float = 40e-6, n_avg_periods: int = 5,
                   tol: float = 1e-9, workers: int | None = None,
                   voltage_map: LinearMap | None = None) -> SweepResult:
    """Steady-state population over (detuning) x (amplitude).

    ``mod`` supplies frequency and phase; ``drive`` the Rabi rate. When
    ``voltage_map`` is given, ``amplitudes`` are voltages and each cell's
    modulation amplitude is slope * V + intercept. Cells that fail the
    steady-state convergence check are recorded in
    metadata['unconverged_cells'] rather than aborting the sweep.
    """
    detunings = np.asarray(detunings, dtype=float)
    axis2_values = np.asarray(amplitudes, dtype=float)
    if voltage_map is not None:
        amps = np.array([voltage_map(v) for v in axis2_values])
        axis2 = Axis("voltage", axis2_values, "mV")
    else:
        amps = axis2_values
        axis2 = Axis("amplitude", axis2_values, "rad/s")
    if np.any(amps < 0.0):
        raise ValidationError("modulation amplitudes must be >= 0")
    _check_steady_preconditions(mod, q, t_total, n_avg_periods)

    cells = [(i, j) for i in range(len(detunings)) for j in range(len(amps))]

    def one(cell: tuple[int, int]) -> tuple[float, float, float]:
        i, j = cell
        m = ModulationSpec(amplitude=amps[j], omega=mod.omega, phase=mod.phase)
        d = DriveSpec(rabi=drive.rabi, detuning=detunings[i])
        return _steady_cell(m, d, q, t_total, n_avg_periods, tol)

    results = _run_cells(cells, one, workers)
    values = np.empty((len(detunings), len(amps)))
    unconverged = []
    max_norm = 0.0
    for (i, j), (value, win_diff, norm) in zip(cells, results):
        values[i, j] = value
        max_norm = max(max_norm, norm)
        if win_diff > CONVERGENCE_WINDOW_TOL:
            unconverged.append((i, j, win_diff))
    grid = SweepGrid(
        axis1=Axis("detuning", detunings, "rad/s"),
        axis2=axis2,
        fixed={
            "omega": mod.omega, "phase": mod.phase, "rabi": drive.rabi,
            "gamma1": q.gamma1, "gamma_phi": q.gamma_phi,
            "voltage_slope": voltage_map.slope if voltage_map else None,
            "voltage_intercept": voltage_map.intercept if voltage_map else None,
        },
    )
    md = _metadata(tol, {
        "t_total": t_total,
        "n_avg_periods": n_avg_periods,
        "steady_window": f"final {n_avg_periods} modulation periods",
        "unconverged_cells": unconverged,
        "max_bloch_norm": max_norm,
    })
    return SweepResult(grid=grid, values=values, metadata=md)
