"""Command-line front end.

Subcommands: evolve, sweep-phase, sweep-spectrum, formulas, fit-trace,
calibrate-bessel, fit-spectrum, validate-rwa. Parameters come from bundled
presets (--preset), a flat ``key = value`` config file with dotted
namespaces (--config), and repeatable --set overrides, in that precedence
order. Unknown keys in config files or --set are rejected.

Units at the boundary: ordinary frequencies in MHz (GHz for absolute qubit
and drive frequencies), times in us, phases in rad, rates in 1/s. All
internal computation is angular (rad/s).

Every run writes its output atomically plus a ``<out>.meta`` sidecar holding
the complete effective configuration in config-file syntax; re-running from
the sidecar reproduces the output bitwise. CSV values carry 17 significant
digits so re-ingestion is exact.

Exit codes: 0 success, 2 config/validation error, 3 solver error,
4 fit/calibration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import analysis, calibration, sweep
from .dynamics import (
    GROUND,
    DriveSpec,
    ModulationSpec,
    Trace,
    evolve,
    evolve_lab_frame,
)
from .errors import (
    AsymmetricGrid,
    DegenerateAbscissa,
    DetuningExceedsAmplitude,
    ExcessiveStepCount,
    FitDiverged,
    InsufficientCurves,
    InsufficientData,
    InvariantViolation,
    LzsimError,
    MissingDriveFrequency,
    NonPositiveFrequency,
    NoMinimumFound,
    NotConverged,
    OutOfDomain,
    OutOfValidityRange,
    ParseError,
    StepSizeUnderflow,
    ValidationError,
)
from .presets import PRESETS
from .xmon_model import QubitSpec

TWO_PI = 2.0 * math.pi

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_FIT = 4

_CONFIG_ERRORS = (ParseError, ValidationError, DetuningExceedsAmplitude,
                  OutOfDomain, OutOfValidityRange, NonPositiveFrequency,
                  MissingDriveFrequency)
_SOLVER_ERRORS = (StepSizeUnderflow, InvariantViolation, ExcessiveStepCount,
                  NotConverged)
_FIT_ERRORS = (FitDiverged, InsufficientData, InsufficientCurves,
               NoMinimumFound, DegenerateAbscissa, AsymmetricGrid)

_REQUIRED = object()

# Schema entries: key -> (python type, default). _REQUIRED means the key must
# be provided by a preset, config file or --set.
_QUBIT_KEYS = {
    "qubit.gamma1_per_s": (float, 0.0),
    "qubit.gamma_phi_per_s": (float, 0.0),
}
_DRIVE_KEYS = {
    "drive.rabi_mhz": (float, _REQUIRED),
    "drive.detuning_mhz": (float, 0.0),
}
_MOD_KEYS = {
    "mod.amplitude_mhz": (float, _REQUIRED),
    "mod.frequency_mhz": (float, _REQUIRED),
    "mod.phase_rad": (float, 0.0),
}
_TOL_KEY = {"run.tol": (float, 1e-9)}

SCHEMAS: dict[str, dict] = {
    "evolve": {
        **_QUBIT_KEYS, **_DRIVE_KEYS, **_MOD_KEYS, **_TOL_KEY,
        "run.t_end_us": (float, _REQUIRED),
        "run.sample_dt_us": (float, None),
    },
    "sweep-phase": {
        **_QUBIT_KEYS, **_DRIVE_KEYS, **_MOD_KEYS, **_TOL_KEY,
        "run.t_end_us": (float, _REQUIRED),
        "run.sample_dt_us": (float, None),
        "run.workers": (int, None),
        "sweep.phi_start_rad": (float, _REQUIRED),
        "sweep.phi_stop_rad": (float, _REQUIRED),
        "sweep.phi_points": (int, _REQUIRED),
    },
    "sweep-spectrum": {
        **_QUBIT_KEYS,
        "drive.rabi_mhz": (float, _REQUIRED),
        "mod.frequency_mhz": (float, _REQUIRED),
        "mod.phase_rad": (float, 0.0),
        **_TOL_KEY,
        "run.workers": (int, None),
        "sweep.detuning_start_mhz": (float, _REQUIRED),
        "sweep.detuning_stop_mhz": (float, _REQUIRED),
        "sweep.detuning_points": (int, _REQUIRED),
        "sweep.amplitude_start_mhz": (float, _REQUIRED),
        "sweep.amplitude_stop_mhz": (float, _REQUIRED),
        "sweep.amplitude_points": (int, _REQUIRED),
        "sweep.t_total_us": (float, 40.0),
        "sweep.n_avg_periods": (int, 5),
    },
    "formulas": {**_DRIVE_KEYS, **_MOD_KEYS},
    "fit-trace": {
        "fit.guess_frequency_mhz": (float, None),
        "fit.max_residual_rms": (float, None),
    },
    "calibrate-bessel": {
        "calib.zero_index": (int, 1),
    },
    "fit-spectrum": {
        "calib.two_photon_mhz": (float, None),
    },
    "validate-rwa": {
        **_QUBIT_KEYS, **_DRIVE_KEYS, **_MOD_KEYS, **_TOL_KEY,
        "qubit.omega0_ghz": (float, 4.365),
        "run.t_end_us": (float, 0.2),
        "run.sample_dt_us": (float, None),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved, validated parameter record for one subcommand."""

    command: str
    params: dict


def _coerce(key: str, raw: str | float | int, target: type):
    if isinstance(raw, str):
        try:
            value = target(raw) if target is not float else float(raw)
        except ValueError as exc:
            raise ParseError(f"key {key!r}: cannot parse {raw!r} as {target.__name__}") from exc
        return value
    if target is int and isinstance(raw, float) and raw != int(raw):
        raise ParseError(f"key {key!r}: expected an integer, got {raw!r}")
    return target(raw)


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    entries: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"{path}:{lineno}: expected 'key = value', got {line.rstrip()!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key or not value:
            raise ParseError(f"{path}:{lineno}: empty key or value")
        entries[key] = value
    return entries


def parse_config(command: str, config_path: str | None = None,
                 overrides: dict | None = None,
                 preset: str | None = None) -> RunConfig:
    """Resolve defaults, preset, config file and overrides into a RunConfig.

    Precedence (low to high): schema defaults, preset, config file, overrides.
    Unknown keys in the config file or overrides are rejected; preset entries
    outside the command's schema are ignored so one preset can serve several
    subcommands.
    """
    if command not in SCHEMAS:
        raise ValidationError(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        merged.update({k: v for k, v in PRESETS[preset].items() if k in schema})
    for source_name, source in (("config file", read_config_file(config_path) if config_path else {}),
                                ("override", overrides or {})):
        for key, value in source.items():
            if key not in schema:
                raise ValidationError(f"unknown key {key!r} in {source_name} for {command!r}")
            merged[key] = value
    params: dict = {}
    for key, (target, default) in schema.items():
        if key in merged:
            params[key] = _coerce(key, merged[key], target)
        elif default is _REQUIRED:
            raise ValidationError(f"missing required key {key!r} for {command!r}")
        else:
            params[key] = default
    _validate_params(command, params)
    return RunConfig(command=command, params=params)


def _validate_params(command: str, p: dict) -> None:
    def positive(key: str) -> None:
        if p.get(key) is not None and not p[key] > 0.0:
            raise ValidationError(f"{key} must be > 0, got {p[key]!r}")

    def non_negative(key: str) -> None:
        if p.get(key) is not None and p[key] < 0.0:
            raise ValidationError(f"{key} must be >= 0, got {p[key]!r}")

    for key in ("mod.frequency_mhz", "run.t_end_us", "run.sample_dt_us",
                "run.tol", "sweep.t_total_us", "qubit.omega0_ghz"):
        if key in p:
            positive(key)
    for key in ("drive.rabi_mhz", "mod.amplitude_mhz", "qubit.gamma1_per_s",
                "qubit.gamma_phi_per_s"):
        if key in p:
            non_negative(key)
    for key in ("sweep.phi_points", "sweep.detuning_points",
                "sweep.amplitude_points"):
        if key in p and p[key] < 2:
            raise ValidationError(f"{key} must be >= 2, got {p[key]!r}")
    if "run.workers" in p and p["run.workers"] is not None and p["run.workers"] < 1:
        raise ValidationError("run.workers must be >= 1")
    if "sweep.n_avg_periods" in p and p["sweep.n_avg_periods"] < 1:
        raise ValidationError("sweep.n_avg_periods must be >= 1")


# ---------------------------------------------------------------------------
# Builders from boundary units to internal specs
# ---------------------------------------------------------------------------

def _qubit(p: dict) -> QubitSpec:
    # E_C/E_J only matter for spectroscopy; dynamics needs the rates.
    return QubitSpec(ec_ghz=0.25, ej_ghz=13.0,
                     gamma1=p["qubit.gamma1_per_s"],
                     gamma_phi=p["qubit.gamma_phi_per_s"])


def _drive(p: dict, drive_frequency: float | None = None) -> DriveSpec:
    return DriveSpec(rabi=TWO_PI * p["drive.rabi_mhz"] * 1e6,
                     detuning=TWO_PI * p.get("drive.detuning_mhz", 0.0) * 1e6,
                     drive_frequency=drive_frequency)


def _mod(p: dict) -> ModulationSpec:
    return ModulationSpec(amplitude=TWO_PI * p["mod.amplitude_mhz"] * 1e6,
                          omega=TWO_PI * p["mod.frequency_mhz"] * 1e6,
                          phase=p["mod.phase_rad"])


def _sample_dt(p: dict) -> float | None:
    dt = p.get("run.sample_dt_us")
    return None if dt is None else dt * 1e-6


def _default_workers(p: dict) -> int | None:
    if p.get("run.workers") is not None:
        return p["run.workers"]
    env = os.environ.get("LZSIM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"LZSIM_WORKERS must be an integer, got {env!r}")
    return None


# ---------------------------------------------------------------------------
# Atomic output, CSV writers/readers
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lzsim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_sidecar(out_path: str, config: RunConfig) -> None:
    import datetime

    lines = [
        f"# lzsim run metadata for {os.path.basename(out_path)}",
        f"# command: {config.command}",
        f"# written: {datetime.datetime.now(datetime.timezone.utc).isoformat()}",
        "# units: frequencies MHz (absolute GHz), times us, phases rad, rates 1/s",
    ]
    for key in sorted(config.params):
        value = config.params[key]
        if value is None:
            continue
        rendered = _fmt(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {rendered}")
    _atomic_write(out_path + ".meta", "\n".join(lines) + "\n")


def write_trace_csv(path: str, trace: Trace) -> None:
    rows = ["t_us,p1"]
    rows += [f"{_fmt(t * 1e6)},{_fmt(p)}"
             for t, p in zip(trace.times, trace.populations)]
    _atomic_write(path, "\n".join(rows) + "\n")


def read_trace_csv(path: str) -> Trace:
    times, pops = [], []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "t_us,p1":
            raise ParseError(f"{path}: expected header 't_us,p1', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                t_us, p1 = line.split(",")
                times.append(float(t_us) * 1e-6)
                pops.append(float(p1))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad row {line.rstrip()!r}") from exc
    return Trace(times=np.array(times), populations=np.array(pops))


def write_phase_map_csv(path: str, result: sweep.SweepResult) -> None:
    rows = ["phi_rad,t_us,p1"]
    phis = result.grid.axis1.values
    times = result.grid.axis2.values
    for i, phi in enumerate(phis):
        for j, t in enumerate(times):
            rows.append(f"{_fmt(phi)},{_fmt(t * 1e6)},{_fmt(result.values[i, j])}")
    _atomic_write(path, "\n".join(rows) + "\n")


def write_spectrum_csv(path: str, result: sweep.SweepResult) -> None:
    rows = ["detuning_mhz,amplitude_mhz,p1"]
    dets = result.grid.axis1.values
    amps = result.grid.axis2.values
    for i, det in enumerate(dets):
        for j, amp in enumerate(amps):
            rows.append(f"{_fmt(det / TWO_PI / 1e6)},{_fmt(amp / TWO_PI / 1e6)},"
                        f"{_fmt(result.values[i, j])}")
    _atomic_write(path, "\n".join(rows) + "\n")


def read_long_csv(path: str, header: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a three-column long-form CSV; returns the raw columns."""
    cols: tuple[list, list, list] = ([], [], [])
    with open(path, "r", encoding="utf-8") as fh:
        got = fh.readline().strip()
        if got != header:
            raise ParseError(f"{path}: expected header {header!r}, got {got!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 columns")
            try:
                for col, part in zip(cols, parts):
                    col.append(float(part))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad row {line.rstrip()!r}") from exc
    return tuple(np.array(c) for c in cols)  # type: ignore[return-value]


def read_calibration_curves(path: str) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Read 'omega_mhz,voltage,p1' rows into per-frequency curves."""
    om, volts, pops = read_long_csv(path, "omega_mhz,voltage,p1")
    curves = []
    for omega_mhz in sorted(set(om.tolist())):
        mask = om == omega_mhz
        order = np.argsort(volts[mask])
        curves.append((TWO_PI * omega_mhz * 1e6,
                       volts[mask][order], pops[mask][order]))
    return curves


def read_spectroscopy_csv(path: str) -> list[calibration.SpectroscopyPoint]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "flux,freq_ghz":
            raise ParseError(f"{path}: expected header 'flux,freq_ghz', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                flux, freq = (float(part) for part in line.split(","))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad row {line.rstrip()!r}") from exc
            points.append(calibration.SpectroscopyPoint(flux=flux, frequency_ghz=freq))
    return points


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _require_out(args: argparse.Namespace) -> str:
    if not args.out:
        raise ValidationError("this subcommand requires --out")
    return args.out


def _require_infile(args: argparse.Namespace) -> str:
    if not args.infile:
        raise ValidationError("this subcommand requires --in")
    return args.infile


def _cmd_evolve(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    trace = evolve(GROUND, _mod(p), _drive(p), _qubit(p), p["run.t_end_us"] * 1e-6,
                   sample_dt=_sample_dt(p), tol=p["run.tol"])
    out = _require_out(args)
    write_trace_csv(out, trace)
    _write_sidecar(out, config)
    print(f"wrote {out} ({len(trace.times)} samples)")


def _cmd_sweep_phase(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    phis = np.linspace(p["sweep.phi_start_rad"], p["sweep.phi_stop_rad"],
                       p["sweep.phi_points"])
    result = sweep.sweep_phase_time(
        phis, _mod(p), _drive(p), _qubit(p), p["run.t_end_us"] * 1e-6,
        sample_dt=_sample_dt(p), tol=p["run.tol"], workers=_default_workers(p))
    out = _require_out(args)
    write_phase_map_csv(out, result)
    _write_sidecar(out, config)
    print(f"wrote {out} ({result.values.shape[0]} x {result.values.shape[1]} cells)")


def _cmd_sweep_spectrum(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    dets = TWO_PI * 1e6 * np.linspace(p["sweep.detuning_start_mhz"],
                                      p["sweep.detuning_stop_mhz"],
                                      p["sweep.detuning_points"])
    amps = TWO_PI * 1e6 * np.linspace(p["sweep.amplitude_start_mhz"],
                                      p["sweep.amplitude_stop_mhz"],
                                      p["sweep.amplitude_points"])
    mod = ModulationSpec(amplitude=float(np.max(amps)),
                         omega=TWO_PI * p["mod.frequency_mhz"] * 1e6,
                         phase=p["mod.phase_rad"])
    drive = DriveSpec(rabi=TWO_PI * p["drive.rabi_mhz"] * 1e6)
    result = sweep.sweep_spectrum(
        dets, amps, mod, drive, _qubit(p), t_total=p["sweep.t_total_us"] * 1e-6,
        n_avg_periods=p["sweep.n_avg_periods"], tol=p["run.tol"],
        workers=_default_workers(p))
    out = _require_out(args)
    write_spectrum_csv(out, result)
    _write_sidecar(out, config)
    skipped = len(result.metadata["unconverged_cells"])
    note = f", {skipped} unconverged cells" if skipped else ""
    print(f"wrote {out} ({result.values.shape[0]} x {result.values.shape[1]} cells{note})")


def _cmd_formulas(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    point = analysis.LzsPoint(
        rabi=TWO_PI * p["drive.rabi_mhz"] * 1e6,
        amplitude=TWO_PI * p["mod.amplitude_mhz"] * 1e6,
        omega=TWO_PI * p["mod.frequency_mhz"] * 1e6,
        detuning=TWO_PI * p["drive.detuning_mhz"] * 1e6,
    )
    lines = [
        f"sweep_velocity_mhz2 = {_fmt(analysis.sweep_velocity(point) / TWO_PI ** 2 / 1e12)}",
        f"delta = {_fmt(analysis.adiabaticity_delta(point))}",
        f"p_lz = {_fmt(analysis.landau_zener_probability(analysis.adiabaticity_delta(point)))}",
        f"regime = {analysis.classify_regime(point)}",
        f"omega0_lz_khz = {_fmt(analysis.rabi_like_frequency_lz(point) / TWO_PI / 1e3)}",
    ]
    if point.detuning == 0.0 and point.rabi > 0.0:
        lines.append(
            f"omega0_gv_khz = {_fmt(analysis.rabi_like_frequency_gv(point) / TWO_PI / 1e3)}")
        lines.append(
            "omega0_gv_modulus_khz = "
            f"{_fmt(analysis.rabi_like_frequency_gv(point, 'modulus') / TWO_PI / 1e3)}")
    text = "\n".join(lines)
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        _write_sidecar(args.out, config)


def _cmd_fit_trace(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    trace = read_trace_csv(_require_infile(args))
    guess = None
    if p["fit.guess_frequency_mhz"] is not None:
        duration = trace.times[-1] - trace.times[0]
        detrended = trace.populations - trace.populations.mean()
        guess = analysis.DampedSineFit(
            frequency=p["fit.guess_frequency_mhz"] * 1e6,
            decay_rate=1.0 / duration,
            amplitude=math.sqrt(2.0) * float(detrended.std()),
            offset=float(trace.populations.mean()),
            phase=0.0,
            residual_rms=0.0,
        )
    fit = analysis.fit_damped_sine(trace, initial_guess=guess,
                                   max_residual_rms=p["fit.max_residual_rms"])
    lines = [
        f"frequency_mhz = {_fmt(fit.frequency / 1e6)}",
        f"decay_per_s = {_fmt(fit.decay_rate)}",
        f"amplitude = {_fmt(fit.amplitude)}",
        f"offset = {_fmt(fit.offset)}",
        f"phase_rad = {_fmt(fit.phase)}",
        f"residual_rms = {_fmt(fit.residual_rms)}",
    ]
    text = "\n".join(lines)
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        _write_sidecar(args.out, config)


def _cmd_calibrate_bessel(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    curves = read_calibration_curves(_require_infile(args))
    result = calibration.bessel_zero_voltage_calibration(
        curves, zero_index=p["calib.zero_index"])
    text = "\n".join([
        f"slope_rad_per_s_per_unit = {_fmt(result.slope)}",
        f"slope_mhz_per_unit = {_fmt(result.slope / TWO_PI / 1e6)}",
        f"intercept_rad_per_s = {_fmt(result.intercept)}",
        f"residual_rms_rad_per_s = {_fmt(result.residual_rms)}",
    ])
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        _write_sidecar(args.out, config)


def _cmd_fit_spectrum(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    points = read_spectroscopy_csv(_require_infile(args))
    splitting = p["calib.two_photon_mhz"]
    ec, ej, residual = calibration.fit_flux_spectrum(
        points,
        two_photon_splitting_ghz=None if splitting is None else splitting * 1e-3)
    text = "\n".join([
        f"ec_ghz = {_fmt(ec)}",
        f"ej_ghz = {_fmt(ej)}",
        f"residual_rms_ghz = {_fmt(residual)}",
    ])
    print(text)
    if args.out:
        _atomic_write(args.out, text + "\n")
        _write_sidecar(args.out, config)


def _cmd_validate_rwa(config: RunConfig, args: argparse.Namespace) -> None:
    p = config.params
    omega0 = TWO_PI * p["qubit.omega0_ghz"] * 1e9
    detuning = TWO_PI * p["drive.detuning_mhz"] * 1e6
    drive = DriveSpec(rabi=TWO_PI * p["drive.rabi_mhz"] * 1e6,
                      detuning=detuning,
                      drive_frequency=omega0 - detuning)
    mod = _mod(p)
    qubit = _qubit(p)
    t_end = p["run.t_end_us"] * 1e-6
    dt = _sample_dt(p) or 1e-10
    rot = evolve(GROUND, mod, drive, qubit, t_end, sample_dt=dt, tol=p["run.tol"])
    lab = evolve_lab_frame(GROUND, omega0, mod, drive, qubit, t_end,
                           sample_dt=dt, tol=p["run.tol"])
    max_dp = float(np.max(np.abs(rot.populations - lab.populations)))
    print(f"max_abs_dp = {_fmt(max_dp)}")
    if args.out:
        rows = ["t_us,p1_rot,p1_lab"]
        rows += [f"{_fmt(t * 1e6)},{_fmt(pr)},{_fmt(pl)}"
                 for t, pr, pl in zip(rot.times, rot.populations, lab.populations)]
        _atomic_write(args.out, "\n".join(rows) + "\n")
        _write_sidecar(args.out, config)


_COMMANDS = {
    "evolve": _cmd_evolve,
    "sweep-phase": _cmd_sweep_phase,
    "sweep-spectrum": _cmd_sweep_spectrum,
    "formulas": _cmd_formulas,
    "fit-trace": _cmd_fit_trace,
    "calibrate-bessel": _cmd_calibrate_bessel,
    "fit-spectrum": _cmd_fit_spectrum,
    "validate-rwa": _cmd_validate_rwa,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lzsim",
        description="Phase-sensitive interference simulator for a flux-modulated qubit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="key = value parameter file")
        cmd.add_argument("--preset", choices=sorted(PRESETS),
                         help="bundled parameter set")
        cmd.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                         help="override one parameter (repeatable)")
        cmd.add_argument("--out", help="output file path")
        cmd.add_argument("--in", dest="infile", help="input CSV path")
        cmd.add_argument("--workers", type=int, help="sweep worker threads")
        cmd.add_argument("--tol", type=float, help="solver tolerance")
    return parser


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides: dict = {}
    for item in args.set:
        if "=" not in item:
            raise ParseError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        overrides[key] = value
    schema = SCHEMAS[args.command]
    if args.tol is not None and "run.tol" in schema:
        overrides["run.tol"] = args.tol
    if args.workers is not None and "run.workers" in schema:
        overrides["run.workers"] = args.workers
    return overrides


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.command, config_path=args.config,
                              overrides=_overrides_from_args(args),
                              preset=args.preset)
        _COMMANDS[args.command](config, args)
    except _CONFIG_ERRORS as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SOLVER_ERRORS as exc:
        print(f"error: solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except _FIT_ERRORS as exc:
        print(f"error: fit: {exc}", file=sys.stderr)
        return EXIT_FIT
    except LzsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
