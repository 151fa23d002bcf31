#!/usr/bin/env python3
"""
Configuration-driven experiment runner behind the CLI subcommands.

Each subcommand builds the physical model from an ExperimentConfig, runs it and
writes flat files into the output directory. run() maps every library error to
its exit status and writes a JSON error envelope next to the results.
"""

import copy
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..core.atomic import (
    AtomModel,
    EfgCoefficients,
    Orbital,
    coefficient_a,
    coefficient_b,
    coefficient_b_prime,
    coefficient_c,
    efg_oscillating,
    efg_static,
    estimate_a_rough,
    estimate_b_prime_rough,
)
from ..core.constants import CODATA, PhysicalConstants
from ..core.control import (
    CNOT,
    CZ,
    PulseSpec,
    k_rabi,
    pulse_for_rotation,
    flips_comparison,
    rotation_unitary,
    scale_by_voltage,
    schedule_unitary,
    score_schedule,
    synthesize_cnot,
    synthesize_cz,
    gate_fidelity,
)
from ..core.control.performance import PerformanceReport, report
from ..core.errors import ConfigError, NerSimError, NumericalError, OffResonanceError
from ..core.physics import (
    DriveParams,
    IntegratorConfig,
    NucleusParams,
    TwoQubitParams,
    analytic_single_propagator,
    basis_state,
    evolve_trajectory,
    h_single,
    propagator,
    rotating_frame,
    resonance_omega_single,
    rotating_frame_model,
    subspace_drive_strength,
)
from ..core.spin import SpinQuantum
from .config import AppSettings, ExperimentConfig, parse_experiment, read_yaml, set_dotted
from .writers import dumps, records_frame, trajectory_frame, write_csv, write_json, write_text

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("simulate", "gate", "efg", "perf", "sweep")
NORMALIZATION_TOL = 1e-9


@dataclass
class RunOutcome:
    exit_status: int
    payload: Dict[str, Any] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)


def initial_index(s: SpinQuantum, text: Optional[str]) -> int:
    """Basis index of an m value given as text ("7/2", "-1/2", "0"); None means m = S"""
    if text is None:
        return 0
    try:
        two_m = 2 * Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"Invalid initial_m {text!r}")
    if two_m.denominator != 1 or (s.two_s - int(two_m)) % 2 or abs(int(two_m)) > s.two_s:
        raise ConfigError(f"initial_m {text!r} is not a level of spin {s.label()}")
    return (s.two_s - int(two_m)) // 2


class ExperimentRunner:
    """Builds the model described by one experiment config and runs subcommands on it"""

    def __init__(
        self,
        config: ExperimentConfig,
        raw: Optional[Mapping[str, Any]] = None,
        settings: Optional[AppSettings] = None,
        out_dir: Optional[Union[str, Path]] = None,
        formats: Optional[Set[str]] = None,
        console: Optional[Console] = None,
    ):
        self.config = config
        self.raw = dict(raw) if raw is not None else config.model_dump(exclude_none=True)
        self.settings = settings or AppSettings()
        self.out_dir = Path(out_dir or config.output.dir or self.settings.output.dir)
        self.formats = set(formats or config.output.formats)
        self.console = console
        self.logger = logging.getLogger(__name__)
        overrides = config.constants.model_dump() if config.constants else None
        self.constants: PhysicalConstants = CODATA.with_overrides(overrides)
        self.files: List[Path] = []

    # =================== MODEL ASSEMBLY ===================

    def nucleus(self) -> NucleusParams:
        n = self.config.nucleus
        return NucleusParams(n.spin_quantum, q_moment=n.q_moment_m2, gamma_n=n.gamma_rad_s_T, constants=self.constants)

    def integrator(self) -> IntegratorConfig:
        cfg = self.config.integrator
        return IntegratorConfig(
            dt_max=cfg.dt_max_s or self.settings.integrator.dt_max_s,
            tol=cfg.tol or self.settings.integrator.tol,
        )

    def _omega(self, nucleus: NucleusParams, coeffs: EfgCoefficients) -> float:
        f = self.config.field
        if f.omega_rad_s == "auto":
            return resonance_omega_single(nucleus, coeffs, f.e0_V_m, f.b0_T)
        return float(f.omega_rad_s)

    def atom(self) -> AtomModel:
        atom = self.config.efg.atom
        electrons = tuple(
            Orbital(n=e.n, m=e.m, coeffs=e.complex_coeffs(), z_eff=e.z_eff) for e in atom.electrons
        )
        return AtomModel(atom.z_atomic, electrons, b0=self.config.field.b0_T, constants=self.constants)

    def coefficients(self) -> Tuple[EfgCoefficients, float]:
        """EFG coefficients and the resolved drive frequency"""
        efg = self.config.efg
        nucleus = self.nucleus()
        if efg.mode == "given":
            coeffs = EfgCoefficients(a=efg.a_per_m, b=efg.b_per_m, c=efg.c_V_m2, b_prime=efg.bprime_per_m)
            return coeffs, self._omega(nucleus, coeffs)

        atom = self.atom()
        b_prime = coefficient_b_prime(atom, efg.atom.n_prime_max)
        static = EfgCoefficients(c=coefficient_c(atom), b_prime=b_prime.value)
        omega = self._omega(nucleus, static)
        coeffs = EfgCoefficients(
            a=coefficient_a(atom, omega),
            b=coefficient_b(atom, omega),
            c=static.c,
            b_prime=static.b_prime,
            b_prime_report=b_prime,
        )
        return coeffs, omega

    def drive(self, omega: float, phi: Optional[float] = None) -> DriveParams:
        f = self.config.field
        return DriveParams(
            e_amp=f.e_amp_V_m,
            omega=omega,
            phi=f.phi_rad if phi is None else phi,
            e0_static=f.e0_V_m,
            b0=f.b0_T,
        )

    def _duration(self, nucleus: NucleusParams, coeffs: EfgCoefficients) -> float:
        sim = self.config.simulation
        if sim.duration_s is not None:
            return sim.duration_s
        pulse = self.config.pulse
        if pulse is None:
            raise ConfigError("simulate needs simulation.duration_s or a pulse section")
        if pulse.duration_s is not None:
            return pulse.duration_s
        f = self.config.field
        spec = pulse_for_rotation(nucleus, coeffs, f.e_amp_V_m, pulse.axis_phi_rad, pulse.angle_rad, f.b0_T, f.e0_V_m)
        return spec.duration

    # =================== SUBCOMMANDS ===================

    def simulate_core(self) -> Tuple[pd.DataFrame, Dict[str, Any]]:
        nucleus = self.nucleus()
        coeffs, omega = self.coefficients()
        drive = self.drive(omega)
        ops = nucleus.ops
        sim = self.config.simulation

        duration = self._duration(nucleus, coeffs)
        times = np.linspace(0.0, duration, sim.n_samples)
        start = initial_index(nucleus.s, sim.initial_m)
        psi0 = basis_state(ops.dim, start)

        model = h_single(nucleus, ops, coeffs, drive, keep_dc_terms=sim.keep_dc_terms)
        if sim.frame == "rotating":
            model = rotating_frame_model(model, ops.sz, drive.omega)
        states = evolve_trajectory(model, psi0, times, self.integrator())
        if sim.frame == "lab":
            states = np.array([rotating_frame(psi, ops, drive.omega, t) for psi, t in zip(states, times)])

        populations = np.abs(states) ** 2
        deviation = float(np.max(np.abs(populations.sum(axis=1) - 1.0)))
        if deviation > NORMALIZATION_TOL:
            raise NumericalError(
                f"Trajectory lost normalization (max deviation {deviation:.3e})",
                details={"max_deviation": deviation},
            )
        leakage = np.clip(1.0 - populations[:, 0] - populations[:, 1], 0.0, 1.0)
        fidelity = self._analytic_fidelity(nucleus, coeffs, drive, psi0, states, times)

        frame = trajectory_frame(nucleus.s, times, populations, fidelity, leakage)
        summary = {
            "subcommand": "simulate",
            "spin": nucleus.s.label(),
            "frame": sim.frame,
            "omega_rad_s": drive.omega,
            "rabi_frequency_Hz": abs(subspace_drive_strength(nucleus, coeffs, drive.e_amp)) / (2.0 * math.pi),
            "degenerate_drive": model.degenerate_drive,
            "duration_s": duration,
            "n_samples": int(sim.n_samples),
            "initial_m": nucleus.s.m_label(start),
            "final_populations": {
                f"p_m{nucleus.s.m_label(i)}": float(p) for i, p in enumerate(populations[-1])
            },
            "final_fidelity": float(fidelity[-1]),
            "max_leakage": float(np.max(leakage)),
            "max_normalization_deviation": deviation,
        }
        return frame, summary

    def _analytic_fidelity(
        self,
        nucleus: NucleusParams,
        coeffs: EfgCoefficients,
        drive: DriveParams,
        psi0: np.ndarray,
        states: np.ndarray,
        times: np.ndarray,
    ) -> np.ndarray:
        """|<analytic|psi>|^2 per sample; NaN where the closed form does not apply"""
        nan = np.full(times.shape, np.nan)
        if nucleus.s.two_s < 2 or np.linalg.norm(psi0[2:]) > 0.0:
            return nan
        try:
            refs = [analytic_single_propagator(nucleus, coeffs, drive, t) @ psi0[:2] for t in times]
        except OffResonanceError as e:
            self.logger.warning("No analytic reference: %s", e.message)
            return nan
        return np.array([abs(np.vdot(ref, psi[:2])) ** 2 for ref, psi in zip(refs, states)])

    def simulate(self) -> Dict[str, Any]:
        frame, summary = self.simulate_core()
        if "csv" in self.formats:
            self.files.append(write_csv(frame, self.out_dir / "trajectory.csv", self.settings.output.float_format))
        if "json" in self.formats:
            self.files.append(write_json(summary, self.out_dir / "summary.json"))
        if self.console:
            self._print_summary("Trajectory", summary, ["spin", "frame", "duration_s", "final_fidelity", "max_leakage"])
        return summary

    def two_qubit_params(self, nucleus: NucleusParams, coeffs: EfgCoefficients) -> TwoQubitParams:
        tq = self.config.two_qubit
        n2 = NucleusParams(
            tq.nucleus2.spin_quantum,
            q_moment=tq.nucleus2.q_moment_m2,
            gamma_n=tq.nucleus2.gamma_rad_s_T,
            constants=self.constants,
        )
        return TwoQubitParams(
            nucleus1=nucleus,
            nucleus2=n2,
            c1=coeffs.c,
            c2=tq.c2_V_m2,
            b_prime1=coeffs.b_prime,
            b_prime2=tq.bprime2_per_m,
            e1=tq.e1_V_m,
            e2=tq.e2_V_m,
            b0=self.config.field.b0_T,
            a1=coeffs.a,
            a2=tq.a2_per_m,
            e_drive=tq.e_drive_V_m,
        )

    def gate_core(self) -> Tuple[Dict[str, Any], Dict[str, Any]]:
        nucleus = self.nucleus()
        coeffs, omega = self.coefficients()
        cfg = self.integrator()

        if self.config.two_qubit is not None:
            tq = self.config.two_qubit
            params = self.two_qubit_params(nucleus, coeffs)
            if tq.schedule == "cz":
                schedule, target = synthesize_cz(params, tq.j_Hz), CZ
            else:
                schedule, target = synthesize_cnot(params, tq.j_Hz), CNOT
            gate_report = score_schedule(params, schedule, target, schedule.name, cfg).to_dict()
            gate_report["ideal_fidelity"] = gate_fidelity(schedule_unitary(params, schedule), target)
            return schedule.to_dict(), gate_report

        pulse_cfg = self.config.pulse
        if pulse_cfg is None:
            raise ConfigError("gate needs a pulse or a two_qubit section")
        f = self.config.field
        if pulse_cfg.angle_rad is not None:
            spec = pulse_for_rotation(
                nucleus, coeffs, f.e_amp_V_m, pulse_cfg.axis_phi_rad, pulse_cfg.angle_rad, f.b0_T, f.e0_V_m
            )
            target = rotation_unitary(pulse_cfg.angle_rad, pulse_cfg.axis_phi_rad)
        else:
            spec = PulseSpec(e_amp=f.e_amp_V_m, phi=pulse_cfg.axis_phi_rad, omega=omega, duration=pulse_cfg.duration_s)
            target = rotation_unitary(
                subspace_drive_strength(nucleus, coeffs, f.e_amp_V_m) * spec.duration, spec.phi
            )

        drive = DriveParams(e_amp=spec.e_amp, omega=spec.omega, phi=spec.phi, e0_static=f.e0_V_m, b0=f.b0_T)
        ops = nucleus.ops
        model = rotating_frame_model(h_single(nucleus, ops, coeffs, drive), ops.sz, spec.omega)
        block = propagator(model, spec.duration, cfg)[:2, :2]
        fidelity = float(min(1.0, abs(np.trace(target.conj().T @ block)) / 2.0))
        leak = float(max(0.0, 1.0 - np.sum(np.abs(block) ** 2) / 2.0))
        omega_r = subspace_drive_strength(nucleus, coeffs, spec.e_amp)
        schedule = {
            "name": "R",
            "pulse": spec.to_dict(),
            "total_duration_s": spec.duration,
            "duration_us": spec.duration * 1e6,
            "rabi_frequency_Hz": abs(omega_r) / (2.0 * math.pi),
            "angle_rad": pulse_cfg.angle_rad,
            "axis_phi_rad": pulse_cfg.axis_phi_rad,
        }
        gate_report = {"fidelity": fidelity, "leakage": leak, "target_name": "rotation"}
        return schedule, gate_report

    def gate(self) -> Dict[str, Any]:
        schedule, gate_report = self.gate_core()
        self.files.append(write_json(schedule, self.out_dir / "schedule.json"))
        self.files.append(write_json(gate_report, self.out_dir / "gate_report.json"))
        if self.console:
            self._print_summary("Gate", {**gate_report, "total_duration_s": schedule["total_duration_s"]},
                                ["target_name", "total_duration_s", "fidelity", "leakage"])
        return {"schedule": schedule, "report": gate_report}

    def efg(self) -> Dict[str, Any]:
        coeffs, omega = self.coefficients()
        f = self.config.field
        z = self.config.efg.atom.z_atomic if self.config.efg.atom else 1
        e_tilde = (f.e_amp_V_m * math.cos(f.phi_rad), f.e_amp_V_m * math.sin(f.phi_rad), 0.0)
        payload = {
            "subcommand": "efg",
            "mode": self.config.efg.mode,
            "omega_rad_s": omega,
            "coefficients": coeffs.to_dict(),
            "rough_estimates": {
                "a_per_m": estimate_a_rough(self.constants, omega if omega > 0.0 else 1e7),
                "bprime_per_m": estimate_b_prime_rough(self.constants, z),
            },
            "tensor_static_V_m2": efg_static(coeffs, f.e0_V_m).g,
            "tensor_oscillating_t0_V_m2": efg_oscillating(coeffs, e_tilde).g,
        }
        self.files.append(write_json(payload, self.out_dir / "efg.json"))
        if self.console:
            self._print_summary("EFG coefficients", coeffs.to_dict(), ["a_per_m", "b_per_m", "c_V_m2", "bprime_per_m"])
        return payload

    def perf_rows(self) -> List[PerformanceReport]:
        perf = self.config.performance
        if perf.rows:
            return [report(row.t2_star_s, row.f_rabi_Hz, row.method) for row in perf.rows]
        return flips_comparison(perf.f_rabi_Hz, perf.v_ref_V, perf.v_new_V, perf.t2_star_s)

    def perf(self) -> Dict[str, Any]:
        perf = self.config.performance
        rows = self.perf_rows()
        payload: Dict[str, Any] = {
            "subcommand": "perf",
            "rows": [r.to_dict() for r in rows],
            "f_rabi_scaled_Hz": scale_by_voltage(perf.f_rabi_Hz, perf.v_ref_V, perf.v_new_V),
        }
        nucleus = self.nucleus()
        if nucleus.s.two_s > 1 and self.config.efg.mode == "given" and self.config.efg.a_per_m != 0.0:
            k = k_rabi(nucleus, self.config.efg.a_per_m)
            payload["k_rabi_Hz_per_V_m"] = k
            payload["f_rabi_model_Hz"] = k * self.config.field.e_amp_V_m

        table = pd.DataFrame(
            {
                "method": [r.method_label for r in rows],
                "t2_star_ms": [r.t2_star * 1e3 for r in rows],
                "f_rabi_kHz": [r.f_rabi * 1e-3 for r in rows],
                "n_flips": [r.rounded_flips for r in rows],
            }
        )
        text = table.to_string(
            index=False,
            formatters={
                "t2_star_ms": "{:.3f}".format,
                "f_rabi_kHz": "{:.2f}".format,
                "n_flips": "{:.2f}".format,
            },
        )
        self.files.append(write_text(text, self.out_dir / "perf.txt"))
        self.files.append(write_json(payload, self.out_dir / "perf.json"))
        if self.console:
            rich_table = Table(title="Number of flips within T2*")
            for column in ("Method", "T2* (ms)", "f_R (kHz)", "N_f"):
                rich_table.add_column(column)
            for r in rows:
                rich_table.add_row(r.method_label, f"{r.t2_star * 1e3:.3f}", f"{r.f_rabi * 1e-3:.2f}", f"{r.rounded_flips:.2f}")
            self.console.print(rich_table)
        return payload

    # =================== SWEEP ===================

    def grid_points(self) -> List[Dict[str, Any]]:
        grid = self.config.sweep.grid
        keys = list(grid)
        return [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]

    def _sweep_point(self, index: int, point: Dict[str, Any]) -> Dict[str, Any]:
        row: Dict[str, Any] = {"index": index, **point}
        raw = copy.deepcopy(self.raw)
        raw.pop("sweep", None)
        try:
            for key, value in point.items():
                set_dotted(raw, key, value)
            sub = ExperimentRunner(parse_experiment(raw), raw, self.settings, self.out_dir, self.formats)
            if self.config.sweep.target == "gate":
                schedule, gate_report = sub.gate_core()
                row.update(
                    status="ok",
                    error_code="",
                    duration_s=schedule["total_duration_s"],
                    fidelity=gate_report["fidelity"],
                    leakage=gate_report["leakage"],
                )
            else:
                _, summary = sub.simulate_core()
                first = next(iter(summary["final_populations"]))
                row.update(
                    status="ok",
                    error_code="",
                    duration_s=summary["duration_s"],
                    final_p_top=summary["final_populations"][first],
                    fidelity=summary["final_fidelity"],
                    leakage=summary["max_leakage"],
                )
        except NerSimError as e:
            self.logger.warning("Sweep point %d failed: %s", index, e.message)
            row.update(status="error", error_code=e.code, message=e.message)
        except Exception as e:  # noqa: BLE001 - recorded as an error row
            self.logger.warning("Sweep point %d failed unexpectedly: %s", index, e)
            row.update(status="error", error_code=NerSimError.code, message=str(e))
        return row

    def sweep(self) -> Dict[str, Any]:
        if self.config.sweep is None:
            raise ConfigError("sweep needs a sweep section with a grid")
        points = self.grid_points()
        workers = self.config.sweep.workers or self.settings.sweep.workers
        self.logger.info("Sweeping %d grid points with %d workers", len(points), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(self._sweep_point, range(len(points)), points))
        if "csv" in self.formats:
            frame = records_frame(rows)
            self.files.append(write_csv(frame, self.out_dir / "sweep.csv", self.settings.output.float_format))
        if "json" in self.formats:
            self.files.append(write_json({"subcommand": "sweep", "rows": rows}, self.out_dir / "sweep.json"))
        if self.console:
            failed = sum(1 for r in rows if r["status"] != "ok")
            self.console.print(f"Sweep finished: {len(rows)} points, {failed} failed")
        return {"rows": rows}

    # =================== DISPLAY ===================

    def _print_summary(self, title: str, data: Mapping[str, Any], keys: Sequence[str]) -> None:
        table = Table(title=title)
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        for key in keys:
            value = data.get(key)
            table.add_row(key, f"{value:.9g}" if isinstance(value, float) else str(value))
        self.console.print(table)


def run(
    config_path: Union[str, Path],
    subcommand: str,
    out_dir: Optional[Union[str, Path]] = None,
    fmt: Optional[str] = None,
    settings: Optional[AppSettings] = None,
    console: Optional[Console] = None,
) -> RunOutcome:
    """
    Run one subcommand on a config file.

    Errors never propagate: the outcome carries the exit status, and an
    error.json envelope is written to the output directory.
    """
    settings = settings or AppSettings()
    formats = None if fmt is None else ({"csv", "json"} if fmt == "both" else {fmt})
    target_dir = Path(out_dir) if out_dir else None
    try:
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f"Unknown subcommand {subcommand!r}; expected one of {', '.join(SUBCOMMANDS)}")
        raw = read_yaml(config_path)
        config = parse_experiment(raw)
        runner = ExperimentRunner(config, raw, settings, out_dir, formats, console)
        target_dir = runner.out_dir
        payload = getattr(runner, subcommand)()
        return RunOutcome(0, payload, runner.files)
    except NerSimError as e:
        logger.error("%s: %s", e.code, e.message)
        envelope = e.to_envelope()
        status = e.exit_status
    except Exception as e:  # noqa: BLE001 - reported through the INTERNAL envelope
        logger.exception("Unexpected failure in %s", subcommand)
        envelope = NerSimError(str(e) or type(e).__name__).to_envelope()
        status = NerSimError.exit_status

    error_dir = target_dir or Path(settings.output.dir)
    files = []
    try:
        files.append(write_json(envelope, error_dir / "error.json"))
    except OSError as write_error:
        logger.error("Could not write error envelope: %s", write_error)
    if console:
        console.print(Panel.fit(dumps(envelope).strip(), title="Error", border_style="red"))
    return RunOutcome(status, envelope, files)
