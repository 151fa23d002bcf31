#!/usr/bin/env python3
"""
Configuration models for the nersim CLI.

Application settings come from configs/default_config.yaml; experiment configs
are YAML files whose key names carry their SI units. Both are validated with
pydantic and unknown keys are rejected.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import ConfigError
from ..core.spin import SpinQuantum

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parents[2] / "configs" / "default_config.yaml"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# =================== APPLICATION SETTINGS ===================

class AppSection(_Strict):
    name: str = "nersim"
    version: str = "0.1.0"


class LoggingSection(_Strict):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    format: str = "%(message)s"


class IntegratorSection(_Strict):
    dt_max_s: float = Field(1e-3, gt=0.0)
    tol: float = Field(1e-10, gt=0.0)


class SweepSettings(_Strict):
    workers: int = Field(4, ge=1)


class OutputSettings(_Strict):
    dir: str = "results"
    float_format: str = "%.17g"


class AppSettings(_Strict):
    app: AppSection = AppSection()
    logging: LoggingSection = LoggingSection()
    integrator: IntegratorSection = IntegratorSection()
    sweep: SweepSettings = SweepSettings()
    output: OutputSettings = OutputSettings()


# =================== EXPERIMENT CONFIG ===================

class NucleusConfig(_Strict):
    spin: str
    q_moment_m2: float = 0.0
    gamma_rad_s_T: float = 0.0

    @field_validator("spin", mode="before")
    @classmethod
    def _spin_text(cls, value: Any) -> str:
        if isinstance(value, float):
            raise ValueError("spin must be written as text such as '7/2' or an integer")
        text = str(value).strip()
        SpinQuantum.parse(text)
        return text

    @property
    def spin_quantum(self) -> SpinQuantum:
        return SpinQuantum.parse(self.spin)


class FieldConfig(_Strict):
    b0_T: float = 0.0
    e_amp_V_m: float = Field(0.0, ge=0.0)
    omega_rad_s: Union[Literal["auto"], float] = "auto"
    phi_rad: float = 0.0
    e0_V_m: float = 0.0


class ElectronConfig(_Strict):
    n: int = Field(ge=1)
    m: int = 0
    coeffs: Dict[int, Union[float, Tuple[float, float]]]
    z_eff: Optional[int] = None

    def complex_coeffs(self) -> Dict[int, complex]:
        out = {}
        for l, c in self.coeffs.items():
            out[l] = complex(c[0], c[1]) if isinstance(c, tuple) else complex(c)
        return out


class AtomConfig(_Strict):
    z_atomic: int = Field(ge=1)
    electrons: List[ElectronConfig]
    n_prime_max: int = Field(10, ge=2)


class EfgConfig(_Strict):
    mode: Literal["given", "hydrogenic"] = "given"
    a_per_m: float = 0.0
    b_per_m: float = 0.0
    c_V_m2: float = 0.0
    bprime_per_m: float = 0.0
    atom: Optional[AtomConfig] = None

    @model_validator(mode="after")
    def _atom_for_hydrogenic(self) -> "EfgConfig":
        if self.mode == "hydrogenic" and self.atom is None:
            raise ValueError("efg.mode 'hydrogenic' needs an efg.atom section")
        if self.mode == "given" and self.atom is not None:
            raise ValueError("efg.atom is only used with efg.mode 'hydrogenic'")
        return self


class PulseConfig(_Strict):
    angle_rad: Optional[float] = None
    duration_s: Optional[float] = Field(None, ge=0.0)
    axis_phi_rad: float = 0.0

    @model_validator(mode="after")
    def _exactly_one(self) -> "PulseConfig":
        if (self.angle_rad is None) == (self.duration_s is None):
            raise ValueError("pulse needs exactly one of angle_rad or duration_s")
        return self


class TwoQubitConfig(_Strict):
    nucleus2: NucleusConfig
    a2_per_m: float = 0.0
    c2_V_m2: float = 0.0
    bprime2_per_m: float = 0.0
    e1_V_m: float = 0.0
    e2_V_m: float = 0.0
    j_Hz: float = 0.0
    e_drive_V_m: float = Field(0.0, ge=0.0)
    schedule: Literal["cz", "cnot"] = "cz"


class IntegratorConfigModel(_Strict):
    dt_max_s: Optional[float] = Field(None, gt=0.0)
    tol: Optional[float] = Field(None, gt=0.0)


class OutputConfig(_Strict):
    dir: Optional[str] = None
    formats: List[Literal["csv", "json"]] = ["csv", "json"]


class ConstantsConfig(_Strict):
    k_coulomb: Optional[float] = Field(None, gt=0.0)
    e_charge: Optional[float] = Field(None, gt=0.0)
    hbar: Optional[float] = Field(None, gt=0.0)
    a0_bohr: Optional[float] = Field(None, gt=0.0)
    m_electron: Optional[float] = Field(None, gt=0.0)


class SimulationConfig(_Strict):
    initial_m: Optional[str] = None
    n_samples: int = Field(101, ge=2)
    frame: Literal["rotating", "lab"] = "rotating"
    keep_dc_terms: bool = False
    duration_s: Optional[float] = Field(None, ge=0.0)


class PerformanceRow(_Strict):
    method: str
    t2_star_s: float = Field(ge=0.0)
    f_rabi_Hz: float = Field(ge=0.0)


class PerformanceConfig(_Strict):
    rows: List[PerformanceRow] = []
    v_ref_V: float = Field(0.02, gt=0.0)
    v_new_V: float = 4.0
    t2_star_s: float = Field(0.092, ge=0.0)
    f_rabi_Hz: float = Field(684.2, ge=0.0)


class SweepConfig(_Strict):
    grid: Dict[str, List[Any]]
    workers: Optional[int] = Field(None, ge=1)
    target: Literal["simulate", "gate"] = "simulate"

    @field_validator("grid")
    @classmethod
    def _non_empty(cls, grid: Dict[str, List[Any]]) -> Dict[str, List[Any]]:
        if not grid or any(len(values) == 0 for values in grid.values()):
            raise ValueError("sweep.grid needs at least one key with at least one value")
        return grid


class ExperimentConfig(_Strict):
    nucleus: NucleusConfig
    field: FieldConfig = FieldConfig()
    efg: EfgConfig = EfgConfig()
    pulse: Optional[PulseConfig] = None
    two_qubit: Optional[TwoQubitConfig] = None
    integrator: IntegratorConfigModel = IntegratorConfigModel()
    output: OutputConfig = OutputConfig()
    constants: Optional[ConstantsConfig] = None
    simulation: SimulationConfig = SimulationConfig()
    performance: PerformanceConfig = PerformanceConfig()
    sweep: Optional[SweepConfig] = None


# =================== LOADING ===================

def _format_validation(error: ValidationError) -> List[Dict[str, Any]]:
    return [
        {"loc": ".".join(str(p) for p in item["loc"]), "msg": item["msg"]}
        for item in error.errors()
    ]


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config {path} must be a mapping at the top level")
    return data


def parse_experiment(data: Mapping[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError("Invalid experiment config", details={"errors": _format_validation(e)})


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    config = parse_experiment(read_yaml(path))
    logger.debug("Loaded experiment config from %s", path)
    return config


def load_app_settings(path: Optional[Union[str, Path]] = None) -> AppSettings:
    """Read application settings; a missing default file gives built-in defaults"""
    path = Path(path) if path else DEFAULT_SETTINGS_PATH
    if not path.exists():
        if path == DEFAULT_SETTINGS_PATH:
            return AppSettings()
        raise ConfigError(f"Settings file not found: {path}")
    try:
        return AppSettings.model_validate(read_yaml(path))
    except ValidationError as e:
        raise ConfigError(f"Invalid settings file {path}", details={"errors": _format_validation(e)})


def set_dotted(data: Dict[str, Any], dotted: str, value: Any) -> None:
    """Assign ``value`` at a dotted key path, creating intermediate mappings"""
    keys = dotted.split(".")
    node = data
    for key in keys[:-1]:
        child = node.get(key)
        if child is None:
            child = node[key] = {}
        if not isinstance(child, dict):
            raise ConfigError(f"Sweep key {dotted!r} crosses non-mapping value at {key!r}")
        node = child
    node[keys[-1]] = value
