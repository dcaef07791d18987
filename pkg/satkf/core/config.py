import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

import numpy as np
import tomlkit
from tomlkit.exceptions import TOMLKitError
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from satkf.core.errors import ParseError, ValidationError
from satkf.estimation.orbit import MeasurementType, OrbitParams

MatrixLike = float | list[list[float]]
VectorLike = list[float]


class Settings(BaseSettings):
    '''
    Process-wide settings, read from the environment or a .env file
    '''

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        "INFO", description="Logging level", validation_alias="SATKF_LOG_LEVEL"
    )

    WORKERS: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Process pool size for Monte Carlo runs",
        validation_alias="SATKF_WORKERS",
    )

    OUT_DIR: Path = Field(
        Path("results"),
        description="Default directory for emitted files",
        validation_alias="SATKF_OUT_DIR",
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    '''
    Get the settings
    '''
    return Settings()


def as_matrix(value: MatrixLike) -> np.ndarray:
    """scalar c means c * I"""
    if isinstance(value, (int, float)):
        return float(value) * np.eye(4)
    return np.asarray(value, dtype=float)


class ExperimentConfig(BaseModel):
    '''
    One experiment: orbit, measurement channel, noise, Monte Carlo size and seed.
    Keys of a config file are exactly these field names.
    '''

    model_config = ConfigDict(frozen=True, extra="forbid")

    radius: float = Field(1.0, gt=0, description="Nominal orbit radius R")
    omega: float = Field(1.0, description="Nominal angular rate")
    h: float = Field(0.01, gt=0, description="Sample period")
    mtype: MeasurementType = Field(
        MeasurementType.TYPE1, description="Measurement channel"
    )
    n: int = Field(1000, ge=1, description="Steps per run")
    phi: int = Field(10, ge=1, description="Monte Carlo run count")
    seed: int = Field(0, ge=0, lt=2**64, description="Master seed")
    phi_var: float = Field(0.1, gt=0, description="Range channel variance")
    psi_var: float = Field(0.5, gt=0, description="Angle channel variance")
    delta_q: MatrixLike = Field(0.0, description="Process covariance (scalar means scalar * I)")
    tau_p0: MatrixLike = Field(0.1, description="Initial covariance (scalar means scalar * I)")
    x0_mode: Literal["fixed", "sampled"] = Field(
        "fixed", description="Truth initial state: fixed vector or drawn from the prior"
    )
    x0_fixed: VectorLike = Field(
        [0.1, 0.0, 0.0, 0.0], description="Truth initial state in fixed mode"
    )
    x0_mean: VectorLike = Field([0.0, 0.0, 0.0, 0.0], description="Filter prior mean")
    u_s: VectorLike = Field([0.0, 0.0, 0.0, 0.0], description="State input")
    u_o: float = Field(0.0, description="Output input")
    b: MatrixLike = Field(1.0, description="Process noise shaping for the information filter")
    truth_model: Literal["linear", "nonlinear"] = Field(
        "linear", description="Truth propagation: discrete linear model or RK4 on the polar equations"
    )
    gamma_reference: Literal["posterior", "prior"] = Field(
        "posterior", description="Which information-filter estimate is scored against the truth"
    )
    noise_free: bool = Field(
        False, description="Skip process and measurement noise draws; filters keep their variances"
    )
    mukf_jitter: float = Field(
        1e-12, ge=0, description="Diagonal floor added when the prior covariance is singular"
    )
    are_tol: float = Field(1e-10, gt=0, description="Riccati fixed-point tolerance")
    are_max_iter: int = Field(200_000, ge=1, description="Riccati iteration cap")

    @model_validator(mode="after")
    def check_invariants(self) -> "ExperimentConfig":
        if self.omega == 0:
            raise ValueError("omega must be nonzero")
        for name in ("delta_q", "tau_p0", "b"):
            m = as_matrix(getattr(self, name))
            if m.shape != (4, 4) or not np.all(np.isfinite(m)):
                raise ValueError(f"{name} must be a finite scalar or 4x4 matrix")
        for name in ("delta_q", "tau_p0"):
            m = as_matrix(getattr(self, name))
            if np.max(np.abs(m - m.T)) > 1e-12:
                raise ValueError(f"{name} must be symmetric")
            if np.min(np.linalg.eigvalsh(m)) < -1e-10:
                raise ValueError(f"{name} must be positive semi-definite")
        for name in ("x0_fixed", "x0_mean", "u_s"):
            if len(getattr(self, name)) != 4:
                raise ValueError(f"{name} must have 4 entries")
        return self

    @property
    def orbit(self) -> OrbitParams:
        return OrbitParams(radius=self.radius, omega=self.omega, h=self.h)

    @property
    def measurement_variance(self) -> float:
        return self.phi_var if self.mtype is MeasurementType.TYPE1 else self.psi_var

    @property
    def Q(self) -> np.ndarray:
        return as_matrix(self.delta_q)

    @property
    def P0(self) -> np.ndarray:
        return as_matrix(self.tau_p0)

    @property
    def B(self) -> np.ndarray:
        return as_matrix(self.b)


FIELDS = frozenset(ExperimentConfig.model_fields)


def read_config_file(path: Path) -> dict[str, Any]:
    """read a flat JSON (or TOML) config file"""
    if not path.exists():
        raise ParseError(f"{path} does not exist", data={"path": str(path)})

    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix == ".toml":
            data = tomlkit.parse(text).unwrap()
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, TOMLKitError) as e:
        raise ParseError(f"{path}: {e}", data={"path": str(path)})

    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object", data={"path": str(path)})
    return data


def parse_config(
    path: Path | None = None, overrides: dict[str, Any] | None = None
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from an optional file plus flag overrides.
    Flags win over file values; missing keys take the defaults.
    """
    data = read_config_file(path) if path is not None else {}

    for key in data:
        if key not in FIELDS:
            raise ParseError(f"Unknown config key '{key}'", data={"key": key})

    merged = data | {k: v for k, v in (overrides or {}).items() if v is not None}

    try:
        return ExperimentConfig.model_validate(merged)
    except PydanticValidationError as e:
        err = e.errors()[0]
        key = ".".join(str(part) for part in err["loc"]) or "config"
        raise ValidationError(f"{key}: {err['msg']}", data={"key": key})


def render_run_manifest(cfg: ExperimentConfig, command: str) -> str:
    """the resolved configuration as a TOML document"""
    doc = tomlkit.document()
    doc.add(tomlkit.comment(f"satkf {command}"))

    run = tomlkit.table()
    for key, value in cfg.model_dump(mode="json").items():
        # TOML integers are signed 64-bit
        if isinstance(value, int) and value >= 2**63:
            value = str(value)
        run.add(key, value)
    doc.add("experiment", run)

    return tomlkit.dumps(doc)
