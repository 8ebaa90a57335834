"""Engine and run configuration.

EngineConfig holds the tunables of the local and projection engines and can be
read from a YAML file; RunConfig is the validated form of one CLI invocation.
"""

import os
from pathlib import Path
from typing import List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import InvalidParams
from .fncurve import DEFAULT_FIELD_CAP, CurveParams

THREADS_ENV = "FNC_GALOIS_THREADS"


class EngineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    field_size_cap: int = Field(DEFAULT_FIELD_CAP, ge=2)
    line_budget: int = Field(200, ge=0)
    pencil_max_lines: int = Field(130, ge=0)
    unibranch_policy: Literal["exact", "candidates"] = "exact"
    oracle_points: int = Field(200, ge=1)
    max_ext: Optional[int] = Field(None, ge=1)
    work_ext: Optional[int] = Field(None, ge=1)
    threads: Optional[int] = Field(None, ge=1)


def load_engine_config(path: Optional[Path] = None) -> EngineConfig:
    """Read an EngineConfig from YAML; a missing path gives the defaults."""
    data = {}
    if path is not None:
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise InvalidParams(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise InvalidParams(f"config {path} must be a YAML mapping")
    try:
        return EngineConfig(**data)
    except ValidationError as e:
        raise InvalidParams(f"invalid config {path}: {e}") from e


def resolve_threads(flag: Optional[int], config: Optional[EngineConfig] = None) -> int:
    """--threads flag, then FNC_GALOIS_THREADS, then the config file, then 1."""
    if flag is not None:
        value = flag
    elif os.environ.get(THREADS_ENV):
        try:
            value = int(os.environ[THREADS_ENV])
        except ValueError as e:
            raise InvalidParams(f"{THREADS_ENV} must be an integer") from e
    elif config is not None and config.threads is not None:
        value = config.threads
    else:
        value = 1
    if value < 1:
        raise InvalidParams(f"thread count must be >= 1, got {value}")
    return value


class RunConfig(BaseModel):
    """One CLI invocation; validation builds CurveParams before any computation."""

    model_config = ConfigDict(extra="forbid")

    command: str
    q: int
    n: int
    m: int
    max_ext: Optional[int] = Field(None, ge=1)
    search_ext: int = Field(1, ge=1)
    work_ext: Optional[int] = Field(None, ge=1)
    candidates: List[str] = Field(default_factory=list)
    seed: int = 0
    format: Literal["json", "text"] = "json"
    output: Optional[Path] = None
    threads: int = Field(1, ge=1)
    strict: bool = False

    @model_validator(mode="after")
    def _check_params(self) -> "RunConfig":
        CurveParams(self.q, self.n, self.m)
        return self

    @property
    def params(self) -> CurveParams:
        return CurveParams(self.q, self.n, self.m)
