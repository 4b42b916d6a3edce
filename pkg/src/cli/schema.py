# src/cli/schema.py
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import settings
from src.brane import MBraneKind, MBraneSolution, SuperpositionConfig, TauMap, m_brane
from src.calib import CalibrationKind, CalibrationSpec
from src.errors import ConfigError
from static.constants import logger

QuaternionArray = Tuple[float, float, float, float]
ZERO: QuaternionArray = (0.0, 0.0, 0.0, 0.0)


class TauModel(BaseModel):
    """One tau map; quaternions as [w, x, y, z]."""
    model_config = ConfigDict(extra="forbid")

    p1: QuaternionArray
    p2: QuaternionArray
    a: QuaternionArray = ZERO
    r: float = 1.0

    @field_validator("r")
    @classmethod
    def positive_weight(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("r must be positive")
        return value

    @model_validator(mode="after")
    def nondegenerate(self) -> "TauModel":
        if not any(self.p1) and not any(self.p2):
            raise ValueError("degenerate tau: p1 and p2 are both zero")
        return self


class MBraneModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["M2", "M5"] = "M5"
    q: float = Field(gt=0)


class ConfigFile(BaseModel):
    """Top-level schema of a run configuration."""
    model_config = ConfigDict(extra="forbid")

    taus: List[TauModel] = []
    box: Tuple[float, float] = Field(default_factory=lambda: (-settings.CHART_BOX, settings.CHART_BOX))
    form: Optional[Literal["mixed_ij", "kahler2_phi", "cayley_phi", "phi_j"]] = None
    kahler_index: int = Field(default=1, ge=1, le=3)
    mbrane: Optional[MBraneModel] = None

    @field_validator("box")
    @classmethod
    def ordered_box(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if value[0] >= value[1]:
            raise ValueError("box must be [lo, hi] with lo < hi")
        return value


@dataclass(frozen=True)
class ParsedConfig:
    """Validated in-memory contents of a configuration file."""
    superposition: SuperpositionConfig
    calibration: Optional[CalibrationSpec] = None
    mbrane: Optional[MBraneSolution] = None


def _field_path(location: Tuple) -> str:
    parts = []
    for part in location:
        if isinstance(part, int):
            parts[-1] = f"{parts[-1]}[{part}]" if parts else f"[{part}]"
        else:
            parts.append(str(part))
    return ".".join(parts) or "<root>"


def parse_config(text: str) -> ParsedConfig:
    """
    Parse and validate a JSON configuration.

    Args:
        text: Configuration document

    Returns:
        ParsedConfig with the superposition, optional calibration and M-brane

    Raises:
        ConfigError: On malformed JSON (with line) or schema violations (with field)
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("Malformed configuration", [f"line {e.lineno}, column {e.colno}: {e.msg}"])
    try:
        model = ConfigFile.model_validate(document)
    except ValidationError as e:
        diagnostics = [f"field {_field_path(err['loc'])}: {err['msg']}" for err in e.errors()]
        raise ConfigError("Invalid configuration", diagnostics)

    taus = tuple(TauMap.from_arrays(t.p1, t.p2, t.a, t.r) for t in model.taus)
    if not taus:
        logger.warning("Configuration has no tau maps, the superposition is flat")
    calibration = None
    if model.form is not None:
        calibration = CalibrationSpec(CalibrationKind(model.form), kahler_index=model.kahler_index)
    mbrane = m_brane(MBraneKind(model.mbrane.kind), model.mbrane.q) if model.mbrane else None
    return ParsedConfig(SuperpositionConfig(taus, model.box), calibration, mbrane)


def load_config(path: str) -> ParsedConfig:
    """
    Raises:
        ConfigError: If the file cannot be read or is invalid
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}", [str(e)])
    return parse_config(text)


class RunConfig(BaseModel):
    """Run-level options; unset values fall back to the settings."""
    model_config = ConfigDict(extra="forbid")

    command: str
    config: str
    step: Optional[float] = Field(default=None, gt=0)
    seed: int = Field(default_factory=lambda: settings.SEED)
    samples: int = Field(default_factory=lambda: settings.SAMPLES, gt=0)
    out: str = Field(default_factory=lambda: str(Path(settings.OUTPUT_DIR) / "report.json"))
    threads: int = Field(default_factory=lambda: settings.NUM_THREADS, ge=1)

    def step_or(self, default: float) -> float:
        return default if self.step is None else self.step
