from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..exponents import Exponent, ExponentVector
from .sampling import TENSOR_FAMILIES

SCHEMA_VERSION = 1
KINDS = ("hl_verify", "inclusion_demo", "regularity_probe", "exponent_table")
MAX_ENTRIES = 10**6


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Run settings. Exponents are exact strings (``"12/5"``, ``"inf"``, ``"4,4,4"``)."""

    kind: str
    m: int = 2
    dims: list[int] | None = None
    field: str = "real"
    family: str = "rademacher"
    trials: int = 10
    seed: int = 0
    r: str | None = None
    p: str | None = None
    q: str | None = None
    domain: str | None = None
    restarts: int = 20
    tol: float = 1e-10
    max_iters: int = 500
    samples: int = 16
    tensor: str | None = None
    kernel: str | None = None
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.dims) if self.dims else (4,) * self.m

    def exponents(self, name: str) -> ExponentVector:
        text = getattr(self, name)
        if text is None:
            raise ConfigError(f"config needs exponent '{name}'")
        return ExponentVector.parse(text, self.m)

    def exponent(self, name: str) -> Exponent:
        text = getattr(self, name)
        if text is None:
            raise ConfigError(f"config needs exponent '{name}'")
        return Exponent(text)

    def validate(self) -> None:
        if self.schema != SCHEMA_VERSION:
            raise ConfigError(f"config schema {self.schema} is not supported (expected {SCHEMA_VERSION})")
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ConfigError(f"m must be a positive integer, got {self.m!r}")
        if self.dims is not None:
            self.dims = [int(n) for n in self.dims]
            if len(self.dims) == 1 and self.m > 1:
                self.dims = self.dims * self.m
            if len(self.dims) != self.m or any(n < 1 for n in self.dims):
                raise ConfigError(f"dims {self.dims} must list {self.m} positive sizes")
        if math.prod(self.shape) > MAX_ENTRIES:
            raise ConfigError(f"dims {list(self.shape)} exceed the desk-scale guard of {MAX_ENTRIES} entries")
        if self.field not in ("real", "complex"):
            raise ConfigError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.family not in TENSOR_FAMILIES:
            raise ConfigError(f"unknown tensor family {self.family!r}")
        if self.family == "custom" and not self.tensor:
            raise ConfigError("family 'custom' needs a tensor file")
        for name in ("trials", "restarts", "max_iters", "samples"):
            if not (isinstance(getattr(self, name), int) and getattr(self, name) >= 1):
                raise ConfigError(f"{name} must be a positive integer")
        if not (isinstance(self.tol, (int, float)) and self.tol >= 0):
            raise ConfigError("tol must be a nonnegative number")
        if self.r is not None:
            try:
                Exponent(self.r)
            except ValueError as exc:
                raise ConfigError(f"bad exponent 'r': {exc}") from exc
        for name in ("p", "q", "domain"):
            if getattr(self, name) is not None:
                try:
                    ExponentVector.parse(getattr(self, name), self.m)
                except ValueError as exc:
                    raise ConfigError(f"bad exponent '{name}': {exc}") from exc

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "kind" not in data:
            raise ConfigError("config needs a 'kind'")
        data = dict(data)
        for name in ("r", "p", "q", "domain"):
            if isinstance(data.get(name), list):
                data[name] = ",".join(str(x) for x in data[name])
            elif isinstance(data.get(name), int):
                data[name] = str(data[name])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path) -> dict:
    """Raw config mapping from a JSON file (merged with flags by the caller)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data
