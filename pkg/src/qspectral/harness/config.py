"""Experiment configuration loaded from JSON."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..errors import ConfigError
from ..lattice import GridSpec, get_entry
from ..spectral import FilterKind, FrequencyConvention, as_coefficients

PATHS = ("ideal", "arithmetic")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    d: int
    n: int
    convention: str = "signed"
    A: list | None = None
    lam: float | None = None
    dt: float | None = None
    steps: int | None = None
    source: str = "cos2pix_sinm4piy"
    u0: str | None = None
    path: str = "ideal"
    eps: float | None = None
    t: int | None = None
    seed: int = 0
    out: str | None = None
    min_prob: float = 1e-14
    label: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        kind = FilterKind.parse(self.kind)
        object.__setattr__(self, "kind", kind.value)
        object.__setattr__(self, "convention", FrequencyConvention.parse(self.convention).value)
        self.grid  # validates d, n
        if self.path not in PATHS:
            raise ConfigError(f"path must be one of {PATHS}, got {self.path!r}")
        if self.path == "arithmetic" and self.eps is None and self.t is None:
            raise ConfigError("arithmetic path needs eps or t")
        get_entry(self.source)
        if kind is FilterKind.HELMHOLTZ:
            if self.lam is None:
                raise ConfigError("helmholtz config needs lam")
            if self.A is not None or self.dt is not None:
                raise ConfigError("helmholtz config takes lam only (no A, dt)")
        else:
            if self.A is None:
                raise ConfigError(f"{kind.value} config needs A")
            a = as_coefficients(self.A)
            if a.d != self.d:
                raise ConfigError(f"A is {a.d}x{a.d} but d={self.d}")
            if self.lam is not None:
                raise ConfigError(f"{kind.value} config does not take lam")
        if kind is FilterKind.DIFFUSION:
            if self.dt is None or self.steps is None or self.u0 is None:
                raise ConfigError("diffusion config needs dt, steps and u0")
            if int(self.steps) < 1:
                raise ConfigError("steps must be >= 1")
            get_entry(self.u0)
        elif self.dt is not None or self.steps is not None or self.u0 is not None:
            raise ConfigError(f"{kind.value} config does not take dt, steps or u0")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.d, self.n)

    @property
    def params(self) -> dict:
        if self.kind == "helmholtz":
            return {"lam": self.lam}
        if self.kind == "elliptic":
            return {"A": self.A}
        return {"A": self.A, "dt": self.dt}

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    def to_dict(self) -> dict:
        d = asdict(self)
        if not d["extra"]:
            d.pop("extra")
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return ExperimentConfig.from_dict(data)
