"""
Run configuration.

A RunConfig is assembled from three sources, later ones winning:
built-in defaults, an optional ``key = value`` file, command-line flags.
Every problem surfaces as a UsageError that names the offending field.
"""

from __future__ import annotations

import enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import UsageError
from .solver import Scheme


class Experiment(str, enum.Enum):
    RUN = "run"
    CONVERGE = "converge"
    ENTROPY = "entropy"
    DAFERMOS = "dafermos"
    BLOWUP = "blowup"


class InitialData(str, enum.Enum):
    SINE_SHOCK = "sine-shock"
    RAREFACTION = "rarefaction"
    SMOOTH = "smooth"


_SCHEMES_BY_EXPERIMENT = {
    Experiment.RUN: set(Scheme),
    Experiment.CONVERGE: {Scheme.DDG, Scheme.DRKDG},
    Experiment.ENTROPY: {Scheme.DDG},
    Experiment.DAFERMOS: {Scheme.DDG, Scheme.DRKDG},
    Experiment.BLOWUP: {Scheme.DDG, Scheme.DRKDG, Scheme.VANILLA_DG},
}


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: Experiment
    scheme: Scheme = Scheme.DDG
    ic: InitialData = InitialData.SINE_SHOCK
    p: int = Field(6, ge=1, le=16)
    n_cells: int = Field(20, ge=1)
    cfl: float = Field(0.5, gt=0.0)
    t_end: float = Field(1.0, gt=0.0)
    x_min: float = 0.0
    x_max: float = 2.0
    outputs: int = Field(10, ge=1)
    output_times: Optional[Tuple[float, ...]] = None
    levels: Tuple[int, ...] = (10, 15, 20, 25, 30)
    p_list: Tuple[int, ...] = (3, 6)
    n_list: Tuple[int, ...] = (20, 40)
    cfl_list: Tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
    reference_cells: int = Field(10000, ge=1)
    gradient_steps: int = Field(3, ge=1)
    out_path: Optional[Path] = None

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if not self.x_max > self.x_min:
            raise ValueError("x_max must be greater than x_min")
        if self.scheme not in _SCHEMES_BY_EXPERIMENT[self.experiment]:
            raise ValueError(f"scheme '{self.scheme.value}' is not available for experiment '{self.experiment.value}'")
        if self.output_times is not None:
            times = self.output_times
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("output_times must be strictly increasing")
            if times and (times[0] <= 0.0 or times[-1] > self.t_end):
                raise ValueError("output_times must lie in (0, t_end]")
        if len(self.levels) < 2 or any(n < 1 for n in self.levels):
            raise ValueError("levels needs at least two positive grid sizes")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if not self.p_list or any(p < 1 for p in self.p_list):
            raise ValueError("p_list needs positive orders")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("n_list needs positive grid sizes")
        if not self.cfl_list or any(c <= 0.0 for c in self.cfl_list):
            raise ValueError("cfl_list needs positive values")
        if self.scheme is Scheme.GODUNOV and self.cfl > 1.0:
            raise ValueError("cfl must not exceed 1 for the godunov scheme")
        return self

    def schedule(self) -> Tuple[float, ...]:
        """Explicit output_times, or `outputs` equally spaced times ending at t_end."""
        if self.output_times:
            return tuple(self.output_times)
        return tuple(float(t) for t in np.linspace(0.0, self.t_end, self.outputs + 1)[1:])

    def to_json(self) -> str:
        return self.model_dump_json()


# {{{ sources

_ALIASES = {"n": "n_cells", "out": "out_path", "config": None}
_LIST_FIELDS = {"output_times", "levels", "p_list", "n_list", "cfl_list"}


def _normalize_key(key: str) -> str:
    name = key.strip().lstrip("-").replace("-", "_")
    return _ALIASES.get(name, name) or ""


def read_config_file(path: Path) -> Dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment, lists are comma separated."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"config: cannot read '{path}': {exc.strerror or exc}") from exc
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config: line {lineno} is not of the form 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        name = _normalize_key(key)
        if not name:
            raise UsageError(f"config: line {lineno} has an invalid key '{key}'")
        values[name] = [v.strip() for v in value.split(",") if v.strip()] if name in _LIST_FIELDS else value
    return values


def _usage_from_validation(exc: ValidationError) -> UsageError:
    messages = []
    for error in exc.errors():
        field = ".".join(str(part) for part in error.get("loc", ())) or "config"
        messages.append(f"{field}: {error.get('msg', 'invalid value')}")
    return UsageError("; ".join(messages))


def parse_config(
    experiment: Optional[str],
    overrides: Optional[Mapping[str, Any]] = None,
    config_file: Optional[Path] = None,
) -> RunConfig:
    """
    Merge defaults, the optional config file and the command-line overrides.

    ``converge`` defaults to the smooth data and t_end = 8 unless either is
    given explicitly.
    """
    merged: Dict[str, Any] = {}
    if config_file is not None:
        merged.update(read_config_file(config_file))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[_normalize_key(key) or key] = value
    if experiment is not None:
        merged["experiment"] = experiment
    if not merged.get("experiment"):
        raise UsageError("experiment: missing (one of run, converge, entropy, dafermos, blowup)")

    unknown = sorted(set(merged) - set(RunConfig.model_fields))
    if unknown:
        raise UsageError(f"{unknown[0]}: unknown configuration key")

    if merged["experiment"] == Experiment.CONVERGE.value:
        merged.setdefault("ic", InitialData.SMOOTH.value)
        merged.setdefault("t_end", 8.0)
    try:
        return RunConfig(**merged)
    except ValidationError as exc:
        raise _usage_from_validation(exc) from exc


# }}}


__all__ = ["Experiment", "InitialData", "RunConfig", "read_config_file", "parse_config"]
