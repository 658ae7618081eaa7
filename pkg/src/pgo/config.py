"""Run configuration: a flat key = value text file plus command-line overrides.

Every output file embeds the resolved configuration, so a config plus the
package version fully determines the bytes produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import ConfigError
from .potential import PotentialSpec

_TAU_MODES = ("regular", "irregular", "paper")
_FORMATS = ("csv", "json")
_POTENTIAL_FORMS = ("exact", "truncated")


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters for one pipeline run."""

    lam: float = 0.0
    mu: float = 1.0
    s: int = 1
    n_trunc: int | None = None
    l: int = 0
    tau_mode: str = "regular"
    dim: int | None = None
    e_min: float | None = None
    e_max: float | None = None
    e_step: float | None = None
    levels: tuple[int, ...] = (0,)
    r_min: float = 0.0
    r_max: float | None = None
    n_points: int = 201
    hbar2_over_2m: float = 20.735
    energy_mev: float = 118.53
    step_length_fm: float = 0.96
    potential_form: str = "exact"
    potential_scale: float = 1.0
    sweep_count: int = 16
    sweep_fraction: float = 0.5
    oracle_points: int = 2001
    oracle_count: int | None = None
    out_dir: str = "."
    format: str = "csv"

    def __post_init__(self):
        if self.mu <= 0:
            raise ConfigError("must be positive", field="mu")
        if self.s < 1:
            raise ConfigError("must be a positive integer", field="s")
        if self.n_trunc is None:
            object.__setattr__(self, "n_trunc", 2 * self.s + 1)
        if self.n_trunc < self.s + 1:
            raise ConfigError("must be at least s+1", field="n_trunc")
        if self.l < 0:
            raise ConfigError("must be nonnegative", field="l")
        if self.tau_mode not in _TAU_MODES:
            raise ConfigError(f"must be one of {_TAU_MODES}", field="tau_mode")
        if self.tau_mode == "paper" and self.l not in (0, 1):
            raise ConfigError(
                "tau = l(l+1) solves the indicial condition only for l in {0, 1}",
                field="tau_mode",
            )
        if self.dim is None:
            object.__setattr__(self, "dim", self.n_trunc)
        if self.dim < 1:
            raise ConfigError("must be >= 1", field="dim")
        if self.format not in _FORMATS:
            raise ConfigError(f"must be one of {_FORMATS}", field="format")
        if self.potential_form not in _POTENTIAL_FORMS:
            raise ConfigError(f"must be one of {_POTENTIAL_FORMS}", field="potential_form")
        if self.r_max is None:
            object.__setattr__(self, "r_max", 12.0 / math.sqrt(self.mu))
        if self.r_min < 0 or self.r_max <= self.r_min:
            raise ConfigError("need 0 <= r_min < r_max", field="r_min")
        if self.n_points < 2:
            raise ConfigError("must be at least 2", field="n_points")
        if self.hbar2_over_2m <= 0:
            raise ConfigError("must be positive", field="hbar2_over_2m")
        if self.step_length_fm <= 0:
            raise ConfigError("must be positive", field="step_length_fm")
        if self.potential_scale <= 0:
            raise ConfigError("must be positive", field="potential_scale")
        if not 0 < self.sweep_fraction < 1:
            raise ConfigError("must be in (0, 1)", field="sweep_fraction")
        if self.sweep_count < 2:
            raise ConfigError("must be at least 2", field="sweep_count")
        if self.oracle_points < 200:
            raise ConfigError("must be at least 200", field="oracle_points")
        if self.oracle_count is None:
            object.__setattr__(self, "oracle_count", min(self.dim, 12))
        if not self.levels or any(n < 0 for n in self.levels):
            raise ConfigError("need nonnegative level indices", field="levels")
        window = (self.e_min, self.e_max)
        if (window[0] is None) != (window[1] is None):
            raise ConfigError("e_min and e_max must be given together", field="e_min")
        if window[0] is not None and window[1] <= window[0]:
            raise ConfigError("e_max must exceed e_min", field="e_max")
        if self.e_step is not None and self.e_step <= 0:
            raise ConfigError("must be positive", field="e_step")

    def potential_spec(self) -> PotentialSpec:
        return PotentialSpec(self.lam, self.mu, self.s, self.n_trunc)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            key = "lambda" if f.name == "lam" else f.name
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            out[key] = v
        return out


_KEY_ALIASES = {"lambda": "lam"}

_INT_FIELDS = {"s", "n_trunc", "l", "dim", "n_points", "sweep_count", "oracle_points",
               "oracle_count"}
_FLOAT_FIELDS = {"lam", "mu", "e_min", "e_max", "e_step", "r_min", "r_max",
                 "hbar2_over_2m", "energy_mev", "step_length_fm", "potential_scale",
                 "sweep_fraction"}
_STR_FIELDS = {"tau_mode", "potential_form", "out_dir", "format"}


def _coerce(name: str, raw: str, line: int | None):
    if name == "levels":
        try:
            return tuple(int(tok) for tok in raw.replace(" ", "").split(",") if tok)
        except ValueError:
            raise ConfigError(f"cannot parse level list from '{raw}'",
                              field="levels", line=line) from None
    if name in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"expected an integer, got '{raw}'",
                              field=name, line=line) from None
    if name in _FLOAT_FIELDS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"expected a number, got '{raw}'",
                              field=name, line=line) from None
    if name in _STR_FIELDS:
        return raw
    raise ConfigError(f"unknown key '{name}'", field=name, line=line)


def parse_config_text(text: str) -> dict:
    """Parse 'key = value' lines ('#' comments allowed) into typed fields."""
    out = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        name = _KEY_ALIASES.get(key, key)
        out[name] = _coerce(name, value, lineno)
    return out


def load_config(path: str | None = None, overrides: list[str] | None = None,
                **extra) -> RunConfig:
    """Build a RunConfig from an optional file, --set overrides, then kwargs."""
    data = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got '{item}'")
        key, _, value = item.partition("=")
        name = _KEY_ALIASES.get(key.strip(), key.strip())
        data[name] = _coerce(name, value.strip(), None)
    data.update(extra)
    return RunConfig(**data)
