"""Scenario parameters and the flat ``key = value`` scenario file format.

Defaults reproduce the simulation table: 5 GHz carrier, 25.6 MHz uplink,
1000 m cells, shadowing 8/5/8 dB with correlation 0.5, path-loss exponents
3.5/2.5/3.5, transmit powers 40/20/2 dBm, threshold -10 dB, noise -100 dBm.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError, DomainError
from .geometry import build_layout
from .propagation import PropagationParams
from .sir import Backend, NoiseFloor

DF_MODES = ("eq20", "minrate")
SECTORS = (0, 60, 120)


@dataclass(frozen=True)
class ScenarioConfig:
    # propagation
    f: float = 5e9
    d0: float = 1.0
    gamma_b: float = 3.5
    gamma_r: float = 2.5
    gamma_m: float = 3.5
    sigma_d: float = 8.0
    sigma_r: float = 5.0
    sigma_m: float = 8.0
    rho: float = 0.5
    # system
    W: float = 25.6e6
    D: float = 1000.0
    P_BS: float = 40.0
    P_FRN: float = 20.0
    P_MS: float = 2.0
    noise: float = -100.0
    include_noise: bool = False
    threshold_db: float = -10.0
    r_bar: float = 1.0
    dr_ratio: float = 2.0 / 3.0
    omit_area_factor: bool = False
    # solver and Monte Carlo controls
    grid_step: float = 0.01
    n_samples: int = 100_000
    seed: int = 1
    worker_count: int = 1
    df_mode: str = "eq20"
    sir_backend: str = "closed"
    sector: int = 0

    def __post_init__(self):
        positive = ("f", "d0", "gamma_b", "gamma_r", "gamma_m", "W", "D", "r_bar")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", key=name)
        for name in ("sigma_d", "sigma_r", "sigma_m"):
            if not getattr(self, name) >= 0:
                raise ConfigError("must be non-negative", key=name)
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError(f"must lie in [0, 1], got {self.rho}", key="rho")
        if not 0.0 < self.dr_ratio < 1.0:
            raise ConfigError(f"must lie in (0, 1), got {self.dr_ratio}", key="dr_ratio")
        if not 0.0 < self.grid_step <= 0.05:
            raise ConfigError(f"must lie in (0, 0.05], got {self.grid_step}", key="grid_step")
        if self.n_samples < 1:
            raise ConfigError("must be at least 1", key="n_samples")
        if self.worker_count < 1:
            raise ConfigError("must be at least 1", key="worker_count")
        if self.seed < 0:
            raise ConfigError("must be non-negative", key="seed")
        if self.df_mode not in DF_MODES:
            raise ConfigError(f"must be one of {DF_MODES}", key="df_mode")
        if self.sir_backend not in {b.value for b in Backend}:
            raise ConfigError("must be 'closed' or 'geometric'", key="sir_backend")
        if self.sector not in SECTORS:
            raise ConfigError(f"must be one of {SECTORS}", key="sector")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def propagation(self):
        return PropagationParams(
            f=self.f, d0=self.d0,
            gamma_b=self.gamma_b, gamma_r=self.gamma_r, gamma_m=self.gamma_m,
            sigma_d=self.sigma_d, sigma_r=self.sigma_r, sigma_m=self.sigma_m,
            rho=self.rho,
        )

    @property
    def backend(self):
        return Backend(self.sir_backend)

    @property
    def noise_floor(self):
        if not self.include_noise:
            return None
        return NoiseFloor(noise_dbm=self.noise, p_ms_dbm=self.P_MS, p_frn_dbm=self.P_FRN)

    def layout(self, dr_ratio=None):
        try:
            return build_layout(self.D, self.dr_ratio if dr_ratio is None else dr_ratio)
        except DomainError as exc:
            raise ConfigError(str(exc), key="dr_ratio") from exc


_FIELDS = {f.name: f for f in fields(ScenarioConfig)}


def _convert(name, raw, line):
    kind = _FIELDS[name].type
    try:
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw.strip("'\"")
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r} as {kind}", key=name, line=line) from None


def parse_config(text):
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, raw = (part.strip() for part in line.partition("="))
        if key not in _FIELDS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        if not raw:
            raise ConfigError("missing value", key=key, line=lineno)
        values[key] = _convert(key, raw, lineno)
    return ScenarioConfig(**values)


def load_config(path):
    return parse_config(Path(path).read_text())
