"""Physical inputs for the triple-slit model and the scales derived from them.

All quantities are SI. Unit suffixes (nm, ns, ...) are only understood by
:func:`parse_quantity` and the config-file loader.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

HBAR = 1.054571817e-34
ELECTRON_MASS = 9.11e-31

HOP_CONVENTIONS = ("shared", "composed")


class ConfigError(ValueError):
    """Raised for invalid or unparsable physical parameters."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Source, slit and flight-time parameters.

    ``epsilon=None`` means the inter-slit time is estimated from the momentum
    spread of the source packet (see :func:`estimate_epsilon`); a number is
    used as-is.

    ``hop_prefactor`` selects the amplitude of the looping path's two-hop
    kernel: ``"shared"`` uses one prefactor sqrt(m / 4 pi i hbar eps) for both
    hops, ``"composed"`` multiplies two proper single-hop kernels of duration
    2 eps each.
    """

    m: float = ELECTRON_MASS
    hbar: float = HBAR
    sigma0: float = 62e-9
    beta: float = 62e-9
    d: float = 650e-9
    t: float = 18e-9
    tau: float = 15e-9
    epsilon: float | None = None
    hop_prefactor: str = "shared"
    mirror_loop: bool = False

    def __post_init__(self):
        for name in ("m", "hbar", "sigma0", "beta", "d", "t", "tau"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        if self.epsilon is not None and not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ConfigError(f"epsilon must be positive or auto, got {self.epsilon!r}")
        if self.hop_prefactor not in HOP_CONVENTIONS:
            raise ConfigError(f"hop_prefactor must be one of {HOP_CONVENTIONS}")

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedScales:
    tau0: float
    delta_p: float
    delta_v: float


def reference_config(**overrides) -> ExperimentConfig:
    """Reference electron parameters (t = 18 ns, tau = 15 ns)."""
    return ExperimentConfig(**overrides)


def derived_scales(cfg: ExperimentConfig) -> DerivedScales:
    tau0 = cfg.m * cfg.sigma0**2 / cfg.hbar
    # minimum-uncertainty packet exp(-x^2 / 2 sigma0^2): position spread sigma0/sqrt(2)
    delta_p = cfg.hbar / (math.sqrt(2.0) * cfg.sigma0)
    return DerivedScales(tau0=tau0, delta_p=delta_p, delta_v=delta_p / cfg.m)


def estimate_epsilon(cfg: ExperimentConfig) -> float:
    """Inter-slit transit time d / delta_v, or the explicit value when one is set."""
    if cfg.epsilon is not None:
        return cfg.epsilon
    return cfg.d / derived_scales(cfg).delta_v


# --- text config -----------------------------------------------------------

_LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "mm": 1e-3, "m": 1.0}
_TIME_UNITS = {"ns": 1e-9, "us": 1e-6, "s": 1.0}

_KIND = {
    "m": "mass",
    "hbar": "action",
    "sigma0": "length",
    "beta": "length",
    "d": "length",
    "t": "time",
    "tau": "time",
    "epsilon": "time",
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Z]*)\s*$")


def parse_quantity(text: str, kind: str) -> float:
    """Parse ``"62nm"``, ``"0.492 ns"`` or a bare SI number into SI units."""
    match = _NUMBER.match(str(text))
    if not match:
        raise ConfigError(f"cannot parse {text!r} as a number")
    value, unit = float(match.group(1)), match.group(2)
    if not unit:
        return value
    table = {"length": _LENGTH_UNITS, "time": _TIME_UNITS, "mass": {"kg": 1.0},
             "action": {"Js": 1.0}}.get(kind, {})
    if unit not in table:
        raise ConfigError(f"unit {unit!r} not valid for a {kind}")
    return value * table[unit]


def _parse_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("on", "true", "yes", "1"):
        return True
    if lowered in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"cannot parse {text!r} as on/off")


def config_from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from string values, e.g. parsed key=value lines or CLI flags."""
    known = {f.name for f in fields(ExperimentConfig)}
    changes = {}
    for key, raw in values.items():
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(f"unknown parameter {key!r}")
        if key == "epsilon":
            text = str(raw).strip()
            changes[key] = None if text.lower() == "auto" else parse_quantity(text, "time")
        elif key == "hop_prefactor":
            changes[key] = str(raw).strip()
        elif key == "mirror_loop":
            changes[key] = _parse_bool(raw)
        else:
            changes[key] = parse_quantity(raw, _KIND[key])
    return replace(base or ExperimentConfig(), **changes)


def read_config_text(text: str) -> dict:
    """Parse key=value lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config(path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    return config_from_mapping(read_config_text(Path(path).read_text()), base)


def config_as_text(cfg: ExperimentConfig) -> list[str]:
    """Resolved config as ``key=value`` lines in SI units."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            text = "auto"
        elif isinstance(value, bool):
            text = "on" if value else "off"
        elif isinstance(value, float):
            text = f"{value:.12g}"
        else:
            text = str(value)
        lines.append(f"{f.name}={text}")
    return lines
