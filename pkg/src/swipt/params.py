"""Link-budget parameters, unit conversion and config loading.

Everything downstream works in linear SI units (W, m, s). dBm only shows up
here, at the config/CLI boundary.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

__all__ = [
    "SystemParams",
    "ParamError",
    "ConfigError",
    "dbm_to_watts",
    "watts_to_dbm",
    "validate",
    "default_params",
    "load_config",
    "apply_env_overrides",
    "ENV_PREFIX",
]

ENV_PREFIX = "SWIPT_"


class ParamError(ValueError):
    """A SystemParams field violates one of its invariants."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigError(ValueError):
    """Config file could not be turned into a valid SystemParams."""


def dbm_to_watts(x: float) -> float:
    """Convert a power in dBm to watts."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"dBm value must be finite, got {x}")
    return 10.0 ** (x / 10.0) * 1e-3


def watts_to_dbm(p: float) -> float:
    """Convert a strictly positive power in watts to dBm."""
    p = float(p)
    if not p > 0:
        raise ValueError(f"power must be > 0 W to express in dBm, got {p}")
    return 10.0 * math.log10(p * 1e3)


@dataclass(frozen=True)
class SystemParams:
    """Point-to-point SWIPT link budget.

    Attributes
    ----------
    p_ave, p_peak : float
        Average and peak transmit power constraints [W].
    distance : float
        Tx-Rx distance [m].
    path_loss_exp : float
        Path-loss exponent; large-scale attenuation is ``distance**path_loss_exp``.
    noise_power : float
        AWGN power at the information decoder [W].
    eh_efficiency : float
        RF-to-DC conversion efficiency, in [0, 1].
    eh_sensitivity : float
        Harvester sensitivity floor [W]; nothing is harvested below it.
    fading_m : int
        Nakagami-m fading order (integer, >= 1; m = 1 is Rayleigh).
    block_time : float
        Block duration [s]. Every reported metric is a power or a per-symbol
        rate, so it cancels out; the Monte Carlo energy bookkeeping still
        carries it.
    """

    p_ave: float = 10e-3
    p_peak: float = 30e-3
    distance: float = 10.0
    path_loss_exp: float = 3.0
    noise_power: float = 1e-8
    eh_efficiency: float = 0.5
    eh_sensitivity: float = 1e-5
    fading_m: int = 1
    block_time: float = 1e-3

    @property
    def path_loss(self) -> float:
        """Large-scale attenuation ``d**lambda`` (a factor >= 1 for d >= 1)."""
        return self.distance**self.path_loss_exp

    def replace(self, **changes) -> "SystemParams":
        return validate(dataclasses.replace(self, **changes))


def _check_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ParamError(name, f"must be a finite value > 0, got {value!r}")


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged if every invariant holds, else raise ParamError."""
    for name in ("p_ave", "p_peak", "distance", "path_loss_exp", "noise_power", "block_time"):
        _check_positive(name, getattr(params, name))
    eta = params.eh_efficiency
    if not (math.isfinite(eta) and 0.0 <= eta <= 1.0):
        raise ParamError("eh_efficiency", f"must lie in [0, 1], got {eta!r}")
    p_th = params.eh_sensitivity
    if not (math.isfinite(p_th) and p_th >= 0.0):
        raise ParamError("eh_sensitivity", f"must be finite and >= 0, got {p_th!r}")
    m = params.fading_m
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ParamError("fading_m", f"must be an integer >= 1, got {m!r}")
    if params.p_peak < params.p_ave:
        raise ParamError(
            "p_peak", f"peak power {params.p_peak!r} W is below average power {params.p_ave!r} W"
        )
    if params.p_peak < 3.0 * params.p_ave * (1 - 1e-12):
        warnings.warn(
            f"p_peak/p_ave = {params.p_peak / params.p_ave:.3g} < 3: the peak constraint on "
            "modulated symbols may bind; optimizers will clamp and flag it",
            RuntimeWarning,
            stacklevel=2,
        )
    return params


def default_params(**overrides) -> SystemParams:
    """Reference link budget (10 mW average, 30 mW peak, 10 m, -50 dBm noise, -20 dBm floor)."""
    return validate(SystemParams(**overrides))


_FIELDS = {f.name: f for f in dataclasses.fields(SystemParams)}


def _coerce(name: str, raw: str):
    if name == "fading_m":
        value = float(raw)
        if not value.is_integer():
            raise ParamError("fading_m", f"must be an integer, got {raw!r}")
        return int(value)
    return float(raw)


def _assign(values: dict, key: str, raw: str) -> None:
    key = key.strip().lower()
    if key.endswith("_dbm"):
        name = key[: -len("_dbm")]
        if name not in _FIELDS or name in ("distance", "path_loss_exp", "eh_efficiency",
                                            "fading_m", "block_time"):
            raise KeyError(key)
        values[name] = dbm_to_watts(float(raw))
    elif key in _FIELDS:
        values[key] = _coerce(key, raw)
    else:
        raise KeyError(key)


def _line_of(text: str, key: str) -> int | None:
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.split("=", 1)[0].split(":", 1)[0].strip().lower() == key:
            return lineno
    return None


def load_config(path: str | os.PathLike, base: SystemParams | None = None) -> SystemParams:
    """Read an INI-style config file into a validated SystemParams.

    Section names are free-form (``[transmitter]``, ``[channel]``, ...) and only
    group keys; keys map one-to-one onto SystemParams fields. A ``_dbm`` suffix
    on a power field (``eh_sensitivity_dbm = -20``) is converted to watts.
    Fields not mentioned keep the value from ``base`` (default link budget).
    """
    path = Path(path)
    text = path.read_text()
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    values: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            try:
                _assign(values, key, raw)
            except KeyError:
                raise ConfigError(
                    f"{path}:{_line_of(text, key)}: unknown key {key!r} in [{section}]"
                ) from None
            except ValueError as exc:
                raise ConfigError(f"{path}:{_line_of(text, key)}: {key}: {exc}") from None

    base = base if base is not None else SystemParams()
    try:
        return validate(dataclasses.replace(base, **values))
    except ParamError as exc:
        key = exc.field
        line = _line_of(text, key) or _line_of(text, key + "_dbm")
        raise ConfigError(f"{path}:{line}: {exc}") from None


def apply_env_overrides(params: SystemParams, environ: Mapping[str, str] | None = None) -> SystemParams:
    """Override fields from ``SWIPT_<FIELD>`` / ``SWIPT_<FIELD>_DBM`` environment variables."""
    environ = os.environ if environ is None else environ
    values: dict = {}
    for var, raw in environ.items():
        if not var.startswith(ENV_PREFIX):
            continue
        key = var[len(ENV_PREFIX):].lower()
        try:
            _assign(values, key, raw)
        except KeyError:
            continue  # other SWIPT_* settings (seed, workers) are not link parameters
        except ValueError as exc:
            raise ConfigError(f"environment {var}: {exc}") from None
    if not values:
        return params
    return validate(dataclasses.replace(params, **values))
