"""Experiment configuration: INI files with one section per module.

Content and tracking sizes are stored at their nominal values. The ``desk``
profile shrinks them by 1000x when the scenario is built, which keeps success
probabilities away from 0 under the 20 ms deadline. ``paper-literal`` uses
them unscaled.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
import math
import os
from dataclasses import dataclass, fields

from vrnetsim.channel import dbm_to_watts
from vrnetsim.environment import ScenarioParams
from vrnetsim.errors import ConfigError

PROFILES = {"desk": 1e-3, "paper-literal": 1.0}
READOUT_RULES = ("nlms", "lms")
SEED_ENV = "VRNETSIM_SEED"


def _field(section: str, default, **checks):
    return dataclasses.field(default=default, metadata={"section": section, **checks})


@dataclass
class ExperimentConfig:
    """All knobs of an experiment. Sizes in bits, rates in bit/s, times in seconds."""

    # topology
    num_sbs: int = _field("topology", 5, min=1)
    num_users: int = _field("topology", 25, min=1)
    area_radius: float = _field("topology", 500.0, positive=True)
    # channel
    num_dl_rbs: int = _field("channel", 5, min=1)
    num_ul_rbs: int = _field("channel", 5, min=1)
    rb_bandwidth: float = _field("channel", 1.8e6, positive=True)
    sbs_power_dbm: float = _field("channel", 30.0)
    user_power_dbm: float = _field("channel", 20.0)
    noise_power_dbm: float = _field("channel", -105.0)
    pathloss_exponent: float = _field("channel", 3.0, positive=True)
    d_min: float = _field("channel", 1.0, positive=True)
    backhaul_rate: float = _field("channel", 10e9, positive=True)
    # correlation
    g120: float = _field("correlation", 12e6, positive=True)
    g360: float = _field("correlation", 50e6, positive=True)
    k_min: float = _field("correlation", 0.1e6, nonneg=True)
    k_max: float = _field("correlation", 1e6, nonneg=True)
    sigma_ref: float = _field("correlation", 1.0, positive=True)
    tracking_sigma: float = _field("correlation", 1.0, positive=True)
    sigma_max_scale: float = _field("correlation", 1.0, nonneg=True)
    alpha: float = _field("correlation", 2.0, positive=True)
    kappa: float = _field("correlation", 5.0, positive=True)
    view_width: float = _field("correlation", 120.0, positive=True, max=360.0)
    view_concentration: float = _field("correlation", 0.0, nonneg=True)
    num_contents: int = _field("correlation", 10, min=1)
    dirichlet_alpha: float = _field("correlation", 1.0, positive=True)
    # qos
    gamma_d: float = _field("qos", 0.02, positive=True)
    history_slots: int = _field("qos", 200, min=1)
    # learning
    num_neurons: int = _field("learning", 100, min=1)
    cycle_weight: float = _field("learning", 0.5, nonneg=True, max=1.0)
    input_scale: float = _field("learning", 0.5, positive=True)
    lam: float = _field("learning", 0.3, nonneg=True)
    lam_prime: float = _field("learning", 0.03, nonneg=True)
    lam_tau: float = _field("learning", 0.0, nonneg=True)
    readout_rule: str = _field("learning", "nlms", choices=READOUT_RULES)
    epsilon: float = _field("learning", 0.1, nonneg=True, max=1.0)
    epsilon_decay: float = _field("learning", 0.995, positive=True, max=1.0)
    zeta: float = _field("learning", 0.3, positive=True, max=1.0)
    action_cap: int = _field("learning", 64, min=1)
    num_iterations: int = _field("learning", 1000, min=1)
    num_periods: int = _field("learning", 100, min=1)
    # harness
    seed: int = _field("harness", 0, min=0)
    profile: str = _field("harness", "desk", choices=tuple(PROFILES))

    def __post_init__(self):
        validate(self)

    @property
    def content_scale(self) -> float:
        return PROFILES[self.profile]

    @property
    def sbs_power(self) -> float:
        return dbm_to_watts(self.sbs_power_dbm)

    @property
    def user_power(self) -> float:
        return dbm_to_watts(self.user_power_dbm)

    @property
    def noise_power(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)

    def scenario(self) -> ScenarioParams:
        s = self.content_scale
        return ScenarioParams(
            num_dl_rbs=self.num_dl_rbs, num_ul_rbs=self.num_ul_rbs,
            rb_bandwidth=self.rb_bandwidth, sbs_power=self.sbs_power,
            user_power=self.user_power, noise_power=self.noise_power,
            beta=self.pathloss_exponent, d_min=self.d_min,
            g120=self.g120 * s, g360=self.g360 * s, k_min=self.k_min * s, k_max=self.k_max * s,
            sigma_ref=self.sigma_ref, sigma_max_scale=self.sigma_max_scale,
            tracking_sigma=self.tracking_sigma, alpha=self.alpha, kappa=self.kappa,
            backhaul_rate=self.backhaul_rate, gamma_d=self.gamma_d,
            num_contents=self.num_contents, dirichlet_alpha=self.dirichlet_alpha,
            view_width=self.view_width, view_concentration=self.view_concentration,
            history_slots=self.history_slots,
        )

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form; identical on every platform."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def validate(cfg: ExperimentConfig) -> None:
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        meta = f.metadata
        if "choices" in meta:
            if value not in meta["choices"]:
                raise ConfigError(f.name, f"must be one of {', '.join(meta['choices'])}")
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f.name, "must be a number")
        if f.type == "int" and not isinstance(value, int):
            raise ConfigError(f.name, "must be an integer")
        if not math.isfinite(value):
            raise ConfigError(f.name, "must be finite")
        if meta.get("positive") and not value > 0:
            raise ConfigError(f.name, "must be positive")
        if meta.get("nonneg") and value < 0:
            raise ConfigError(f.name, "must be non-negative")
        if "min" in meta and value < meta["min"]:
            raise ConfigError(f.name, f"must be at least {meta['min']}")
        if "max" in meta and value > meta["max"]:
            raise ConfigError(f.name, f"must be at most {meta['max']}")
    if cfg.k_min > cfg.k_max:
        raise ConfigError("k_min", "must not exceed k_max")
    if cfg.g120 > cfg.g360:
        raise ConfigError("g120", "must not exceed g360")


def _sections() -> dict[str, list[dataclasses.Field]]:
    out: dict[str, list[dataclasses.Field]] = {}
    for f in fields(ExperimentConfig):
        out.setdefault(f.metadata["section"], []).append(f)
    return out


def _parse(f: dataclasses.Field, raw: str):
    if f.type == "str":
        return raw.strip()
    try:
        if f.type == "int":
            as_float = float(raw)
            if not as_float.is_integer():
                raise ValueError
            return int(as_float)
        return float(raw)
    except ValueError:
        raise ConfigError(f.name, f"cannot parse {raw!r} as {f.type}") from None


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(SEED_ENV, f"cannot parse {raw!r} as int") from None


def parse_config(text: str) -> ExperimentConfig:
    """Build a config from INI text; missing keys take their defaults."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("file", str(exc).splitlines()[0]) from None
    sections = _sections()
    values = {"seed": default_seed()}
    for name in parser.sections():
        if name not in sections:
            raise ConfigError(name, "unknown section")
        known = {f.name: f for f in sections[name]}
        for key, raw in parser.items(name):
            if key not in known:
                raise ConfigError(key, f"unknown key in section [{name}]")
            values[key] = _parse(known[key], raw)
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("config", f"{path}: {exc.strerror}") from None
    return parse_config(text)


def dump_config(cfg: ExperimentConfig) -> str:
    """INI text that :func:`parse_config` maps back to an equal config."""
    lines = []
    for section, flist in _sections().items():
        lines.append(f"[{section}]")
        for f in flist:
            value = getattr(cfg, f.name)
            lines.append(f"{f.name} = {value!r}" if isinstance(value, float) else f"{f.name} = {value}")
        lines.append("")
    return "\n".join(lines)
