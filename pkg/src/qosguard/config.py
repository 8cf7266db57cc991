"""Experiment configuration: flat INI-style key/value files with one section
per concern, validated into an ExperimentSpec with field-path diagnostics."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .allocator import SystemConfig
from .traffic import TrafficProfile

MODES = ("analyze", "simulate", "compare", "sweep", "vlc-link")

# paper-scale defaults: 100 channels, guard pool 10, 120 s mean holding time,
# 100-gap estimator windows
DEFAULT_CHANNELS = 100
DEFAULT_GUARD = 10
DEFAULT_HOLDING_TIME = 120.0
DEFAULT_WINDOW = 100

_KNOWN_KEYS = {
    "system": {"channels", "guard", "mu", "holding_time", "window"},
    "traffic": {"names", "rates", "ratio"},
    "sweep": {"lambda_total", "lambda_1"},
    "simulation": {
        "arrivals",
        "warmup",
        "policy",
        "bypass_estimator",
        "replications",
        "trace_stride",
        "events",
        "seed",
    },
    "vlc": {
        "half_power_angle",
        "detector_area",
        "distance",
        "irradiance_angle",
        "incidence_angle",
        "fov",
        "filter_coeff",
        "refractive_index",
        "transmit_power",
    },
}


class ConfigError(Exception):
    """Invalid experiment configuration; message carries the field path."""


@dataclass(frozen=True)
class VlcLinkSpec:
    half_power_angle: float = 60.0
    detector_area: float = 1e-4
    distance: float = 2.0
    irradiance_angle: float = 0.0
    incidence_angle: float = 0.0
    fov: float = 60.0
    filter_coeff: float = 1.0
    refractive_index: float = 1.5
    transmit_power: float = 1.0


@dataclass(frozen=True)
class ExperimentSpec:
    config: SystemConfig
    profile: TrafficProfile | None
    ratio: tuple[float, ...] | None = None
    lambda_total_grid: tuple[float, ...] | None = None
    lambda_1_grid: tuple[float, ...] | None = None
    arrivals: int = 1_000_000
    warmup: float = 0.1
    policy: str = "dynamic"
    bypass_estimator: bool = False
    replications: int = 1
    trace_stride: int = 1000
    events: bool = False
    seed: int = 0
    vlc: VlcLinkSpec = field(default_factory=VlcLinkSpec)


def _get(parser, section, key, conv, default, errors):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return conv(raw)
    except (ValueError, TypeError):
        errors.append(f"[{section}] {key}: cannot parse {raw!r}")
        return default


def _float_list(raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def parse_config(text: str) -> ExperimentSpec:
    """Parse and validate an experiment config; raises ConfigError on any issue."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc

    errors: list[str] = []
    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            errors.append(f"unknown section [{section}]")
            continue
        for key in parser.options(section):
            if key not in _KNOWN_KEYS[section]:
                errors.append(f"[{section}] {key}: unknown key")

    channels = _get(parser, "system", "channels", int, DEFAULT_CHANNELS, errors)
    guard = _get(parser, "system", "guard", int, DEFAULT_GUARD, errors)
    holding = _get(parser, "system", "holding_time", float, None, errors)
    mu = _get(parser, "system", "mu", float, None, errors)
    if mu is not None and holding is not None:
        errors.append("[system] mu and holding_time are mutually exclusive")
    if mu is None:
        mu = 1.0 / (holding if holding else DEFAULT_HOLDING_TIME)
    window = _get(parser, "system", "window", int, DEFAULT_WINDOW, errors)

    rates = _get(parser, "traffic", "rates", _float_list, None, errors)
    ratio = _get(parser, "traffic", "ratio", _float_list, None, errors)
    names_raw = parser.get("traffic", "names", fallback=None)
    names = [n.strip() for n in names_raw.split(",")] if names_raw else None
    if rates is not None and any(r < 0 for r in rates):
        errors.append("[traffic] rates: negative rate")
    if ratio is not None and (any(r < 0 for r in ratio) or sum(ratio) == 0):
        errors.append("[traffic] ratio: entries must be >= 0 with a positive sum")
    if names is not None:
        expect = len(rates) if rates is not None else len(ratio) if ratio else None
        if expect is not None and len(names) != expect:
            errors.append(f"[traffic] names: expected {expect} entries, got {len(names)}")

    lambda_total_grid = _get(parser, "sweep", "lambda_total", _float_list, None, errors)
    lambda_1_grid = _get(parser, "sweep", "lambda_1", _float_list, None, errors)
    for key, grid in (("lambda_total", lambda_total_grid), ("lambda_1", lambda_1_grid)):
        if grid is not None and any(b <= a for a, b in zip(grid, grid[1:])):
            errors.append(f"[sweep] {key}: grid must be strictly increasing")

    arrivals = _get(parser, "simulation", "arrivals", int, 1_000_000, errors)
    warmup = _get(parser, "simulation", "warmup", float, 0.1, errors)
    policy = _get(parser, "simulation", "policy", str, "dynamic", errors).strip()
    bypass = _get(parser, "simulation", "bypass_estimator", _bool, False, errors)
    replications = _get(parser, "simulation", "replications", int, 1, errors)
    trace_stride = _get(parser, "simulation", "trace_stride", int, 1000, errors)
    events = _get(parser, "simulation", "events", _bool, False, errors)
    seed = _get(parser, "simulation", "seed", int, 0, errors)

    if policy not in ("dynamic", "sharing"):
        errors.append(f"[simulation] policy: must be dynamic or sharing, got {policy!r}")
    if replications < 1:
        errors.append("[simulation] replications: must be >= 1")

    vlc_kwargs = {}
    for key in _KNOWN_KEYS["vlc"]:
        val = _get(parser, "vlc", key, float, None, errors)
        if val is not None:
            vlc_kwargs[key] = val

    try:
        config = SystemConfig(n_channels=channels, guard=guard, mu=mu, window_n=window)
    except ValueError as exc:
        errors.append(f"[system] {exc}")
        config = None
    try:
        vlc = VlcLinkSpec(**vlc_kwargs)
    except TypeError as exc:
        errors.append(f"[vlc] {exc}")
        vlc = VlcLinkSpec()

    profile = None
    if rates is not None:
        try:
            profile = TrafficProfile.from_rates(rates, names)
        except ValueError as exc:
            errors.append(f"[traffic] {exc}")

    if errors:
        raise ConfigError("; ".join(errors))
    return ExperimentSpec(
        config=config,
        profile=profile,
        ratio=ratio,
        lambda_total_grid=lambda_total_grid,
        lambda_1_grid=lambda_1_grid,
        arrivals=arrivals,
        warmup=warmup,
        policy=policy,
        bypass_estimator=bypass,
        replications=replications,
        trace_stride=trace_stride,
        events=events,
        seed=seed,
        vlc=vlc,
    )


def render_manifest(spec: ExperimentSpec, mode: str) -> str:
    """Full resolved spec as sorted key=value lines; rerunning from these
    values reproduces every output byte."""
    lines = {
        "mode": mode,
        "system.channels": spec.config.n_channels,
        "system.guard": spec.config.guard,
        "system.mu": repr(spec.config.mu),
        "system.window": spec.config.window_n,
        "traffic.rates": ",".join(repr(r) for r in spec.profile.rates) if spec.profile else "",
        "traffic.ratio": ",".join(repr(r) for r in spec.ratio) if spec.ratio else "",
        "sweep.lambda_total": ",".join(repr(x) for x in spec.lambda_total_grid)
        if spec.lambda_total_grid
        else "",
        "sweep.lambda_1": ",".join(repr(x) for x in spec.lambda_1_grid)
        if spec.lambda_1_grid
        else "",
        "simulation.arrivals": spec.arrivals,
        "simulation.warmup": repr(spec.warmup),
        "simulation.policy": spec.policy,
        "simulation.bypass_estimator": spec.bypass_estimator,
        "simulation.replications": spec.replications,
        "simulation.trace_stride": spec.trace_stride,
        "simulation.events": spec.events,
        "simulation.seed": spec.seed,
    }
    for key in sorted(vars(spec.vlc)):
        lines[f"vlc.{key}"] = repr(getattr(spec.vlc, key))
    return "".join(f"{k}={lines[k]}\n" for k in sorted(lines))
