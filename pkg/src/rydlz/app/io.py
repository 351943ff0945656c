"""JSON scenario configs and CSV/JSON result files."""
from __future__ import annotations

import csv
import dataclasses
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .. import __version__, model
from ..errors import ConfigError, DomainError
from .scenarios import ScenarioConfig

SIG_DIGITS = 12

_TOP_KEYS = {"scenario", "schedule", "dissipation", "dt", "output_stride", "hold_time", "grid",
             "discord_every"}
_SCHEDULE_KEYS = {"omega", "v", "delta_start", "delta_end", "v0"}
_DISSIPATION_KEYS = {"gamma"}
_GRID_KEYS = {"v0", "v"}

DEFAULT_CONFIGS = {
    "single": "fig2_single.json",
    "pair-coherent": "fig4_pair.json",
    "pair-dissipative": "fig6_dissipative.json",
    "sweep-map": "fig5_map.json",
    "invariants-check": "invariants.json",
}


def _check_keys(block: dict, allowed: set, where: str):
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a validated config; unknown keys anywhere are errors."""
    _check_keys(data, _TOP_KEYS, "config")
    if "scenario" not in data:
        raise ConfigError("config needs a 'scenario'")
    sched = data.get("schedule", {})
    _check_keys(sched, _SCHEDULE_KEYS, "schedule")
    diss = data.get("dissipation")
    grid = data.get("grid")
    try:
        if "v" not in sched:
            raise ConfigError("schedule needs a sweep rate 'v'")
        schedule = model.SweepSchedule(**sched)
        dissipation = None
        if diss is not None:
            _check_keys(diss, _DISSIPATION_KEYS, "dissipation")
            dissipation = model.DissipationSpec(**diss)
        if grid is not None:
            _check_keys(grid, _GRID_KEYS, "grid")
        rest = {k: data[k] for k in ("dt", "output_stride", "hold_time", "discord_every") if k in data}
        return ScenarioConfig(scenario=data["scenario"], schedule=schedule, dissipation=dissipation,
                              grid=grid, **rest)
    except (DomainError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out = {
        "scenario": cfg.scenario,
        "schedule": dataclasses.asdict(cfg.schedule),
        "dt": cfg.dt,
        "output_stride": cfg.output_stride,
        "hold_time": cfg.hold_time,
        "discord_every": cfg.discord_every,
    }
    if cfg.dissipation is not None:
        out["dissipation"] = dataclasses.asdict(cfg.dissipation)
    if cfg.grid is not None:
        out["grid"] = {k: list(map(float, v)) for k, v in cfg.grid.items()}
    return out


def load_config(path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data)


def default_config(scenario: str) -> dict:
    if scenario not in DEFAULT_CONFIGS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    text = resources.files("rydlz.app.configs").joinpath(DEFAULT_CONFIGS[scenario]).read_text()
    return json.loads(text)


def _fmt(x) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def write_csv(path, columns: dict):
    """Write equally long 1-d series as columns with a header row."""
    names = list(columns)
    data = [np.asarray(columns[n]) for n in names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*data):
            w.writerow([x if isinstance(x, str) else _fmt(x) for x in row])


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return float(_fmt(x))
    return obj


def write_summary(path, cfg: ScenarioConfig, **sections):
    doc = {"code_version": __version__, "config": config_to_dict(cfg)}
    doc.update(sections)
    Path(path).write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
