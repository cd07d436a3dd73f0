"""JSON run-configuration parsing and validation.

A config has blocks: ``model``, ``dissipator``, ``task``, ``output`` and a
top-level ``seed``. Unknown keys anywhere are rejected; ``eta`` and
``eta_ratio`` are mutually exclusive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

__all__ = ["RunConfig", "load_config", "validate_config"]

MODEL_KEYS = {
    "three_mode": {"kind", "j1", "j2"},
    "ssh": {"kind", "n", "alpha", "j", "sigma", "convention"},
    "hofstadter": {"kind", "nx", "ny", "geometry"},
    "dimer_bs_pa": {"kind", "j1", "j2", "kappa"},
}

DISSIPATOR_KEYS = {"site0", "site1", "eta", "eta_ratio", "kappa", "mirrored", "comparator"}

TASK_KEYS = {
    "stability": {"j_ratios", "etas", "kappa", "variants"},
    "steady": {"correlations", "spiral", "line_cuts"},
    "entanglement": {"kind", "angles", "sizes", "site0_rule", "site1_rule", "regions"},
    "disorder": {"alphas", "sigmas", "realizations"},
    "spectrum": {"g", "kappa_ancilla", "gamma_wg", "probe_site", "omega_count", "omega_span", "eta_sweep"},
    "gap": {"sizes", "mirrored_comparison"},
    "ep-scan": {"etas", "uncorrelated"},
}

OUTPUT_KEYS = {"directory", "formats"}
TOP_KEYS = {"model", "dissipator", "task", "output", "seed"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: dict
    dissipator: dict = field(default_factory=dict)
    task: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    seed: int = 0
    raw: dict = field(default_factory=dict)


def _require_keys(block: dict, allowed: set, where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _check_number(block: dict, key: str, where: str, required: bool = True) -> None:
    if key not in block:
        if required:
            raise ConfigError(f"missing key {key!r} in {where}")
        return
    if isinstance(block[key], bool) or not isinstance(block[key], (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")


def validate_config(raw: dict, command: str) -> RunConfig:
    """Validate a parsed config dict for ``command``; raises ConfigError."""
    if command not in TASK_KEYS:
        raise ConfigError(f"unknown command {command!r}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _require_keys(raw, TOP_KEYS, "config")
    model = raw.get("model")
    if not isinstance(model, dict) or "kind" not in model:
        raise ConfigError("config.model must be an object with a 'kind'")
    kind = model["kind"]
    if kind not in MODEL_KEYS:
        raise ConfigError(f"unknown model kind {kind!r}")
    _require_keys(model, MODEL_KEYS[kind], "config.model")
    if kind == "three_mode":
        _check_number(model, "j1", "model")
        _check_number(model, "j2", "model")
    elif kind == "ssh":
        _check_number(model, "n", "model")
        _check_number(model, "alpha", "model")
    elif kind == "hofstadter":
        _check_number(model, "nx", "model")
        _check_number(model, "ny", "model")
        if model.get("geometry", "open") not in ("open", "cylinder"):
            raise ConfigError("model.geometry must be 'open' or 'cylinder'")
    elif kind == "dimer_bs_pa":
        for k in ("j1", "j2", "kappa"):
            _check_number(model, k, "model")

    dissipator = raw.get("dissipator", {})
    if not isinstance(dissipator, dict):
        raise ConfigError("config.dissipator must be an object")
    _require_keys(dissipator, DISSIPATOR_KEYS, "config.dissipator")
    if "eta" in dissipator and "eta_ratio" in dissipator:
        raise ConfigError("dissipator.eta and dissipator.eta_ratio are mutually exclusive")

    task = raw.get("task", {})
    if not isinstance(task, dict):
        raise ConfigError("config.task must be an object")
    _require_keys(task, TASK_KEYS[command], f"config.task ({command})")

    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("config.output must be an object")
    _require_keys(output, OUTPUT_KEYS, "config.output")

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("config.seed must be an integer")

    return RunConfig(
        command=command,
        model=model,
        dissipator=dissipator,
        task=task,
        output=output,
        seed=seed,
        raw=raw,
    )


def load_config(path, command: str) -> RunConfig:
    """Read and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return validate_config(raw, command)
