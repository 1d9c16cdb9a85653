"""Assemble a RunConfig from subcommand defaults, a key=value file and command-line flags."""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from collisim.errors import ConfigError
from collisim.models import RunConfig, Subcommand

# Zero-flag runs use the reference parameter sets.
SUBCOMMAND_DEFAULTS: dict[Subcommand, dict[str, Any]] = {
    "single-step": {"eps1": 0.01, "eps2": 0.02, "a": 0.05, "theta": "pi/2", "steps": 10},
    "two-step": {"eps1": 0.01, "eps2": 0.02, "a": 0.05, "theta": "pi/2", "phi": 0.0},
    "markov-scan": {"eps1": 0.01, "eps2": 0.02, "a": 0.05, "Q_grid": "-1:1:201"},
    "delta-e": {
        "eps1": 0.01,
        "eps2": 0.01,
        "a": 1.0,
        "theta_grid": "0:pi:9",
        "phi": 0.0,
        "Q_grid": "-1:1:21",
    },
    "ghz": {"probs": "0.9,0.05,0.05", "a": 0.05, "theta": "pi/2", "steps": 4},
    "validate": {"samples": 50},
}

CONREF_KEYS = frozenset(RunConfig.model_fields) - {"subcommand"}

# Scalar keys whose presence in a higher layer hides a grid from a lower one.
_GRID_OF = {"a": "a_grid", "Q": "Q_grid", "q": "Q_grid", "theta": "theta_grid", "phi": "phi_grid"}


def normalize_key(key: str) -> str:
    """``Q-grid`` -> ``Q_grid``; ``eps-y`` -> ``eps_y``. Case is kept (q and Q differ)."""
    return key.strip().lstrip("-").replace("-", "_")


def read_config_file(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from None

    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = normalize_key(key)
        if key not in CONREF_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        values[key] = value
    return values


def _overlay(base: dict[str, Any], layer: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    if "q" in layer or "Q" in layer:
        merged.pop("q", None)
        merged.pop("Q", None)
    for key in layer:
        grid = _GRID_OF.get(key)
        if grid is not None and grid not in layer:
            merged.pop(grid, None)
    merged.update(layer)
    return merged


def build_config(
    subcommand: Subcommand,
    config_file: Path | None = None,
    flags: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Defaults, then file values, then flags; ``None`` flags count as not given."""
    values = dict(SUBCOMMAND_DEFAULTS[subcommand])
    if config_file is not None:
        values = _overlay(values, read_config_file(config_file))
    if flags:
        given = {normalize_key(k): v for k, v in flags.items() if v is not None}
        unknown = sorted(set(given) - CONREF_KEYS)
        if unknown:
            raise ConfigError(f"Unknown option(s): {', '.join(unknown)}")
        values = _overlay(values, given)

    try:
        return RunConfig(subcommand=subcommand, **values)
    except ValidationError as e:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(messages) from None
