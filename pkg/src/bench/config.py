"""
Experiment config loading: YAML file, then --set overrides, then flags
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from src.environs import ORIGINATION_FILE_TEMPLATE, PERFORMANCE_FILE_TEMPLATE
from src.exceptions import ConfigError

from .schemas import ExperimentConfig


def _apply_override(document: dict[str, Any], assignment: str) -> None:
    """
    Sets `dotted.key=value`; the value is read as a YAML scalar or list
    """
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    dotted, raw = assignment.split("=", 1)
    keys = [key for key in dotted.strip().split(".") if key]
    if not keys:
        raise ConfigError(f"override {assignment!r} names no key")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as error:
        raise ConfigError(f"override {assignment!r}: {error}") from error

    node = document
    for key in keys[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigError(f"override {assignment!r}: {key} is not a mapping")
        node = child
    node[keys[-1]] = value


def load_config(
    path: Path | None = None,
    overrides: list[str] | None = None,
    **flags: Any,
) -> ExperimentConfig:
    """
    Builds the experiment config. Flags that are None are ignored.
    """
    document: dict[str, Any] = {}
    if path is not None:
        try:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except OSError as error:
            raise ConfigError(f"cannot read config file {path}: {error}") from error
        except yaml.YAMLError as error:
            raise ConfigError(f"config file {path} is not valid YAML: {error}") from error
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"config file {path} must hold a mapping")
        document = loaded or {}

    for assignment in overrides or []:
        _apply_override(document, assignment)
    document.update({key: value for key, value in flags.items() if value is not None})

    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as error:
        raise ConfigError(f"invalid experiment config:\n{error}") from error


def vintage_paths(data_dir: Path, year: int) -> tuple[Path, Path]:
    return (
        Path(data_dir) / ORIGINATION_FILE_TEMPLATE.format(year=year),
        Path(data_dir) / PERFORMANCE_FILE_TEMPLATE.format(year=year),
    )


def check_files(config: ExperimentConfig) -> None:
    """
    Fails fast when any vintage file is missing
    """
    for year in config.vintages:
        for path in vintage_paths(config.data_dir, year):
            if not path.is_file():
                raise ConfigError(f"missing vintage file: {path}")


def config_hash(config: ExperimentConfig) -> str:
    """
    sha256 of the canonical JSON form of the config
    """
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
