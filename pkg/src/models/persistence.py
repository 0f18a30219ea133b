"""
Model save / load as a versioned JSON document:

    {
      "format": "loanbench-model",
      "version": 1,
      "spec": {"kind": "RF", "hyper_params": {...}, "seed": 0},
      "feature_names": [...],
      "fit_seconds": 0.12,
      "state": {"__estimator__": "RandomForestClassifier", "state": {...}}
    }

Arrays are stored as {"__ndarray__": nested list, "dtype": ..., "shape": [...]},
hyper-parameters as {"__params__": class name, "data": {...}} and nested
estimators (trees, scalers) as {"__estimator__": class name, "state": {...}}.
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from src.exceptions import ModelError

from .base import Standardizer
from .schemas import PARAMS, ClassifierSpec, HyperParams
from .services import REGISTRY, TrainedModel
from .trees import Tree

FORMAT = "loanbench-model"
VERSION = 1

ESTIMATORS = {cls.__name__: cls for cls in (Tree, Standardizer, *REGISTRY.values())}
HYPER_PARAMS = {cls.__name__: cls for cls in PARAMS.values()}


def _encode(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return {"__ndarray__": value.tolist(), "dtype": str(value.dtype), "shape": list(value.shape)}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, HyperParams):
        return {"__params__": type(value).__name__, "data": value.model_dump()}
    if type(value).__name__ in ESTIMATORS and hasattr(value, "__dict__"):
        return {"__estimator__": type(value).__name__, "state": {k: _encode(v) for k, v in vars(value).items()}}
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise ModelError(f"cannot serialize {type(value).__name__}")


def _decode(value: Any) -> Any:
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if not isinstance(value, dict):
        return value
    if "__ndarray__" in value:
        return np.asarray(value["__ndarray__"], dtype=value["dtype"]).reshape(value["shape"])
    if "__params__" in value:
        return HYPER_PARAMS[value["__params__"]].model_validate(value["data"])
    if "__estimator__" in value:
        cls = ESTIMATORS.get(value["__estimator__"])
        if cls is None:
            raise ModelError(f"unknown estimator class {value['__estimator__']}")
        estimator = cls.__new__(cls)
        for name, state in value["state"].items():
            setattr(estimator, name, _decode(state))
        return estimator
    return {k: _decode(v) for k, v in value.items()}


def save_model(model: TrainedModel, path: Path) -> Path:
    document = {
        "format": FORMAT,
        "version": VERSION,
        "spec": model.spec.model_dump(mode="json"),
        "feature_names": list(model.feature_names),
        "fit_seconds": model.fit_seconds,
        "state": _encode(model.estimator),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def load_model(path: Path) -> TrainedModel:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise ModelError(f"cannot read model file {path}: {error}") from error
    if document.get("format") != FORMAT or document.get("version") != VERSION:
        raise ModelError(f"{path} is not a {FORMAT} v{VERSION} document")
    return TrainedModel(
        spec=ClassifierSpec.model_validate(document["spec"]),
        feature_names=tuple(document["feature_names"]),
        estimator=_decode(document["state"]),
        fit_seconds=document.get("fit_seconds", 0.0),
    )
