"""
Common classifier contract
"""

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np

from src.exceptions import CapabilityError

from .schemas import HyperParams, ModelKind


class Classifier(ABC):
    """
    Binary classifier over a dense feature matrix.

    Fitted state lives in attributes ending with an underscore; those
    (plus `params` and `seed`) are everything persistence stores.
    """

    kind: ClassVar[ModelKind]
    supports_score: ClassVar[bool] = True

    def __init__(self, params: HyperParams, seed: int = 0):
        self.params = params
        self.seed = seed
        self.converged_ = True

    @abstractmethod
    def fit(self, X: np.ndarray, y: np.ndarray, categorical: np.ndarray | None = None) -> "Classifier":
        ...

    def score(self, X: np.ndarray) -> np.ndarray:
        """
        Class-1 score in [0, 1] per row
        """
        raise CapabilityError(f"{self.kind.value} gives a binary decision only, no score")

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.score(X) >= 0.5).astype(np.int64)

    def fitted_state(self) -> dict:
        return {name: value for name, value in vars(self).items() if name.endswith("_")}


class Standardizer:
    """
    Column z-scoring fitted on training rows; zero spread maps to scale 1
    """

    def __init__(self):
        self.mean_ = None
        self.scale_ = None

    def fit(self, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        self.scale_ = scale
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean_) / self.scale_


def as_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X.reshape(1, -1) if X.ndim == 1 else X


def validation_recall(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """
    tp / (tp + fn); 0 when there are no positives to find
    """
    positives = y_true == 1
    if not positives.any():
        return 0.0
    return float(np.sum(y_pred[positives] == 1)) / float(positives.sum())
