"""
SMOTE oversampling of the minority class
"""

import logging

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from src.exceptions import ResamplingError
from src.loan_data import Dataset

from .schemas import NeighborIndex, ResampleConfig

logger = logging.getLogger(__name__)


def minority_label(y: np.ndarray) -> int:
    """
    The less frequent class; 1 on ties
    """
    positives = int(np.sum(y == 1))
    return 1 if positives <= len(y) - positives else 0


def standardized(data: Dataset) -> np.ndarray:
    """
    Copy of X with numeric columns z-scored over all rows.
    Categorical codes and constant columns are only centered/left as is.
    """
    Z = np.array(data.X, dtype=float)
    numeric = ~data.categorical_mask
    if not numeric.any() or not len(Z):
        return Z
    mean = Z[:, numeric].mean(axis=0)
    std = Z[:, numeric].std(axis=0)
    std[std == 0] = 1.0
    Z[:, numeric] = (Z[:, numeric] - mean) / std
    return Z


def knn_minority(data: Dataset, k: int, standardize: bool = True) -> NeighborIndex:
    """
    Exact k nearest neighbors among minority rows, Euclidean distance.
    With m minority rows and m - 1 < k the lists hold m - 1 neighbors.
    """
    if k < 1:
        raise ResamplingError("k must be at least 1")
    label = minority_label(data.y)
    rows = np.flatnonzero(data.y == label)
    if len(rows) < 2:
        raise ResamplingError(f"SMOTE needs at least 2 minority rows, found {len(rows)}")

    points = (standardized(data) if standardize else np.asarray(data.X, dtype=float))[rows]
    distances = cdist(points, points)
    np.fill_diagonal(distances, np.inf)
    width = min(k, len(rows) - 1)
    order = np.argsort(distances, axis=1, kind="stable")[:, :width]

    return NeighborIndex(
        minority_label=label,
        minority_rows=rows,
        neighbors=order,
        distances=np.take_along_axis(distances, order, axis=1),
    )


def smote(data: Dataset, cfg: ResampleConfig) -> Dataset:
    """
    Appends synthetic minority rows until minority/majority reaches
    `cfg.target_ratio`. Sources are visited round-robin; each synthesis
    draws one of the source's neighbors and u ~ U[0, 1):

        synthetic = x + u * (neighbor - x)

    Categorical columns are rounded to the nearest code. The returned
    dataset carries provenance (row, source_row, neighbor_row, u).
    """
    if data.holdout:
        raise ResamplingError("refusing to resample a holdout dataset")

    label = minority_label(data.y)
    n_minority = int(np.sum(data.y == label))
    n_majority = data.n_rows - n_minority
    target = int(np.floor(cfg.target_ratio * n_majority + 0.5))
    n_new = target - n_minority
    if n_new <= 0:
        logger.info("Minority ratio already at or above %.3f; nothing to oversample", cfg.target_ratio)
        return data

    index = knn_minority(data, cfg.k, standardize=cfg.standardize)
    rng = np.random.default_rng(cfg.seed)

    positions = np.arange(n_new) % len(index.minority_rows)
    picks = rng.integers(0, index.k, size=n_new)
    u = rng.random(n_new)

    source_rows = index.minority_rows[positions]
    neighbor_rows = index.minority_rows[index.neighbors[positions, picks]]
    base = np.asarray(data.X[source_rows], dtype=float)
    synthetic = base + u[:, None] * (data.X[neighbor_rows] - base)
    categorical = data.categorical_mask
    if categorical.any():
        synthetic[:, categorical] = np.rint(synthetic[:, categorical])

    provenance = pd.DataFrame({
        "row": np.arange(data.n_rows, data.n_rows + n_new),
        "source_row": source_rows,
        "neighbor_row": neighbor_rows,
        "u": u,
    })
    logger.info("SMOTE: %d minority, %d majority, %d synthetic rows", n_minority, n_majority, n_new)

    return Dataset(
        feature_names=data.feature_names,
        X=np.vstack([data.X, synthetic]),
        y=np.concatenate([data.y, np.full(n_new, label, dtype=data.y.dtype)]),
        groups=np.concatenate([data.groups, np.array([f"synthetic-{i}" for i in range(n_new)], dtype=object)]),
        categorical=data.categorical,
        vintage_year=data.vintage_year,
        regime=data.regime,
        provenance=provenance,
    )
