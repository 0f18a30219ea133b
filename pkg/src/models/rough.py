"""
Rough k-means clustering and the RS classifier built on it.

Each object either sits in exactly one cluster's lower approximation
(it surely belongs there) or, when its two nearest centers are closer
than epsilon in distance, only in the upper approximations of every
cluster within epsilon of the nearest one. Centers are recomputed as

    w_lower * mean(lower) + w_upper * mean(upper - lower)

falling back to whichever part is non-empty.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.spatial.distance import cdist

from src.exceptions import ModelError

from .base import Classifier, Standardizer, as_matrix
from .schemas import ModelKind, RSParams

logger = logging.getLogger(__name__)


class RoughClusterModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    centers: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    epsilon: float
    w_lower: float
    w_upper: float
    labels: np.ndarray
    converged: bool
    n_iter: int

    @model_validator(mode="after")
    def validate_memberships(self) -> "RoughClusterModel":
        in_lower = self.lower.sum(axis=1)
        if (in_lower > 1).any():
            raise ValueError("an object belongs to more than one lower approximation")
        if (self.lower & ~self.upper).any():
            raise ValueError("lower approximation is not contained in the upper approximation")
        if (self.upper[in_lower == 0].sum(axis=1) < 2).any():
            raise ValueError("a boundary object belongs to fewer than two upper approximations")
        return self

    @property
    def boundary(self) -> np.ndarray:
        return self.upper & ~self.lower


def initial_centers(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    k-means++ seeding over the distinct points
    """
    distinct = np.unique(X, axis=0)
    if k > len(distinct):
        raise ModelError(f"k={k} exceeds the {len(distinct)} distinct points")
    chosen = [int(rng.integers(len(distinct)))]
    nearest = cdist(distinct, distinct[chosen]).min(axis=1) ** 2
    for _ in range(k - 1):
        chosen.append(int(rng.choice(len(distinct), p=nearest / nearest.sum())))
        nearest = np.minimum(nearest, cdist(distinct, distinct[chosen[-1:]])[:, 0] ** 2)
    return distinct[chosen].astype(float)


def approximations(X: np.ndarray, centers: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Lower and upper membership matrices, shape (objects, clusters)
    """
    distances = cdist(X, centers)
    rows = np.arange(len(X))
    nearest = distances.argmin(axis=1)
    upper = (distances - distances[rows, nearest][:, None]) < epsilon
    upper[rows, nearest] = True
    certain = upper.sum(axis=1) == 1
    lower = np.zeros_like(upper)
    lower[rows[certain], nearest[certain]] = True
    return lower, upper


def _update_centers(X, lower, upper, centers, w_lower, w_upper):
    updated = centers.copy()
    for j in range(len(centers)):
        inner, boundary = lower[:, j], upper[:, j] & ~lower[:, j]
        if inner.any() and boundary.any():
            updated[j] = w_lower * X[inner].mean(axis=0) + w_upper * X[boundary].mean(axis=0)
        elif inner.any():
            updated[j] = X[inner].mean(axis=0)
        elif boundary.any():
            updated[j] = X[boundary].mean(axis=0)
    return updated


def cluster_labels(lower: np.ndarray, upper: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Majority label per cluster from its lower approximation, else from
    its upper approximation, else the overall majority; ties go to 1
    """
    fallback = int(np.mean(y) >= 0.5)
    labels = np.full(lower.shape[1], fallback, dtype=np.int64)
    for j in range(lower.shape[1]):
        for members in (lower[:, j], upper[:, j]):
            if members.any():
                labels[j] = int(np.mean(y[members]) >= 0.5)
                break
    return labels


def nearest_center_label(centers: np.ndarray, labels: np.ndarray, X: np.ndarray) -> np.ndarray:
    # argmin keeps the lower cluster index on ties
    return labels[cdist(as_matrix(X), centers).argmin(axis=1)]


def rough_kmeans_fit(
    X: np.ndarray,
    y: np.ndarray,
    k: int = 2,
    epsilon: float | None = None,
    w_lower: float = 0.7,
    w_upper: float = 0.3,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-6,
) -> RoughClusterModel:
    params = RSParams(n_clusters=k, epsilon=epsilon, w_lower=w_lower, w_upper=w_upper, max_iter=max_iter, tol=tol)
    X = as_matrix(X)
    centers = initial_centers(X, params.n_clusters, np.random.default_rng(seed))
    if epsilon is None:
        gaps = np.diff(np.sort(cdist(X, centers), axis=1)[:, :2], axis=1)
        epsilon = 0.1 * float(gaps.mean())

    converged, n_iter = False, 0
    for n_iter in range(1, params.max_iter + 1):
        lower, upper = approximations(X, centers, epsilon)
        updated = _update_centers(X, lower, upper, centers, params.w_lower, params.w_upper)
        shift = float(np.linalg.norm(updated - centers, axis=1).max())
        centers = updated
        if shift < params.tol:
            converged = True
            break
    if not converged:
        logger.warning("rough k-means stopped at the iteration cap (%d)", params.max_iter)

    lower, upper = approximations(X, centers, epsilon)
    return RoughClusterModel(
        centers=centers,
        lower=lower,
        upper=upper,
        epsilon=epsilon,
        w_lower=params.w_lower,
        w_upper=params.w_upper,
        labels=cluster_labels(lower, upper, np.asarray(y)),
        converged=converged,
        n_iter=n_iter,
    )


def rough_predict(model: RoughClusterModel, X: np.ndarray) -> np.ndarray:
    return nearest_center_label(model.centers, model.labels, X)


def kmeans(X: np.ndarray, k: int, seed: int = 0, max_iter: int = 100, tol: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """
    Lloyd's k-means with the same seeding; returns (centers, assignment)
    """
    X = as_matrix(X)
    centers = initial_centers(X, k, np.random.default_rng(seed))
    for _ in range(max_iter):
        assignment = cdist(X, centers).argmin(axis=1)
        updated = centers.copy()
        for j in range(k):
            members = assignment == j
            if members.any():
                updated[j] = X[members].mean(axis=0)
        shift = float(np.linalg.norm(updated - centers, axis=1).max())
        centers = updated
        if shift < tol:
            break
    return centers, cdist(X, centers).argmin(axis=1)


class RoughSetClassifier(Classifier):
    """
    Rough k-means on standardized features; predicts the label of the
    nearest center. Gives no score.
    """

    kind = ModelKind.RS
    supports_score = False

    def __init__(self, params: RSParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        p = self.params
        self.scaler_ = Standardizer().fit(X)
        model = rough_kmeans_fit(
            self.scaler_.transform(X),
            y,
            k=p.n_clusters,
            epsilon=p.epsilon,
            w_lower=p.w_lower,
            w_upper=p.w_upper,
            seed=self.seed,
            max_iter=p.max_iter,
            tol=p.tol,
        )
        self.centers_ = model.centers
        self.labels_ = model.labels
        self.epsilon_ = model.epsilon
        self.converged_ = model.converged
        return self

    def predict(self, X):
        return nearest_center_label(self.centers_, self.labels_, self.scaler_.transform(as_matrix(X)))
