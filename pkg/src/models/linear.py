"""
Linear learners (LR, SVM)
"""

import logging

import numpy as np
from scipy.special import expit

from .base import Classifier, Standardizer, as_matrix
from .schemas import LRParams, ModelKind, SVMParams

logger = logging.getLogger(__name__)


class LogisticRegression(Classifier):
    """
    Batch gradient descent on the L2-penalized log loss over
    standardized features
    """

    kind = ModelKind.LR

    def __init__(self, params: LRParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y, dtype=float)
        p = self.params
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        self.coef_ = np.zeros(Z.shape[1])
        self.intercept_ = 0.0
        self.converged_ = False
        self.n_iter_ = 0

        for self.n_iter_ in range(1, p.max_iter + 1):
            residual = expit(Z @ self.coef_ + self.intercept_) - y
            grad_w = Z.T @ residual / len(y) + p.l2 * self.coef_
            grad_b = float(residual.mean())
            self.coef_ = self.coef_ - p.learning_rate * grad_w
            self.intercept_ -= p.learning_rate * grad_b
            if max(np.abs(grad_w).max(initial=0.0), abs(grad_b)) < p.tol:
                self.converged_ = True
                break
        return self

    def decision_function(self, X) -> np.ndarray:
        return self.scaler_.transform(as_matrix(X)) @ self.coef_ + self.intercept_

    def score(self, X):
        return expit(self.decision_function(X))


class LinearSVM(Classifier):
    """
    Soft-margin SVM trained by full-batch subgradient descent on

        l2/2 * |w|^2 + mean(max(0, 1 - y (w.x + b)))

    with y in {-1, +1}. Training stops once no row violates the margin
    or the objective stops moving. The "rbf" kernel maps inputs through
    random Fourier features first.
    """

    kind = ModelKind.SVM

    def __init__(self, params: SVMParams, seed: int = 0):
        super().__init__(params, seed)

    def _features(self, X) -> np.ndarray:
        Z = self.scaler_.transform(as_matrix(X))
        if self.params.kernel == "linear":
            return Z
        return np.sqrt(2.0 / len(self.phases_)) * np.cos(Z @ self.projection_ + self.phases_)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        p = self.params
        signs = 2.0 * np.asarray(y, dtype=float) - 1.0
        self.scaler_ = Standardizer().fit(X)
        if p.kernel == "rbf":
            rng = np.random.default_rng(self.seed)
            self.projection_ = rng.normal(0.0, np.sqrt(2.0 * p.gamma), size=(X.shape[1], p.n_components))
            self.phases_ = rng.uniform(0.0, 2.0 * np.pi, size=p.n_components)
        Z = self._features(X)

        self.coef_ = np.zeros(Z.shape[1])
        self.intercept_ = 0.0
        self.converged_ = False
        self.n_iter_ = 0
        previous = np.inf
        n = len(signs)

        for self.n_iter_ in range(1, p.max_iter + 1):
            margins = signs * (Z @ self.coef_ + self.intercept_)
            violated = margins < 1.0
            objective = 0.5 * p.l2 * float(self.coef_ @ self.coef_) + float(np.maximum(0.0, 1.0 - margins).mean())
            if not violated.any() or abs(previous - objective) < p.tol * max(1.0, objective):
                self.converged_ = True
                break
            previous = objective
            grad_w = p.l2 * self.coef_ - (signs[violated, None] * Z[violated]).sum(axis=0) / n
            grad_b = -float(signs[violated].sum()) / n
            self.coef_ = self.coef_ - p.learning_rate * grad_w
            self.intercept_ -= p.learning_rate * grad_b
        return self

    def decision_function(self, X) -> np.ndarray:
        return self._features(X) @ self.coef_ + self.intercept_

    def score(self, X):
        return expit(self.decision_function(X))
