"""
Boosted trees (AB, GB)
"""

import logging

import numpy as np

from .base import Classifier, as_matrix
from .schemas import ABParams, GBParams, ModelKind
from .trees import Tree

logger = logging.getLogger(__name__)


class AdaBoostClassifier(Classifier):
    """
    Discrete AdaBoost over shallow trees.

    Round t fits a tree on the current weights, takes its weighted error
    e_t and weight alpha_t = lr * 0.5 * ln((1 - e_t) / e_t), then scales
    misclassified rows by exp(alpha_t) and the rest by exp(-alpha_t).
    The score maps the normalized vote sum(alpha_t h_t) / sum(alpha_t)
    from [-1, 1] to [0, 1].
    """

    kind = ModelKind.AB

    def __init__(self, params: ABParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        signs = 2.0 * np.asarray(y, dtype=float) - 1.0
        weight = np.full(len(signs), 1.0 / len(signs))
        rng = np.random.default_rng(self.seed)

        self.estimators_, self.alphas_, self.errors_, self.reweighted_errors_ = [], [], [], []
        for _ in range(self.params.n_estimators):
            tree = Tree(criterion="entropy", max_depth=self.params.max_depth).fit(X, y, sample_weight=weight, rng=rng)
            votes = np.where(tree.predict_value(X) >= 0.5, 1.0, -1.0)
            missed = votes != signs
            error = float(weight[missed].sum() / weight.sum())
            if error >= 0.5:
                logger.debug("AdaBoost stopped: learner no better than chance (error %.4f)", error)
                break

            clipped = max(error, 1e-10)
            alpha = self.params.learning_rate * 0.5 * np.log((1.0 - clipped) / clipped)
            self.estimators_.append(tree)
            self.alphas_.append(float(alpha))
            self.errors_.append(error)
            if error == 0.0:
                break

            weight = weight * np.exp(-alpha * signs * votes)
            weight /= weight.sum()
            self.reweighted_errors_.append(float(weight[missed].sum()))

        self.alphas_ = np.asarray(self.alphas_, dtype=float)
        return self

    def decision_function(self, X) -> np.ndarray:
        X = as_matrix(X)
        total = np.zeros(len(X))
        for alpha, tree in zip(self.alphas_, self.estimators_):
            total += alpha * np.where(tree.predict_value(X) >= 0.5, 1.0, -1.0)
        return total

    def score(self, X):
        norm = float(np.sum(self.alphas_))
        if norm <= 0:
            return np.full(len(as_matrix(X)), 0.5)
        return np.clip(0.5 * (1.0 + self.decision_function(X) / norm), 0.0, 1.0)


class GradientBoostingClassifier(Classifier):
    """
    Squared-error gradient boosting: start from the class-1 rate and
    add regression trees fitted to the residuals, shrunk by the
    learning rate. `loss_history_[t]` is the training MSE after t rounds.
    """

    kind = ModelKind.GB

    def __init__(self, params: GBParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y, dtype=float)
        rng = np.random.default_rng(self.seed)
        self.init_ = float(y.mean())
        current = np.full(len(y), self.init_)
        self.estimators_ = []
        self.loss_history_ = [float(np.mean((y - current) ** 2))]

        for _ in range(self.params.n_estimators):
            tree = Tree(
                criterion="mse",
                max_depth=self.params.max_depth,
                min_samples_leaf=self.params.min_samples_leaf,
            ).fit(X, y - current, rng=rng)
            current = current + self.params.learning_rate * tree.predict_value(X)
            self.estimators_.append(tree)
            self.loss_history_.append(float(np.mean((y - current) ** 2)))
        return self

    def raw_score(self, X) -> np.ndarray:
        X = as_matrix(X)
        total = np.full(len(X), self.init_)
        for tree in self.estimators_:
            total += self.params.learning_rate * tree.predict_value(X)
        return total

    def score(self, X):
        return np.clip(self.raw_score(X), 0.0, 1.0)
