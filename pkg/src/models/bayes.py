"""
Generative learners (NB, MDA)
"""

import numpy as np
from scipy.special import expit
from scipy.stats import multivariate_normal

from .base import Classifier, Standardizer, as_matrix
from .schemas import MDAParams, ModelKind, NBParams


class GaussianNaiveBayes(Classifier):
    """
    Naive Bayes with Gaussian likelihoods on numeric columns and
    add-alpha smoothed frequencies on categorical codes
    """

    kind = ModelKind.NB

    def __init__(self, params: NBParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y)
        mask = np.zeros(X.shape[1], dtype=bool) if categorical is None else np.asarray(categorical, dtype=bool)
        self.categorical_ = mask
        counts = np.array([np.sum(y == 0), np.sum(y == 1)], dtype=float)
        self.log_priors_ = np.log(counts / counts.sum())

        numeric = X[:, ~mask]
        epsilon = self.params.var_smoothing * (numeric.var(axis=0).max() if numeric.shape[1] else 0.0)
        self.means_ = np.vstack([numeric[y == c].mean(axis=0) for c in (0, 1)])
        self.variances_ = np.vstack([numeric[y == c].var(axis=0) for c in (0, 1)]) + epsilon
        # a column constant within a class would otherwise give zero variance
        self.variances_[self.variances_ <= 0] = 1e-9

        alpha = self.params.alpha
        self.category_log_probs_ = []
        self.unseen_log_probs_ = []
        for column in X[:, mask].T.astype(np.int64):
            n_codes = int(column.max()) + 1
            table = np.vstack([np.bincount(column[y == c], minlength=n_codes) for c in (0, 1)]).astype(float)
            denominator = counts[:, None] + alpha * n_codes
            self.category_log_probs_.append(np.log((table + alpha) / denominator))
            self.unseen_log_probs_.append(np.log(alpha / denominator[:, 0]))
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        """
        log P(class) + log P(x | class), shape (rows, 2)
        """
        X = as_matrix(X)
        numeric = X[:, ~self.categorical_]
        jll = np.tile(self.log_priors_, (len(X), 1))
        for c in (0, 1):
            var = self.variances_[c]
            jll[:, c] += np.sum(-0.5 * np.log(2.0 * np.pi * var) - (numeric - self.means_[c]) ** 2 / (2.0 * var), axis=1)
        for table, unseen, column in zip(
            self.category_log_probs_, self.unseen_log_probs_, X[:, self.categorical_].T.astype(np.int64)
        ):
            known = (column >= 0) & (column < table.shape[1])
            for c in (0, 1):
                jll[:, c] += np.where(known, table[c, np.clip(column, 0, table.shape[1] - 1)], unseen[c])
        return jll

    def score(self, X):
        jll = self.joint_log_likelihood(X)
        return expit(jll[:, 1] - jll[:, 0])


class QuadraticDiscriminant(Classifier):
    """
    Per-class Gaussian with its own covariance, regularized by reg * I,
    on standardized features
    """

    kind = ModelKind.MDA

    def __init__(self, params: MDAParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        n_features = Z.shape[1]
        counts = np.array([np.sum(y == 0), np.sum(y == 1)], dtype=float)
        self.log_priors_ = np.log(counts / counts.sum())
        self.means_ = np.vstack([Z[y == c].mean(axis=0) for c in (0, 1)])
        self.covariances_ = np.stack([
            np.atleast_2d(np.cov(Z[y == c], rowvar=False, bias=True)) + self.params.reg * np.eye(n_features)
            for c in (0, 1)
        ])
        return self

    def log_posterior_ratio(self, X) -> np.ndarray:
        Z = self.scaler_.transform(as_matrix(X))
        log_density = [
            np.atleast_1d(multivariate_normal.logpdf(Z, mean=self.means_[c], cov=self.covariances_[c]))
            for c in (0, 1)
        ]
        return (log_density[1] + self.log_priors_[1]) - (log_density[0] + self.log_priors_[0])

    def score(self, X):
        return expit(self.log_posterior_ratio(X))
