"""
Decision trees and tree ensembles (DT, RF, ET)
"""

import math

import numpy as np
from scipy.special import entr

from .base import Classifier, as_matrix
from .schemas import DTParams, ETParams, ModelKind, RFParams

LEAF = -1


def _impurity(criterion: str, w: np.ndarray, wy: np.ndarray, wy2: np.ndarray) -> np.ndarray:
    """
    Node impurity from weighted sums of 1, y and y^2
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = wy / w
        if criterion == "entropy":
            return (entr(mean) + entr(1.0 - mean)) / math.log(2.0)
        if criterion == "gini":
            return 2.0 * mean * (1.0 - mean)
        return np.maximum(wy2 / w - mean * mean, 0.0)


def resolve_max_features(max_features, n_features: int) -> int:
    if max_features is None or max_features == "all":
        return n_features
    if max_features == "sqrt":
        return max(1, math.ceil(math.sqrt(n_features)))
    return max(1, min(int(max_features), n_features))


class Tree:
    """
    Binary tree on numeric thresholds (`x <= threshold` goes left).

    Classification criteria (entropy, gini) expect y in {0, 1} and store
    the weighted class-1 fraction in each leaf; "mse" fits any real
    target and stores the weighted mean.
    """

    def __init__(
        self,
        criterion: str = "entropy",
        max_depth: int | None = None,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        max_features: int | None = None,
        splitter: str = "best",
    ):
        self.criterion = criterion
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.splitter = splitter

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        sample_weight: np.ndarray | None = None,
        rng: np.random.Generator | None = None,
    ) -> "Tree":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        weight = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        rng = rng or np.random.default_rng(0)
        n_features = X.shape[1]
        total_weight = weight.sum()

        feature, threshold, left, right, value = [LEAF], [0.0], [LEAF], [LEAF], [0.0]
        importances = np.zeros(n_features)
        stack = [(np.arange(len(y)), 0, 0)]

        while stack:
            rows, depth, node = stack.pop()
            w, yn = weight[rows], y[rows]
            w_sum = w.sum()
            value[node] = float((w * yn).sum() / w_sum) if w_sum > 0 else 0.0

            if (
                (self.max_depth is not None and depth >= self.max_depth)
                or len(rows) < self.min_samples_split
                or len(rows) < 2 * self.min_samples_leaf
                or w_sum <= 0
            ):
                continue
            parent = float(_impurity(self.criterion, w_sum, (w * yn).sum(), (w * yn * yn).sum()))
            if parent <= 1e-12:
                continue

            split = self._best_split(X[rows], yn, w, parent, n_features, rng)
            if split is None:
                continue
            f, t, gain = split
            importances[f] += w_sum / total_weight * gain

            goes_left = X[rows, f] <= t
            left_id, right_id = len(feature), len(feature) + 1
            feature[node], threshold[node], left[node], right[node] = f, t, left_id, right_id
            for _ in range(2):
                feature.append(LEAF)
                threshold.append(0.0)
                left.append(LEAF)
                right.append(LEAF)
                value.append(0.0)
            stack.append((rows[~goes_left], depth + 1, right_id))
            stack.append((rows[goes_left], depth + 1, left_id))

        self.feature_ = np.asarray(feature, dtype=np.int64)
        self.threshold_ = np.asarray(threshold, dtype=float)
        self.left_ = np.asarray(left, dtype=np.int64)
        self.right_ = np.asarray(right, dtype=np.int64)
        self.value_ = np.asarray(value, dtype=float)
        self.importances_ = importances
        return self

    def _best_split(self, X, y, w, parent, n_features, rng):
        if self.max_features is None or self.max_features >= n_features:
            order = np.arange(n_features)
            budget = n_features
        else:
            order = rng.permutation(n_features)
            budget = self.max_features

        best, best_gain, evaluated = None, -np.inf, 0
        for f in order:
            x = X[:, f]
            lo, hi = x.min(), x.max()
            if lo == hi:
                continue
            evaluated += 1
            if self.splitter == "random":
                candidate = self._random_split(x, y, w, parent, lo, hi, rng)
            else:
                candidate = self._sorted_split(x, y, w, parent)
            if candidate is not None and candidate[1] > best_gain:
                best_gain = candidate[1]
                best = (int(f), candidate[0], candidate[1])
            if evaluated >= budget:
                break
        return best

    def _sorted_split(self, x, y, w, parent):
        order = np.argsort(x, kind="stable")
        xs, ys, ws = x[order], y[order], w[order]
        cw, cwy, cwy2 = np.cumsum(ws), np.cumsum(ws * ys), np.cumsum(ws * ys * ys)
        lw, lwy, lwy2 = cw[:-1], cwy[:-1], cwy2[:-1]
        rw, rwy, rwy2 = cw[-1] - lw, cwy[-1] - lwy, cwy2[-1] - lwy2
        n = len(xs)
        left_count = np.arange(1, n)
        valid = (
            (xs[1:] > xs[:-1])
            & (left_count >= self.min_samples_leaf)
            & (n - left_count >= self.min_samples_leaf)
            & (lw > 0)
            & (rw > 0)
        )
        if not valid.any():
            return None
        child = (lw * _impurity(self.criterion, lw, lwy, lwy2) + rw * _impurity(self.criterion, rw, rwy, rwy2)) / cw[-1]
        gain = np.where(valid, parent - child, -np.inf)
        i = int(np.argmax(gain))
        t = xs[i] + (xs[i + 1] - xs[i]) / 2.0
        if t >= xs[i + 1]:
            t = xs[i]
        return float(t), float(gain[i])

    def _random_split(self, x, y, w, parent, lo, hi, rng):
        t = rng.uniform(lo, hi)
        if t >= hi:
            t = lo
        goes_left = x <= t
        n_left = int(goes_left.sum())
        if n_left < self.min_samples_leaf or len(x) - n_left < self.min_samples_leaf:
            return None
        lw, rw = w[goes_left].sum(), w[~goes_left].sum()
        if lw <= 0 or rw <= 0:
            return None
        wy, wy2 = w * y, w * y * y
        child = (
            lw * _impurity(self.criterion, lw, wy[goes_left].sum(), wy2[goes_left].sum())
            + rw * _impurity(self.criterion, rw, wy[~goes_left].sum(), wy2[~goes_left].sum())
        ) / (lw + rw)
        return float(t), float(parent - child)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """
        Leaf index reached by each row
        """
        X = as_matrix(X)
        node = np.zeros(len(X), dtype=np.int64)
        active = np.flatnonzero(self.feature_[node] != LEAF)
        while len(active):
            current = node[active]
            goes_left = X[active, self.feature_[current]] <= self.threshold_[current]
            node[active] = np.where(goes_left, self.left_[current], self.right_[current])
            active = active[self.feature_[node[active]] != LEAF]
        return node

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value_[self.apply(X)]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature_ == LEAF))


def normalized(importances: np.ndarray) -> np.ndarray:
    total = importances.sum()
    return importances / total if total > 0 else np.zeros_like(importances)


class DecisionTreeClassifier(Classifier):
    """
    Single unpruned tree, entropy splits by default
    """

    kind = ModelKind.DT

    def __init__(self, params: DTParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        p = self.params
        self.tree_ = Tree(
            criterion=p.criterion,
            max_depth=p.max_depth,
            min_samples_split=p.min_samples_split,
            min_samples_leaf=p.min_samples_leaf,
            max_features=resolve_max_features(p.max_features, X.shape[1]),
        ).fit(X, y, rng=np.random.default_rng(self.seed))
        return self

    def score(self, X):
        return self.tree_.predict_value(X)

    @property
    def feature_importances(self) -> np.ndarray:
        return normalized(self.tree_.importances_)


class RandomForestClassifier(Classifier):
    """
    Bagged trees with a random feature subset per split.
    The score is the fraction of trees voting class 1.
    """

    kind = ModelKind.RF
    splitter = "best"

    def __init__(self, params: RFParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y)
        p = self.params
        n_rows = len(y)
        max_features = resolve_max_features(p.max_features, X.shape[1])
        self.trees_ = []
        for child in np.random.SeedSequence(self.seed).spawn(p.n_estimators):
            rng = np.random.default_rng(child)
            rows = rng.integers(0, n_rows, n_rows) if p.bootstrap else np.arange(n_rows)
            tree = Tree(
                criterion=p.criterion,
                max_depth=p.max_depth,
                min_samples_split=p.min_samples_split,
                min_samples_leaf=p.min_samples_leaf,
                max_features=max_features,
                splitter=self.splitter,
            )
            self.trees_.append(tree.fit(X[rows], y[rows], rng=rng))
        return self

    def votes(self, X) -> np.ndarray:
        """
        Hard class-1 vote of every tree, shape (trees, rows)
        """
        return np.vstack([tree.predict_value(X) >= 0.5 for tree in self.trees_]).astype(float)

    def score(self, X):
        return self.votes(X).mean(axis=0)

    @property
    def feature_importances(self) -> np.ndarray:
        """
        Mean of per-tree normalized impurity decrease, renormalized
        """
        per_tree = np.vstack([normalized(tree.importances_) for tree in self.trees_])
        return normalized(per_tree.mean(axis=0))


class ExtraTreesClassifier(RandomForestClassifier):
    """
    Like the forest, but each candidate feature gets one random cut
    point and the best of those cuts is kept; no bootstrap by default
    """

    kind = ModelKind.ET
    splitter = "random"

    def __init__(self, params: ETParams, seed: int = 0):
        super().__init__(params, seed)
