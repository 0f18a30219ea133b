"""
Services module contains fit / score / predict / grid search
"""

import itertools
import logging
import time
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError
from sklearn.model_selection import StratifiedKFold

from src.exceptions import CapabilityError, ModelError
from src.loan_data import Dataset

from .base import Classifier, as_matrix, validation_recall
from .bayes import GaussianNaiveBayes, QuadraticDiscriminant
from .boosting import AdaBoostClassifier, GradientBoostingClassifier
from .genetic import GeneticForestClassifier
from .linear import LinearSVM, LogisticRegression
from .neural import MultilayerPerceptron
from .rough import RoughSetClassifier
from .schemas import ClassifierSpec, ModelKind
from .trees import DecisionTreeClassifier, ExtraTreesClassifier, RandomForestClassifier

logger = logging.getLogger(__name__)

REGISTRY: dict[ModelKind, type[Classifier]] = {
    ModelKind.LR: LogisticRegression,
    ModelKind.MDA: QuadraticDiscriminant,
    ModelKind.NB: GaussianNaiveBayes,
    ModelKind.DT: DecisionTreeClassifier,
    ModelKind.RF: RandomForestClassifier,
    ModelKind.ET: ExtraTreesClassifier,
    ModelKind.AB: AdaBoostClassifier,
    ModelKind.GB: GradientBoostingClassifier,
    ModelKind.SVM: LinearSVM,
    ModelKind.ANN: MultilayerPerceptron,
    ModelKind.RS: RoughSetClassifier,
    ModelKind.GA: GeneticForestClassifier,
}


class TrainedModel(BaseModel):
    """
    A fitted classifier with its ClassifierSpec and the feature order it was trained on
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    spec: ClassifierSpec
    feature_names: tuple[str, ...]
    estimator: Classifier
    fit_seconds: float = 0.0

    @property
    def score_capability(self) -> bool:
        return self.estimator.supports_score

    @property
    def converged(self) -> bool:
        return bool(self.estimator.converged_)


class GridSearchResult(BaseModel):
    best_params: dict[str, Any]
    results: list[tuple[dict[str, Any], float]]


class ModelService():

    @classmethod
    def build(
        cls,
        spec: ClassifierSpec,
    ) -> Classifier:
        """
        Unfitted estimator for a ClassifierSpec
        """
        return REGISTRY[spec.kind](spec.params, seed=spec.seed)


    @classmethod
    def fit(
        cls,
        spec: ClassifierSpec,
        train: Dataset,
    ) -> TrainedModel:
        """
        Fits the ClassifierSpec learner on the training dataset.
        Every kind except RS needs both classes present.
        """
        classes = np.unique(train.y)
        if train.n_rows == 0:
            raise ModelError(f"{spec.kind.value}: empty training data")
        if spec.kind != ModelKind.RS and len(classes) < 2:
            raise ModelError(f"{spec.kind.value}: training data holds a single class ({classes.tolist()})")

        estimator = cls.build(spec)
        started = time.perf_counter()
        estimator.fit(train.X, train.y, train.categorical_mask)
        elapsed = time.perf_counter() - started
        if not estimator.converged_:
            logger.warning("%s did not converge before its iteration cap", spec.kind.value)

        return TrainedModel(spec=spec, feature_names=train.feature_names, estimator=estimator, fit_seconds=elapsed)


    @classmethod
    def score(
        cls,
        model: TrainedModel,
        x: np.ndarray,
    ) -> np.ndarray:
        """
        Class-1 scores in [0, 1]; RS raises CapabilityError
        """
        if not model.score_capability:
            raise CapabilityError(f"{model.spec.kind.value} exposes predict only; no score is available")
        return model.estimator.score(as_matrix(x))


    @classmethod
    def predict(
        cls,
        model: TrainedModel,
        x: np.ndarray,
    ) -> np.ndarray:
        """
        0/1 decisions; score >= 0.5 for score-capable models
        """
        return model.estimator.predict(as_matrix(x))


    @classmethod
    def grid_search(
        cls,
        spec: ClassifierSpec,
        train: Dataset,
        grid: dict[str, list[Any]],
        folds: int = 3,
    ) -> GridSearchResult:
        """
        Tries every combination of the grid with stratified k-fold
        validation; the best mean recall wins, ties keep the earlier
        candidate in grid order
        """
        if folds < 2:
            raise ModelError("grid search needs at least 2 folds")
        if not grid or any(len(values) == 0 for values in grid.values()):
            raise ModelError(f"{spec.kind.value}: empty hyper-parameter grid")

        keys = list(grid)
        candidates = [dict(zip(keys, values)) for values in itertools.product(*(grid[key] for key in keys))]
        splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=spec.seed % (2**32))
        splits = list(splitter.split(train.X, train.y))

        results: list[tuple[dict[str, Any], float]] = []
        for candidate in candidates:
            try:
                trial = spec.with_params(**candidate)
            except ValidationError as error:
                raise ModelError(f"{spec.kind.value}: invalid grid point {candidate}: {error}") from error
            recalls = []
            for fit_rows, valid_rows in splits:
                estimator = cls.build(trial).fit(train.X[fit_rows], train.y[fit_rows], train.categorical_mask)
                recalls.append(validation_recall(train.y[valid_rows], estimator.predict(train.X[valid_rows])))
            results.append((candidate, float(np.mean(recalls))))
            logger.debug("grid %s %s: mean recall %.4f", spec.kind.value, candidate, results[-1][1])

        best = max(range(len(results)), key=lambda i: (results[i][1], -i))
        logger.info("grid %s: best %s (recall %.4f over %d candidates)", spec.kind.value, results[best][0], results[best][1], len(results))
        return GridSearchResult(best_params={**spec.hyper_params, **results[best][0]}, results=results)


fit = ModelService.fit
score = ModelService.score
predict = ModelService.predict
grid_search = ModelService.grid_search
