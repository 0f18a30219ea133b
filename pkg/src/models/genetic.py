"""
Genetic feature-mask search and the GA classifier (search + forest)
"""

import logging
import math

import numpy as np
from sklearn.model_selection import train_test_split

from .base import Classifier, as_matrix, validation_recall
from .schemas import GAParams, ModelKind, RFParams
from .trees import RandomForestClassifier

logger = logging.getLogger(__name__)


class GeneticFeatureSearch:
    """
    Evolves boolean feature masks. Fitness of a mask is the recall, on
    an internal validation fold, of a small forest trained on the masked
    columns. Parents are drawn proportionally to fitness, recombined by
    single-point crossover and mutated bit by bit; the top
    ceil(elitism * population) masks (at least one) carry over unchanged.
    The search stops at the generation cap or once the best mask has
    not changed for `stall_generations` generations.
    """

    def __init__(self, params: GAParams, seed: int = 0):
        self.params = params
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self._cache: dict[bytes, float] = {}

    def fitness(self, mask: np.ndarray) -> float:
        key = np.packbits(mask).tobytes() + bytes([len(mask) % 256])
        if key not in self._cache:
            forest = RandomForestClassifier(
                RFParams(n_estimators=self.params.fitness_estimators, max_depth=self.params.fitness_max_depth),
                seed=self.seed,
            ).fit(self._X_train[:, mask], self._y_train)
            self._cache[key] = validation_recall(self._y_valid, forest.predict(self._X_valid[:, mask]))
        return self._cache[key]

    def _repair(self, mask: np.ndarray) -> np.ndarray:
        if not mask.any():
            mask = mask.copy()
            mask[self.rng.integers(len(mask))] = True
        return mask

    def _crossover(self, first: np.ndarray, second: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if len(first) < 2 or self.rng.random() >= self.params.crossover_rate:
            return first.copy(), second.copy()
        point = int(self.rng.integers(1, len(first)))
        return (
            np.concatenate([first[:point], second[point:]]),
            np.concatenate([second[:point], first[point:]]),
        )

    def _mutate(self, mask: np.ndarray) -> np.ndarray:
        flips = self.rng.random(len(mask)) < self.params.mutation_rate
        return np.where(flips, ~mask, mask)

    def run(self, X: np.ndarray, y: np.ndarray, initial_population: np.ndarray | None = None) -> np.ndarray:
        X = as_matrix(X)
        y = np.asarray(y)
        p = self.params
        n_features = X.shape[1]
        stratify = y if np.bincount(y.astype(np.int64), minlength=2).min() >= 2 else None
        train, valid = train_test_split(
            np.arange(len(y)), test_size=p.validation_fraction, stratify=stratify, random_state=self.seed % (2**32)
        )
        self._X_train, self._y_train = X[train], y[train]
        self._X_valid, self._y_valid = X[valid], y[valid]

        if initial_population is None:
            population = self.rng.random((p.population_size, n_features)) < 0.5
        else:
            population = np.asarray(initial_population, dtype=bool)
        population = np.array([self._repair(mask) for mask in population])
        n_elite = max(1, math.ceil(p.elitism * len(population)))

        self.best_mask_ = population[0]
        self.best_fitness_ = -np.inf
        self.history_ = []
        stall = 0
        for generation in range(1, p.generations + 1):
            scores = np.array([self.fitness(mask) for mask in population])
            leader = int(np.argmax(scores))
            if scores[leader] > self.best_fitness_:
                changed = generation == 1 or not np.array_equal(population[leader], self.best_mask_)
                self.best_mask_, self.best_fitness_ = population[leader].copy(), float(scores[leader])
                stall = 0 if changed else stall + 1
            else:
                stall += 1
            self.history_.append(self.best_fitness_)
            self.generations_run_ = generation
            if stall >= p.stall_generations or generation == p.generations:
                break

            elites = population[np.argsort(-scores, kind="stable")[:n_elite]]
            weights = scores / scores.sum() if scores.sum() > 0 else None
            children = [mask.copy() for mask in elites]
            while len(children) < len(population):
                first, second = self.rng.choice(len(population), size=2, p=weights)
                for child in self._crossover(population[first], population[second]):
                    if len(children) < len(population):
                        children.append(self._repair(self._mutate(child)))
            population = np.array(children)

        logger.info(
            "GA kept %d of %d features after %d generation(s), validation recall %.4f",
            int(self.best_mask_.sum()), n_features, self.generations_run_, self.best_fitness_,
        )
        return self.best_mask_


class GeneticForestClassifier(Classifier):
    """
    Genetic feature search followed by a forest on the surviving features
    """

    kind = ModelKind.GA

    def __init__(self, params: GAParams, seed: int = 0):
        super().__init__(params, seed)

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        self.mask_ = GeneticFeatureSearch(self.params, self.seed).run(X, y)
        self.forest_ = RandomForestClassifier(
            RFParams(n_estimators=self.params.n_estimators, max_depth=self.params.max_depth),
            seed=self.seed,
        ).fit(X[:, self.mask_], y)
        return self

    def score(self, X):
        return self.forest_.score(as_matrix(X)[:, self.mask_])
