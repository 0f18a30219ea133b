"""
Filter and wrapper feature scoring, and the three-way crosscheck
"""

import logging

import numpy as np

from src.exceptions import FeatureSelectionError
from src.loan_data import Dataset
from src.models import GAParams, GeneticFeatureSearch, RandomForestClassifier, RFParams

from .schemas import (
    CORRELATION_THRESHOLD,
    IMPORTANCE_THRESHOLD,
    FeatureSelectionConfig,
    FeatureVerdict,
)

logger = logging.getLogger(__name__)


def correlation_filter(data: Dataset) -> dict[str, float]:
    """
    |Pearson r| of every column against the label; 0 for constant columns
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    xc = X - X.mean(axis=0)
    yc = y - y.mean()
    denominator = np.sqrt((xc * xc).sum(axis=0) * (yc @ yc))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(denominator > 0, (xc.T @ yc) / denominator, 0.0)
    return {name: float(min(abs(value), 1.0)) for name, value in zip(data.feature_names, r)}


def rf_importance(data: Dataset, params: RFParams | None = None, seed: int = 0) -> dict[str, float]:
    """
    Normalized mean impurity decrease of a random forest
    """
    forest = RandomForestClassifier(params or RFParams(), seed=seed).fit(data.X, data.y)
    return {name: float(value) for name, value in zip(data.feature_names, forest.feature_importances)}


def ga_select(
    data: Dataset,
    params: GAParams | None = None,
    seed: int = 0,
    initial_population: np.ndarray | None = None,
) -> set[str]:
    """
    Features of the best mask found by the genetic search
    """
    mask = GeneticFeatureSearch(params or GAParams(), seed).run(data.X, data.y, initial_population)
    return {name for name, keep in zip(data.feature_names, mask) if keep}


def crosscheck_discard(
    corr: dict[str, float],
    rf_imp: dict[str, float],
    ga_set: set[str],
    importance_threshold: float = IMPORTANCE_THRESHOLD,
    correlation_threshold: float = CORRELATION_THRESHOLD,
) -> list[FeatureVerdict]:
    """
    One verdict per feature, in the order of `corr`
    """
    if set(corr) != set(rf_imp):
        raise FeatureSelectionError(
            f"filter and wrapper scores cover different features: {sorted(set(corr) ^ set(rf_imp))}"
        )
    unknown = set(ga_set) - set(corr)
    if unknown:
        raise FeatureSelectionError(f"GA survivors not among the scored features: {sorted(unknown)}")

    verdicts = []
    for name, correlation in corr.items():
        importance = rf_imp[name]
        survived = name in ga_set
        verdicts.append(FeatureVerdict(
            feature=name,
            rf_importance=importance,
            ga_survived=survived,
            corr_with_target=correlation,
            discarded=importance < importance_threshold and not survived and correlation < correlation_threshold,
            importance_threshold=importance_threshold,
            correlation_threshold=correlation_threshold,
        ))
    return verdicts


def select_features(
    data: Dataset,
    cfg: FeatureSelectionConfig,
    forest_seed: int = 0,
    ga_seed: int = 0,
) -> tuple[list[str], list[FeatureVerdict]]:
    """
    Runs all three scorers and returns (retained feature names, verdicts)
    """
    if not cfg.enabled:
        return list(data.feature_names), []

    corr = correlation_filter(data)
    rf_imp = rf_importance(data, cfg.forest, seed=forest_seed)
    ga_set = ga_select(data, cfg.ga, seed=ga_seed)
    verdicts = crosscheck_discard(corr, rf_imp, ga_set, cfg.importance_threshold, cfg.correlation_threshold)

    retained = [verdict.feature for verdict in verdicts if not verdict.discarded]
    discarded = [verdict.feature for verdict in verdicts if verdict.discarded]
    if not retained:
        raise FeatureSelectionError("every feature was discarded")
    logger.info("Feature selection kept %d of %d features; discarded: %s", len(retained), len(verdicts), ", ".join(discarded) or "none")
    return retained, verdicts
