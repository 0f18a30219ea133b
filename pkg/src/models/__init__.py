"""
__init__.py
"""

from .base import Classifier
from .genetic import GeneticFeatureSearch
from .persistence import load_model, save_model
from .rough import RoughClusterModel, approximations, kmeans, rough_kmeans_fit, rough_predict
from .schemas import (
    PARAMS,
    MODEL_ORDER,
    ABParams,
    ANNParams,
    ClassifierSpec,
    DTParams,
    ETParams,
    GAParams,
    GBParams,
    LRParams,
    MDAParams,
    ModelKind,
    NBParams,
    RFParams,
    RSParams,
    SVMParams,
)
from .services import GridSearchResult, ModelService, TrainedModel, fit, grid_search, predict, score
from .trees import RandomForestClassifier

__all__ = [
    "Classifier",
    "GeneticFeatureSearch",
    "RandomForestClassifier",
    "RoughClusterModel",
    "approximations",
    "kmeans",
    "rough_kmeans_fit",
    "rough_predict",
    "PARAMS",
    "MODEL_ORDER",
    "ABParams",
    "ANNParams",
    "ClassifierSpec",
    "DTParams",
    "ETParams",
    "GAParams",
    "GBParams",
    "LRParams",
    "MDAParams",
    "ModelKind",
    "NBParams",
    "RFParams",
    "RSParams",
    "SVMParams",
    "GridSearchResult",
    "ModelService",
    "TrainedModel",
    "fit",
    "grid_search",
    "predict",
    "score",
    "load_model",
    "save_model",
]
