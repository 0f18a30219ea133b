"""
__init__.py
"""

from .schemas import FeatureSelectionConfig, FeatureVerdict, verdict_frame
from .services import correlation_filter, crosscheck_discard, ga_select, rf_importance, select_features

__all__ = [
    "FeatureSelectionConfig",
    "FeatureVerdict",
    "verdict_frame",
    "correlation_filter",
    "crosscheck_discard",
    "ga_select",
    "rf_importance",
    "select_features",
]
