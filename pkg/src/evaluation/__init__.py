"""
__init__.py
"""

from .experiment import (
    evaluate_cell,
    evaluate_splits_async,
    prepare_splits,
    run_experiment,
    run_experiment_async,
)
from .metrics import confusion, metrics, roc_auc
from .ranking import best_worst, compare_variants, in_scope, rank, timing_table
from .schemas import (
    RANKING_METRICS,
    REPORT_METRICS,
    BestWorst,
    ConfusionMatrix,
    Metrics,
    MetricsReport,
    RankedRow,
    SplitPlan,
    TimingRow,
    Variant,
    VariantComparison,
    VintageSplit,
)
from .splitting import split

__all__ = [
    "evaluate_cell",
    "evaluate_splits_async",
    "prepare_splits",
    "run_experiment",
    "run_experiment_async",
    "confusion",
    "metrics",
    "roc_auc",
    "best_worst",
    "compare_variants",
    "in_scope",
    "rank",
    "timing_table",
    "RANKING_METRICS",
    "REPORT_METRICS",
    "BestWorst",
    "ConfusionMatrix",
    "Metrics",
    "MetricsReport",
    "RankedRow",
    "SplitPlan",
    "TimingRow",
    "Variant",
    "VariantComparison",
    "VintageSplit",
    "split",
]
