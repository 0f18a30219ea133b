"""
Pydantic schemas for evaluation
"""

from enum import Enum

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.loan_data import Dataset, Regime
from src.models import ModelKind

RANKING_METRICS = ("precision", "recall", "roc_auc")
REPORT_METRICS = ("precision", "recall", "fpr", "accuracy", "roc_auc")


class Variant(str, Enum):
    ORIGINAL = "Original"
    RESAMPLED = "Resampled"


class ConfusionMatrix(BaseModel):
    """
    Counts at the 0.5 threshold; class 1 (default) is positive
    """

    model_config = ConfigDict(frozen=True)

    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    fn: int = Field(ge=0)
    tn: int = Field(ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


class Metrics(BaseModel):
    """
    None marks an undefined ratio (zero denominator)
    """

    model_config = ConfigDict(frozen=True)

    precision: float | None
    recall: float | None
    fpr: float | None
    accuracy: float | None


class SplitPlan(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    holdout_fraction: float = Field(default=0.30, gt=0, lt=1)
    stratified: bool = True
    seed: int = 0


class VintageSplit(BaseModel):
    """
    Train/holdout partition of one vintage plus the SMOTE-resampled
    training set (None when resampling was impossible)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vintage_year: int | None
    regime: Regime | None
    train: Dataset
    holdout: Dataset
    resampled: Dataset | None = None
    resample_error: str | None = None
    provenance: pd.DataFrame | None = None

    @model_validator(mode="after")
    def validate_disjoint(self) -> "VintageSplit":
        if not self.holdout.holdout:
            raise ValueError("holdout dataset is not flagged")
        if np.intersect1d(self.train.groups, self.holdout.groups).size:
            raise ValueError("training and holdout customers overlap")
        return self


class MetricsReport(BaseModel):
    """
    Holdout result of one (vintage, model, variant) cell
    """

    model_config = ConfigDict(frozen=True)

    kind: ModelKind
    variant: Variant
    vintage_year: int | None
    regime: Regime | None
    precision: float | None = None
    recall: float | None = None
    fpr: float | None = None
    accuracy: float | None = None
    roc_auc: float | None = None
    fit_seconds: float = 0.0
    holdout_checksum: str
    tp: int | None = None
    fp: int | None = None
    fn: int | None = None
    tn: int | None = None
    hyper_params: dict = {}
    converged: bool = True
    error: str | None = None

    @property
    def label(self) -> str:
        return self.kind.value + ("-R" if self.variant == Variant.RESAMPLED else "")


class RankedRow(BaseModel):
    rank: int
    label: str
    kind: ModelKind
    variant: Variant
    value: float | None
    n_vintages: int


class VariantComparison(BaseModel):
    metric: str
    original: float | None
    resampled: float | None
    difference: float | None


class BestWorst(BaseModel):
    metric: str
    scope: str
    best_label: str | None
    best_value: float | None
    worst_label: str | None
    worst_value: float | None


class TimingRow(BaseModel):
    model: ModelKind
    original_seconds: float | None
    resampled_seconds: float | None
    mean_seconds: float
