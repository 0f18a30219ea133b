"""
Pydantic schemas for feature selection
"""

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models import GAParams, RFParams

IMPORTANCE_THRESHOLD = 1e-6
CORRELATION_THRESHOLD = 0.1


class FeatureSelectionConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    enabled: bool = True
    importance_threshold: float = Field(default=IMPORTANCE_THRESHOLD, ge=0)
    correlation_threshold: float = Field(default=CORRELATION_THRESHOLD, ge=0, le=1)
    forest: RFParams = RFParams()
    ga: GAParams = GAParams()


class FeatureVerdict(BaseModel):
    """
    The three votes on one feature. A feature is discarded only when
    all three call it unimportant.
    """

    model_config = ConfigDict(frozen=True)

    feature: str
    rf_importance: float = Field(ge=0, le=1)
    ga_survived: bool
    corr_with_target: float = Field(ge=0, le=1)
    discarded: bool
    importance_threshold: float = Field(default=IMPORTANCE_THRESHOLD, exclude=True)
    correlation_threshold: float = Field(default=CORRELATION_THRESHOLD, exclude=True)

    @model_validator(mode="after")
    def validate_discard(self) -> "FeatureVerdict":
        unanimous = (
            self.rf_importance < self.importance_threshold
            and not self.ga_survived
            and self.corr_with_target < self.correlation_threshold
        )
        if self.discarded and not unanimous:
            raise ValueError(f"{self.feature} is discarded without all three votes agreeing")
        return self


def verdict_frame(verdicts: list[FeatureVerdict]) -> pd.DataFrame:
    """
    Verdict table: feature, wrapper (RF importance), filter (|corr|),
    ga_survived, discarded
    """
    return pd.DataFrame(
        [
            {
                "feature": verdict.feature,
                "wrapper": verdict.rf_importance,
                "filter": verdict.corr_with_target,
                "ga_survived": verdict.ga_survived,
                "discarded": verdict.discarded,
            }
            for verdict in verdicts
        ],
        columns=["feature", "wrapper", "filter", "ga_survived", "discarded"],
    )
