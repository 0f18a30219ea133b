"""
Pydantic schemas for experiment configuration, synthetic data and run manifests
"""

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.environs import DATA_DIR, OUTPUT_DIR, WORKERS
from src.feature_selection import FeatureSelectionConfig
from src.loan_data import Regime
from src.models import MODEL_ORDER, ClassifierSpec, ModelKind
from src.resampling import ResampleConfig

# joined-row default rate per regime preset
REGIME_DEFAULT_RATES: dict[Regime, float] = {
    Regime.MEDIUM: 0.0005,
    Regime.HIGH: 0.0009,
    Regime.LOW: 0.0001,
}


class ExperimentConfig(BaseModel):
    """
    One experiment run. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid")

    data_dir: Path = Path(DATA_DIR)
    output_dir: Path = Path(OUTPUT_DIR)
    vintages: list[int] = Field(min_length=1)
    customer_sample: int = Field(default=2000, ge=1)
    holdout_fraction: float = Field(default=0.30, gt=0, lt=1)
    stratified: bool = True
    resample: ResampleConfig = ResampleConfig()
    models: list[ClassifierSpec] = Field(default=[ClassifierSpec(kind=kind) for kind in MODEL_ORDER], min_length=1)
    features: list[str] | None = None
    feature_selection: FeatureSelectionConfig = FeatureSelectionConfig()
    grids: dict[ModelKind, dict[str, list[Any]]] = {}
    grid_folds: int = Field(default=3, ge=2)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=WORKERS, ge=1)
    strict_parsing: bool = True
    snapshot_datasets: bool = False

    @field_validator("vintages")
    @classmethod
    def validate_vintages(cls, vintages: list[int]) -> list[int]:
        if len(set(vintages)) != len(vintages):
            raise ValueError("vintages must be unique")
        outside = [year for year in vintages if not 1999 <= year <= 2017]
        if outside:
            raise ValueError(f"vintages outside 1999-2017: {outside}")
        return sorted(vintages)

    @field_validator("models")
    @classmethod
    def validate_models(cls, models: list[ClassifierSpec]) -> list[ClassifierSpec]:
        kinds = [spec.kind for spec in models]
        if len(set(kinds)) != len(kinds):
            raise ValueError("each model kind may appear once")
        return sorted(models, key=lambda spec: MODEL_ORDER.index(spec.kind))


class SyntheticSpec(BaseModel):
    """
    Shape of one generated vintage. `default_rate` is the share of
    joined rows that carry a default code; None takes the regime preset
    of `vintage_year`.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    vintage_year: int = Field(ge=1999, le=2017)
    customer_count: int = Field(default=2000, ge=1)
    rows_per_customer: float = Field(default=45.0, ge=1)
    default_rate: float | None = Field(default=None, ge=0, lt=1)
    # informative features in the default link, taken in the order
    # credit score, LTV, DTI, interest rate
    feature_count: int = Field(default=4, ge=1, le=4)
    signal: float = Field(default=1.5, ge=0)
    seed: int = 0


class ManifestCell(BaseModel):
    vintage_year: int | None
    model: str
    variant: str
    error: str | None = None


class RunManifest(BaseModel):
    """
    Written last; `complete` is false when a stage aborted or a cell failed
    """

    config_hash: str
    seed: int
    stage_seeds: dict[str, int] = {}
    libraries: dict[str, str] = {}
    files: dict[str, str] = {}
    reports: list[ManifestCell] = []
    failed_stage: str | None = None
    complete: bool = False
