"""
Pydantic schemas for classifier specifications
"""

import math
from enum import Enum
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelKind(str, Enum):
    LR = "LR"
    MDA = "MDA"
    NB = "NB"
    DT = "DT"
    RF = "RF"
    ET = "ET"
    AB = "AB"
    GB = "GB"
    SVM = "SVM"
    ANN = "ANN"
    RS = "RS"
    GA = "GA"


MODEL_ORDER: tuple[ModelKind, ...] = tuple(ModelKind)


class HyperParams(BaseModel):
    """
    Base for per-kind hyper-parameters; unknown keys are rejected
    """

    model_config = ConfigDict(extra="forbid", frozen=True)


class LRParams(HyperParams):
    learning_rate: float = Field(default=0.1, gt=0)
    max_iter: int = Field(default=500, ge=0)
    tol: float = Field(default=1e-6, ge=0)
    l2: float = Field(default=1e-4, ge=0)


class MDAParams(HyperParams):
    reg: float = Field(default=1e-4, gt=0)


class NBParams(HyperParams):
    var_smoothing: float = Field(default=1e-9, ge=0)
    alpha: float = Field(default=1.0, gt=0)


MaxFeatures = Literal["sqrt", "all"] | int | None


class DTParams(HyperParams):
    criterion: Literal["entropy", "gini"] = "entropy"
    max_depth: int | None = Field(default=None, ge=1)
    min_samples_split: int = Field(default=2, ge=2)
    min_samples_leaf: int = Field(default=1, ge=1)
    max_features: MaxFeatures = None


class RFParams(HyperParams):
    n_estimators: int = Field(default=100, ge=1)
    criterion: Literal["entropy", "gini"] = "gini"
    max_depth: int | None = Field(default=None, ge=1)
    min_samples_split: int = Field(default=2, ge=2)
    min_samples_leaf: int = Field(default=1, ge=1)
    max_features: MaxFeatures = "sqrt"
    bootstrap: bool = True


class ETParams(RFParams):
    bootstrap: bool = False


class ABParams(HyperParams):
    n_estimators: int = Field(default=50, ge=1)
    learning_rate: float = Field(default=1.0, gt=0)
    max_depth: int = Field(default=1, ge=1)


class GBParams(HyperParams):
    n_estimators: int = Field(default=100, ge=1)
    learning_rate: float = Field(default=0.1, gt=0, le=1)
    max_depth: int = Field(default=3, ge=1)
    min_samples_leaf: int = Field(default=1, ge=1)


class SVMParams(HyperParams):
    l2: float = Field(default=1e-4, ge=0)
    learning_rate: float = Field(default=0.1, gt=0)
    max_iter: int = Field(default=1000, ge=0)
    tol: float = Field(default=1e-6, ge=0)
    kernel: Literal["linear", "rbf"] = "linear"
    n_components: int = Field(default=100, ge=1)
    gamma: float = Field(default=1.0, gt=0)


class ANNParams(HyperParams):
    hidden_layers: int = Field(default=2, ge=1)
    hidden_units: int = Field(default=16, ge=1)
    learning_rate: float = Field(default=0.01, gt=0)
    epochs: int = Field(default=50, ge=1)
    batch_size: int = Field(default=64, ge=1)
    l2: float = Field(default=0.0, ge=0)
    tol: float = Field(default=1e-6, ge=0)


class RSParams(HyperParams):
    n_clusters: int = Field(default=2, ge=2)
    # None: 10% of the mean gap between nearest and second-nearest initial center
    epsilon: float | None = Field(default=None, ge=0)
    w_lower: float = Field(default=0.7, gt=0)
    w_upper: float = Field(default=0.3, gt=0)
    max_iter: int = Field(default=100, ge=1)
    tol: float = Field(default=1e-6, ge=0)

    @model_validator(mode="after")
    def validate_weights(self) -> "RSParams":
        if not math.isclose(self.w_lower + self.w_upper, 1.0):
            raise ValueError("w_lower + w_upper must equal 1")
        return self


class GAParams(HyperParams):
    population_size: int = Field(default=30, ge=2)
    generations: int = Field(default=30, ge=1)
    crossover_rate: float = Field(default=0.8, ge=0, le=1)
    mutation_rate: float = Field(default=0.02, ge=0, le=1)
    elitism: float = Field(default=0.005, ge=0, le=1)
    stall_generations: int = Field(default=5, ge=1)
    validation_fraction: float = Field(default=0.3, gt=0, lt=1)
    fitness_estimators: int = Field(default=10, ge=1)
    fitness_max_depth: int | None = Field(default=6, ge=1)
    # forest fitted on the surviving features
    n_estimators: int = Field(default=100, ge=1)
    max_depth: int | None = Field(default=None, ge=1)


PARAMS: dict[ModelKind, type[HyperParams]] = {
    ModelKind.LR: LRParams,
    ModelKind.MDA: MDAParams,
    ModelKind.NB: NBParams,
    ModelKind.DT: DTParams,
    ModelKind.RF: RFParams,
    ModelKind.ET: ETParams,
    ModelKind.AB: ABParams,
    ModelKind.GB: GBParams,
    ModelKind.SVM: SVMParams,
    ModelKind.ANN: ANNParams,
    ModelKind.RS: RSParams,
    ModelKind.GA: GAParams,
}


class ClassifierSpec(BaseModel):
    """
    Which learner to fit, with what hyper-parameters and seed
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ModelKind
    hyper_params: dict[str, Any] = {}
    seed: int = 0

    @model_validator(mode="after")
    def validate_hyper_params(self) -> "ClassifierSpec":
        PARAMS[self.kind].model_validate(self.hyper_params)
        return self

    @property
    def params(self) -> HyperParams:
        return PARAMS[self.kind].model_validate(self.hyper_params)

    def with_params(self, **updates: Any) -> "ClassifierSpec":
        return ClassifierSpec(kind=self.kind, hyper_params={**self.hyper_params, **updates}, seed=self.seed)
