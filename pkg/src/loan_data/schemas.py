"""
Pydantic schemas for loan records and datasets
"""

import hashlib
from enum import Enum
from typing import Any, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.exceptions import ParseIssue


class Regime(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class OriginationRecord(BaseModel):
    """
    One origination line
    """

    model_config = ConfigDict(frozen=True)

    credit_score: float | None = None
    first_payment_date: int | None = None
    first_time_homebuyer_flag: str | None = None
    maturity_date: int | None = None
    metropolitan_division_or_msa: str | None = None
    mortgage_insurance_percentage: float | None = None
    number_of_units: float | None = None
    occupancy_status: str | None = None
    original_combined_loan_to_value: float | None = None
    original_debt_to_income_ratio: float | None = None
    original_upb: float | None = None
    original_loan_to_value: float | None = None
    original_interest_rate: float | None = None
    channel: str | None = None
    prepayment_penalty_mortgage_flag: str | None = None
    product_type: str | None = None
    property_state: str | None = None
    property_type: str | None = None
    postal_code: str | None = None
    loan_sequence_number: str = Field(min_length=1)
    loan_purpose: str | None = None
    original_loan_term: float | None = None
    number_of_borrowers: float | None = None
    seller_name: str | None = None
    servicer_name: str | None = None
    super_conforming_flag: str | None = None
    pre_harp_loan_sequence_number: str | None = None


class PerformanceRecord(BaseModel):
    """
    One monthly servicing line
    """

    model_config = ConfigDict(frozen=True)

    loan_sequence_number: str = Field(min_length=1)
    monthly_reporting_period: int
    current_actual_upb: float | None = None
    current_loan_delinquency_status: str | None = None
    loan_age: float | None = None
    remaining_month_to_legal_maturity: float | None = None
    repurchase_flag: str | None = None
    modification_flag: str | None = None
    zero_balance_code: Literal["01", "03", "06", "09", ""] = ""
    zero_balance_effective_date: int | None = None
    current_interest_rate: float | None = None
    current_deferred_upb: float | None = None
    due_date_of_last_paid_installment: int | None = None
    mi_recoveries: float | None = None
    net_sales_proceeds: float | None = None
    non_mi_recoveries: float | None = None
    expenses: float | None = None
    legal_costs: float | None = None
    maintenance_and_preservation_costs: float | None = None
    taxes_and_insurance: float | None = None
    miscellaneous_expenses: float | None = None
    actual_loss_calculation: float | None = None
    modification_cost: float | None = None


class LoanRecord(BaseModel):
    """
    A performance row joined with its origination row and labeled
    """

    model_config = ConfigDict(frozen=True)

    loan_sequence_number: str
    vintage_year: int = Field(ge=1999, le=2017)
    regime: Regime
    defaulted: Literal[0, 1]
    features: dict[str, float | str | None]


def frame_records(frame: pd.DataFrame) -> list[dict[str, Any]]:
    """
    Frame rows as dicts with missing cells as None
    """
    cleaned = frame.astype(object).where(frame.notna(), None)
    return cleaned.to_dict(orient="records")


def loan_records(frame: pd.DataFrame) -> list[LoanRecord]:
    """
    Typed view over a labeled frame
    """
    meta = {"loan_sequence_number", "vintage_year", "regime", "defaulted"}
    records = []
    for row in frame_records(frame):
        records.append(LoanRecord(
            loan_sequence_number=row["loan_sequence_number"],
            vintage_year=int(row["vintage_year"]),
            regime=row["regime"],
            defaulted=int(row["defaulted"]),
            features={key: value for key, value in row.items() if key not in meta},
        ))
    return records


class ParsedVintage(BaseModel):
    """
    Result of parsing one vintage's origination and performance files
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vintage_year: int | None = None
    origination: pd.DataFrame
    performance: pd.DataFrame
    issues: list[ParseIssue] = []
    unparseable_cells: int = 0

    def origination_records(self) -> list[OriginationRecord]:
        return [OriginationRecord.model_validate(row) for row in frame_records(self.origination)]

    def performance_records(self) -> list[PerformanceRecord]:
        return [PerformanceRecord.model_validate(row) for row in frame_records(self.performance)]


class Diagnostics(BaseModel):
    """
    Dropped and imputed counts for one vintage
    """

    vintage_year: int | None = None
    origination_rows: int = 0
    performance_rows: int = 0
    malformed_lines: int = 0
    unparseable_cells: int = 0
    dropped_missing_key: int = 0
    orphan_performance_rows: int = 0
    labeled_rows: int = 0
    default_rows: int = 0
    sampled_customers: int = 0
    sampled_rows: int = 0
    imputed_nominal: dict[str, int] = {}
    imputed_numeric: dict[str, int] = {}

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for name, value in self.model_dump(exclude={"vintage_year", "imputed_nominal", "imputed_numeric"}).items():
            rows.append({"vintage_year": self.vintage_year, "item": name, "column": "", "count": value})
        for kind in ("imputed_nominal", "imputed_numeric"):
            for column, count in sorted(getattr(self, kind).items()):
                rows.append({"vintage_year": self.vintage_year, "item": kind, "column": column, "count": count})
        return pd.DataFrame(rows, columns=["vintage_year", "item", "column", "count"])


class Dataset(BaseModel):
    """
    Encoded feature matrix with labels.

    `groups` holds the customer (loan sequence number) of each row.
    Arrays are copied and the copies made read-only on construction;
    the caller keeps its own arrays writable.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    groups: np.ndarray
    categorical: tuple[bool, ...]
    vintage_year: int | None = None
    regime: Regime | None = None
    holdout: bool = False
    # synthetic-row provenance (row, source_row, neighbor_row, u); stripped before training
    provenance: pd.DataFrame | None = None

    @field_validator("X", "y", "groups", mode="after")
    @classmethod
    def freeze_copy(cls, array: np.ndarray) -> np.ndarray:
        frozen = np.array(array, copy=True)
        frozen.setflags(write=False)
        return frozen

    @model_validator(mode="after")
    def validate_shapes(self) -> "Dataset":
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        if self.X.shape[0] != self.y.shape[0] or self.y.shape[0] != self.groups.shape[0]:
            raise ValueError(
                f"row count mismatch: X has {self.X.shape[0]}, y has {self.y.shape[0]}, "
                f"groups has {self.groups.shape[0]}"
            )
        if self.X.shape[1] != len(self.feature_names) or len(self.categorical) != len(self.feature_names):
            raise ValueError("feature name / categorical mask width does not match X")
        if not np.isfinite(self.X).all():
            raise ValueError("dataset contains missing or non-finite cells")
        if self.y.size and not np.isin(self.y, (0, 1)).all():
            raise ValueError("labels must be binary 0/1")
        return self

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def positives(self) -> int:
        return int(self.y.sum())

    @property
    def categorical_mask(self) -> np.ndarray:
        return np.asarray(self.categorical, dtype=bool)

    def subset(self, rows: np.ndarray, **updates: Any) -> "Dataset":
        """
        New dataset over the selected rows (boolean mask or indices)
        """
        return Dataset(
            feature_names=self.feature_names,
            X=np.array(self.X[rows], dtype=float),
            y=np.array(self.y[rows]),
            groups=np.array(self.groups[rows]),
            categorical=self.categorical,
            vintage_year=self.vintage_year,
            regime=self.regime,
            holdout=updates.get("holdout", self.holdout),
        )

    def select_features(self, names: list[str]) -> "Dataset":
        index = [self.feature_names.index(name) for name in names]
        return Dataset(
            feature_names=tuple(names),
            X=np.array(self.X[:, index], dtype=float),
            y=self.y.copy(),
            groups=self.groups.copy(),
            categorical=tuple(self.categorical[i] for i in index),
            vintage_year=self.vintage_year,
            regime=self.regime,
            holdout=self.holdout,
        )

    def without_provenance(self) -> "Dataset":
        return self.model_copy(update={"provenance": None})

    def checksum(self) -> str:
        """
        sha256 over features, labels and customer ids
        """
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.X, dtype=np.float64).tobytes())
        digest.update(np.ascontiguousarray(self.y, dtype=np.int64).tobytes())
        digest.update("\x1f".join(str(group) for group in self.groups).encode("utf-8"))
        return digest.hexdigest()

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=list(self.feature_names))
        frame.insert(0, "loan_sequence_number", self.groups)
        frame["defaulted"] = self.y
        return frame


__all__ = [
    "Regime",
    "OriginationRecord",
    "PerformanceRecord",
    "LoanRecord",
    "ParsedVintage",
    "Diagnostics",
    "Dataset",
    "frame_records",
    "loan_records",
]
