"""
Ordinal encoding of labeled records into a Dataset
"""

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.exceptions import DataError

from ..layout import FIELDS, FieldKind, NOT_AVAILABLE
from ..schemas import Dataset, Regime


def _check_features(records: pd.DataFrame, feature_names: list[str]) -> None:
    for name in feature_names:
        field = FIELDS.get(name)
        if field is not None and field.kind == FieldKind.DATE:
            raise DataError(f"{name} is a date field; date fields are excluded from the feature set")
        if field is not None and field.kind in (FieldKind.KEY, FieldKind.TARGET):
            raise DataError(f"{name} is an identifier or label source, not a feature")
        if name not in records.columns:
            raise DataError(f"feature {name} is absent from the records")


class Encoder(BaseModel):
    """
    Frozen vocabulary per categorical feature. Code 0 is always
    "Not Available"; unseen categories map to it.
    """

    model_config = ConfigDict(frozen=True)

    feature_names: tuple[str, ...]
    vocabularies: dict[str, tuple[str, ...]]

    @classmethod
    def fit(cls, records: pd.DataFrame, feature_names: list[str]) -> "Encoder":
        _check_features(records, feature_names)
        vocabularies = {}
        for name in feature_names:
            field = FIELDS.get(name)
            if field is None and pd.api.types.is_numeric_dtype(records[name]):
                continue
            if field is not None and field.kind != FieldKind.CATEGORICAL:
                continue
            values = sorted(set(records[name].astype(str)) - {NOT_AVAILABLE})
            vocabularies[name] = (NOT_AVAILABLE, *values)
        return cls(feature_names=tuple(feature_names), vocabularies=vocabularies)

    def is_categorical(self, name: str) -> bool:
        return name in self.vocabularies

    def transform(self, records: pd.DataFrame) -> Dataset:
        _check_features(records, list(self.feature_names))
        columns = []
        for name in self.feature_names:
            if self.is_categorical(name):
                codes = {value: code for code, value in enumerate(self.vocabularies[name])}
                column = records[name].astype(str).map(codes).fillna(0).to_numpy(dtype=float)
            else:
                column = records[name].to_numpy(dtype=float)
            columns.append(column)

        X = np.column_stack(columns) if columns else np.zeros((len(records), 0))
        years = records["vintage_year"].unique() if "vintage_year" in records.columns else []
        vintage_year = int(years[0]) if len(years) == 1 else None
        regimes = records["regime"].unique() if "regime" in records.columns else []
        regime = Regime(regimes[0]) if len(regimes) == 1 else None

        return Dataset(
            feature_names=self.feature_names,
            X=X.astype(float),
            y=records["defaulted"].to_numpy(dtype=np.int64),
            groups=records["loan_sequence_number"].astype(str).to_numpy(dtype=object),
            categorical=tuple(self.is_categorical(name) for name in self.feature_names),
            vintage_year=vintage_year,
            regime=regime,
        )


def encode(records: pd.DataFrame, feature_names: list[str], encoder: Encoder | None = None) -> Dataset:
    """
    Encodes cleaned, labeled records. Fits a new vocabulary on `records`
    unless a fitted encoder is given.
    """
    encoder = encoder or Encoder.fit(records, feature_names)
    return encoder.transform(records)
