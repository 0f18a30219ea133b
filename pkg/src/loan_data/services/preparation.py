"""
Cleaning, joining and labeling
"""

import logging

import numpy as np
import pandas as pd

from src.exceptions import DataError

from ..layout import DEFAULT_CODES, FIELDS, FieldKind, KEY_FIELDS, NOT_AVAILABLE, ORIGINATION_LAYOUT, PERFORMANCE_LAYOUT
from ..schemas import Diagnostics, Regime

logger = logging.getLogger(__name__)

FIRST_VINTAGE = 1999
LAST_VINTAGE = 2017


def assign_regime(vintage_year: int) -> Regime:
    """
    Default-rate regime of an origination year
    """
    if not FIRST_VINTAGE <= vintage_year <= LAST_VINTAGE:
        raise DataError(f"vintage year {vintage_year} outside {FIRST_VINTAGE}-{LAST_VINTAGE}")
    if vintage_year <= 2004:
        return Regime.MEDIUM
    if vintage_year <= 2010:
        return Regime.HIGH
    return Regime.LOW


def label_defaults(zero_balance_codes: pd.Series) -> pd.Series:
    """
    1 where the zero balance code marks a default termination
    """
    return zero_balance_codes.isin(DEFAULT_CODES).astype(np.int8)


def clean(frame: pd.DataFrame, diagnostics: Diagnostics | None = None) -> pd.DataFrame:
    """
    Drops rows missing a key origination field, then fills nominal blanks
    with "Not Available" and numeric blanks with 0. Works on origination,
    performance or joined frames; columns it does not know are left alone.
    """
    keys = [column for column in KEY_FIELDS if column in frame.columns]
    missing_key = frame[keys].isna().any(axis=1) if keys else pd.Series(False, index=frame.index)
    cleaned = frame.loc[~missing_key].copy()
    dropped = int(missing_key.sum())

    imputed_nominal: dict[str, int] = {}
    imputed_numeric: dict[str, int] = {}
    for column in cleaned.columns:
        field = FIELDS.get(column)
        if field is None:
            continue
        blanks = int(cleaned[column].isna().sum())
        if field.kind == FieldKind.NUMERIC:
            cleaned[column] = cleaned[column].astype(float).fillna(0.0)
            if blanks:
                imputed_numeric[column] = blanks
        elif field.kind == FieldKind.CATEGORICAL:
            cleaned[column] = cleaned[column].where(cleaned[column].notna(), NOT_AVAILABLE).astype(str)
            if blanks:
                imputed_nominal[column] = blanks

    if diagnostics is not None:
        diagnostics.dropped_missing_key += dropped
        for column, count in imputed_nominal.items():
            diagnostics.imputed_nominal[column] = diagnostics.imputed_nominal.get(column, 0) + count
        for column, count in imputed_numeric.items():
            diagnostics.imputed_numeric[column] = diagnostics.imputed_numeric.get(column, 0) + count

    if dropped:
        logger.info("Removed %d row(s) missing a key field", dropped)
    return cleaned.reset_index(drop=True)


def join_and_label(
    origination: pd.DataFrame,
    performance: pd.DataFrame,
    vintage_year: int,
    diagnostics: Diagnostics | None = None,
) -> pd.DataFrame:
    """
    Concatenates each performance row with its origination row and sets
    `defaulted` from that row's zero balance code. The code itself is
    dropped. Performance rows without an origination row are dropped and
    counted.
    """
    regime = assign_regime(vintage_year)
    merged = performance.merge(
        origination,
        on="loan_sequence_number",
        how="left",
        indicator=True,
        validate="many_to_one",
    )
    orphans = (merged["_merge"] == "left_only").to_numpy()
    merged = merged.loc[~orphans]

    defaulted = label_defaults(merged["zero_balance_code"])

    origination_columns = [field.name for field in ORIGINATION_LAYOUT]
    performance_columns = [
        field.name for field in PERFORMANCE_LAYOUT
        if field.name not in ("loan_sequence_number", "zero_balance_code")
    ]
    labeled = merged[origination_columns + performance_columns].copy()
    labeled["defaulted"] = defaulted.to_numpy()
    labeled["vintage_year"] = vintage_year
    labeled["regime"] = regime.value
    labeled = labeled.reset_index(drop=True)

    if diagnostics is not None:
        diagnostics.orphan_performance_rows += int(orphans.sum())
        diagnostics.labeled_rows += len(labeled)
        diagnostics.default_rows += int(labeled["defaulted"].sum())

    if orphans.any():
        logger.warning("Dropped %d performance row(s) with no origination row", int(orphans.sum()))
    logger.info(
        "Labeled vintage %d: %d rows, %d default rows",
        vintage_year, len(labeled), int(labeled["defaulted"].sum()),
    )
    return labeled
