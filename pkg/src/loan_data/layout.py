"""
Field layouts of the single-family loan-level files.

Column positions follow the published origination / servicing layout, one
record per line, fields separated by "|".
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict


class FieldKind(str, Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"
    DATE = "date"
    KEY = "key"
    TARGET = "target"


class FieldSpec(BaseModel):
    """
    One column of a layout
    """

    model_config = ConfigDict(frozen=True)

    name: str
    kind: FieldKind
    mandatory: bool = False
    # values the layout uses for "unknown"; read as blank
    sentinels: tuple[float, ...] = ()


NOT_AVAILABLE = "Not Available"

ZERO_BALANCE_CODES = frozenset({"01", "03", "06", "09", ""})
DEFAULT_CODES = frozenset({"03", "06", "09"})

KEY_FIELDS = (
    "credit_score",
    "original_loan_to_value",
    "original_debt_to_income_ratio",
    "original_interest_rate",
)


ORIGINATION_LAYOUT: tuple[FieldSpec, ...] = (
    FieldSpec(name="credit_score", kind=FieldKind.NUMERIC, sentinels=(9999,)),
    FieldSpec(name="first_payment_date", kind=FieldKind.DATE),
    FieldSpec(name="first_time_homebuyer_flag", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="maturity_date", kind=FieldKind.DATE),
    FieldSpec(name="metropolitan_division_or_msa", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="mortgage_insurance_percentage", kind=FieldKind.NUMERIC, sentinels=(999,)),
    FieldSpec(name="number_of_units", kind=FieldKind.NUMERIC, sentinels=(99,)),
    FieldSpec(name="occupancy_status", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="original_combined_loan_to_value", kind=FieldKind.NUMERIC, sentinels=(999,)),
    FieldSpec(name="original_debt_to_income_ratio", kind=FieldKind.NUMERIC, sentinels=(999,)),
    FieldSpec(name="original_upb", kind=FieldKind.NUMERIC),
    FieldSpec(name="original_loan_to_value", kind=FieldKind.NUMERIC, sentinels=(999,)),
    FieldSpec(name="original_interest_rate", kind=FieldKind.NUMERIC),
    FieldSpec(name="channel", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="prepayment_penalty_mortgage_flag", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="product_type", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="property_state", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="property_type", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="postal_code", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="loan_sequence_number", kind=FieldKind.KEY, mandatory=True),
    FieldSpec(name="loan_purpose", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="original_loan_term", kind=FieldKind.NUMERIC),
    FieldSpec(name="number_of_borrowers", kind=FieldKind.NUMERIC, sentinels=(99,)),
    FieldSpec(name="seller_name", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="servicer_name", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="super_conforming_flag", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="pre_harp_loan_sequence_number", kind=FieldKind.KEY),
)

PERFORMANCE_LAYOUT: tuple[FieldSpec, ...] = (
    FieldSpec(name="loan_sequence_number", kind=FieldKind.KEY, mandatory=True),
    FieldSpec(name="monthly_reporting_period", kind=FieldKind.DATE, mandatory=True),
    FieldSpec(name="current_actual_upb", kind=FieldKind.NUMERIC),
    FieldSpec(name="current_loan_delinquency_status", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="loan_age", kind=FieldKind.NUMERIC),
    FieldSpec(name="remaining_month_to_legal_maturity", kind=FieldKind.NUMERIC),
    FieldSpec(name="repurchase_flag", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="modification_flag", kind=FieldKind.CATEGORICAL),
    FieldSpec(name="zero_balance_code", kind=FieldKind.TARGET),
    FieldSpec(name="zero_balance_effective_date", kind=FieldKind.DATE),
    FieldSpec(name="current_interest_rate", kind=FieldKind.NUMERIC),
    FieldSpec(name="current_deferred_upb", kind=FieldKind.NUMERIC),
    FieldSpec(name="due_date_of_last_paid_installment", kind=FieldKind.DATE),
    FieldSpec(name="mi_recoveries", kind=FieldKind.NUMERIC),
    FieldSpec(name="net_sales_proceeds", kind=FieldKind.NUMERIC),
    FieldSpec(name="non_mi_recoveries", kind=FieldKind.NUMERIC),
    FieldSpec(name="expenses", kind=FieldKind.NUMERIC),
    FieldSpec(name="legal_costs", kind=FieldKind.NUMERIC),
    FieldSpec(name="maintenance_and_preservation_costs", kind=FieldKind.NUMERIC),
    FieldSpec(name="taxes_and_insurance", kind=FieldKind.NUMERIC),
    FieldSpec(name="miscellaneous_expenses", kind=FieldKind.NUMERIC),
    FieldSpec(name="actual_loss_calculation", kind=FieldKind.NUMERIC),
    FieldSpec(name="modification_cost", kind=FieldKind.NUMERIC),
)

FIELDS: dict[str, FieldSpec] = {
    **{field.name: field for field in ORIGINATION_LAYOUT},
    **{field.name: field for field in PERFORMANCE_LAYOUT},
}


def default_feature_names() -> list[str]:
    """
    Every numeric and categorical field of both layouts, origination first.
    Dates, identifiers and the zero-balance code are never features.
    """
    names = []
    for field in (*ORIGINATION_LAYOUT, *PERFORMANCE_LAYOUT):
        if field.kind in (FieldKind.NUMERIC, FieldKind.CATEGORICAL) and field.name not in names:
            names.append(field.name)
    return names


__all__ = [
    "FieldKind",
    "FieldSpec",
    "NOT_AVAILABLE",
    "ZERO_BALANCE_CODES",
    "DEFAULT_CODES",
    "KEY_FIELDS",
    "ORIGINATION_LAYOUT",
    "PERFORMANCE_LAYOUT",
    "FIELDS",
    "default_feature_names",
]
