"""
Synthetic vintage files in the origination / servicing layout.

Defaulting customers are drawn without replacement with probability
proportional to a logistic link on standardized credit score (negative),
LTV, DTI and interest rate, so lower scores and higher leverage default
more often. Exactly round(default_rate * total_rows) customers default;
each gets a terminal row with zero balance code 03, 06 or 09. Part of
the other customers prepay (code 01).
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.special import expit

from src.environs import ORIGINATION_FILE_TEMPLATE, PERFORMANCE_FILE_TEMPLATE
from src.loan_data import assign_regime
from src.loan_data.layout import FieldKind, ORIGINATION_LAYOUT, PERFORMANCE_LAYOUT

from .schemas import REGIME_DEFAULT_RATES, SyntheticSpec

logger = logging.getLogger(__name__)

BASE_RATES = {"Medium": 7.0, "High": 6.0, "Low": 4.0}
STATES = ("CA", "TX", "FL", "NY", "IL", "PA", "OH", "GA", "NC", "MI")
MSAS = ("12060", "16980", "19100", "26420", "31080", "33100", "35620", "47900")
SELLERS = ("Other sellers", "Wells Fargo Bank, N.A.", "U.S. Bank N.A.", "Quicken Loans Inc.")
SERVICERS = ("Other servicers", "Wells Fargo Bank, N.A.", "JPMorgan Chase Bank, N.A.")
COST_FIELDS = (
    "mi_recoveries",
    "net_sales_proceeds",
    "non_mi_recoveries",
    "expenses",
    "legal_costs",
    "maintenance_and_preservation_costs",
    "taxes_and_insurance",
    "miscellaneous_expenses",
)


def _with_blanks(rng: np.random.Generator, values: np.ndarray, share: float) -> list[str | None]:
    blank = rng.random(len(values)) < share
    return [None if hidden else str(value) for value, hidden in zip(values, blank)]


def _add_months(yyyymm: np.ndarray, months: np.ndarray) -> np.ndarray:
    index = (yyyymm // 100) * 12 + (yyyymm % 100 - 1) + months
    return (index // 12) * 100 + index % 12 + 1


def _origination(spec: SyntheticSpec, rng: np.random.Generator, regime: str) -> pd.DataFrame:
    n = spec.customer_count
    year = spec.vintage_year
    credit = np.clip(np.rint(rng.normal(740, 45, n)), 300, 850)
    ltv = np.clip(np.rint(rng.normal(75, 12, n)), 5, 105)
    cltv = np.clip(ltv + np.rint(np.maximum(rng.normal(2, 4, n), 0)), 5, 120)
    dti = np.clip(np.rint(rng.normal(34, 9, n)), 1, 65)
    rate = np.round((BASE_RATES[regime] + rng.normal(0, 0.5, n)) * 8) / 8
    term = rng.choice([360, 240, 180], size=n, p=[0.8, 0.05, 0.15]).astype(float)
    first_payment = year * 100 + rng.integers(2, 13, n)

    return pd.DataFrame({
        "credit_score": credit,
        "first_payment_date": first_payment.astype(float),
        "first_time_homebuyer_flag": _with_blanks(rng, rng.choice(["Y", "N"], n, p=[0.15, 0.85]), 0.02),
        "maturity_date": _add_months(first_payment, term.astype(int) - 1).astype(float),
        "metropolitan_division_or_msa": _with_blanks(rng, rng.choice(MSAS, n), 0.05),
        "mortgage_insurance_percentage": np.where(ltv > 80, rng.choice([6, 12, 25, 30], n), 0).astype(float),
        "number_of_units": rng.choice([1, 2, 3, 4], n, p=[0.95, 0.03, 0.01, 0.01]).astype(float),
        "occupancy_status": [str(v) for v in rng.choice(["P", "I", "S"], n, p=[0.9, 0.07, 0.03])],
        "original_combined_loan_to_value": cltv,
        "original_debt_to_income_ratio": dti,
        "original_upb": np.round(rng.lognormal(12.1, 0.45, n) / 1000) * 1000,
        "original_loan_to_value": ltv,
        "original_interest_rate": rate,
        "channel": [str(v) for v in rng.choice(["R", "B", "C", "T"], n, p=[0.5, 0.2, 0.25, 0.05])],
        "prepayment_penalty_mortgage_flag": ["N"] * n,
        "product_type": ["FRM"] * n,
        "property_state": [str(v) for v in rng.choice(STATES, n)],
        "property_type": [str(v) for v in rng.choice(["SF", "PU", "CO", "MH"], n, p=[0.7, 0.18, 0.1, 0.02])],
        "postal_code": [f"{v}00" for v in rng.integers(100, 1000, n)],
        "loan_sequence_number": [f"F{year % 100:02d}Q{1 + i % 4}{i:07d}" for i in range(n)],
        "loan_purpose": [str(v) for v in rng.choice(["P", "C", "N"], n, p=[0.45, 0.25, 0.3])],
        "original_loan_term": term,
        "number_of_borrowers": rng.choice([1, 2], n, p=[0.45, 0.55]).astype(float),
        "seller_name": [str(v) for v in rng.choice(SELLERS, n)],
        "servicer_name": [str(v) for v in rng.choice(SERVICERS, n)],
        "super_conforming_flag": _with_blanks(rng, np.array(["Y"] * n), 0.97),
        "pre_harp_loan_sequence_number": [None] * n,
    })


def _default_propensity(origination: pd.DataFrame, spec: SyntheticSpec) -> np.ndarray:
    columns = ("credit_score", "original_loan_to_value", "original_debt_to_income_ratio", "original_interest_rate")
    signs = (-1.0, 1.0, 1.0, 1.0)
    link = np.zeros(len(origination))
    for column, sign in list(zip(columns, signs))[:spec.feature_count]:
        values = origination[column].to_numpy()
        spread = values.std() or 1.0
        link += sign * (values - values.mean()) / spread
    return expit(spec.signal * link - 3.0)


def _performance(
    origination: pd.DataFrame,
    row_counts: np.ndarray,
    defaulters: np.ndarray,
    prepaid: np.ndarray,
    rng: np.random.Generator,
) -> pd.DataFrame:
    customer = np.repeat(np.arange(len(origination)), row_counts)
    age = np.concatenate([np.arange(count) for count in row_counts]).astype(float)
    terminal = np.r_[np.cumsum(row_counts) - 1]
    is_last = np.zeros(len(customer), dtype=bool)
    is_last[terminal] = True

    first_payment = origination["first_payment_date"].to_numpy(dtype=np.int64)[customer]
    period = _add_months(first_payment, age.astype(np.int64))
    term = origination["original_loan_term"].to_numpy()[customer]
    upb = origination["original_upb"].to_numpy()[customer]
    rate = origination["original_interest_rate"].to_numpy()[customer]

    defaulted_row = is_last & np.isin(customer, defaulters)
    prepaid_row = is_last & np.isin(customer, prepaid)
    n = len(customer)

    delinquency = np.where(rng.random(n) < 0.03, rng.choice(["1", "2"], n), "0").astype(object)
    late = defaulted_row & (rng.random(n) < 0.6)
    delinquency[late] = rng.choice(["3", "6", "RA"], n)[late]

    codes = np.full(n, "", dtype=object)
    codes[defaulted_row] = rng.choice(["03", "06", "09"], n)[defaulted_row]
    codes[prepaid_row] = "01"
    closing = defaulted_row | prepaid_row

    frame = pd.DataFrame({
        "loan_sequence_number": origination["loan_sequence_number"].to_numpy()[customer],
        "monthly_reporting_period": period.astype(float),
        "current_actual_upb": np.where(closing, 0.0, np.round(upb * (1 - age / term), 2)),
        "current_loan_delinquency_status": delinquency,
        "loan_age": age,
        "remaining_month_to_legal_maturity": term - age,
        "repurchase_flag": np.where(closing, "N", None),
        "modification_flag": np.where(defaulted_row & (rng.random(n) < 0.2), "Y", None),
        "zero_balance_code": codes,
        "zero_balance_effective_date": np.where(closing, period.astype(float), np.nan),
        "current_interest_rate": rate,
        "current_deferred_upb": np.zeros(n),
        "due_date_of_last_paid_installment": np.where(
            defaulted_row, _add_months(period, np.full(n, -4)).astype(float), np.nan,
        ),
    })
    # loss detail is only reported for part of the terminated defaults
    reported = defaulted_row & (rng.random(n) < 0.3)
    for field in COST_FIELDS:
        amounts = np.round(rng.uniform(0.0, 0.05, n) * upb, 2)
        frame[field] = np.where(reported, amounts, np.nan)
    frame["actual_loss_calculation"] = np.where(reported, -np.round(rng.uniform(0.05, 0.4, n) * upb, 2), np.nan)
    frame["modification_cost"] = np.nan
    return frame[[field.name for field in PERFORMANCE_LAYOUT]]


def build_synthetic(spec: SyntheticSpec) -> tuple[pd.DataFrame, pd.DataFrame]:
    """
    Origination and performance frames, typed as `parse_vintage` reads them
    """
    rng = np.random.default_rng(spec.seed)
    regime = assign_regime(spec.vintage_year)
    rate = spec.default_rate if spec.default_rate is not None else REGIME_DEFAULT_RATES[regime]

    origination = _origination(spec, rng, regime.value)
    row_counts = np.maximum(rng.poisson(spec.rows_per_customer, spec.customer_count), 1)
    n_defaults = min(int(np.floor(rate * row_counts.sum() + 0.5)), spec.customer_count)

    propensity = _default_propensity(origination, spec)
    defaulters = rng.choice(spec.customer_count, size=n_defaults, replace=False, p=propensity / propensity.sum())
    others = np.setdiff1d(np.arange(spec.customer_count), defaulters)
    prepaid = others[rng.random(len(others)) < 0.3]

    performance = _performance(origination, row_counts, defaulters, prepaid, rng)
    logger.info(
        "Generated vintage %d: %d customers, %d rows, %d defaulting customers",
        spec.vintage_year, spec.customer_count, len(performance), n_defaults,
    )
    return origination[[field.name for field in ORIGINATION_LAYOUT]], performance


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    if isinstance(value, float):
        return str(int(value)) if value.is_integer() else repr(value)
    return str(value)


def write_layout(frame: pd.DataFrame, layout, path: Path) -> Path:
    """
    Writes a typed frame as pipe-delimited lines in layout order
    """
    names = [field.name for field in layout]
    kinds = {field.name: field.kind for field in layout}
    columns = []
    for name in names:
        values = frame[name].tolist()
        if kinds[name] in (FieldKind.NUMERIC, FieldKind.DATE):
            values = [float(value) if value is not None else None for value in values]
        columns.append([_cell(value) for value in values])
    lines = ["|".join(row) for row in zip(*columns)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8", newline="\n")
    return path


def generate_synthetic(spec: SyntheticSpec, output_dir: Path) -> tuple[Path, Path]:
    """
    Writes `sample_orig_<year>.txt` and `sample_svcg_<year>.txt`
    """
    origination, performance = build_synthetic(spec)
    output_dir = Path(output_dir)
    return (
        write_layout(origination, ORIGINATION_LAYOUT, output_dir / ORIGINATION_FILE_TEMPLATE.format(year=spec.vintage_year)),
        write_layout(performance, PERFORMANCE_LAYOUT, output_dir / PERFORMANCE_FILE_TEMPLATE.format(year=spec.vintage_year)),
    )
