"""
__init__.py
"""

from .layout import NOT_AVAILABLE, default_feature_names
from .schemas import (
    Dataset,
    Diagnostics,
    LoanRecord,
    OriginationRecord,
    ParsedVintage,
    PerformanceRecord,
    Regime,
    loan_records,
)
from .services import (
    Encoder,
    assign_regime,
    clean,
    encode,
    join_and_label,
    parse_vintage,
    parse_vintage_files,
    stratified_sample,
)

__all__ = [
    "NOT_AVAILABLE",
    "default_feature_names",
    "Dataset",
    "Diagnostics",
    "LoanRecord",
    "OriginationRecord",
    "ParsedVintage",
    "PerformanceRecord",
    "Regime",
    "loan_records",
    "Encoder",
    "assign_regime",
    "clean",
    "encode",
    "join_and_label",
    "parse_vintage",
    "parse_vintage_files",
    "stratified_sample",
]
