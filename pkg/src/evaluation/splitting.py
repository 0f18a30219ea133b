"""
Customer-level train/holdout split
"""

import logging

import numpy as np
import pandas as pd

from src.exceptions import EvaluationError
from src.loan_data import Dataset

from .schemas import SplitPlan

logger = logging.getLogger(__name__)


def _holdout_count(size: int, fraction: float) -> int:
    return int(min(max(np.floor(fraction * size + 0.5), 1), size - 1))


def split(data: Dataset, plan: SplitPlan) -> tuple[Dataset, Dataset]:
    """
    Puts round(fraction * N) customers of each class stratum (a customer
    is positive when any of its rows defaulted) into the holdout, all of
    a customer's rows on the same side. The holdout comes back flagged
    so it can never be resampled.
    """
    status = pd.Series(data.y).groupby(pd.Series(data.groups)).max().sort_index()
    customers = status.index.to_numpy(dtype=object)
    labels = status.to_numpy()
    counts = [int(np.sum(labels == label)) for label in (0, 1)]
    if min(counts) < 2:
        raise EvaluationError(
            f"cannot stratify: {counts[1]} defaulting and {counts[0]} non-defaulting customer(s); "
            "each class needs at least 2"
        )

    rng = np.random.default_rng(plan.seed)
    if plan.stratified:
        chosen = [
            rng.choice(customers[labels == label], size=_holdout_count(counts[label], plan.holdout_fraction), replace=False)
            for label in (0, 1)
        ]
        held = np.concatenate(chosen)
    else:
        held = rng.choice(customers, size=_holdout_count(len(customers), plan.holdout_fraction), replace=False)

    in_holdout = np.isin(data.groups, held)
    train, holdout = data.subset(~in_holdout), data.subset(in_holdout, holdout=True)
    for name, part in (("training", train), ("holdout", holdout)):
        if len(np.unique(part.y)) < 2:
            raise EvaluationError(f"{name} side of the split holds a single class")
    logger.info(
        "Split vintage %s: %d training rows (%d positive), %d holdout rows (%d positive)",
        data.vintage_year, train.n_rows, train.positives, holdout.n_rows, holdout.positives,
    )
    return train, holdout
