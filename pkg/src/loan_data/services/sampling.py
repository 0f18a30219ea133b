"""
Customer-level stratified sampling
"""

import logging

import numpy as np
import pandas as pd

from src.exceptions import DataError

logger = logging.getLogger(__name__)


def allocate(customer_count: int, stratum_sizes: list[int]) -> list[int]:
    """
    Largest-remainder proportional allocation. Each stratum gets the floor
    or ceiling of its exact quota; leftover seats go to the largest
    remainders, earlier strata first on ties.
    """
    total = sum(stratum_sizes)
    if total == 0:
        return [0] * len(stratum_sizes)
    base = [customer_count * size // total for size in stratum_sizes]
    remainders = [customer_count * size % total for size in stratum_sizes]
    leftover = customer_count - sum(base)
    order = sorted(range(len(stratum_sizes)), key=lambda i: (-remainders[i], i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def customer_status(records: pd.DataFrame) -> pd.Series:
    """
    1 for customers with any defaulted row, indexed by sorted loan sequence number
    """
    return records.groupby("loan_sequence_number", sort=True)["defaulted"].max().astype(int)


def stratified_sample(records: pd.DataFrame, customer_count: int, seed: int) -> pd.DataFrame:
    """
    Samples `customer_count` customers keeping the population's
    defaulter/non-defaulter ratio; all rows of a sampled customer are kept
    in their original order.
    """
    if customer_count < 0:
        raise DataError("customer count must be non-negative")
    status = customer_status(records)
    available = len(status)
    if customer_count > available:
        raise DataError(f"requested {customer_count} customers but only {available} are available")
    if customer_count == 0:
        return records.iloc[0:0].copy()

    strata = [status.index[status == label].to_numpy() for label in (0, 1)]
    quotas = allocate(customer_count, [len(ids) for ids in strata])

    rng = np.random.default_rng(seed)
    chosen = np.concatenate([
        rng.choice(ids, size=quota, replace=False) for ids, quota in zip(strata, quotas)
    ])
    sampled = records.loc[records["loan_sequence_number"].isin(chosen)].reset_index(drop=True)

    logger.info(
        "Sampled %d of %d customers (%d defaulters), %d rows",
        customer_count, available, quotas[1], len(sampled),
    )
    return sampled
