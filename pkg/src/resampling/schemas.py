"""
Pydantic schemas for SMOTE
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class ResampleConfig(BaseModel):
    """
    SMOTE parameters. A target ratio at or below the current
    minority/majority ratio makes `smote` a no-op.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    k: int = Field(default=5, ge=1)
    target_ratio: float = Field(default=1.0, gt=0.0, le=1.0)
    seed: int = 0
    standardize: bool = True
    dump_provenance: bool = False


class NeighborIndex(BaseModel):
    """
    k nearest minority neighbors of every minority row.

    `minority_rows[i]` is the dataset row of the i-th minority point;
    `neighbors[i]` lists positions into `minority_rows`, nearest first,
    ties by lower row index.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    minority_label: int
    minority_rows: np.ndarray
    neighbors: np.ndarray
    distances: np.ndarray

    @property
    def k(self) -> int:
        return int(self.neighbors.shape[1])

    def neighbor_rows(self, position: int) -> np.ndarray:
        """
        Dataset rows of the neighbors of the minority point at `position`
        """
        return self.minority_rows[self.neighbors[position]]
