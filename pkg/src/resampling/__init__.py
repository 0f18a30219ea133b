"""
__init__.py
"""

from .schemas import NeighborIndex, ResampleConfig
from .services import knn_minority, minority_label, smote

__all__ = [
    "NeighborIndex",
    "ResampleConfig",
    "knn_minority",
    "minority_label",
    "smote",
]
