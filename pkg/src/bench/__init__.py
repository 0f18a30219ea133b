"""
__init__.py
"""

from .config import check_files, config_hash, load_config, vintage_paths
from .pipeline import RunResult, inspect_vintages, run
from .reporting import reports_from_frames, write_reports
from .schemas import REGIME_DEFAULT_RATES, ExperimentConfig, ManifestCell, RunManifest, SyntheticSpec
from .synthetic import build_synthetic, generate_synthetic

__all__ = [
    "check_files",
    "config_hash",
    "load_config",
    "vintage_paths",
    "RunResult",
    "inspect_vintages",
    "run",
    "reports_from_frames",
    "write_reports",
    "REGIME_DEFAULT_RATES",
    "ExperimentConfig",
    "ManifestCell",
    "RunManifest",
    "SyntheticSpec",
    "build_synthetic",
    "generate_synthetic",
]
