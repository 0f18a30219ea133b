from pathlib import Path

import numpy as np
import pytest

from src.bench import ExperimentConfig, SyntheticSpec, generate_synthetic
from src.loan_data import Dataset
from src.seeds import derive_seed

SYNTHETIC_YEARS = (2003, 2008)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running directional reproduction checks")


@pytest.fixture
def anyio_backend():
    return "asyncio"


def make_dataset(X, y, groups=None, categorical=None, **fields) -> Dataset:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(y, dtype=np.int64)
    return Dataset(
        feature_names=tuple(f"x{i}" for i in range(X.shape[1])),
        X=X,
        y=y,
        groups=np.asarray(groups if groups is not None else [f"c{i}" for i in range(len(y))], dtype=object),
        categorical=tuple(categorical or [False] * X.shape[1]),
        **fields,
    )


@pytest.fixture
def dataset_factory():
    return make_dataset


@pytest.fixture(scope="session")
def synthetic_data_dir(tmp_path_factory) -> Path:
    """
    Two small generated vintages, one Medium and one High
    """
    data_dir = tmp_path_factory.mktemp("vintages")
    for year in SYNTHETIC_YEARS:
        generate_synthetic(
            SyntheticSpec(
                vintage_year=year,
                customer_count=300,
                rows_per_customer=10,
                default_rate=0.01,
                seed=derive_seed(7, "synthetic", year),
            ),
            data_dir,
        )
    return data_dir


@pytest.fixture
def small_config(synthetic_data_dir, tmp_path):
    """
    Builds a quick experiment config over the generated vintages
    """
    def build(**updates) -> ExperimentConfig:
        document = {
            "data_dir": synthetic_data_dir,
            "output_dir": tmp_path / "run",
            "vintages": [2003],
            "customer_sample": 300,
            "models": [{"kind": "DT", "hyper_params": {"max_depth": 4}}, {"kind": "LR"}],
            "feature_selection": {"enabled": False},
            "workers": 2,
            "seed": 11,
        }
        document.update(updates)
        return ExperimentConfig.model_validate(document)
    return build
