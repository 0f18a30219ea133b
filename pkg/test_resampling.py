import numpy as np
import pytest

from src.exceptions import ResamplingError
from src.resampling import ResampleConfig, knn_minority, minority_label, smote

MAJORITY = [[10.0, 10.0], [11.0, 10.0], [10.0, 11.0], [11.0, 11.0]]


def test_minority_label():
    assert minority_label(np.array([0, 0, 1])) == 1
    assert minority_label(np.array([1, 1, 0])) == 0
    assert minority_label(np.array([0, 1])) == 1


def test_knn_on_a_line(dataset_factory):
    data = dataset_factory([[0.0, 0.0], [1.0, 0.0], [5.0, 0.0], *MAJORITY], [1, 1, 1, 0, 0, 0, 0])
    index = knn_minority(data, k=1, standardize=False)
    assert index.minority_label == 1
    assert index.neighbor_rows(0).tolist() == [1]
    assert index.neighbor_rows(1).tolist() == [0]
    assert index.neighbor_rows(2).tolist() == [1]
    assert index.distances[2, 0] == pytest.approx(4.0)


def test_knn_identical_points(dataset_factory):
    data = dataset_factory([[2.0, 2.0], [2.0, 2.0], *MAJORITY], [1, 1, 0, 0, 0, 0])
    index = knn_minority(data, k=1, standardize=False)
    assert index.neighbor_rows(0).tolist() == [1]
    assert index.neighbor_rows(1).tolist() == [0]
    assert index.distances.ravel().tolist() == [0.0, 0.0]


def test_knn_clamps_k(dataset_factory):
    data = dataset_factory([[0.0, 0.0], [1.0, 0.0], [5.0, 0.0], *MAJORITY], [1, 1, 1, 0, 0, 0, 0])
    assert knn_minority(data, k=3).k == 2


def test_smote_needs_two_minority_rows(dataset_factory):
    data = dataset_factory([[0.0, 0.0], *MAJORITY], [1, 0, 0, 0, 0])
    with pytest.raises(ResamplingError):
        smote(data, ResampleConfig())


def test_smote_refuses_holdout(dataset_factory):
    data = dataset_factory([[0.0, 0.0], [1.0, 1.0], *MAJORITY], [1, 1, 0, 0, 0, 0], holdout=True)
    with pytest.raises(ResamplingError, match="holdout"):
        smote(data, ResampleConfig())


def test_smote_two_points_lie_on_the_segment(dataset_factory):
    data = dataset_factory([[0.0, 0.0], [1.0, 1.0], *MAJORITY], [1, 1, 0, 0, 0, 0])
    resampled = smote(data, ResampleConfig(k=1, seed=4, standardize=False))
    synthetic = resampled.X[data.n_rows:]
    assert len(synthetic) == 2
    # every synthetic point sits on the diagonal between the two minority points
    assert np.allclose(synthetic[:, 0], synthetic[:, 1])
    assert ((synthetic >= 0.0) & (synthetic <= 1.0)).all()
    provenance = resampled.provenance
    for row in provenance.itertuples(index=False):
        expected = data.X[row.source_row] + row.u * (data.X[row.neighbor_row] - data.X[row.source_row])
        assert np.allclose(resampled.X[row.row], expected)


def test_smote_geometry_on_random_sets(dataset_factory):
    rng = np.random.default_rng(2024)
    generated = 0
    while generated < 1000:
        n_minority = int(rng.integers(2, 60))
        n_majority = int(rng.integers(n_minority + 1, 200))
        d = int(rng.integers(1, 11))
        X = rng.normal(size=(n_minority + n_majority, d))
        y = np.r_[np.ones(n_minority, dtype=int), np.zeros(n_majority, dtype=int)]
        data = dataset_factory(X, y)
        resampled = smote(data, ResampleConfig(k=5, seed=int(rng.integers(1 << 30))))

        provenance = resampled.provenance
        source = data.X[provenance["source_row"].to_numpy()]
        neighbor = data.X[provenance["neighbor_row"].to_numpy()]
        u = provenance["u"].to_numpy()
        synthetic = resampled.X[provenance["row"].to_numpy()]

        assert ((u >= 0.0) & (u <= 1.0)).all()
        assert (data.y[provenance["source_row"]] == 1).all()
        assert (data.y[provenance["neighbor_row"]] == 1).all()
        error = np.abs(synthetic - (source + u[:, None] * (neighbor - source)))
        scale = np.maximum(np.abs(synthetic), 1.0)
        assert (error / scale <= 1e-9).all()
        generated += len(provenance)


def test_smote_balances_one_percent_minority(dataset_factory):
    rng = np.random.default_rng(5)
    y = np.r_[np.ones(10, dtype=int), np.zeros(990, dtype=int)]
    data = dataset_factory(rng.normal(size=(1000, 3)), y)
    resampled = smote(data, ResampleConfig(target_ratio=1.0, seed=1))
    minority = int(np.sum(resampled.y == 1))
    majority = int(np.sum(resampled.y == 0))
    assert abs(minority - majority) <= 1
    assert majority == 990
    assert len(resampled.provenance) == minority - 10


def test_smote_noop_when_ratio_reached(dataset_factory):
    data = dataset_factory([[0.0], [1.0], [2.0], [3.0]], [1, 1, 0, 0])
    assert smote(data, ResampleConfig(target_ratio=0.5)) is data


def test_smote_rounds_categorical_codes(dataset_factory):
    X = [[1.0, 0.0], [4.0, 1.0], [2.0, 3.0], *MAJORITY * 3]
    y = [1, 1, 1] + [0] * 12
    data = dataset_factory(X, y, categorical=[True, False])
    resampled = smote(data, ResampleConfig(seed=9))
    codes = resampled.X[data.n_rows:, 0]
    assert np.array_equal(codes, np.rint(codes))


def test_smote_is_deterministic(dataset_factory):
    rng = np.random.default_rng(8)
    data = dataset_factory(rng.normal(size=(60, 2)), np.r_[np.ones(6, dtype=int), np.zeros(54, dtype=int)])
    first = smote(data, ResampleConfig(seed=3))
    second = smote(data, ResampleConfig(seed=3))
    assert first.checksum() == second.checksum()
    assert first.without_provenance().provenance is None


def test_smote_keeps_majority_rows_exactly(dataset_factory):
    rng = np.random.default_rng(17)
    X = rng.normal(size=(80, 3))
    y = np.r_[np.ones(7, dtype=int), np.zeros(73, dtype=int)]
    order = rng.permutation(80)
    data = dataset_factory(X[order], y[order])
    resampled = smote(data, ResampleConfig(seed=2))

    def sorted_rows(rows):
        return rows[np.lexsort(rows.T[::-1])]

    assert np.array_equal(sorted_rows(resampled.X[resampled.y == 0]), sorted_rows(data.X[data.y == 0]))
    assert np.array_equal(resampled.X[: data.n_rows], data.X)
