import numpy as np
import pytest
from sklearn.naive_bayes import GaussianNB

from src.exceptions import CapabilityError, ModelError
from src.models import (
    MODEL_ORDER,
    ABParams,
    ANNParams,
    ClassifierSpec,
    GBParams,
    LRParams,
    ModelKind,
    ModelService,
    RFParams,
    SVMParams,
    approximations,
    kmeans,
    load_model,
    rough_kmeans_fit,
    rough_predict,
)
from src.models.boosting import AdaBoostClassifier, GradientBoostingClassifier
from src.models.linear import LinearSVM, LogisticRegression
from src.models.neural import MultilayerPerceptron
from src.models.persistence import save_model
from src.models.rough import cluster_labels
from src.models.trees import RandomForestClassifier, Tree


@pytest.fixture
def blobs(dataset_factory):
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(-4.0, 0.5, size=(40, 2)), rng.normal(4.0, 0.5, size=(40, 2))])
    y = np.r_[np.zeros(40, dtype=int), np.ones(40, dtype=int)]
    return dataset_factory(X, y)


@pytest.fixture
def noisy(dataset_factory):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(120, 3))
    y = ((X[:, 0] + 0.8 * rng.normal(size=120)) > 0).astype(int)
    return dataset_factory(X, y)


def test_decision_tree_memorizes_xor(dataset_factory):
    data = dataset_factory([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 1, 1, 0])
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.DT), data)
    assert ModelService.predict(model, data.X).tolist() == [0, 1, 1, 0]


def test_naive_bayes_matches_gaussian_posterior(blobs):
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.NB), blobs)
    assert ModelService.predict(model, np.array([[-4.0, -4.0], [4.0, 4.0]])).tolist() == [0, 1]

    oracle = GaussianNB().fit(blobs.X, blobs.y)
    points = np.array([[-0.3, 0.1], [0.2, 0.4], [0.0, 0.0], [1.0, -0.5]])
    assert np.allclose(ModelService.score(model, points), oracle.predict_proba(points)[:, 1], rtol=1e-6, atol=1e-9)


def test_naive_bayes_categorical_codes(dataset_factory):
    X = [[0, 1.0], [0, 1.2], [1, 0.9], [2, 3.0], [2, 3.3], [2, 2.9]]
    data = dataset_factory(X, [0, 0, 0, 1, 1, 1], categorical=[True, False])
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.NB), data)
    scores = ModelService.score(model, np.array([[2, 3.1], [0, 1.1], [7, 3.1]]))
    assert scores[0] > 0.5 > scores[1]
    assert 0.0 <= scores[2] <= 1.0


def test_quadratic_discriminant_separates_blobs(blobs):
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.MDA), blobs)
    assert (ModelService.predict(model, blobs.X) == blobs.y).all()


def test_gradient_boosting_single_stump_is_best_stump(noisy):
    model = GradientBoostingClassifier(GBParams(n_estimators=1, learning_rate=1.0, max_depth=1)).fit(noisy.X, noisy.y)

    y = noisy.y.astype(float)
    best_sse, oracle = np.inf, None
    for f in range(noisy.X.shape[1]):
        for t in np.unique(noisy.X[:, f])[:-1]:
            left = noisy.X[:, f] <= t
            prediction = np.where(left, y[left].mean(), y[~left].mean())
            sse = float(((y - prediction) ** 2).sum())
            if sse < best_sse - 1e-12:
                best_sse, oracle = sse, prediction
    assert np.allclose(model.raw_score(noisy.X), oracle)


def test_gradient_boosting_loss_never_increases(noisy):
    model = GradientBoostingClassifier(GBParams(n_estimators=30, learning_rate=0.3)).fit(noisy.X, noisy.y)
    assert np.all(np.diff(model.loss_history_) <= 1e-12)


def test_adaboost_reweighted_error_is_one_half(noisy):
    model = AdaBoostClassifier(ABParams(n_estimators=15, learning_rate=1.0, max_depth=1)).fit(noisy.X, noisy.y)
    assert len(model.reweighted_errors_) > 0
    assert np.allclose(model.reweighted_errors_, 0.5, atol=1e-9)
    scores = model.score(noisy.X)
    assert ((scores >= 0.0) & (scores <= 1.0)).all()


def test_linear_svm_margin_on_separable_data(blobs):
    model = LinearSVM(SVMParams(l2=0.0, tol=0.0, max_iter=5000)).fit(blobs.X, blobs.y)
    signs = 2.0 * blobs.y - 1.0
    assert model.converged_
    assert (signs * model.decision_function(blobs.X) >= 1.0 - 1e-6).all()


def test_rbf_svm_scores(blobs):
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.SVM, hyper_params={"kernel": "rbf", "n_components": 50}), blobs)
    assert (ModelService.predict(model, blobs.X) == blobs.y).mean() > 0.9


def test_mlp_gradients_match_central_differences():
    rng = np.random.default_rng(3)
    Z = rng.normal(size=(12, 4))
    y = rng.integers(0, 2, size=12)
    net = MultilayerPerceptron(ANNParams(hidden_layers=2, hidden_units=5, l2=0.01))
    net.initialize(4, rng)
    _, grad_W, grad_b = net.loss_and_gradients(Z, y)

    h = 1e-6
    for params, grads in ((net.weights_, grad_W), (net.biases_, grad_b)):
        for array, grad in zip(params, grads):
            numeric = np.zeros_like(array)
            for index in np.ndindex(array.shape):
                original = array[index]
                array[index] = original + h
                up = net.loss_and_gradients(Z, y)[0]
                array[index] = original - h
                down = net.loss_and_gradients(Z, y)[0]
                array[index] = original
                numeric[index] = (up - down) / (2 * h)
            assert np.allclose(grad, numeric, rtol=1e-5, atol=1e-8)


def test_mlp_learns_blobs(blobs):
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.ANN, hyper_params={"epochs": 200, "learning_rate": 0.1}), blobs)
    assert (ModelService.predict(model, blobs.X) == blobs.y).all()


def test_logistic_regression_without_iterations_scores_one_half(blobs):
    model = LogisticRegression(LRParams(max_iter=0)).fit(blobs.X, blobs.y)
    assert np.allclose(model.score(blobs.X), 0.5)
    assert not model.converged_


def test_random_forest_score_is_vote_fraction(blobs):
    forest = RandomForestClassifier(RFParams(n_estimators=10)).fit(blobs.X, blobs.y)
    X = blobs.X[:3]
    yes = Tree().fit(X, np.ones(3))
    no = Tree().fit(X, np.zeros(3))
    forest.trees_ = [yes] * 7 + [no] * 3
    assert np.allclose(forest.score(X), 0.7)


def test_forests_learn_blobs(blobs):
    for kind in (ModelKind.RF, ModelKind.ET):
        model = ModelService.fit(ClassifierSpec(kind=kind, hyper_params={"n_estimators": 15}), blobs)
        assert (ModelService.predict(model, blobs.X) == blobs.y).all()


def test_rough_kmeans_with_zero_epsilon_is_kmeans(noisy):
    model = rough_kmeans_fit(noisy.X, noisy.y, k=3, epsilon=0.0, seed=5)
    _, assignment = kmeans(noisy.X, 3, seed=5)
    assert np.array_equal(model.lower.argmax(axis=1), assignment)
    assert model.lower.sum(axis=1).tolist() == [1] * len(noisy.y)


def test_rough_kmeans_on_blobs(blobs):
    model = rough_kmeans_fit(blobs.X, blobs.y, k=2, epsilon=0.1, seed=0)
    assert model.lower.sum(axis=1).tolist() == [1] * blobs.n_rows
    assert np.allclose(np.sort(model.centers[:, 0]), [blobs.X[:40, 0].mean(), blobs.X[40:, 0].mean()])
    assert (rough_predict(model, blobs.X) == blobs.y).all()
    assert rough_predict(model, model.centers).tolist() == model.labels.tolist()


def test_equidistant_point_is_boundary():
    centers = np.array([[-1.0, 0.0], [1.0, 0.0]])
    lower, upper = approximations(np.array([[0.0, 0.0], [-1.0, 0.0]]), centers, epsilon=0.5)
    assert upper[0].tolist() == [True, True]
    assert not lower[0].any()
    assert lower[1].tolist() == [True, False]


def test_rough_set_classifier_has_no_score(blobs):
    model = ModelService.fit(ClassifierSpec(kind=ModelKind.RS), blobs)
    assert not model.score_capability
    with pytest.raises(CapabilityError):
        ModelService.score(model, blobs.X)
    assert (ModelService.predict(model, blobs.X) == blobs.y).all()


def test_genetic_forest_fits(noisy):
    spec = ClassifierSpec(
        kind=ModelKind.GA,
        hyper_params={"population_size": 6, "generations": 3, "fitness_estimators": 3, "n_estimators": 10},
        seed=2,
    )
    model = ModelService.fit(spec, noisy)
    assert model.estimator.mask_.any()
    assert ModelService.score(model, noisy.X).shape == (noisy.n_rows,)


def test_fit_rejects_single_class(dataset_factory):
    data = dataset_factory([[0.0], [1.0]], [0, 0])
    with pytest.raises(ModelError):
        ModelService.fit(ClassifierSpec(kind=ModelKind.LR), data)


def test_spec_rejects_unknown_hyper_parameter():
    with pytest.raises(ValueError):
        ClassifierSpec(kind=ModelKind.LR, hyper_params={"depth": 3})


@pytest.mark.parametrize("kind", MODEL_ORDER)
def test_saved_model_predicts_identically(kind, noisy, tmp_path):
    hyper_params = {
        ModelKind.RF: {"n_estimators": 5},
        ModelKind.ET: {"n_estimators": 5},
        ModelKind.GB: {"n_estimators": 5},
        ModelKind.AB: {"n_estimators": 5},
        ModelKind.ANN: {"epochs": 3},
        ModelKind.GA: {"population_size": 4, "generations": 2, "fitness_estimators": 2, "n_estimators": 5},
    }.get(kind, {})
    model = ModelService.fit(ClassifierSpec(kind=kind, hyper_params=hyper_params, seed=4), noisy)
    restored = load_model(save_model(model, tmp_path / f"{kind.value}.json"))

    assert restored.spec == model.spec
    assert restored.feature_names == model.feature_names
    assert np.array_equal(ModelService.predict(restored, noisy.X), ModelService.predict(model, noisy.X))
    if model.score_capability:
        assert np.array_equal(ModelService.score(restored, noisy.X), ModelService.score(model, noisy.X))


def test_load_model_rejects_foreign_document(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"format": "other"}', encoding="utf-8")
    with pytest.raises(ModelError):
        load_model(path)


def test_grid_search_counts_candidates(noisy):
    spec = ClassifierSpec(kind=ModelKind.ANN, hyper_params={"epochs": 2})
    result = ModelService.grid_search(spec, noisy, {"hidden_layers": [1, 2], "hidden_units": [8, 16]}, folds=3)
    assert len(result.results) == 4
    assert result.best_params["epochs"] == 2


def test_grid_search_single_point(noisy):
    spec = ClassifierSpec(kind=ModelKind.DT)
    result = ModelService.grid_search(spec, noisy, {"max_depth": [3]})
    assert result.best_params == {"max_depth": 3}


def test_grid_search_picks_perfect_recall(dataset_factory):
    x = np.r_[np.arange(45), np.arange(100, 115)].astype(float)
    data = dataset_factory(x, (x >= 100).astype(int))
    spec = ClassifierSpec(kind=ModelKind.DT)
    result = ModelService.grid_search(spec, data, {"min_samples_leaf": [30, 1]})
    assert result.best_params["min_samples_leaf"] == 1
    assert [recall for _, recall in result.results] == [0.0, 1.0]


def test_grid_search_rejects_empty_grid(noisy):
    with pytest.raises(ModelError):
        ModelService.grid_search(ClassifierSpec(kind=ModelKind.DT), noisy, {})


SCORE_PARAMS = {
    ModelKind.RF: {"n_estimators": 8},
    ModelKind.ET: {"n_estimators": 8},
    ModelKind.GB: {"n_estimators": 10},
    ModelKind.AB: {"n_estimators": 10},
    ModelKind.ANN: {"epochs": 5},
    ModelKind.GA: {"population_size": 4, "generations": 2, "fitness_estimators": 2, "n_estimators": 5},
}
SCORING_KINDS = [kind for kind in MODEL_ORDER if kind != ModelKind.RS]


@pytest.mark.parametrize("kind", SCORING_KINDS)
def test_predict_is_score_thresholded(kind, noisy):
    model = ModelService.fit(ClassifierSpec(kind=kind, hyper_params=SCORE_PARAMS.get(kind, {}), seed=6), noisy)
    X = np.vstack([noisy.X, np.random.default_rng(8).normal(size=(40, 3))])
    scores = ModelService.score(model, X)
    assert ((scores >= 0.0) & (scores <= 1.0)).all()
    assert np.array_equal(ModelService.predict(model, X), (scores >= 0.5).astype(np.int64))


@pytest.mark.parametrize("kind", MODEL_ORDER)
def test_seeded_fit_is_bit_identical(kind, noisy):
    spec = ClassifierSpec(kind=kind, hyper_params=SCORE_PARAMS.get(kind, {}), seed=13)
    first = ModelService.fit(spec, noisy)
    second = ModelService.fit(spec, noisy)
    assert np.array_equal(ModelService.predict(first, noisy.X), ModelService.predict(second, noisy.X))
    if first.score_capability:
        assert ModelService.score(first, noisy.X).tobytes() == ModelService.score(second, noisy.X).tobytes()


def test_random_forest_accuracy_varies_less_than_a_tree(dataset_factory):
    rng = np.random.default_rng(40)
    X_test = rng.normal(size=(400, 4))
    y_test = (X_test[:, 0] + X_test[:, 1] > 0).astype(int)

    accuracies = {ModelKind.DT: [], ModelKind.RF: []}
    for seed in range(20):
        draw = np.random.default_rng(seed)
        X = draw.normal(size=(150, 4))
        y = (X[:, 0] + X[:, 1] + draw.normal(scale=0.8, size=150) > 0).astype(int)
        train = dataset_factory(X, y)
        for kind, params in ((ModelKind.DT, {}), (ModelKind.RF, {"n_estimators": 50})):
            model = ModelService.fit(ClassifierSpec(kind=kind, hyper_params=params, seed=seed), train)
            accuracies[kind].append((ModelService.predict(model, X_test) == y_test).mean())
    assert np.var(accuracies[ModelKind.RF]) < np.var(accuracies[ModelKind.DT])


def test_cluster_without_lower_members_takes_upper_majority():
    lower = np.array([[True, False], [True, False], [False, False], [False, False], [False, False]])
    upper = np.array([[True, False], [True, False], [True, True], [False, True], [False, True]])
    y = np.array([0, 0, 1, 1, 0])
    assert cluster_labels(lower, upper, y).tolist() == [0, 1]


def test_cluster_label_ties_go_to_default():
    lower = np.array([[True, False], [True, False], [False, True], [False, True], [False, True]])
    y = np.array([0, 1, 0, 0, 1])
    assert cluster_labels(lower, lower.copy(), y).tolist() == [1, 0]


def test_empty_cluster_takes_overall_majority():
    lower = np.array([[True, False], [True, False], [False, False], [False, False], [False, False]])
    upper = lower.copy()
    assert cluster_labels(lower, upper, np.array([0, 0, 1, 1, 1])).tolist() == [0, 1]
