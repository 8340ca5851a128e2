import json
import math

import numpy as np
import pytest

from tweetsense.classify import (
    DimensionMismatch,
    EmptyTrainingSet,
    FoldTooSmall,
    MissingClass,
    NBModel,
    NegativeFeature,
    NonFiniteFeature,
    SVMModel,
    class_order,
    expand_grid,
    grid_search,
    nb_predict,
    nb_train,
    stratified_folds,
    svm_predict,
    svm_train,
)

from . import oracles


def random_instance(rng):
    n_classes = int(rng.integers(2, 4))
    classes = ("negative", "neutral", "positive")[:n_classes]
    n_feat = int(rng.integers(1, 5))
    n_rows = int(rng.integers(n_classes, 10))
    X = rng.integers(0, 6, size=(n_rows, n_feat)).tolist()
    y = list(classes) + [classes[int(i)] for i in rng.integers(0, n_classes, n_rows - n_classes)]
    x = rng.integers(0, 6, size=n_feat).tolist()
    alpha = float(rng.choice([0.5, 1.0]))
    return X, y, x, alpha, classes


def test_nb_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(50):
        X, y, x, alpha, classes = random_instance(rng)
        _, post = nb_predict(nb_train(X, y, alpha=alpha), x)
        assert np.allclose(post, oracles.nb_posterior(X, y, x, alpha, classes), atol=1e-9, rtol=0)


def test_nb_uniform_and_custom_priors():
    X = [[2, 0], [0, 2], [1, 1], [3, 0]]
    y = ["negative", "positive", "positive", "negative"]
    x = [1, 2]
    m = nb_train(X, y, prior_mode="uniform")
    want = oracles.nb_posterior(X, y, x, 1.0, ("negative", "positive"), {"negative": 0.5, "positive": 0.5})
    assert np.allclose(nb_predict(m, x)[1], want, atol=1e-12)
    m = nb_train(X, y, prior_mode="custom", class_weights={"negative": 3, "positive": 1})
    want = oracles.nb_posterior(X, y, x, 1.0, ("negative", "positive"), {"negative": 0.75, "positive": 0.25})
    assert np.allclose(nb_predict(m, x)[1], want, atol=1e-12)


def test_nb_posterior_sums_to_one_and_is_ordered():
    m = nb_train([[1, 0], [0, 1], [1, 1]], ["positive", "negative", "neutral"])
    assert m.classes == ("negative", "neutral", "positive")
    label, post = nb_predict(m, [5, 0])
    assert math.isclose(post.sum(), 1.0, abs_tol=1e-12)
    assert label == "positive"


def test_nb_tie_goes_to_first_class():
    m = nb_train([[1], [1]], ["positive", "negative"])
    assert nb_predict(m, [1])[0] == "negative"


def test_nb_duplicating_training_set_keeps_empirical_prior():
    # without smoothing the likelihoods are ratios of counts, so doubling
    # every row changes nothing
    X = [[2, 1], [1, 3], [1, 1]]
    y = ["negative", "positive", "negative"]
    a = nb_train(X, y, alpha=0.0)
    b = nb_train(X + X, y + y, alpha=0.0)
    assert np.allclose(a.log_prior, b.log_prior, atol=1e-12)
    assert np.allclose(a.log_likelihood, b.log_likelihood, atol=1e-12)


def test_nb_zero_feature_vector_gives_prior():
    m = nb_train([[1, 0], [0, 1], [0, 1]], ["negative", "positive", "positive"])
    assert np.allclose(nb_predict(m, [0, 0])[1], [1 / 3, 2 / 3])


def test_nb_errors():
    with pytest.raises(EmptyTrainingSet):
        nb_train(np.zeros((0, 2)), [])
    with pytest.raises(NegativeFeature) as exc:
        nb_train([[1, -1]], ["positive"])
    assert exc.value.index == 1
    with pytest.raises(MissingClass):
        nb_train([[1]], ["positive"], classes=("negative", "positive"))
    with pytest.raises(MissingClass):
        nb_train([[1]], ["positive"], prior_mode="custom", class_weights={"positive": 1},
                 classes=("negative", "positive"))
    m = nb_train([[1, 2]], ["positive"])
    with pytest.raises(DimensionMismatch):
        m.predict([[1, 2, 3]])


def test_nb_uniform_prior_allows_empty_class():
    m = nb_train([[1]], ["positive"], prior_mode="uniform", classes=("negative", "positive"))
    assert np.allclose(np.exp(m.log_prior), [0.5, 0.5])


def test_nb_round_trip():
    m = nb_train([[1, 2], [2, 0]], ["positive", "negative"], alpha=0.5)
    m2 = NBModel.from_dict(json.loads(json.dumps(m.to_dict())))
    assert m2.classes == m.classes
    assert np.array_equal(m2.log_likelihood, m.log_likelihood)


# -- SVM ----------------------------------------------------------------------


def separable(rng, n=60):
    X = np.vstack([rng.normal([3, 0], 0.3, (n, 2)), rng.normal([-3, 0], 0.3, (n, 2)), rng.normal([0, 3], 0.3, (n, 2))])
    y = ["positive"] * n + ["negative"] * n + ["neutral"] * n
    return X, y


def test_svm_separable_data():
    X, y = separable(np.random.default_rng(1))
    m = svm_train(X, y, lam=1e-4, eta0=0.1, epochs=20)
    assert m.predict(X) == y


def test_svm_deterministic_for_seed():
    X, y = separable(np.random.default_rng(2))
    a = svm_train(X, y, seed=7)
    b = svm_train(X, y, seed=7)
    assert np.array_equal(a.weights, b.weights) and np.array_equal(a.bias, b.bias)


def test_svm_large_lambda_shrinks_weights():
    X, y = separable(np.random.default_rng(3))
    small = svm_train(X, y, lam=1e-4, epochs=10)
    big = svm_train(X, y, lam=10.0, eta0=0.05, epochs=10)
    assert np.linalg.norm(big.weights) < np.linalg.norm(small.weights)


def test_svm_single_prediction_and_round_trip():
    X, y = separable(np.random.default_rng(4))
    m = svm_train(X, y)
    assert svm_predict(m, [3, 0]) == "positive"
    m2 = SVMModel.from_dict(json.loads(json.dumps(m.to_dict())))
    assert np.array_equal(m2.weights, m.weights)


def test_svm_rejects_non_finite():
    with pytest.raises(NonFiniteFeature) as exc:
        svm_train([[1.0, float("nan")]], ["positive"])
    assert exc.value.index == 1


# -- folds and grid search ------------------------------------------------------


def test_class_order():
    assert class_order(["positive", "negative"]) == ("negative", "positive")
    assert class_order(["zeta", "neutral"]) == ("neutral", "zeta")


def test_stratified_folds_partition_and_balance():
    y = ["negative"] * 23 + ["neutral"] * 11 + ["positive"] * 12
    folds = stratified_folds(y, 5, seed=3)
    flat = sorted(i for f in folds for i in f)
    assert flat == list(range(len(y)))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    for c in set(y):
        per = [sum(y[i] == c for i in f) for f in folds]
        assert max(per) - min(per) <= 1


def test_stratified_folds_seeded():
    y = ["a", "b"] * 10
    assert [f.tolist() for f in stratified_folds(y, 4, 1)] == [f.tolist() for f in stratified_folds(y, 4, 1)]


def test_expand_grid_order():
    assert expand_grid({"a": [1, 2], "b": ["x"]}) == [{"a": 1, "b": "x"}, {"a": 2, "b": "x"}]


def _grid_data():
    rng = np.random.default_rng(5)
    X = rng.integers(0, 4, size=(40, 5)).astype(float)
    y = ["negative" if r[0] > r[1] else "positive" for r in X]
    return X, y


def test_grid_search_deterministic_json():
    X, y = _grid_data()
    space = {"alpha": [0.1, 1.0], "prior_mode": ["empirical", "uniform"]}
    a = grid_search(space, X, y, k=4, seed=11)
    b = grid_search(space, X, y, k=4, seed=11)
    assert a.to_json() == b.to_json()
    assert len(a.table) == 4
    assert a.best_score == max(s for _, s in a.table)


def test_grid_search_tie_keeps_first():
    X, y = _grid_data()
    res = grid_search({"alpha": [1.0, 1.0]}, X, y, k=3)
    assert res.best_params == {"alpha": 1.0}
    assert res.table[0][1] == res.table[1][1]


def test_grid_search_svm():
    X, y = separable(np.random.default_rng(6), n=10)
    res = grid_search({"lam": [1e-4], "eta0": [0.1], "epochs": [5]}, X, y, k=3, model_kind="svm")
    assert isinstance(res.model, SVMModel)
    assert res.best_score > 0.9


def test_grid_search_fold_too_small():
    X = np.ones((6, 2))
    y = ["negative"] * 5 + ["positive"]
    with pytest.raises(FoldTooSmall) as exc:
        grid_search({"alpha": [1.0]}, X, y, k=3)
    assert exc.value.label == "positive"
