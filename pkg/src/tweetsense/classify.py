"""Multinomial Naive Bayes, a one-vs-rest linear SVM trained by SGD, and
stratified k-fold grid search."""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .evaluation import evaluate

CLASSES = ("negative", "neutral", "positive")
PRIOR_MODES = ("empirical", "uniform", "custom")

DEFAULT_NB_GRID = {"alpha": [0.1, 0.5, 1.0], "prior_mode": ["empirical", "uniform"]}
DEFAULT_SVM_GRID = {"lam": [1e-4, 1e-3], "eta0": [0.01, 0.1], "epochs": [10, 50]}


class ClassifierError(ValueError):
    pass


class NegativeFeature(ClassifierError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"feature {index} has a negative value")


class NonFiniteFeature(ClassifierError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"feature {index} has a non-finite value")


class EmptyTrainingSet(ClassifierError):
    def __init__(self):
        super().__init__("empty training set")


class MissingClass(ClassifierError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"class {label!r} has no training examples but needs a non-zero prior")


class DimensionMismatch(ClassifierError):
    def __init__(self, expected, got):
        super().__init__(f"expected {expected} features, got {got}")


class FoldTooSmall(ClassifierError):
    def __init__(self, label, k):
        self.label = label
        super().__init__(f"class {label!r} has fewer than {k} examples, some fold would lack it")


def class_order(y, classes=None):
    """Classes in the fixed tie-break order; unknown labels follow, sorted."""
    if classes is not None:
        return tuple(classes)
    present = set(y)
    return tuple(c for c in CLASSES if c in present) + tuple(sorted(present - set(CLASSES)))


def _as_matrix(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    return X


def _logsumexp(a, axis=-1):
    m = np.max(a, axis=axis, keepdims=True)
    return (m + np.log(np.sum(np.exp(a - m), axis=axis, keepdims=True))).squeeze(axis)


@dataclass
class NBModel:
    classes: tuple
    log_prior: np.ndarray  # (K,)
    log_likelihood: np.ndarray  # (K, n)
    alpha: float
    prior_mode: str

    @property
    def n_features(self):
        return self.log_likelihood.shape[1]

    def joint_log(self, X):
        X = _as_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1])
        return X @ self.log_likelihood.T + self.log_prior

    def predict_proba(self, X):
        jl = self.joint_log(X)
        return np.exp(jl - _logsumexp(jl)[:, None])

    def predict(self, X):
        # argmax returns the first maximum, i.e. the earliest class in order
        return [self.classes[i] for i in np.argmax(self.joint_log(X), axis=1)]

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "log_prior": self.log_prior.tolist(),
            "log_likelihood": self.log_likelihood.tolist(),
            "alpha": self.alpha,
            "prior_mode": self.prior_mode,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["classes"]), np.array(d["log_prior"], dtype=float),
                   np.array(d["log_likelihood"], dtype=float).reshape(len(d["classes"]), -1),
                   float(d["alpha"]), d["prior_mode"])


def nb_train(X, y, alpha=1.0, prior_mode="empirical", classes=None, class_weights=None) -> NBModel:
    """Fit multinomial NB with additive smoothing.

    ``prior_mode`` is ``empirical`` (class frequencies), ``uniform`` or
    ``custom`` (``class_weights`` mapping class -> non-negative weight).
    """
    X = _as_matrix(X)
    y = list(y)
    if X.shape[0] == 0 or not y:
        raise EmptyTrainingSet()
    if X.shape[0] != len(y):
        raise ValueError(f"{X.shape[0]} rows but {len(y)} labels")
    neg = np.argwhere(X < 0)
    if len(neg):
        raise NegativeFeature(int(neg[:, 1].min()))
    if prior_mode not in PRIOR_MODES:
        raise ValueError(f"unknown prior_mode {prior_mode!r}")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")

    classes = class_order(y, classes)
    idx = {c: i for i, c in enumerate(classes)}
    onehot = np.zeros((len(y), len(classes)))
    for row, label in enumerate(y):
        if label not in idx:
            raise ValueError(f"label {label!r} not in classes {classes}")
        onehot[row, idx[label]] = 1.0
    class_counts = onehot.sum(axis=0)

    if prior_mode == "empirical":
        for c, n in zip(classes, class_counts):
            if n == 0:
                raise MissingClass(c)
        prior = class_counts / class_counts.sum()
    elif prior_mode == "uniform":
        prior = np.full(len(classes), 1.0 / len(classes))
    else:
        if not class_weights:
            raise ValueError("prior_mode='custom' needs class_weights")
        w = np.array([float(class_weights.get(c, 0.0)) for c in classes])
        for c, v in zip(classes, w):
            if v <= 0:
                raise MissingClass(c)
        prior = w / w.sum()

    feature_totals = onehot.T @ X + alpha  # (K, n)
    n = X.shape[1]
    denom = feature_totals.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore"):
        log_likelihood = np.log(feature_totals) - np.log(denom) if n else np.zeros((len(classes), 0))
    return NBModel(classes, np.log(prior), log_likelihood, float(alpha), prior_mode)


def nb_predict(m: NBModel, x):
    """Label and posterior (in ``m.classes`` order) for one feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("nb_predict takes a single vector")
    post = m.predict_proba(x)[0]
    return m.predict(x)[0], post


@dataclass
class SVMModel:
    classes: tuple
    weights: np.ndarray  # (K, n)
    bias: np.ndarray  # (K,)
    hyper: dict = field(default_factory=dict)

    @property
    def n_features(self):
        return self.weights.shape[1]

    def decision_function(self, X):
        X = _as_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1])
        return X @ self.weights.T + self.bias

    def predict(self, X):
        return [self.classes[i] for i in np.argmax(self.decision_function(X), axis=1)]

    def to_dict(self):
        return {"classes": list(self.classes), "weights": self.weights.tolist(),
                "bias": self.bias.tolist(), "hyper": dict(self.hyper)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["classes"]), np.array(d["weights"], dtype=float).reshape(len(d["classes"]), -1),
                   np.array(d["bias"], dtype=float), dict(d["hyper"]))


def svm_train(X, y, lam=1e-4, eta0=0.1, epochs=10, seed=42, classes=None) -> SVMModel:
    """One-vs-rest hinge loss with L2 penalty, one SGD step per sample.

    The step size decays as eta0 / (1 + eta0 * lam * t) with t counting
    updates; samples are reshuffled every epoch from ``seed``.
    """
    X = _as_matrix(X)
    y = list(y)
    if X.shape[0] == 0:
        raise EmptyTrainingSet()
    bad = np.argwhere(~np.isfinite(X))
    if len(bad):
        raise NonFiniteFeature(int(bad[:, 1].min()))
    classes = class_order(y, classes)
    idx = {c: i for i, c in enumerate(classes)}
    # +1 for the row's class, -1 for the rest
    target = -np.ones((len(y), len(classes)))
    for row, label in enumerate(y):
        target[row, idx[label]] = 1.0

    W = np.zeros((len(classes), X.shape[1]))
    b = np.zeros(len(classes))
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(int(epochs)):
        for i in rng.permutation(len(y)):
            eta = eta0 / (1.0 + eta0 * lam * t)
            x = X[i]
            margins = target[i] * (W @ x + b)
            W *= max(0.0, 1.0 - eta * lam)
            active = margins < 1.0
            if active.any():
                W[active] += eta * np.outer(target[i, active], x)
                b[active] += eta * target[i, active]
            t += 1
    hyper = {"lam": lam, "eta0": eta0, "epochs": int(epochs), "seed": seed}
    return SVMModel(classes, W, b, hyper)


def svm_predict(m: SVMModel, x):
    return m.predict(np.asarray(x, dtype=float))[0]


def stratified_folds(y, k, seed=42):
    """Assign each sample to one of ``k`` folds, dealing every class round-robin
    after a seeded shuffle. Returns a list of k index arrays."""
    if k < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    offset = 0
    y = list(y)
    for c in class_order(y):
        members = np.array([i for i, label in enumerate(y) if label == c])
        members = members[rng.permutation(len(members))]
        for j, i in enumerate(members):
            folds[(offset + j) % k].append(int(i))
        # continue dealing where the previous class stopped so fold sizes stay even
        offset = (offset + len(members)) % k
    return [np.array(sorted(f), dtype=int) for f in folds]


def _fit(model_kind, X, y, params, classes, seed):
    if model_kind == "nb":
        return nb_train(X, y, classes=classes, **params)
    if model_kind == "svm":
        return svm_train(X, y, classes=classes, seed=seed, **params)
    raise ValueError(f"unknown model kind {model_kind!r}")


@dataclass
class GridSearchResult:
    best_params: dict
    best_score: float
    table: list  # [(params, mean macro-F1)] in grid order
    seed: int
    model_kind: str = "nb"
    model: object = None

    def to_json(self):
        payload = {
            "model_kind": self.model_kind,
            "seed": self.seed,
            "best_params": self.best_params,
            "best_score": self.best_score,
            "table": [{"params": p, "score": s} for p, s in self.table],
        }
        return json.dumps(payload, sort_keys=True)


def expand_grid(space):
    keys = list(space)
    return [dict(zip(keys, values)) for values in itertools.product(*(space[k] for k in keys))]


def cross_val_score(model_kind, params, X, y, folds, classes, seed=42):
    X = _as_matrix(X)
    y = np.asarray(list(y), dtype=object)
    scores = []
    for test_idx in folds:
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        model = _fit(model_kind, X[mask], list(y[mask]), params, classes, seed)
        report = evaluate(model.predict(X[test_idx]), list(y[test_idx]), classes=classes)
        scores.append(report.macro_avg["f1"])
    return float(np.mean(scores))


def grid_search(space, X, y, k=5, seed=42, model_kind="nb") -> GridSearchResult:
    """Exhaustive search scored by mean macro-F1 over stratified k folds.

    Ties keep the earliest grid point. The winning parameters are refit on all
    of ``X`` and returned as ``result.model``.
    """
    grid = expand_grid(space)
    if not grid:
        raise ValueError("empty grid")
    y = list(y)
    classes = class_order(y)
    counts = {c: y.count(c) for c in classes}
    for c in classes:
        if counts[c] < k:
            raise FoldTooSmall(c, k)
    folds = stratified_folds(y, k, seed)
    table = [(params, cross_val_score(model_kind, params, X, y, folds, classes, seed)) for params in grid]
    best_params, best_score = table[0]
    for params, score in table[1:]:
        if score > best_score:
            best_params, best_score = params, score
    model = _fit(model_kind, X, y, best_params, classes, seed)
    return GridSearchResult(dict(best_params), best_score, table, seed, model_kind, model)
