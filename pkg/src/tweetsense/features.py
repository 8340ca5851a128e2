"""Feature families f1-f9, tf-idf text model and the stacked tf-idf feature.

Families:

    f1  POS counts (noun, adj, adv, verb)
    f2  prior-polarity counts (strong_pos, strong_neg, weak_pos, weak_neg),
        negation-flipped
    f3  retweet flag, has-mention flag
    f4  positive / negative emoticon counts
    f5  URL sentence fractions (pos, neg, neu)
    f6  hashtag count
    f7  all-caps word count
    f8  out-of-fold class probabilities of a tf-idf classifier
    f9  user id (one-hot), together with the tweet target (one-hot)

Fractions (f5) and probabilities (f8) are scaled by 10 when flattened so they
weigh in next to the count features; multinomial NB accepts non-integer
non-negative values.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .classify import (
    CLASSES,
    ClassifierError,
    MissingClass,
    NBModel,
    SVMModel,
    nb_train,
    stratified_folds,
    svm_train,
)
from .corpus import polarity_bucket
from .url_context import UrlSentiment

FAMILIES = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9")
ALL_FEATURES = frozenset(FAMILIES)
FRACTION_SCALE = 10.0

_WIDTH = {"f1": 4, "f2": 4, "f3": 2, "f4": 2, "f5": 3, "f6": 1, "f7": 1, "f8": 3}
_NAMES = {
    "f1": ("noun", "adj", "adv", "verb"),
    "f2": ("strong_pos", "strong_neg", "weak_pos", "weak_neg"),
    "f3": ("is_retweet", "has_mention"),
    "f4": ("pos_emoticons", "neg_emoticons"),
    "f5": ("url_frac_pos", "url_frac_neg", "url_frac_neu"),
    "f6": ("hashtags",),
    "f7": ("capitalized",),
    "f8": tuple(f"tfidf_p_{c}" for c in CLASSES),
}


class EmptyCorpus(ValueError):
    def __init__(self):
        super().__init__("cannot fit tf-idf on an empty corpus")


class ClassMissingInFold(ClassifierError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"class {label!r} missing from the training part of a fold")


def parse_mask(spec):
    """``"f1,f2,f4"`` -> frozenset; empty or ``"all"`` means every family."""
    if spec is None:
        return ALL_FEATURES
    if isinstance(spec, str):
        spec = [s.strip().lower() for s in spec.split(",") if s.strip()]
        if spec in ([], ["all"]):
            return ALL_FEATURES
    mask = frozenset(spec)
    unknown = mask - ALL_FEATURES
    if unknown:
        raise ValueError(f"unknown feature families: {sorted(unknown)}")
    if not mask:
        raise ValueError("empty feature mask")
    return mask


def mask_label(mask):
    return ",".join(f for f in FAMILIES if f in mask)


@dataclass
class CategoricalEncoder:
    """Dense indices for users and targets; index 0 is reserved for unknowns."""

    user_index: dict = field(default_factory=dict)
    target_index: dict = field(default_factory=dict)
    unknown_index: int = 0

    @classmethod
    def fit(cls, tweets):
        users = sorted({t.user_id for t in tweets})
        targets = sorted({t.target for t in tweets})
        return cls({u: i + 1 for i, u in enumerate(users)}, {t: i + 1 for i, t in enumerate(targets)})

    @property
    def n_users(self):
        return len(self.user_index) + 1

    @property
    def n_targets(self):
        return len(self.target_index) + 1

    def encode_user(self, user_id):
        return self.user_index.get(user_id, self.unknown_index)

    def encode_target(self, target):
        return self.target_index.get(target, self.unknown_index)

    def to_dict(self):
        return {"user_index": self.user_index, "target_index": self.target_index}

    @classmethod
    def from_dict(cls, d):
        return cls(dict(d["user_index"]), dict(d["target_index"]))


@dataclass
class FeatureVector:
    enabled: frozenset
    f1: tuple = None
    f2: tuple = None
    f3: tuple = None
    f4: tuple = None
    f5: tuple = None
    f6: tuple = None
    f7: tuple = None
    f8: tuple = None
    f9: int = None  # user index
    target: int = None

    def flatten(self, enc: CategoricalEncoder):
        parts = []
        for fam in FAMILIES:
            if fam not in self.enabled:
                continue
            if fam == "f9":
                parts.append(_one_hot(self.f9, enc.n_users))
                parts.append(_one_hot(self.target, enc.n_targets))
                continue
            values = np.asarray(getattr(self, fam), dtype=float)
            if fam in ("f5", "f8"):
                values = values * FRACTION_SCALE
            parts.append(values)
        return np.concatenate(parts) if parts else np.zeros(0)


def _one_hot(index, size):
    v = np.zeros(size)
    v[index] = 1.0
    return v


def vector_length(mask, enc: CategoricalEncoder):
    n = sum(w for fam, w in _WIDTH.items() if fam in mask)
    if "f9" in mask:
        n += enc.n_users + enc.n_targets
    return n


def feature_names(mask, enc: CategoricalEncoder):
    names = []
    for fam in FAMILIES:
        if fam not in mask:
            continue
        if fam == "f9":
            inv_u = {i: u for u, i in enc.user_index.items()}
            inv_t = {i: t for t, i in enc.target_index.items()}
            names += [f"user={inv_u.get(i, '<unk>')}" for i in range(enc.n_users)]
            names += [f"target={inv_t.get(i, '<unk>')}" for i in range(enc.n_targets)]
        else:
            names += list(_NAMES[fam])
    return names


def polarity_counts(tokens, lex):
    """(strong_pos, strong_neg, weak_pos, weak_neg) after negation flips."""
    counts = Counter(polarity_bucket(lex, tok) for tok in tokens)
    return (counts["strong_pos"], counts["strong_neg"], counts["weak_pos"], counts["weak_neg"])


def extract_features(t, lex, urlsent=None, enc=None, f8=None, enabled=ALL_FEATURES) -> FeatureVector:
    """Compute the enabled families for a normalized, tagged tweet.

    Unknown users and targets map to the encoder's reserved index.
    """
    enabled = frozenset(enabled)
    a = t.artifacts
    fv = FeatureVector(enabled)
    if "f1" in enabled:
        pos = Counter(tok.pos for tok in t.tokens)
        fv.f1 = (pos["noun"], pos["adj"], pos["adv"], pos["verb"])
    if "f2" in enabled:
        fv.f2 = polarity_counts(t.tokens, lex)
    if "f3" in enabled:
        fv.f3 = (int(a.is_retweet), int(bool(a.mentions)))
    if "f4" in enabled:
        fv.f4 = (a.pos_emoticons, a.neg_emoticons)
    if "f5" in enabled:
        fv.f5 = (urlsent or UrlSentiment()).as_tuple()
    if "f6" in enabled:
        fv.f6 = (len(a.hashtags),)
    if "f7" in enabled:
        fv.f7 = (a.capitalized,)
    if "f8" in enabled:
        if f8 is None:
            raise ValueError("f8 enabled but no stacked prediction given")
        fv.f8 = tuple(float(p) for p in f8)
    if "f9" in enabled:
        enc = enc or CategoricalEncoder()
        fv.f9 = enc.encode_user(t.user_id)
        fv.target = enc.encode_target(t.target)
    return fv


# -- tf-idf -----------------------------------------------------------------


def tfidf_terms(t):
    """Tokens (hashtag segments included) plus the whole hashtags."""
    return [tok.surface for tok in t.tokens] + ["#" + h.lower() for h in t.artifacts.hashtags]


@dataclass
class TfidfModel:
    vocabulary: dict  # term -> column
    idf: np.ndarray
    doc_count: int

    def to_dict(self):
        return {"vocabulary": sorted(self.vocabulary, key=self.vocabulary.get),
                "idf": self.idf.tolist(), "doc_count": self.doc_count}

    @classmethod
    def from_dict(cls, d):
        return cls({t: i for i, t in enumerate(d["vocabulary"])}, np.array(d["idf"], dtype=float), d["doc_count"])


def tfidf_fit(corpus) -> TfidfModel:
    """Smoothed idf: ln((1 + N) / (1 + df)) + 1, vocabulary sorted."""
    docs = [set(tfidf_terms(t)) for t in corpus]
    if not docs:
        raise EmptyCorpus()
    df = Counter()
    for terms in docs:
        df.update(terms)
    vocab = sorted(df)
    n = len(docs)
    idf = np.array([math.log((1 + n) / (1 + df[term])) + 1.0 for term in vocab])
    return TfidfModel({term: i for i, term in enumerate(vocab)}, idf, n)


def tfidf_transform(m: TfidfModel, t):
    """L2-normalized tf * idf as a sparse {column: weight} dict."""
    tf = Counter(term for term in tfidf_terms(t) if term in m.vocabulary)
    weights = {m.vocabulary[term]: count * m.idf[m.vocabulary[term]] for term, count in tf.items()}
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm == 0:
        return {}
    return {col: w / norm for col, w in sorted(weights.items())}


def tfidf_matrix(m: TfidfModel, tweets):
    X = np.zeros((len(tweets), len(m.vocabulary)))
    for row, t in enumerate(tweets):
        for col, w in tfidf_transform(m, t).items():
            X[row, col] = w
    return X


@dataclass
class TfidfClassifier:
    """tf-idf vectorizer plus a classifier giving class probabilities in
    ``CLASSES`` order. SVM scores are turned into probabilities by softmax."""

    tfidf: TfidfModel
    model: object
    kind: str = "nb"

    def predict_proba(self, tweets):
        X = tfidf_matrix(self.tfidf, tweets)
        if self.kind == "nb":
            return self.model.predict_proba(X)
        scores = self.model.decision_function(X)
        scores = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(scores)
        return e / e.sum(axis=1, keepdims=True)

    def to_dict(self):
        return {"kind": self.kind, "tfidf": self.tfidf.to_dict(), "model": self.model.to_dict()}

    @classmethod
    def from_dict(cls, d):
        model = (NBModel if d["kind"] == "nb" else SVMModel).from_dict(d["model"])
        return cls(TfidfModel.from_dict(d["tfidf"]), model, d["kind"])


def fit_tfidf_classifier(tweets, labels, kind="nb", alpha=1.0, prior_mode="empirical", seed=42):
    tfidf = tfidf_fit(tweets)
    X = tfidf_matrix(tfidf, tweets)
    if kind == "nb":
        model = nb_train(X, labels, alpha=alpha, prior_mode=prior_mode, classes=CLASSES)
    elif kind == "svm":
        model = svm_train(X, labels, seed=seed, classes=CLASSES)
    else:
        raise ValueError(f"unknown stacker kind {kind!r}")
    return TfidfClassifier(tfidf, model, kind)


@dataclass
class StackResult:
    oof: np.ndarray  # (n, 3) out-of-fold probabilities, CLASSES order
    final: TfidfClassifier
    folds: list
    k: int


def _check_folds(labels, folds):
    labels = np.asarray(labels, dtype=object)
    for test_idx in folds:
        mask = np.ones(len(labels), dtype=bool)
        mask[test_idx] = False
        present = set(labels[mask])
        for c in CLASSES:
            if c not in present:
                raise ClassMissingInFold(c)


def stacked_tfidf_feature(train, labels, k=5, seed=42, alpha=1.0, prior_mode="empirical", kind="nb",
                          folds=None) -> StackResult:
    """Out-of-fold tf-idf class probabilities for every training tweet.

    Each tweet's probabilities come from a model fit on the other folds only.
    With empirical priors every class must appear in each fold's training
    part; if it does not, the split is redone with fewer (larger) folds.
    ``final`` is fit on the whole training set for use at prediction time.
    """
    labels = list(labels)
    if len(train) != len(labels):
        raise ValueError("tweets and labels differ in length")
    if not train:
        raise EmptyCorpus()
    if k < 2 or len(train) < 2:
        raise ValueError("stacking needs k >= 2 and at least two tweets")
    needs_all = kind == "nb" and prior_mode == "empirical"
    if folds is None:
        for k_try in range(min(k, len(labels)), 1, -1):
            folds = [f for f in stratified_folds(labels, k_try, seed) if len(f)]
            try:
                if needs_all:
                    _check_folds(labels, folds)
                break
            except ClassMissingInFold:
                if k_try == 2:
                    raise
        k = k_try
    elif needs_all:
        _check_folds(labels, folds)

    oof = np.zeros((len(train), len(CLASSES)))
    for test_idx in folds:
        held_out = set(test_idx.tolist())
        fit_idx = [i for i in range(len(train)) if i not in held_out]
        try:
            clf = fit_tfidf_classifier([train[i] for i in fit_idx], [labels[i] for i in fit_idx],
                                       kind, alpha, prior_mode, seed)
        except MissingClass as exc:
            raise ClassMissingInFold(exc.label) from exc
        oof[test_idx] = clf.predict_proba([train[i] for i in test_idx])
    final = fit_tfidf_classifier(train, labels, kind, alpha, prior_mode, seed)
    return StackResult(oof, final, folds, k)
