"""End-to-end training and prediction, plus the JSON model file."""

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .classify import (
    CLASSES,
    DEFAULT_NB_GRID,
    DEFAULT_SVM_GRID,
    NBModel,
    SVMModel,
    grid_search,
    nb_train,
    svm_train,
)
from .corpus import filter_labels
from .features import (
    ALL_FEATURES,
    CategoricalEncoder,
    TfidfClassifier,
    extract_features,
    mask_label,
    parse_mask,
    stacked_tfidf_feature,
)
from .normalize import normalize_tweet
from .url_context import OfflineFetcher, UrlContext, UrlSentiment

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


@dataclass
class PipelineConfig:
    features: frozenset = ALL_FEATURES
    model_kind: str = "nb"
    alpha: float = 1.0
    prior_mode: str = "empirical"
    class_weights: dict = None
    lam: float = 1e-4
    eta0: float = 0.1
    epochs: int = 10
    stack_folds: int = 5
    stack_kind: str = "nb"
    stack_alpha: float = 1.0
    stack_prior_mode: str = "empirical"
    tune: bool = False
    grid: dict = None
    cv_folds: int = 5
    seed: int = 42

    def model_params(self):
        if self.model_kind == "nb":
            params = {"alpha": self.alpha, "prior_mode": self.prior_mode}
            if self.prior_mode == "custom":
                params["class_weights"] = self.class_weights
            return params
        return {"lam": self.lam, "eta0": self.eta0, "epochs": self.epochs}

    def to_dict(self):
        d = asdict(self)
        d["features"] = mask_label(self.features)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["features"] = parse_mask(d.get("features"))
        return cls(**d)


@dataclass
class Prediction:
    id: str
    label: str
    posterior: tuple  # CLASSES order; None for SVM
    features: object


@dataclass
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X):
        std = X.std(axis=0)
        return cls(X.mean(axis=0), np.where(std > 0, std, 1.0))

    def __call__(self, X):
        return (X - self.mean) / self.scale


@dataclass
class SentimentPipeline:
    lex: object
    tagger: object
    urls: UrlContext = None
    config: PipelineConfig = field(default_factory=PipelineConfig)
    encoder: CategoricalEncoder = None
    stacker: TfidfClassifier = None
    model: object = None
    scaler: Standardizer = None
    tuning: dict = None
    stack_oof: np.ndarray = None

    def __post_init__(self):
        if self.urls is None:
            self.urls = UrlContext(OfflineFetcher(), None, self.lex, self.tagger)
        else:
            self.urls.lex = self.urls.lex or self.lex
            self.urls.tagger = self.urls.tagger or self.tagger

    @property
    def mask(self):
        return self.config.features

    def normalize(self, corpus):
        return [normalize_tweet(t, self.lex, self.tagger) for t in corpus]

    def _url_sentiments(self, nts):
        if "f5" not in self.mask:
            return [None] * len(nts)
        self.urls.prefetch([u for t in nts for u in t.artifacts.urls])
        return [self.urls.fractions(t.artifacts.urls) if t.artifacts.urls else UrlSentiment() for t in nts]

    def feature_vectors(self, nts, f8=None):
        mask = self.mask
        if f8 is None and "f8" in mask:
            f8 = self.stacker.predict_proba(nts)
        sentiments = self._url_sentiments(nts)
        return [
            extract_features(t, self.lex, s, self.encoder, None if f8 is None else f8[i], mask)
            for i, (t, s) in enumerate(zip(nts, sentiments))
        ]

    def _matrix(self, fvs):
        X = np.array([fv.flatten(self.encoder) for fv in fvs], dtype=float)
        if self.scaler is not None:
            X = self.scaler(X)
        return X

    def fit(self, corpus):
        cfg = self.config
        corpus = filter_labels(corpus)
        if len(corpus) == 0:
            raise ValueError("no positive/negative/neutral tweets to train on")
        nts = self.normalize(corpus)
        labels = corpus.labels
        self.encoder = CategoricalEncoder.fit(nts)

        f8 = None
        if "f8" in self.mask:
            stack = stacked_tfidf_feature(nts, labels, cfg.stack_folds, cfg.seed, cfg.stack_alpha,
                                          cfg.stack_prior_mode, cfg.stack_kind)
            self.stacker = stack.final
            self.stack_oof = f8 = stack.oof

        fvs = self.feature_vectors(nts, f8)
        X = np.array([fv.flatten(self.encoder) for fv in fvs], dtype=float)
        if cfg.model_kind == "svm":
            self.scaler = Standardizer.fit(X)
            X = self.scaler(X)

        if cfg.tune:
            grid = cfg.grid or (DEFAULT_NB_GRID if cfg.model_kind == "nb" else DEFAULT_SVM_GRID)
            result = grid_search(grid, X, labels, cfg.cv_folds, cfg.seed, cfg.model_kind)
            self.model = result.model
            self.tuning = json.loads(result.to_json())
            self.tuning["default_params"] = cfg.model_params()
        elif cfg.model_kind == "nb":
            self.model = nb_train(X, labels, classes=CLASSES, class_weights=cfg.class_weights,
                                  alpha=cfg.alpha, prior_mode=cfg.prior_mode)
        elif cfg.model_kind == "svm":
            self.model = svm_train(X, labels, cfg.lam, cfg.eta0, cfg.epochs, cfg.seed, classes=CLASSES)
        else:
            raise ValueError(f"unknown model kind {cfg.model_kind!r}")
        return self

    def predict(self, corpus):
        if self.model is None:
            raise RuntimeError("pipeline is not fitted")
        nts = self.normalize(corpus)
        fvs = self.feature_vectors(nts)
        X = self._matrix(fvs)
        labels = self.model.predict(X)
        if isinstance(self.model, NBModel):
            posts = [tuple(float(p) for p in row) for row in self.model.predict_proba(X)]
        else:
            posts = [None] * len(labels)
        return [Prediction(t.tweet_id, lab, post, fv) for t, lab, post, fv in zip(nts, labels, posts, fvs)]

    # -- persistence -------------------------------------------------------

    def to_dict(self):
        d = {
            "format_version": FORMAT_VERSION,
            "model_kind": self.config.model_kind,
            "classes": list(self.model.classes),
            "feature_mask": mask_label(self.mask),
            "hyperparams": self.config.to_dict(),
            "encoder": self.encoder.to_dict(),
            "tfidf": self.stacker.to_dict() if self.stacker is not None else None,
            "scaler": None,
            "tuning": self.tuning,
            "model": self.model.to_dict(),
        }
        if isinstance(self.model, NBModel):
            d["priors"] = np.exp(self.model.log_prior).tolist()
        if self.scaler is not None:
            d["scaler"] = {"mean": self.scaler.mean.tolist(), "scale": self.scaler.scale.tolist()}
        return d

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_dict(cls, d, lex, tagger, urls=None):
        version = d.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format_version {version!r}")
        cfg = PipelineConfig.from_dict(d["hyperparams"])
        pipe = cls(lex, tagger, urls, cfg)
        pipe.encoder = CategoricalEncoder.from_dict(d["encoder"])
        pipe.stacker = TfidfClassifier.from_dict(d["tfidf"]) if d.get("tfidf") else None
        pipe.model = (NBModel if d["model_kind"] == "nb" else SVMModel).from_dict(d["model"])
        if d.get("scaler"):
            pipe.scaler = Standardizer(np.array(d["scaler"]["mean"]), np.array(d["scaler"]["scale"]))
        pipe.tuning = d.get("tuning")
        return pipe

    @classmethod
    def load(cls, path, lex, tagger, urls=None):
        with open(path, encoding="utf-8") as fh:
            try:
                d = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ModelFormatError(f"{path}: not a JSON model file ({exc})") from None
        return cls.from_dict(d, lex, tagger, urls)
