"""Topic-specific sentiment term harvesting and signed sentiment strength."""

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class TermCollection:
    label: str
    term_freq: dict = field(default_factory=dict)
    ranked: list = field(default_factory=list)  # count descending, then term


def rank_frequencies(tweets, label=""):
    """Token frequencies of one class's tweets with a deterministic ranking."""
    freq = Counter()
    for t in tweets:
        freq.update(tok.surface for tok in t.tokens)
    ranked = sorted(freq, key=lambda term: (-freq[term], term))
    return TermCollection(label, dict(freq), ranked)


@dataclass(frozen=True)
class HarvestConfig:
    threshold1: float = 0.10
    threshold2: float = 0.60

    def __post_init__(self):
        for name in ("threshold1", "threshold2"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {v}")


def top_slice_size(threshold, n):
    """ceil(threshold * n), with the threshold read as the decimal it prints as
    so that 0.1 * 30 gives 3 rather than 4."""
    return math.ceil(Fraction(str(threshold)) * n)


def top_slice(coll: TermCollection, threshold):
    return coll.ranked[: top_slice_size(threshold, len(coll.ranked))]


def harvest_terms(src: TermCollection, other1: TermCollection, other2: TermCollection,
                  cfg: HarvestConfig = HarvestConfig()):
    """Frequent terms of ``src`` that are not frequent in either other class.

    Returns ``(term, src frequency)`` pairs in ``src`` rank order.
    """
    blocked = set(top_slice(other1, cfg.threshold2)) | set(top_slice(other2, cfg.threshold2))
    return [(term, src.term_freq[term]) for term in top_slice(src, cfg.threshold1) if term not in blocked]


STRONG_WEIGHT = 2
WEAK_WEIGHT = 1
CAPS_WEIGHT = 1
DEFAULT_CALIBRATION = 10.0


@dataclass(frozen=True)
class StrengthScore:
    value: int
    raw: int
    components: dict


def strength_score(fv, predicted, R=DEFAULT_CALIBRATION):
    """Signed strength in [-5, 5].

    raw = caps + 2 * (strong_pos + strong_neg) + (weak_pos + weak_neg);
    magnitude = min(5, round_half_up(5 * raw / R)); sign from ``predicted``,
    0 for neutral.
    """
    if R < 1:
        raise ValueError("calibration constant must be >= 1")
    if fv.f2 is None or fv.f7 is None:
        raise ValueError("strength needs f2 and f7 in the feature vector")
    strong_pos, strong_neg, weak_pos, weak_neg = fv.f2
    caps = fv.f7[0]
    components = {
        "capitalized": caps,
        "strong_pos": strong_pos,
        "strong_neg": strong_neg,
        "weak_pos": weak_pos,
        "weak_neg": weak_neg,
        "label": predicted,
    }
    raw = CAPS_WEIGHT * caps + STRONG_WEIGHT * (strong_pos + strong_neg) + WEAK_WEIGHT * (weak_pos + weak_neg)
    if predicted == "neutral":
        return StrengthScore(0, raw, components)
    if predicted not in ("positive", "negative"):
        raise ValueError(f"unknown label {predicted!r}")
    magnitude = min(5, math.floor(5 * raw / R + 0.5))
    return StrengthScore(magnitude if predicted == "positive" else -magnitude, raw, components)
