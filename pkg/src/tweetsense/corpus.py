"""Tweet corpora: TSV loading and saving, label filtering, summary statistics."""

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .lexicons import lookup_polarity
from .normalize import normalize_tweet

LABELS = ("positive", "negative", "neutral", "unsure", "irrelevant", "unlabeled")
SENTIMENT_LABELS = ("positive", "negative", "neutral")
HEADER = ("id", "user_id", "target", "label", "text")
MAX_TEXT_BYTES = 560


class CorpusError(ValueError):
    pass


class MissingFile(CorpusError, FileNotFoundError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"corpus file not found: {path}")


class MalformedRow(CorpusError):
    def __init__(self, line_no, detail="", path=None):
        self.line_no = line_no
        self.path = path
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"malformed row at {where}" + (f": {detail}" if detail else ""))


class DuplicateId(CorpusError):
    def __init__(self, tweet_id, line_no=None):
        self.id = tweet_id
        self.line_no = line_no
        super().__init__(f"duplicate tweet id {tweet_id!r}" + (f" at line {line_no}" if line_no else ""))


@dataclass(frozen=True)
class Tweet:
    id: str
    user_id: str
    target: str
    label: str
    text: str


@dataclass(frozen=True)
class Corpus:
    tweets: tuple = ()
    split_name: str = ""

    def __len__(self):
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    def __add__(self, other):
        return Corpus(self.tweets + other.tweets, self.split_name)

    @property
    def labels(self):
        return [t.label for t in self.tweets]


def parse_label(raw):
    label = raw.strip().lower()
    if not label:
        return "unlabeled"
    if label not in LABELS:
        raise ValueError(f"unknown label {raw!r}")
    return label


def load_corpus(path, has_header=True, split_name=None) -> Corpus:
    """Read a 5-column TSV (id, user_id, target, label, text)."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    tweets, seen = [], set()
    with open(path, encoding="utf-8", newline="") as fh:
        for no, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if no == 1 and has_header:
                continue
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise MalformedRow(no, f"expected 5 columns, got {len(cols)}", path)
            tid, user, target, label, text = cols
            if not tid:
                raise MalformedRow(no, "empty id", path)
            if not text.strip():
                raise MalformedRow(no, "empty text", path)
            if len(text.encode("utf-8")) > MAX_TEXT_BYTES:
                raise MalformedRow(no, f"text longer than {MAX_TEXT_BYTES} bytes", path)
            try:
                label = parse_label(label)
            except ValueError as exc:
                raise MalformedRow(no, str(exc), path) from None
            if tid in seen:
                raise DuplicateId(tid, no)
            seen.add(tid)
            tweets.append(Tweet(tid, user, target, label, text))
    return Corpus(tuple(tweets), split_name if split_name is not None else path.stem)


def save_corpus(c: Corpus, path, has_header=True):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if has_header:
            fh.write("\t".join(HEADER) + "\n")
        for t in c.tweets:
            label = "" if t.label == "unlabeled" else t.label
            text = t.text.replace("\t", " ").replace("\n", " ")
            fh.write("\t".join((t.id, t.user_id, t.target, label, text)) + "\n")


def filter_labels(c: Corpus) -> Corpus:
    """Keep only positive, negative and neutral tweets."""
    return Corpus(tuple(t for t in c.tweets if t.label in SENTIMENT_LABELS), c.split_name)


@dataclass
class StatsReport:
    token_count: int = 0
    noun_count: int = 0
    adj_count: int = 0
    adv_count: int = 0
    verb_count: int = 0
    strong_pos: int = 0
    strong_neg: int = 0
    weak_pos: int = 0
    weak_neg: int = 0
    capitalized_words: int = 0
    mention_count: int = 0
    hashtag_count: int = 0
    rt_count: int = 0
    pos_emoticons: int = 0
    neg_emoticons: int = 0
    class_histogram: dict = field(default_factory=dict)

    def __add__(self, other):
        merged = {}
        for name in self.counter_names():
            merged[name] = getattr(self, name) + getattr(other, name)
        hist = Counter(self.class_histogram)
        hist.update(other.class_histogram)
        return StatsReport(**merged, class_histogram=dict(sorted(hist.items())))

    @staticmethod
    def counter_names():
        return [f for f in StatsReport.__dataclass_fields__ if f != "class_histogram"]

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=False)

    def to_table(self):
        rows = [(name, getattr(self, name)) for name in self.counter_names()]
        rows += [(f"label {k}", v) for k, v in self.class_histogram.items()]
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{name:<{width}}  {value:>8}" for name, value in rows)


_POS_FIELD = {"noun": "noun_count", "adj": "adj_count", "adv": "adv_count", "verb": "verb_count"}


def corpus_stats(c: Corpus, lex, tagger) -> StatsReport:
    """Table-1 style counters computed over normalized tokens."""
    r = StatsReport()
    hist = Counter()
    for tweet in c.tweets:
        hist[tweet.label] += 1
        nt = normalize_tweet(tweet, lex, tagger)
        a = nt.artifacts
        r.rt_count += int(a.is_retweet)
        r.mention_count += len(a.mentions)
        r.hashtag_count += len(a.hashtags)
        r.pos_emoticons += a.pos_emoticons
        r.neg_emoticons += a.neg_emoticons
        r.capitalized_words += a.capitalized
        for tok in nt.tokens:
            r.token_count += 1
            if tok.pos in _POS_FIELD:
                name = _POS_FIELD[tok.pos]
                setattr(r, name, getattr(r, name) + 1)
            bucket = polarity_bucket(lex, tok)
            if bucket:
                setattr(r, bucket, getattr(r, bucket) + 1)
    r.class_histogram = dict(sorted(hist.items()))
    return r


def polarity_bucket(lex, tok):
    """Counter name (strong_pos, ..., weak_neg) for a token, after negation."""
    entry = lookup_polarity(lex, tok.surface, tok.pos)
    if entry is None or entry.polarity == "neutral":
        return None
    positive = (entry.polarity == "positive") != tok.negated
    return f"{entry.strength}_{'pos' if positive else 'neg'}"
