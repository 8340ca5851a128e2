"""Coarse part-of-speech tagging from a word lexicon plus suffix rules."""

from dataclasses import dataclass, field
from pathlib import Path

from .lexicons import MalformedLexiconRow, default_lexicon_dir

TAGS = ("noun", "adj", "adv", "verb", "other")

DEFAULT_SUFFIX_RULES = (
    ("ly", "adv"),
    ("ous", "adj"),
    ("ful", "adj"),
    ("ive", "adj"),
    ("able", "adj"),
    ("ible", "adj"),
    ("ical", "adj"),
    ("less", "adj"),
    ("ish", "adj"),
    ("est", "adj"),
    ("ing", "verb"),
    ("ed", "verb"),
    ("ize", "verb"),
    ("ise", "verb"),
    ("ify", "verb"),
    ("ate", "verb"),
    ("tion", "noun"),
    ("sion", "noun"),
    ("ment", "noun"),
    ("ness", "noun"),
    ("ity", "noun"),
    ("ism", "noun"),
    ("ist", "noun"),
    ("er", "noun"),
)


@dataclass
class TagLexicon:
    """Most-frequent-tag lexicon with an ordered suffix fallback.

    Suffix rules are tried longest suffix first; unknown words default to
    ``noun``. Tokens without any letter (numbers, symbols) are ``other``.
    """

    words: dict = field(default_factory=dict)
    suffix_rules: tuple = DEFAULT_SUFFIX_RULES

    def __post_init__(self):
        for suffix, tag in self.suffix_rules:
            if not suffix:
                raise ValueError("empty suffix rule")
            if tag not in TAGS:
                raise ValueError(f"bad tag {tag!r} in suffix rules")
        # stable sort keeps the listed order among equal lengths
        self._rules = sorted(self.suffix_rules, key=lambda r: -len(r[0]))

    def tag_word(self, word):
        hit = self.words.get(word)
        if hit is not None:
            return hit
        if not any(ch.isalpha() for ch in word):
            return "other"
        for suffix, tag in self._rules:
            # the suffix must leave a stem behind
            if len(word) > len(suffix) and word.endswith(suffix):
                return tag
        return "noun"

    def tag(self, tokens):
        return [(tok, self.tag_word(tok)) for tok in tokens]


def pos_tag(tokens, tl: TagLexicon):
    return tl.tag(tokens)


def load_tag_lexicon(directory=None) -> TagLexicon:
    """Read ``tags.tsv`` (word<TAB>pos) from a lexicon directory.

    A directory without ``tags.tsv`` yields a suffix-only tagger.
    """
    directory = Path(directory) if directory is not None else default_lexicon_dir()
    path = directory / "tags.tsv"
    words = {}
    if path.is_file():
        with open(path, encoding="utf-8") as fh:
            for no, raw in enumerate(fh, 1):
                line = raw.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or parts[1].strip() not in TAGS:
                    raise MalformedLexiconRow("tags", no, "expected word<TAB>tag")
                words[parts[0].strip().lower()] = parts[1].strip()
    return TagLexicon(words)
