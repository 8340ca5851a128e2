"""Dictionary resources: prior polarity, slang, spelling normalization,
emoticons, stopwords and the segmentation wordlist."""

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .porter import porter_stem

log = logging.getLogger(__name__)

POS_TAGS = ("noun", "verb", "adj", "adv")
STRENGTHS = ("weak", "strong")
POLARITIES = ("positive", "negative", "neutral")

LEXICON_FILES = {
    "polarity": "polarity.tsv",
    "slang": "slang.tsv",
    "normalization": "normalization.tsv",
    "emoticons": "emoticons.tsv",
    "stopwords": "stopwords.txt",
    "wordlist": "wordlist.txt",
}


class LexiconError(ValueError):
    pass


class MissingLexicon(LexiconError):
    def __init__(self, name, path=None):
        self.name = name
        self.path = path
        super().__init__(f"missing lexicon {name!r}" + (f" at {path}" if path else ""))


class MalformedLexiconRow(LexiconError):
    def __init__(self, name, line, detail=""):
        self.name = name
        self.line = line
        msg = f"{name}: malformed row at line {line}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class PolarityEntry:
    word: str
    pos: str  # noun | verb | adj | adv | any
    strength: str  # weak | strong
    polarity: str  # positive | negative | neutral

    def __post_init__(self):
        if not self.word or self.word != self.word.lower():
            raise ValueError(f"polarity word must be non-empty lowercase: {self.word!r}")
        if self.pos not in POS_TAGS + ("any",):
            raise ValueError(f"bad pos {self.pos!r}")
        if self.strength not in STRENGTHS:
            raise ValueError(f"bad strength {self.strength!r}")
        if self.polarity not in POLARITIES:
            raise ValueError(f"bad polarity {self.polarity!r}")


@dataclass(frozen=True)
class LexiconBundle:
    polarity: dict = field(default_factory=dict)  # (word, pos) -> PolarityEntry
    slang: dict = field(default_factory=dict)  # abbreviation -> tuple of words
    normalization: dict = field(default_factory=dict)  # noisy form -> word
    emoticons: dict = field(default_factory=dict)  # glyph (verbatim) -> positive|negative
    stopwords: frozenset = frozenset()
    wordlist: frozenset = frozenset()

    def counts(self):
        return {
            "polarity": len(self.polarity),
            "slang": len(self.slang),
            "normalization": len(self.normalization),
            "emoticons": len(self.emoticons),
            "stopwords": len(self.stopwords),
            "wordlist": len(self.wordlist),
        }


def default_lexicon_dir() -> Path:
    """Lexicons shipped with the package."""
    return Path(str(resources.files("tweetsense") / "data" / "lexicons"))


def _data_lines(path):
    """Yield (line_no, line) for non-blank, non-comment lines."""
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield no, line


def _read_pairs(name, path):
    out = {}
    for no, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1].strip():
            raise MalformedLexiconRow(name, no, "expected key<TAB>value")
        out[parts[0]] = parts[1]
    return out


def read_polarity(path):
    table = {}
    for no, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 4:
            raise MalformedLexiconRow("polarity", no, "expected 4 columns")
        word, pos, strength, polarity = (p.strip().lower() for p in parts)
        try:
            entry = PolarityEntry(word, pos, strength, polarity)
        except ValueError as exc:
            raise MalformedLexiconRow("polarity", no, str(exc)) from None
        if (word, pos) in table:
            log.warning("polarity: duplicate entry (%s, %s) at line %d, last one wins", word, pos, no)
        table[(word, pos)] = entry
    return table


def read_emoticons(path):
    table = {}
    for glyph, pol in _read_pairs("emoticons", path).items():
        pol = pol.strip().lower()
        if pol not in ("positive", "negative"):
            raise MalformedLexiconRow("emoticons", 0, f"polarity {pol!r} for {glyph!r}")
        table[glyph] = pol
    return table


def read_wordset(name, path):
    words = set()
    for no, line in _data_lines(path):
        token = line.strip()
        if len(token.split()) != 1:
            raise MalformedLexiconRow(name, no, "expected one token per line")
        words.add(token.lower())
    return frozenset(words)


def load_lexicon_bundle(directory=None) -> LexiconBundle:
    """Load all six dictionaries from ``directory`` (default: shipped lexicons)."""
    directory = Path(directory) if directory is not None else default_lexicon_dir()
    paths = {}
    for name, fname in LEXICON_FILES.items():
        p = directory / fname
        if not p.is_file():
            raise MissingLexicon(name, p)
        paths[name] = p

    slang = {k.lower(): tuple(v.lower().split()) for k, v in _read_pairs("slang", paths["slang"]).items()}
    normalization = {
        k.lower(): v.strip().lower() for k, v in _read_pairs("normalization", paths["normalization"]).items()
    }
    bundle = LexiconBundle(
        polarity=read_polarity(paths["polarity"]),
        slang=slang,
        normalization=normalization,
        emoticons=read_emoticons(paths["emoticons"]),
        stopwords=read_wordset("stopwords", paths["stopwords"]),
        wordlist=read_wordset("wordlist", paths["wordlist"]),
    )
    log.info("loaded lexicons from %s: %s", directory, bundle.counts())
    return bundle


def write_polarity(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        for e in table.values():
            fh.write(f"{e.word}\t{e.pos}\t{e.strength}\t{e.polarity}\n")


def lookup_polarity(lex: LexiconBundle, word: str, pos):
    """Prior polarity of ``word`` used as ``pos``, or None.

    Tries the exact word with its tag, then the POS wildcard, then the same two
    keys for the Porter stem of the word. Lexicon keys are never stemmed.
    """
    table = lex.polarity
    hit = table.get((word, pos)) or table.get((word, "any"))
    if hit is not None:
        return hit
    stem = porter_stem(word)
    if stem == word:
        return None
    return table.get((stem, pos)) or table.get((stem, "any"))
