"""Tweet normalization: artifact stripping, emoticons, tokenization, dictionary
rectification, hashtag segmentation and negation marking."""

import re
import string
from dataclasses import asdict, dataclass, field
from urllib.parse import urlparse

from .lexicons import LexiconBundle, lookup_polarity

URL_RE = re.compile(r"https?://[^\s]+", re.IGNORECASE)
MENTION_RE = re.compile(r"(?<![\w@])@(\w+):?")
HASHTAG_RE = re.compile(r"(?<![\w&#])#(\w+)")
LEADING_RT_RE = re.compile(r"^\s*rt\b:?", re.IGNORECASE)
INNER_RT_RE = re.compile(r"(?<![#\w])RT(?!\w)")
_URL_TRAILING = ".,;:!?)]}\"'"

# '#' and '@' stay attached to tokens; hashtags are segmented later
PUNCT = frozenset(string.punctuation) - {"#", "@"}

NEGATIONS = frozenset(
    "no not never none nobody nothing neither nor nowhere cannot".split()
    + "dont cant wont isnt arent wasnt werent didnt doesnt hasnt havent hadnt aint".split()
    + "couldnt shouldnt wouldnt mustnt neednt".split()
)
NEGATION_WINDOW = 3


def is_negation(word):
    return word in NEGATIONS or word.endswith("n't")


@dataclass
class TweetArtifacts:
    is_retweet: bool = False
    mentions: list = field(default_factory=list)
    urls: list = field(default_factory=list)
    hashtags: list = field(default_factory=list)
    pos_emoticons: int = 0
    neg_emoticons: int = 0
    capitalized: int = 0  # all-caps words (>= 2 letters) in the raw text


@dataclass
class Token:
    surface: str
    was_capitalized: bool = False
    negated: bool = False
    pos: str | None = None


@dataclass
class NormalizedTweet:
    tweet_id: str
    tokens: list
    artifacts: TweetArtifacts
    user_id: str = ""
    target: str = ""

    def surfaces(self):
        return [t.surface for t in self.tokens]

    def to_dict(self):
        return {
            "id": self.tweet_id,
            "tokens": [
                {"surface": t.surface, "pos": t.pos, "negated": t.negated, "was_capitalized": t.was_capitalized}
                for t in self.tokens
            ],
            "artifacts": asdict(self.artifacts),
        }


def _is_absolute_url(url):
    parts = urlparse(url)
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def extract_urls(text):
    """All http(s) URLs in ``text``, left to right, duplicates kept."""
    urls = []
    for m in URL_RE.finditer(text):
        url = m.group(0).rstrip(_URL_TRAILING)
        if _is_absolute_url(url):
            urls.append(url)
    return urls


def strip_artifacts(text):
    """Remove retweet markers, mentions and URLs; record them with hashtags.

    Hashtags are recorded but left in the text. Emoticons are handled by
    :func:`extract_emoticons`.
    """
    a = TweetArtifacts()
    a.urls = extract_urls(text)
    text = URL_RE.sub(" ", text)
    a.mentions = MENTION_RE.findall(text)
    text = MENTION_RE.sub(" ", text)
    if LEADING_RT_RE.match(text):
        a.is_retweet = True
        text = LEADING_RT_RE.sub(" ", text, count=1)
    text = INNER_RT_RE.sub(" ", text)
    a.hashtags = HASHTAG_RE.findall(text)
    return " ".join(text.split()), a


def _emoticon_fits(text, start, glyph):
    end = start + len(glyph)
    if glyph[0].isalnum() and start > 0 and text[start - 1].isalnum():
        return False
    if glyph[-1].isalnum() and end < len(text) and text[end].isalnum():
        return False
    return True


def extract_emoticons(text, lex: LexiconBundle):
    """Remove emoticon glyphs (longest match first) and count them by polarity."""
    glyphs = sorted(lex.emoticons, key=len, reverse=True)
    out = []
    pos_n = neg_n = 0
    i = 0
    while i < len(text):
        for g in glyphs:
            if text.startswith(g, i) and _emoticon_fits(text, i, g):
                if lex.emoticons[g] == "positive":
                    pos_n += 1
                else:
                    neg_n += 1
                out.append(" ")
                i += len(g)
                break
        else:
            out.append(text[i])
            i += 1
    if pos_n or neg_n:
        return " ".join("".join(out).split()), pos_n, neg_n
    return text, 0, 0


def tokenize(text):
    """Whitespace tokenization with leading/trailing punctuation split off.

    Inner punctuation survives, so contractions such as ``won't`` stay whole.
    """
    tokens = []
    for chunk in text.split():
        start, end = 0, len(chunk)
        while start < end and chunk[start] in PUNCT:
            start += 1
        while end > start and chunk[end - 1] in PUNCT:
            end -= 1
        tokens.extend(chunk[:start])
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(chunk[end:])
    return tokens


def _is_punct(token):
    return all(ch in PUNCT for ch in token)


def is_all_caps(token):
    letters = [ch for ch in token if ch.isalpha()]
    return len(letters) >= 2 and all(ch.isupper() for ch in letters)


def _normalize_one(token, lex):
    """Lowercase, rectify, expand slang and drop stopwords for one token."""
    word = token.lower().replace("#", "").replace("@", "")
    if not word or _is_punct(word):
        return []
    word = lex.normalization.get(word, word)
    out = []
    for w in lex.slang.get(word, (word,)):
        if _is_punct(w):
            continue
        if w in lex.stopwords and not is_negation(w):
            continue
        out.append(w)
    return out


def normalize_tokens(tokens, lex: LexiconBundle):
    out = []
    for tok in tokens:
        if tok.startswith("#") and len(tok) > 1:
            out.append(tok.lower())
        else:
            out.extend(_normalize_one(tok, lex))
    return out


def segment_hashtag(tag, wordlist):
    """Split a hashtag body into wordlist words.

    Picks the segmentation with the fewest pieces; ties go to the one whose
    piece lengths are lexicographically largest from the left. Runs of digits
    are accepted as pieces. Returns ``[tag]`` when no full segmentation exists.
    """
    s = tag.lower()
    n = len(s)
    if n == 0:
        return [tag]
    # best[i]: piece lengths of the best segmentation of s[i:], None if none
    best = [None] * (n + 1)
    best[n] = ()
    for i in range(n - 1, -1, -1):
        chosen = None
        for j in range(n, i, -1):
            if best[j] is None:
                continue
            piece = s[i:j]
            if piece in wordlist or (piece.isascii() and piece.isdigit()):
                cand = (j - i,) + best[j]
                if chosen is None or len(cand) < len(chosen) or (len(cand) == len(chosen) and cand > chosen):
                    chosen = cand
        best[i] = chosen
    if best[0] is None:
        return [tag]
    pieces, i = [], 0
    for length in best[0]:
        pieces.append(s[i : i + length])
        i += length
    return pieces


def mark_negations(tokens, lex: LexiconBundle, window=NEGATION_WINDOW):
    """Flag the first polarity-bearing token after each negation word.

    Looks at most ``window`` tokens ahead. Negation tokens are removed from
    the returned list.
    """
    tokens = [Token(t.surface, t.was_capitalized, t.negated, t.pos) for t in tokens]
    for i, tok in enumerate(tokens):
        if not is_negation(tok.surface):
            continue
        for nxt in tokens[i + 1 : i + 1 + window]:
            if is_negation(nxt.surface):
                continue
            entry = lookup_polarity(lex, nxt.surface, nxt.pos)
            if entry is not None and entry.polarity != "neutral":
                nxt.negated = True
                break
    return [t for t in tokens if not is_negation(t.surface)]


def normalize_text(text, lex: LexiconBundle, tagger, tweet_id="", user_id="", target=""):
    clean, artifacts = strip_artifacts(text)
    clean, artifacts.pos_emoticons, artifacts.neg_emoticons = extract_emoticons(clean, lex)

    pairs = []  # (surface, was_capitalized)
    for raw in tokenize(clean):
        if raw.startswith("#") and len(raw) > 1:
            for part in filter(None, raw.split("#")):
                # segments skip stopword removal: "the" belongs to "kill the bill"
                pairs.extend((seg, False) for seg in segment_hashtag(part.lower(), lex.wordlist)
                             if not _is_punct(seg))
            continue
        caps = is_all_caps(raw)
        if caps:
            artifacts.capitalized += 1
        pairs.extend((w, caps) for w in _normalize_one(raw, lex))

    tagged = tagger.tag([s for s, _ in pairs])
    tokens = [Token(s, caps, False, pos) for (s, caps), (_, pos) in zip(pairs, tagged)]
    return NormalizedTweet(tweet_id, mark_negations(tokens, lex), artifacts, user_id, target)


def normalize_tweet(t, lex: LexiconBundle, tagger) -> NormalizedTweet:
    return normalize_text(t.text, lex, tagger, t.id, t.user_id, t.target)
