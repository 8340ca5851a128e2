"""Landing-page context for URLs shared in tweets.

Pages are fetched through a pluggable fetcher and cached on disk as one JSON
file per URL. Sentences of the first paragraph are scored with the polarity
lexicon, and a tweet gets the fraction of positive, negative and neutral
sentences over all of its URLs.
"""

import hashlib
import json
import logging
import os
import re
import tempfile
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path

from .normalize import Token, mark_negations, normalize_tokens, tokenize
from .lexicons import lookup_polarity
from .tagging import TagLexicon

log = logging.getLogger(__name__)

MAX_REDIRECTS = 5
FIRST_PARAGRAPH_CHARS = 1000
SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])(?:\s+|$)")
_SCORES = {("strong", "positive"): 2, ("weak", "positive"): 1, ("strong", "negative"): -2, ("weak", "negative"): -1}


class FetchFailed(Exception):
    def __init__(self, url, cause):
        self.url = url
        self.cause = cause
        super().__init__(f"fetch failed for {url}: {cause}")


@dataclass(frozen=True)
class ArticleText:
    url: str
    first_paragraph: str
    fetched_at: str
    source: str  # "live" | "cache"


@dataclass(frozen=True)
class UrlSentiment:
    frac_pos: float = 0.0
    frac_neg: float = 0.0
    frac_neu: float = 0.0

    def as_tuple(self):
        return (self.frac_pos, self.frac_neg, self.frac_neu)


class _LimitedRedirects(urllib.request.HTTPRedirectHandler):
    max_redirections = MAX_REDIRECTS


class HttpFetcher:
    """Plain urllib GET returning the decoded response body."""

    def __init__(self, timeout_ms=10000, user_agent="tweetsense/0.1"):
        self.timeout = timeout_ms / 1000.0
        self.user_agent = user_agent
        self._opener = urllib.request.build_opener(_LimitedRedirects)

    def __call__(self, url):
        req = urllib.request.Request(url, headers={"User-Agent": self.user_agent})
        try:
            with self._opener.open(req, timeout=self.timeout) as resp:
                charset = resp.headers.get_content_charset() or "utf-8"
                return resp.read().decode(charset, errors="replace")
        except Exception as exc:  # network errors come in many types
            raise FetchFailed(url, exc) from exc


class OfflineFetcher:
    """Refuses every request; with a cache this gives cache-only operation."""

    def __call__(self, url):
        raise FetchFailed(url, "offline mode")


class _TextExtractor(HTMLParser):
    BLOCK = {"p", "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6", "section",
             "article", "header", "footer", "table", "tr", "blockquote", "pre", "title"}
    SKIP = {"script", "style", "noscript", "head"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in self.SKIP:
            self._skip += 1
        elif tag in self.BLOCK:
            self.parts.append("\n\n")

    def handle_endtag(self, tag):
        if tag in self.SKIP:
            self._skip = max(0, self._skip - 1)
        elif tag in self.BLOCK:
            self.parts.append("\n\n")

    def handle_data(self, data):
        if not self._skip:
            self.parts.append(data)


def html_to_text(html):
    """Strip markup; block elements become blank-line paragraph breaks."""
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    text = "".join(parser.parts)
    paragraphs = []
    for block in re.split(r"\n\s*\n", text):
        block = " ".join(block.split())
        if block:
            paragraphs.append(block)
    return "\n\n".join(paragraphs)


def first_paragraph(text):
    """Text up to the first blank line, capped at 1000 characters."""
    para = re.split(r"\n\s*\n", text.strip(), maxsplit=1)[0] if text.strip() else ""
    return para[:FIRST_PARAGRAPH_CHARS].strip()


def url_key(url):
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


class UrlCache:
    """One JSON file per URL, named by the SHA-256 of the URL."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, url):
        return self.directory / f"{url_key(url)}.json"

    def get(self, url):
        p = self.path_for(url)
        if not p.is_file():
            return None
        with open(p, encoding="utf-8") as fh:
            rec = json.load(fh)
        return ArticleText(rec["url"], rec["first_paragraph"], rec["fetched_at"], "cache")

    def put(self, article: ArticleText):
        self.directory.mkdir(parents=True, exist_ok=True)
        rec = {"url": article.url, "first_paragraph": article.first_paragraph, "fetched_at": article.fetched_at}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(rec, fh, ensure_ascii=False, indent=1, sort_keys=True)
            os.replace(tmp, self.path_for(article.url))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _as_cache(cache):
    if cache is None or isinstance(cache, UrlCache):
        return cache
    return UrlCache(cache)


def fetch_article(url, fetcher, cache=None) -> ArticleText:
    """Cached text of the first paragraph of ``url``.

    Raises FetchFailed on a cache miss the fetcher cannot serve. Failures are
    not cached.
    """
    cache = _as_cache(cache)
    if cache is not None:
        hit = cache.get(url)
        if hit is not None:
            return hit
    try:
        body = fetcher(url)
    except FetchFailed:
        raise
    except Exception as exc:
        raise FetchFailed(url, exc) from exc
    article = ArticleText(
        url,
        first_paragraph(html_to_text(body)),
        datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "live",
    )
    if cache is not None:
        cache.put(article)
    return article


def split_sentences(paragraph):
    return [s.strip() for s in SENTENCE_SPLIT_RE.split(paragraph) if s.strip()]


_FALLBACK_TAGGER = TagLexicon()


def sentence_sentiment(sentence, lex, tagger=None):
    """Lexicon score of one sentence, with negation flips.

    strong/weak positive count +2/+1, strong/weak negative -2/-1.
    """
    tagger = tagger or _FALLBACK_TAGGER
    words = normalize_tokens(tokenize(sentence), lex)
    tokens = [Token(w, pos=pos) for w, pos in tagger.tag(words)]
    score = 0
    for tok in mark_negations(tokens, lex):
        entry = lookup_polarity(lex, tok.surface, tok.pos)
        if entry is None or entry.polarity == "neutral":
            continue
        value = _SCORES[(entry.strength, entry.polarity)]
        score += -value if tok.negated else value
    if score > 0:
        return "positive"
    if score < 0:
        return "negative"
    return "neutral"


def sentiment_fractions(paragraphs, lex, tagger=None) -> UrlSentiment:
    counts = {"positive": 0, "negative": 0, "neutral": 0}
    for para in paragraphs:
        for sentence in split_sentences(para):
            counts[sentence_sentiment(sentence, lex, tagger)] += 1
    total = sum(counts.values())
    if total == 0:
        return UrlSentiment()
    return UrlSentiment(counts["positive"] / total, counts["negative"] / total, counts["neutral"] / total)


class UrlContext:
    """Fetches and scores URLs for a whole run, remembering failures.

    Each distinct URL is fetched at most once per instance; ``failures`` holds
    the distinct URLs that could not be retrieved.
    """

    def __init__(self, fetcher, cache=None, lex=None, tagger=None, max_workers=4):
        self.fetcher = fetcher
        self.cache = _as_cache(cache)
        self.lex = lex
        self.tagger = tagger
        self.max_workers = max_workers
        self._articles = {}
        self.failures = set()

    def _fetch(self, url):
        try:
            return fetch_article(url, self.fetcher, self.cache)
        except FetchFailed as exc:
            return exc

    def prefetch(self, urls):
        todo = [u for u in dict.fromkeys(urls) if u not in self._articles]
        if not todo:
            return
        if self.max_workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(self.max_workers) as pool:
                results = list(pool.map(self._fetch, todo))
        else:
            results = [self._fetch(u) for u in todo]
        # record in input order so warnings are deterministic
        for url, res in zip(todo, results):
            if isinstance(res, FetchFailed):
                log.warning("%s", res)
                self.failures.add(url)
                res = ArticleText(url, "", datetime.now(timezone.utc).isoformat(timespec="seconds"), "live")
            self._articles[url] = res

    def article(self, url):
        self.prefetch([url])
        return self._articles[url]

    def fractions(self, urls) -> UrlSentiment:
        if not urls:
            return UrlSentiment()
        self.prefetch(urls)
        return sentiment_fractions([self._articles[u].first_paragraph for u in urls], self.lex, self.tagger)


def url_sentiment_fractions(urls, fetcher, cache, lex, tagger=None) -> UrlSentiment:
    return UrlContext(fetcher, cache, lex, tagger, max_workers=1).fractions(urls)
