from pathlib import Path

import pytest

from tweetsense.corpus import load_corpus
from tweetsense.lexicons import LexiconBundle, PolarityEntry, load_lexicon_bundle
from tweetsense.tagging import TagLexicon, load_tag_lexicon

FIXTURES = Path(__file__).parent / "fixtures"
SYNTHETIC = FIXTURES / "synthetic"

# (criterion name, outcome, detail) for tests marked ``criterion``
_CRITERIA = []


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA.append((marker, "PASS" if report.passed else "FAIL", detail))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in _CRITERIA:
        terminalreporter.write_line(f"{verdict}  {name}" + (f"  ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def lex():
    return load_lexicon_bundle()


@pytest.fixture(scope="session")
def tagger():
    return load_tag_lexicon()


@pytest.fixture(scope="session")
def synthetic_train():
    return load_corpus(SYNTHETIC / "train.tsv")


@pytest.fixture(scope="session")
def synthetic_test():
    return load_corpus(SYNTHETIC / "test.tsv")


@pytest.fixture
def url_cache_dir():
    return SYNTHETIC / "url_cache"


def make_bundle(polarity=(), stopwords=(), slang=None, normalization=None, emoticons=None, wordlist=()):
    """Small in-memory bundle; ``polarity`` holds (word, pos, strength, polarity)."""
    return LexiconBundle(
        polarity={(w, p): PolarityEntry(w, p, s, pol) for w, p, s, pol in polarity},
        slang=dict(slang or {}),
        normalization=dict(normalization or {}),
        emoticons=dict(emoticons or {}),
        stopwords=frozenset(stopwords),
        wordlist=frozenset(wordlist),
    )


@pytest.fixture
def plain_tagger():
    return TagLexicon()
