import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tweetsense.corpus import (
    Corpus,
    DuplicateId,
    MalformedRow,
    MissingFile,
    StatsReport,
    Tweet,
    corpus_stats,
    filter_labels,
    load_corpus,
    save_corpus,
)

HEADER = "id\tuser_id\ttarget\tlabel\ttext\n"


def write(tmp_path, body, name="c.tsv"):
    p = tmp_path / name
    p.write_text(HEADER + body, encoding="utf-8")
    return p


def test_load_all_labels(tmp_path):
    body = "".join(
        f"{i}\tu{i}\tobamacare\t{lab}\ttweet number {i}\n"
        for i, lab in enumerate(["positive", "NEGATIVE", "Neutral", "unsure", "irrelevant"])
    )
    c = load_corpus(write(tmp_path, body))
    assert len(c) == 5
    assert c.labels == ["positive", "negative", "neutral", "unsure", "irrelevant"]
    assert [t.id for t in c] == ["0", "1", "2", "3", "4"]


def test_header_only_file_is_empty(tmp_path):
    assert len(load_corpus(write(tmp_path, ""))) == 0


def test_empty_label_is_unlabeled(tmp_path):
    c = load_corpus(write(tmp_path, "a\tu\tt\t\thello\n"))
    assert c.tweets[0].label == "unlabeled"


def test_four_columns_is_malformed(tmp_path):
    with pytest.raises(MalformedRow) as exc:
        load_corpus(write(tmp_path, "a\tu\tpositive\thello\n"))
    assert exc.value.line_no == 2


def test_unknown_label_is_malformed(tmp_path):
    with pytest.raises(MalformedRow):
        load_corpus(write(tmp_path, "a\tu\tt\tpostive\thello\n"))


def test_blank_text_is_malformed(tmp_path):
    with pytest.raises(MalformedRow):
        load_corpus(write(tmp_path, "a\tu\tt\tpositive\t   \n"))


def test_duplicate_id(tmp_path):
    with pytest.raises(DuplicateId) as exc:
        load_corpus(write(tmp_path, "a\tu\tt\tpositive\thi\na\tv\tt\tnegative\tho\n"))
    assert exc.value.id == "a"


def test_missing_file(tmp_path):
    with pytest.raises(MissingFile):
        load_corpus(tmp_path / "nope.tsv")


def _corpus(labels):
    return Corpus(tuple(Tweet(str(i), "u", "t", lab, f"text {i}") for i, lab in enumerate(labels)))


def test_filter_labels_keeps_sentiment_classes():
    c = _corpus(["positive", "negative", "unsure", "irrelevant", "neutral"])
    assert filter_labels(c).labels == ["positive", "negative", "neutral"]


def test_filter_all_unsure_is_empty():
    assert len(filter_labels(_corpus(["unsure", "unsure"]))) == 0


def test_filter_identity_without_unsure():
    c = _corpus(["negative", "neutral", "positive", "negative"])
    assert filter_labels(c) == c


label_lists = st.lists(st.sampled_from(["positive", "negative", "neutral", "unsure", "irrelevant", "unlabeled"]),
                       max_size=30)


@given(label_lists)
def test_filter_is_idempotent(labels):
    c = _corpus(labels)
    assert filter_labels(filter_labels(c)) == filter_labels(c)


_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp"), blacklist_characters="\t\r\n\x85"),
    min_size=1, max_size=60,
).filter(lambda s: s.strip())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["positive", "negative", "neutral", "unsure", "irrelevant", ""]), _text),
                max_size=10))
def test_load_save_round_trip_is_byte_identical(tmp_path_factory, rows):
    body = "".join(f"id{i}\tuser{i}\ttopic\t{lab}\t{text}\n" for i, (lab, text) in enumerate(rows))
    src = tmp_path_factory.mktemp("rt") / "in.tsv"
    src.write_bytes((HEADER + body).encode("utf-8"))
    dst = src.with_name("out.tsv")
    save_corpus(load_corpus(src), dst)
    assert dst.read_bytes() == src.read_bytes()


def test_stats_empty_corpus(lex, tagger):
    r = corpus_stats(Corpus(), lex, tagger)
    assert all(getattr(r, name) == 0 for name in StatsReport.counter_names())
    assert r.class_histogram == {}


def test_stats_single_tweet_trace(lex, tagger):
    c = Corpus((Tweet("1", "u", "t", "positive", "RT @u GOOD :) #hcr"),))
    r = corpus_stats(c, lex, tagger)
    assert (r.rt_count, r.mention_count, r.hashtag_count, r.pos_emoticons, r.capitalized_words) == (1, 1, 1, 1, 1)
    assert r.neg_emoticons == 0
    # tokens: good (weak positive, adj), hcr
    assert r.token_count == 2
    assert r.weak_pos == 1
    assert r.class_histogram == {"positive": 1}


def test_stats_histogram_sums_to_size(synthetic_train, lex, tagger):
    r = corpus_stats(synthetic_train, lex, tagger)
    assert sum(r.class_histogram.values()) == len(synthetic_train)


def test_fixture_train_ratio_is_about_two_negatives_per_positive(synthetic_train):
    c = filter_labels(synthetic_train)
    ratio = c.labels.count("negative") / c.labels.count("positive")
    assert 1.6 <= ratio <= 2.6


def test_stats_additive_under_concatenation(synthetic_train, lex, tagger):
    tweets = synthetic_train.tweets
    a, b = Corpus(tweets[:100]), Corpus(tweets[100:180])
    assert corpus_stats(a + b, lex, tagger) == corpus_stats(a, lex, tagger) + corpus_stats(b, lex, tagger)


def test_stats_json_uses_field_names(lex, tagger):
    r = corpus_stats(Corpus((Tweet("1", "u", "t", "negative", "bad :( :("),)), lex, tagger)
    d = json.loads(r.to_json())
    assert set(d) == set(StatsReport.counter_names()) | {"class_histogram"}
    assert d["neg_emoticons"] == 2 and d["pos_emoticons"] == 0
    assert "neg_emoticons" in r.to_table()
