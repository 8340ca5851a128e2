"""Regenerate the synthetic fixture corpus and its URL cache.

    python tests/fixtures/make_synthetic.py

Writes ``synthetic/train.tsv``, ``synthetic/test.tsv`` and
``synthetic/url_cache/``. Output is fully determined by SEED.

Class signal is spread over the feature families on purpose: prior-polarity
words are only weakly tied to the label, while users (90% hold one stance),
hashtags, topic words and linked articles carry most of it.
"""

import random
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parents[1] / "src"))

from tweetsense.corpus import Corpus, Tweet, save_corpus  # noqa: E402
from tweetsense.url_context import ArticleText, UrlCache  # noqa: E402

SEED = 20100321
N_TRAIN = 360
N_TEST = 150
N_USERS = 110
FETCHED_AT = "2010-03-21T00:00:00+00:00"

CLASS_WEIGHTS = {"negative": 0.5, "positive": 0.25, "neutral": 0.25}

POLARITY = {
    "positive": ["good", "great", "hope", "support", "better", "fair", "protect", "help", "win", "proud", "historic", "thanks"],
    "negative": ["bad", "terrible", "stupid", "corrupt", "disaster", "worst", "lies", "fail", "burden", "waste", "sad", "angry"],
}
TOPIC = {
    "negative": ["socialism", "takeover", "mandate", "bailout", "liberty", "constitution", "freedom", "washington", "spending", "rationing"],
    "positive": ["coverage", "insured", "patients", "families", "children", "access", "nurses", "preexisting", "medicaid", "seniors"],
    "neutral": ["hearing", "schedule", "session", "committee", "update", "amendment", "markup", "livestream", "briefing", "roundup"],
}
SHARED = ["health", "care", "bill", "congress", "senate", "house", "obama", "pelosi", "week", "americans", "insurance", "reform", "plan", "democrats", "republicans"]
HASHTAGS = {
    "negative": ["killthebill", "tcot", "handsoff", "stopthetakeover", "teaparty"],
    "positive": ["passit", "p2", "getcovered", "hcr4all", "yeswecan"],
    "neutral": ["hcrnews", "congress", "senate", "healthnews"],
}
SHARED_TAGS = ["hcr", "obamacare", "healthcare"]
TARGETS = ["obamacare", "obamacare", "obamacare", "congress"]

ARTICLE_SENTENCES = {
    "positive": ["The reform is a historic win for families.", "Doctors say the plan will help patients.",
                 "Supporters are proud and hopeful.", "Coverage will be better and fair."],
    "negative": ["Critics call the bill a costly disaster.", "The mandate is a burden on small business.",
                 "Opponents say the process was corrupt.", "Many voters are angry about the deficit."],
    "neutral": ["The committee meets on Tuesday.", "The vote is scheduled for the weekend.",
                "Lawmakers released the text of the amendment.", "The session starts at noon."],
}


def make_articles(rng):
    urls = {}
    for label in ("positive", "negative", "neutral"):
        for i in range(5):
            url = f"http://news.example.com/{label[:3]}/{i}"
            own = rng.sample(ARTICLE_SENTENCES[label], 3)
            other = rng.choice([l for l in ARTICLE_SENTENCES if l != label])
            sentences = own + [rng.choice(ARTICLE_SENTENCES[other])]
            rng.shuffle(sentences)
            urls.setdefault(label, []).append((url, " ".join(sentences)))
    return urls


def pick(rng, label, pools, p_own):
    if label in pools and rng.random() < p_own:
        return rng.choice(pools[label])
    return None


def make_text(rng, label, articles, all_urls, user_names):
    words = []
    # polarity words: weakly tied to the label
    for _ in range(rng.choice([0, 1, 1, 2])):
        if label != "neutral" and rng.random() < 0.5:
            w = rng.choice(POLARITY[label])
        else:
            w = rng.choice(POLARITY["positive"] + POLARITY["negative"])
        if rng.random() < 0.1:
            w = "not " + w
        words.append(w)
    for _ in range(rng.randint(2, 5)):
        words.append(pick(rng, label, TOPIC, 0.3) or rng.choice(SHARED))
    rng.shuffle(words)
    if label == "negative" and rng.random() < 0.4:
        for i in rng.sample(range(len(words)), min(len(words), rng.randint(1, 3))):
            words[i] = words[i].upper()
    elif rng.random() < 0.1:
        i = rng.randrange(len(words))
        words[i] = words[i].upper()

    tags = []
    for _ in range(rng.randint(1, 3)):
        tags.append("#" + (pick(rng, label, HASHTAGS, 0.35) or rng.choice(SHARED_TAGS)))
    parts = words + tags
    if rng.random() < 0.3:
        pool = articles[label] if rng.random() < 0.75 else all_urls
        parts.insert(rng.randint(0, len(parts)), rng.choice(pool)[0])
    if rng.random() < 0.2:
        parts.insert(0, "@" + rng.choice(user_names))
    if rng.random() < 0.03:
        parts.append(":)" if label == "positive" else ":(" if label == "negative" else ":-)")
    text = " ".join(parts)
    if rng.random() < 0.15:
        text = f"RT @{rng.choice(user_names)}: {text}"
    return text


def generate():
    rng = random.Random(SEED)
    articles = make_articles(rng)
    all_urls = [u for pool in articles.values() for u in pool]
    labels = list(CLASS_WEIGHTS)
    weights = list(CLASS_WEIGHTS.values())
    # stances dealt in proportion to the class weights
    stances = [labels[0]] * (N_USERS // 2) + [labels[1]] * (N_USERS // 4)
    stances += [labels[2]] * (N_USERS - len(stances))
    users = [(f"u{i:03d}", stance) for i, stance in enumerate(stances)]
    by_stance = {lab: [u for u, s in users if s == lab] for lab in labels}
    user_names = [f"voter{i}" for i in range(40)]

    tweets = []
    for n in range(N_TRAIN + N_TEST):
        label = rng.choices(labels, weights)[0]
        if rng.random() < 0.9:
            uid = rng.choice(by_stance[label])
        else:
            uid = rng.choice([u for u, s in users if s != label])
        text = make_text(rng, label, articles, all_urls, user_names)
        tweets.append(Tweet(f"t{n:04d}", uid, rng.choice(TARGETS), label, text))
    # a few tweets outside the three sentiment classes
    for n, lab in enumerate(["unsure", "irrelevant", "unsure", "irrelevant"]):
        i = 7 + 53 * n
        t = tweets[i]
        tweets[i] = Tweet(t.id, t.user_id, t.target, lab, t.text)
    return tweets[:N_TRAIN], tweets[N_TRAIN:], all_urls


def main():
    out = HERE / "synthetic"
    out.mkdir(exist_ok=True)
    train, test, urls = generate()
    save_corpus(Corpus(tuple(train), "train"), out / "train.tsv")
    save_corpus(Corpus(tuple(test), "test"), out / "test.tsv")
    cache = UrlCache(out / "url_cache")
    for url, para in urls:
        cache.put(ArticleText(url, para, FETCHED_AT, "live"))
    print(f"wrote {len(train)} train / {len(test)} test tweets, {len(urls)} cached articles to {out}")


if __name__ == "__main__":
    main()
