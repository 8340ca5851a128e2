"""Tweet sentiment classification with normalization, hand-built features,
multinomial Naive Bayes / linear SVM, term harvesting and strength scoring."""

from .corpus import Corpus, Tweet, filter_labels, load_corpus, save_corpus
from .lexicons import LexiconBundle, load_lexicon_bundle, lookup_polarity
from .normalize import normalize_tweet, segment_hashtag
from .pipeline import PipelineConfig, SentimentPipeline
from .porter import porter_stem
from .tagging import TagLexicon, load_tag_lexicon

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "LexiconBundle",
    "PipelineConfig",
    "SentimentPipeline",
    "TagLexicon",
    "Tweet",
    "filter_labels",
    "load_corpus",
    "load_lexicon_bundle",
    "load_tag_lexicon",
    "lookup_polarity",
    "normalize_tweet",
    "porter_stem",
    "save_corpus",
    "segment_hashtag",
]
