"""Command-line interface.

    tweetsense train --train train.tsv --model-out model.json
    tweetsense predict --model model.json --in test.tsv
    tweetsense evaluate --model model.json --in test.tsv --out report.json
    tweetsense ablate --train train.tsv --test test.tsv
    tweetsense harvest --in tweets.tsv --model model.json --class negative
    tweetsense strength --model model.json --in tweets.tsv
    tweetsense normalize --in tweets.tsv
    tweetsense segment killthebill
    tweetsense stats --in train.tsv --json

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .ablation import INCREMENTAL_MASKS, ablation_table, format_ablation
from .classify import CLASSES, ClassifierError
from .corpus import CorpusError, filter_labels, load_corpus, corpus_stats
from .enhance import HarvestConfig, harvest_terms, rank_frequencies, strength_score
from .evaluation import evaluate
from .features import mask_label, parse_mask
from .lexicons import LexiconError, load_lexicon_bundle
from .normalize import normalize_tweet, segment_hashtag
from .pipeline import ModelFormatError, PipelineConfig, SentimentPipeline
from .tagging import load_tag_lexicon
from .url_context import HttpFetcher, OfflineFetcher, UrlCache, UrlContext

log = logging.getLogger("tweetsense")

LEXICON_ENV = "TWEETSENSE_LEXICONS"
URL_CACHE_ENV = "TWEETSENSE_URL_CACHE"
DEFAULT_SEED = 42
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def read_config(path):
    """``key=value`` lines; '#' comments and blank lines ignored."""
    cfg = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for no, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise DataError(f"{path}:{no}: expected key=value")
                key, value = line.split("=", 1)
                cfg[key.strip().replace("-", "_")] = value.strip()
    except FileNotFoundError:
        raise DataError(f"config file not found: {path}") from None
    return cfg


def _add_lexicons(p):
    p.add_argument("--lexicons", metavar="DIR", help=f"lexicon directory (default ${LEXICON_ENV} or bundled)")


def _add_urls(p):
    p.add_argument("--url-cache", metavar="DIR", help=f"on-disk URL cache (default ${URL_CACHE_ENV})")
    p.add_argument("--offline", action="store_true", help="never touch the network; cache misses fail")
    p.add_argument("--fetch-timeout-ms", type=int, default=10000)


def _add_common(p):
    p.add_argument("--config", metavar="FILE", help="key=value defaults; flags override")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-v", "--verbose", action="store_true")
    _add_lexicons(p)
    _add_urls(p)


def _add_training(p):
    p.add_argument("--model", dest="model_kind", choices=("nb", "svm"), default="nb")
    p.add_argument("--features", default="all", help="comma list of f1..f9 (default all)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--prior-mode", choices=("empirical", "uniform", "custom"), default="empirical")
    p.add_argument("--class-weights", help="e.g. negative=1,neutral=1,positive=2 (with --prior-mode custom)")
    p.add_argument("--lam", type=float, default=1e-4)
    p.add_argument("--eta0", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--stack-folds", type=int, default=5)
    p.add_argument("--stack-model", choices=("nb", "svm"), default="nb")
    p.add_argument("--tune", action="store_true", help="grid search hyperparameters by cross validation")
    p.add_argument("--cv-folds", type=int, default=5)


def build_parser():
    parser = _Parser(prog="tweetsense", description="Tweet sentiment classification")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("train", help="train and save a model")
    p.add_argument("--train", required=True, metavar="TSV")
    p.add_argument("--dev", metavar="TSV", help="also report scores on this split")
    p.add_argument("--model-out", required=True, metavar="JSON")
    _add_training(p)
    _add_common(p)

    p = sub.add_parser("predict", help="label tweets with a saved model")
    p.add_argument("--model", required=True, metavar="JSON")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    p.add_argument("--out", metavar="TSV")
    _add_common(p)

    p = sub.add_parser("evaluate", help="score a saved model on labelled tweets")
    p.add_argument("--model", required=True, metavar="JSON")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    p.add_argument("--out", metavar="JSON")
    p.add_argument("--macro", action="store_true", help="also print macro averages")
    _add_common(p)

    p = sub.add_parser("ablate", help="incremental feature evaluation")
    p.add_argument("--train", required=True, metavar="TSV")
    p.add_argument("--test", required=True, metavar="TSV")
    p.add_argument("--masks", help="';'-separated masks, e.g. 'f1,f2;f1,f2,f4' (default: the six-step incremental sequence)")
    p.add_argument("--out", metavar="JSON")
    p.add_argument("--macro", action="store_true")
    _add_training(p)
    _add_common(p)

    p = sub.add_parser("harvest", help="harvest class-specific terms")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    p.add_argument("--model", metavar="JSON", help="model used to classify the tweets")
    p.add_argument("--use-gold", action="store_true", help="group by gold labels instead of predictions")
    p.add_argument("--class", dest="label", choices=CLASSES, default="negative")
    p.add_argument("--t1", type=float, default=0.10)
    p.add_argument("--t2", type=float, default=0.60)
    _add_common(p)

    p = sub.add_parser("strength", help="signed sentiment strength per tweet")
    p.add_argument("--model", required=True, metavar="JSON")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    p.add_argument("--calibration", type=float, default=10.0)
    _add_common(p)

    p = sub.add_parser("normalize", help="print normalized tweets as JSON lines")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    _add_lexicons(p)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("segment", help="segment hashtags into words")
    p.add_argument("tags", nargs="+")
    _add_lexicons(p)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("--in", dest="input", required=True, metavar="TSV")
    p.add_argument("--json", action="store_true")
    _add_lexicons(p)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser, sub


def _coerce_bools(parser, cfg):
    for action in parser._actions:
        if action.dest in cfg and isinstance(action, argparse._StoreTrueAction):
            value = str(cfg[action.dest]).lower()
            if value in _TRUE:
                cfg[action.dest] = True
            elif value in _FALSE:
                cfg[action.dest] = False
            else:
                raise DataError(f"config: {action.dest} expects a boolean, got {value!r}")
    return cfg


def parse_args(argv):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        raise UsageError("tweetsense: error: a subcommand is required")
    if getattr(args, "config", None):
        subparser = sub.choices[args.command]
        cfg = read_config(args.config)
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise DataError(f"{args.config}: unknown keys {unknown}")
        subparser.set_defaults(**_coerce_bools(subparser, cfg))
        args = parser.parse_args(argv)
    return args


# -- helpers -----------------------------------------------------------------


def _lexicon_dir(args):
    return args.lexicons or os.environ.get(LEXICON_ENV) or None


def _resources(args):
    directory = _lexicon_dir(args)
    return load_lexicon_bundle(directory), load_tag_lexicon(directory)


def _url_context(args, lex, tagger):
    cache_dir = args.url_cache or os.environ.get(URL_CACHE_ENV)
    fetcher = OfflineFetcher() if args.offline else HttpFetcher(args.fetch_timeout_ms)
    return UrlContext(fetcher, UrlCache(cache_dir) if cache_dir else None, lex, tagger)


def _parse_weights(spec):
    if not spec:
        return None
    weights = {}
    for part in spec.split(","):
        key, _, value = part.partition("=")
        weights[key.strip()] = float(value)
    return weights


def _config(args, features=None):
    return PipelineConfig(
        features=parse_mask(features if features is not None else args.features),
        model_kind=args.model_kind,
        alpha=args.alpha,
        prior_mode=args.prior_mode,
        class_weights=_parse_weights(args.class_weights),
        lam=args.lam,
        eta0=args.eta0,
        epochs=args.epochs,
        stack_folds=args.stack_folds,
        stack_kind=args.stack_model,
        tune=args.tune,
        cv_folds=args.cv_folds,
        seed=args.seed,
    )


def _load_model(args, lex, tagger, urls):
    path = Path(args.model)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    return SentimentPipeline.load(path, lex, tagger, urls)


def _report_url_failures(urls):
    if urls.failures:
        print(f"url fetch failures: {len(urls.failures)} (f5 set to zero for those urls)", file=sys.stderr)


def _write(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_train(args):
    lex, tagger = _resources(args)
    urls = _url_context(args, lex, tagger)
    train = load_corpus(args.train)
    pipe = SentimentPipeline(lex, tagger, urls, _config(args)).fit(train)
    pipe.save(args.model_out)
    n = len(filter_labels(train))
    print(f"trained {args.model_kind} on {n} tweets, features {mask_label(pipe.mask)}")
    if pipe.tuning:
        print(f"grid search best {pipe.tuning['best_params']} macro-F1 {pipe.tuning['best_score']:.4f}")
    if args.dev:
        dev = filter_labels(load_corpus(args.dev))
        preds = [p.label for p in pipe.predict(dev)]
        print(evaluate(preds, dev.labels).to_table())
    print(f"model written to {args.model_out}")
    _report_url_failures(urls)
    return 0


def cmd_predict(args):
    lex, tagger = _resources(args)
    urls = _url_context(args, lex, tagger)
    pipe = _load_model(args, lex, tagger, urls)
    corpus = load_corpus(args.input)
    lines = ["id\tlabel\tposterior(" + ",".join(pipe.model.classes) + ")"]
    for p in pipe.predict(corpus):
        post = ",".join(f"{v:.6f}" for v in p.posterior) if p.posterior is not None else "-"
        lines.append(f"{p.id}\t{p.label}\t{post}")
    _write("\n".join(lines) + "\n", args.out)
    _report_url_failures(urls)
    return 0


def cmd_evaluate(args):
    lex, tagger = _resources(args)
    urls = _url_context(args, lex, tagger)
    pipe = _load_model(args, lex, tagger, urls)
    corpus = filter_labels(load_corpus(args.input))
    report = evaluate([p.label for p in pipe.predict(corpus)], corpus.labels)
    print(report.to_table(macro=args.macro))
    if args.out:
        _write(report.to_json() + "\n", args.out)
    _report_url_failures(urls)
    return 0


def cmd_ablate(args):
    lex, tagger = _resources(args)
    urls = _url_context(args, lex, tagger)
    masks = [m for m in args.masks.split(";") if m.strip()] if args.masks else list(INCREMENTAL_MASKS)
    rows = ablation_table(load_corpus(args.train), load_corpus(args.test), masks, _config(args, "all"),
                          lex, tagger, urls)
    print(format_ablation(rows, macro=args.macro))
    if args.out:
        payload = [{"features": mask_label(m), "report": r.to_dict()} for m, r in rows]
        _write(json.dumps(payload, sort_keys=True) + "\n", args.out)
    _report_url_failures(urls)
    return 0


def cmd_harvest(args):
    lex, tagger = _resources(args)
    corpus = load_corpus(args.input)
    nts = [normalize_tweet(t, lex, tagger) for t in corpus]
    if args.use_gold:
        labels = corpus.labels
    else:
        if not args.model:
            raise UsageError("harvest needs --model (or --use-gold)")
        urls = _url_context(args, lex, tagger)
        labels = [p.label for p in _load_model(args, lex, tagger, urls).predict(corpus)]
    groups = {c: [t for t, lab in zip(nts, labels) if lab == c] for c in CLASSES}
    others = [c for c in CLASSES if c != args.label]
    colls = {c: rank_frequencies(groups[c], c) for c in CLASSES}
    terms = harvest_terms(colls[args.label], colls[others[0]], colls[others[1]], HarvestConfig(args.t1, args.t2))
    _write("".join(f"{term}\t{freq}\n" for term, freq in terms))
    return 0


def cmd_strength(args):
    lex, tagger = _resources(args)
    urls = _url_context(args, lex, tagger)
    pipe = _load_model(args, lex, tagger, urls)
    corpus = load_corpus(args.input)
    out = []
    for p in pipe.predict(corpus):
        fv = p.features
        if fv.f2 is None or fv.f7 is None:
            raise DataError("strength needs a model trained with features f2 and f7")
        out.append(f"{p.id}\t{strength_score(fv, p.label, args.calibration).value}\n")
    _write("".join(out))
    return 0


def cmd_normalize(args):
    lex, tagger = _resources(args)
    for t in load_corpus(args.input):
        sys.stdout.write(json.dumps(normalize_tweet(t, lex, tagger).to_dict(), sort_keys=True) + "\n")
    return 0


def cmd_segment(args):
    lex = load_lexicon_bundle(_lexicon_dir(args))
    for tag in args.tags:
        print(" ".join(segment_hashtag(tag.lstrip("#"), lex.wordlist)))
    return 0


def cmd_stats(args):
    lex, tagger = _resources(args)
    report = corpus_stats(load_corpus(args.input), lex, tagger)
    print(report.to_json() if args.json else report.to_table())
    return 0


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "harvest": cmd_harvest,
    "strength": cmd_strength,
    "normalize": cmd_normalize,
    "segment": cmd_segment,
    "stats": cmd_stats,
}


def run(argv=None):
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except (DataError, CorpusError, LexiconError, ModelFormatError, ClassifierError, OSError, ValueError) as exc:
        print(f"tweetsense: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
