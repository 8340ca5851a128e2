"""Incremental-feature evaluation (one trained model per feature mask)."""

from dataclasses import replace

from .corpus import filter_labels
from .evaluation import evaluate
from .features import mask_label, parse_mask
from .pipeline import PipelineConfig, SentimentPipeline

INCREMENTAL_MASKS = (
    ("f1", "f2"),
    ("f1", "f2", "f4"),
    ("f1", "f2", "f4", "f6", "f7"),
    ("f1", "f2", "f4", "f5", "f6", "f7"),
    ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f9"),
    ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"),
)


def ablation_table(train, test, feature_masks=INCREMENTAL_MASKS, config=None, lex=None, tagger=None, urls=None):
    """Train on ``train`` and evaluate on ``test`` once per mask, in order.

    Returns a list of ``(mask, EvalReport)``.
    """
    if not feature_masks:
        raise ValueError("no feature masks given")
    overlap = {t.id for t in train} & {t.id for t in test}
    if overlap:
        raise ValueError(f"train and test share ids: {sorted(overlap)[:5]}")
    config = config or PipelineConfig()
    test = filter_labels(test)
    rows = []
    for spec in feature_masks:
        mask = parse_mask(spec)
        pipe = SentimentPipeline(lex, tagger, urls, replace(config, features=mask)).fit(train)
        preds = [p.label for p in pipe.predict(test)]
        rows.append((mask, evaluate(preds, test.labels)))
    return rows


def format_ablation(rows, macro=False):
    """Table-4 style text: one line per mask, averages then per-class."""
    classes = rows[0][1].classes if rows else ()
    head = f"{'features':<32}{'avg P':>7}{'avg R':>7}{'avg F1':>7}"
    for c in classes:
        head += f"{c[:3] + ' P':>8}{c[:3] + ' R':>8}{c[:3] + ' F1':>8}"
    lines = [head]
    for mask, rep in rows:
        avg = rep.macro_avg if macro else rep.weighted_avg
        line = f"{'+' + mask_label(mask):<32}{avg['precision']:>7.2f}{avg['recall']:>7.2f}{avg['f1']:>7.2f}"
        for c in classes:
            m = rep.per_class[c]
            line += f"{m['precision']:>8.2f}{m['recall']:>8.2f}{m['f1']:>8.2f}"
        lines.append(line)
    return "\n".join(lines)
