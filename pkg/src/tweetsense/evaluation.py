"""Per-class precision / recall / F1 with weighted and macro averages."""

import json
from dataclasses import dataclass, field

import numpy as np

DEFAULT_CLASSES = ("negative", "neutral", "positive")


class LengthMismatch(ValueError):
    def __init__(self, n_pred, n_gold):
        super().__init__(f"{n_pred} predictions but {n_gold} gold labels")


def _ratio(num, den):
    return float(num / den) if den else 0.0


def _f1(p, r):
    return float(2 * p * r / (p + r)) if p + r else 0.0


@dataclass
class EvalReport:
    classes: tuple
    per_class: dict  # class -> {precision, recall, f1, support}
    weighted_avg: dict
    macro_avg: dict
    confusion: list  # rows = gold, columns = predicted, in ``classes`` order
    zero_division: list = field(default_factory=list)  # classes never predicted

    @property
    def total(self):
        return int(sum(map(sum, self.confusion)))

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "per_class": self.per_class,
            "weighted_avg": self.weighted_avg,
            "macro_avg": self.macro_avg,
            "confusion": self.confusion,
            "zero_division": self.zero_division,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_table(self, macro=False):
        lines = [f"{'':<12}{'precision':>10}{'recall':>10}{'f1-score':>10}{'support':>9}"]
        for c in self.classes:
            m = self.per_class[c]
            flag = "  (never predicted)" if c in self.zero_division else ""
            lines.append(f"{c:<12}{m['precision']:>10.2f}{m['recall']:>10.2f}{m['f1']:>10.2f}{m['support']:>9d}{flag}")
        w = self.weighted_avg
        lines.append(f"{'avg/total':<12}{w['precision']:>10.2f}{w['recall']:>10.2f}{w['f1']:>10.2f}{self.total:>9d}")
        if macro:
            m = self.macro_avg
            lines.append(f"{'macro avg':<12}{m['precision']:>10.2f}{m['recall']:>10.2f}{m['f1']:>10.2f}{self.total:>9d}")
        return "\n".join(lines)


def metrics_from_confusion(confusion, classes):
    """Report fields recomputed from a gold x predicted count matrix."""
    cm = np.asarray(confusion, dtype=float)
    per_class, never = {}, []
    for i, c in enumerate(classes):
        tp = cm[i, i]
        predicted = cm[:, i].sum()
        support = cm[i, :].sum()
        p = _ratio(tp, predicted)
        r = _ratio(tp, support)
        per_class[c] = {"precision": p, "recall": r, "f1": _f1(p, r), "support": int(support)}
        if predicted == 0:
            never.append(c)
    total = cm.sum()
    weighted, macro = {}, {}
    for key in ("precision", "recall", "f1"):
        values = [per_class[c][key] for c in classes]
        weighted[key] = _ratio(sum(v * per_class[c]["support"] for v, c in zip(values, classes)), total)
        macro[key] = float(np.mean(values)) if values else 0.0
    return per_class, weighted, macro, never


def evaluate(preds, gold, classes=DEFAULT_CLASSES) -> EvalReport:
    preds, gold = list(preds), list(gold)
    if len(preds) != len(gold):
        raise LengthMismatch(len(preds), len(gold))
    classes = tuple(classes)
    idx = {c: i for i, c in enumerate(classes)}
    cm = [[0] * len(classes) for _ in classes]
    for p, g in zip(preds, gold):
        if p not in idx or g not in idx:
            raise ValueError(f"label outside {classes}: {p!r} / {g!r}")
        cm[idx[g]][idx[p]] += 1
    per_class, weighted, macro, never = metrics_from_confusion(cm, classes)
    return EvalReport(classes, per_class, weighted, macro, cm, never)
