"""Accuracy measures and timing capture.

The headline measure aggregates one-vs-rest binary decisions: each of the n
test samples contributes one TP/TN/FP/FN decision per class, so the score is
sum(TP + TN) / (n * C). For single-label predictions this equals
1 - 2e / (n * C) with e the misclassification count, which is why published
values on a 45-sample, 15-class split land on multiples of 1/675.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, TypeVar

import numpy as np

from .errors import InvalidInputError

T = TypeVar("T")


@dataclass
class ClassCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class ClassificationReport:
    per_class: list[ClassCounts]
    q_accuracy: float
    plain_accuracy: float
    n: int
    classes: int


def _check_labels(pred, truth, classes: int) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise InvalidInputError(
            f"prediction/truth length mismatch: {pred.shape} vs {truth.shape}"
        )
    if pred.size == 0:
        raise InvalidInputError("metric undefined for zero samples")
    for name, vec in (("pred", pred), ("truth", truth)):
        if vec.min() < 0 or vec.max() >= classes:
            raise InvalidInputError(f"{name} labels must lie in [0, {classes})")
    return pred, truth


def confusion_counts(pred, truth, classes: int) -> list[ClassCounts]:
    """One-vs-rest TP/TN/FP/FN per class; every sample contributes to every class."""
    pred, truth = _check_labels(pred, truth, classes)
    counts = []
    for c in range(classes):
        p = pred == c
        t = truth == c
        counts.append(
            ClassCounts(
                tp=int(np.sum(p & t)),
                tn=int(np.sum(~p & ~t)),
                fp=int(np.sum(p & ~t)),
                fn=int(np.sum(~p & t)),
            )
        )
    return counts


def q_accuracy(report: ClassificationReport) -> float:
    """sum(TP + TN) over all (sample, class) decisions."""
    if report.n < 1:
        raise InvalidInputError("metric undefined for zero samples")
    good = sum(c.tp + c.tn for c in report.per_class)
    return good / (report.n * report.classes)


def plain_accuracy(pred, truth) -> float:
    """Fraction of samples whose predicted label matches the truth."""
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape or pred.size == 0:
        raise InvalidInputError(
            f"prediction/truth length mismatch or empty: {pred.shape} vs {truth.shape}"
        )
    return float(np.mean(pred == truth))


def build_report(pred, truth, classes: int) -> ClassificationReport:
    pred, truth = _check_labels(pred, truth, classes)
    per_class = confusion_counts(pred, truth, classes)
    n = pred.size
    good = sum(c.tp + c.tn for c in per_class)
    return ClassificationReport(
        per_class=per_class,
        q_accuracy=good / (n * classes),
        plain_accuracy=float(np.mean(pred == truth)),
        n=int(n),
        classes=int(classes),
    )


def percent_str(fraction: float) -> str:
    """Format a fraction as a percentage, two decimals, round half up."""
    quantized = Decimal(repr(fraction * 100.0)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return f"{quantized:.2f}"


def timed(op: Callable[[], T]) -> tuple[T, float]:
    """Run op() and return (result, wall seconds) from the monotonic clock."""
    start = time.perf_counter()
    result = op()
    return result, time.perf_counter() - start
