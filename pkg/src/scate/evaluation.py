"""Execution-based scoring of predicted annotations against gold.

A gold expression scores 1 only when a prediction with the same span text
exists and both expressions execute to exactly the same value.  Undetected
expressions score 0, so accuracy (averaged over gold expressions) always
equals recall.
"""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .annotations import AnnotationItem, AnnotationRecord
from .dsl import execute, serialize_value, values_equal
from .errors import AlignmentError, DegenerateInputError, ScateError

METRICS = ("accuracy", "precision", "recall", "f1")


def normalize_span(text: str) -> str:
    return " ".join(text.split())


def match_items(gold: Sequence[AnnotationItem], pred: Sequence[AnnotationItem]) -> list[tuple[int, int]]:
    """Pair gold and predicted items with identical span text, one-to-one, in gold order."""
    used = set()
    pairs = []
    for gi, g in enumerate(gold):
        key = normalize_span(g.time_text)
        for pi, p in enumerate(pred):
            if pi not in used and normalize_span(p.time_text) == key:
                used.add(pi)
                pairs.append((gi, pi))
                break
    return pairs


def compute_metrics(gold: int, predicted: int, correct: int) -> dict[str, float]:
    recall = correct / gold if gold else 0.0
    precision = correct / predicted if predicted else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"accuracy": recall, "precision": precision, "recall": recall, "f1": f1}


@dataclasses.dataclass(frozen=True)
class Outcome:
    """One resampling unit: a scored gold item, or a prediction with no gold counterpart."""
    is_gold: bool
    matched: bool
    correct: bool


def _tally(outcomes: Sequence[Outcome]) -> tuple[int, int, int]:
    gold = sum(o.is_gold for o in outcomes)
    predicted = sum(o.matched or not o.is_gold for o in outcomes)
    correct = sum(o.correct for o in outcomes)
    return gold, predicted, correct


@dataclasses.dataclass(frozen=True)
class BootstrapStats:
    mean: float
    std: float
    ci_low: float
    ci_high: float

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _summarize(values: list[float]) -> BootstrapStats:
    # exact rational mean so that identical samples reproduce the point value bit for bit
    exact = [Fraction(v) for v in values]
    mean = sum(exact) / len(exact)
    variance = sum((v - mean) ** 2 for v in exact) / len(exact)
    low, high = np.percentile(np.asarray(values, dtype=float), [2.5, 97.5])
    return BootstrapStats(float(mean), math.sqrt(variance), float(low), float(high))


def sample_indices(n_items: int, sample_fraction: float, seed: int) -> np.ndarray:
    """The items drawn by one bootstrap iteration: a seeded permutation, truncated."""
    k = math.ceil(sample_fraction * n_items)
    return np.random.default_rng(seed).permutation(n_items)[:k]


def bootstrap(outcomes: Sequence[Outcome], iterations: int = 100, sample_fraction: float = 0.8,
              seed: int = 0) -> dict[str, BootstrapStats]:
    """
    Resample ``ceil(sample_fraction * N)`` outcomes without replacement,
    `iterations` times, and summarize each metric by its mean, population
    standard deviation and 2.5/97.5 percentiles.  Iteration ``i`` draws from
    a generator seeded with ``seed + i``.
    """
    if not outcomes:
        raise DegenerateInputError("cannot bootstrap an empty evaluation")
    if iterations < 1:
        raise ValueError(f"iterations must be at least 1, got {iterations}")
    if not 0 < sample_fraction <= 1:
        raise ValueError(f"sample_fraction must be in (0, 1], got {sample_fraction}")
    samples = {m: [] for m in METRICS}
    for i in range(iterations):
        chosen = [outcomes[j] for j in sample_indices(len(outcomes), sample_fraction, seed + i)]
        for name, value in compute_metrics(*_tally(chosen)).items():
            samples[name].append(value)
    return {name: _summarize(values) for name, values in samples.items()}


@dataclasses.dataclass(frozen=True)
class Verdict:
    record_id: str
    gold_index: int
    pred_index: int | None
    gold_value: dict
    pred_value: dict | None = None
    pred_error: dict | None = None
    correct: bool = False

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class EvalReport:
    metrics: dict[str, float]
    counts: dict[str, int]
    gold_execution_failures: list[dict]
    verdicts: list[Verdict]
    outcomes: list[Outcome]
    bootstrap: dict[str, BootstrapStats] | None = None

    @property
    def accuracy(self) -> float:
        return self.metrics["accuracy"]

    @property
    def precision(self) -> float:
        return self.metrics["precision"]

    @property
    def recall(self) -> float:
        return self.metrics["recall"]

    @property
    def f1(self) -> float:
        return self.metrics["f1"]

    def to_json(self, per_item: bool = False) -> dict:
        out = {
            "metrics": dict(self.metrics),
            "counts": dict(self.counts),
            "gold_execution_failures": list(self.gold_execution_failures),
            "bootstrap": None if self.bootstrap is None else {k: v.to_json() for k, v in self.bootstrap.items()},
        }
        if per_item:
            out["per_item"] = [v.to_json() for v in self.verdicts]
        return out


def _run(code: str):
    try:
        return execute(code), None
    except ScateError as e:
        return None, {"category": e.category, "message": e.message}


def _index(records: Sequence[AnnotationRecord], which: str) -> dict[str, AnnotationRecord]:
    by_id = {}
    for r in records:
        if r.id in by_id:
            raise AlignmentError(f"record id {r.id!r} appears more than once in the {which} records")
        by_id[r.id] = r
    return by_id


def score(gold_records: Sequence[AnnotationRecord], pred_records: Sequence[AnnotationRecord], *,
          bootstrap_iterations: int | None = None, sample_fraction: float = 0.8, seed: int = 0) -> EvalReport:
    """
    Score predictions against gold, aligning records by id.

    Gold expressions that fail to execute are left out of every count (with
    the predictions matched to them) and listed in
    ``gold_execution_failures``.
    """
    gold_by_id = _index(gold_records, "gold")
    pred_by_id = _index(pred_records, "predicted")
    verdicts, outcomes, failures = [], [], []
    for record_id in sorted(gold_by_id.keys() | pred_by_id.keys()):
        gold_items = gold_by_id[record_id].items if record_id in gold_by_id else ()
        pred_items = pred_by_id[record_id].items if record_id in pred_by_id else ()
        pairs = dict(match_items(gold_items, pred_items))
        matched_preds = set()
        for gi, item in enumerate(gold_items):
            gold_value, gold_error = _run(item.scate)
            if gold_error is not None:
                failures.append({"record_id": record_id, "index": gi, "time_text": item.time_text, **gold_error})
                if gi in pairs:
                    matched_preds.add(pairs[gi])
                continue
            pi = pairs.get(gi)
            if pi is None:
                verdicts.append(Verdict(record_id, gi, None, serialize_value(gold_value)))
                outcomes.append(Outcome(True, False, False))
                continue
            matched_preds.add(pi)
            pred_value, pred_error = _run(pred_items[pi].scate)
            correct = pred_error is None and values_equal(gold_value, pred_value)
            verdicts.append(Verdict(record_id, gi, pi, serialize_value(gold_value),
                                    None if pred_value is None else serialize_value(pred_value),
                                    pred_error, correct))
            outcomes.append(Outcome(True, True, correct))
        outcomes.extend(Outcome(False, False, False) for pi in range(len(pred_items)) if pi not in matched_preds)
    gold, predicted, correct = _tally(outcomes)
    counts = {"gold": gold, "predicted": predicted, "matched": sum(o.matched for o in outcomes), "correct": correct}
    report = EvalReport(compute_metrics(gold, predicted, correct), counts, failures, verdicts, outcomes)
    if bootstrap_iterations:
        report.bootstrap = bootstrap(outcomes, bootstrap_iterations, sample_fraction, seed)
    return report
