"""
Scoring predictions against gold annotations
============================================

Matching is by expression text; correctness is by executed value.
"""

from scate.annotations import AnnotationItem, AnnotationRecord
from scate.evaluation import score

gold = [
    AnnotationRecord("s1", "It happened in 1990.", (AnnotationItem("1990", "Year(1990)"),)),
    AnnotationRecord("s2", "Filed 11/02/89.", (AnnotationItem("11/02/89", "Interval.of(1989, 11, 2)"),)),
    AnnotationRecord("s3", "Nothing to see."),
]
pred = [
    # written differently, same interval
    AnnotationRecord("s1", "It happened in 1990.", (AnnotationItem("1990", "Interval.of(1990)"),)),
    # right text, wrong granularity
    AnnotationRecord("s2", "Filed 11/02/89.", (AnnotationItem("11/02/89", "Year(1989)"),)),
    # spurious
    AnnotationRecord("s3", "Nothing to see.", (AnnotationItem("Nothing", "Year(2000)"),)),
]

report = score(gold, pred)
print(report.counts)
print(report.metrics)

# Resampled estimates are seeded and repeatable; with three units each draw keeps two
report = score(gold, pred, bootstrap_iterations=200, sample_fraction=0.6, seed=0)
for name, stats in report.bootstrap.items():
    print(f"{name:9s} {stats.mean:.3f} [{stats.ci_low:.3f}, {stats.ci_high:.3f}]")
