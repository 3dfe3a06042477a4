"""Confusion counts and P/R/F1/Accuracy over per-triple verdicts.

Abstentions ("not enough information") need an explicit policy because the
binary metrics have no cell for them: AS_INVALID scores an abstention as a
predicted-invalid (the default, keeping every record inside the four
counts), AS_EXCLUDED drops it from the counts. Either way the abstained
total is reported separately, so nothing is silently lost.

Metrics use the zero-denominator convention: any undefined ratio is 0.
Reports store full-precision values; rounding happens only at display time.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .types import Verdict


class AbstainPolicy(Enum):
    AS_INVALID = "invalid"
    AS_EXCLUDED = "exclude"


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    abstained: int = 0

    @property
    def total_counted(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    accuracy: float


@dataclass(frozen=True)
class RecordOutcome:
    record_id: str
    verdict: Verdict
    gold: bool
    fallback_used: bool = False


@dataclass(frozen=True)
class EvalReport:
    counts: ConfusionCounts
    metrics: Metrics
    per_record: tuple[RecordOutcome, ...] = ()


def confusion(results: Sequence[tuple[Verdict, bool]], policy: AbstainPolicy) -> ConfusionCounts:
    tp = fp = tn = fn = abstained = 0
    for verdict, gold in results:
        if verdict is Verdict.NOT_ENOUGH_INFORMATION:
            abstained += 1
            if policy is AbstainPolicy.AS_EXCLUDED:
                continue
            verdict = Verdict.INVALID
        if verdict is Verdict.VALID:
            if gold:
                tp += 1
            else:
                fp += 1
        else:
            if gold:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn, abstained=abstained)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def metrics(counts: ConfusionCounts) -> Metrics:
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    accuracy = _ratio(counts.tp + counts.tn, counts.total_counted)
    return Metrics(precision=precision, recall=recall, f1=f1, accuracy=accuracy)


def build_report(outcomes: Sequence[RecordOutcome], policy: AbstainPolicy) -> EvalReport:
    counts = confusion([(o.verdict, o.gold) for o in outcomes], policy)
    return EvalReport(counts=counts, metrics=metrics(counts), per_record=tuple(outcomes))


F1_CONSISTENCY_TOLERANCE = 0.0051


@dataclass(frozen=True)
class TableViolation:
    row: tuple[float, float, float]
    implied_f1: float
    deviation: float
    label: str = ""


def table_consistency_check(
    rows: Sequence[tuple[float, float, float]],
    tolerance: float = F1_CONSISTENCY_TOLERANCE,
    labels: Sequence[str] | None = None,
) -> list[TableViolation]:
    """Rows whose F1 strays from 2PR/(P+R) by more than ``tolerance``."""
    violations: list[TableViolation] = []
    for i, (p, r, f1) in enumerate(rows):
        implied = _ratio(2 * p * r, p + r)
        deviation = abs(f1 - implied)
        if deviation > tolerance:
            violations.append(
                TableViolation(
                    row=(p, r, f1),
                    implied_f1=implied,
                    deviation=deviation,
                    label=labels[i] if labels else f"row {i}",
                )
            )
    return violations
