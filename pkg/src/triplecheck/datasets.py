"""Labeled benchmark loading and seeded subset sampling.

Two file formats are accepted:

* TSV: ``head<TAB>relation<TAB>tail<TAB>label`` with label 0 or 1.
* JSONL: objects using the wire field names (``predicted_subject_name``,
  ``predicted_relation``, ``predicted_object_name``) plus ``label``.

Records keep file order and get stable ids ``<dataset>:<line-number>``.
Sampling is deterministic for a given (records, n, seed): the selection is
drawn with an explicit Fisher-Yates prefix over ``Random.getrandbits`` so
frozen goldens hold across Python versions, and the output preserves the
original dataset order.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from typing import Sequence

from .types import Triple


class DatasetError(ValueError):
    """Base class for dataset loading failures."""


class Malformed(DatasetError):
    def __init__(self, line_no: int, why: str):
        super().__init__(f"line {line_no}: {why}")
        self.line_no = line_no
        self.why = why


class UnknownFormat(DatasetError):
    def __init__(self, fmt: str):
        super().__init__(f"unknown dataset format: {fmt!r} (expected 'tsv' or 'jsonl')")
        self.format = fmt


@dataclass(frozen=True)
class DatasetRecord:
    triple: Triple
    dataset_name: str
    record_id: str

    def __post_init__(self) -> None:
        if self.triple.gold_label is None:
            raise ValueError("dataset records require a gold label")


def _parse_label(raw: object, line_no: int) -> bool:
    if raw is True or raw == 1 or raw == "1":
        return True
    if raw is False or raw == 0 or raw == "0":
        return False
    raise Malformed(line_no, f"label must be 0 or 1, got {raw!r}")


def _relations_from(value: object, line_no: int) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    if isinstance(value, list) and value and all(isinstance(v, str) for v in value):
        return tuple(value)
    raise Malformed(line_no, f"relation must be a string or list of strings, got {value!r}")


def _tsv_record(line: str, line_no: int, dataset_name: str) -> DatasetRecord:
    fields = line.split("\t")
    if len(fields) != 4:
        raise Malformed(line_no, f"expected 4 fields, got {len(fields)}")
    head, relation, tail, label = (f.strip() for f in fields)
    try:
        triple = Triple(
            subject=head,
            relations=(relation,),
            object=tail,
            gold_label=_parse_label(label, line_no),
        )
    except ValueError as exc:
        raise Malformed(line_no, str(exc)) from exc
    return DatasetRecord(triple=triple, dataset_name=dataset_name, record_id=f"{dataset_name}:{line_no}")


def _jsonl_record(line: str, line_no: int, dataset_name: str) -> DatasetRecord:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise Malformed(line_no, f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise Malformed(line_no, "each line must be a JSON object")
    for key in ("predicted_subject_name", "predicted_relation", "predicted_object_name", "label"):
        if key not in doc:
            raise Malformed(line_no, f"missing field {key!r}")
    try:
        triple = Triple(
            subject=str(doc["predicted_subject_name"]),
            relations=_relations_from(doc["predicted_relation"], line_no),
            object=str(doc["predicted_object_name"]),
            gold_label=_parse_label(doc["label"], line_no),
        )
    except ValueError as exc:
        raise Malformed(line_no, str(exc)) from exc
    return DatasetRecord(triple=triple, dataset_name=dataset_name, record_id=f"{dataset_name}:{line_no}")


def load_dataset(path: str, format: str) -> list[DatasetRecord]:
    """Read every labeled record from ``path``; blank lines are skipped."""
    if format not in ("tsv", "jsonl"):
        raise UnknownFormat(format)
    dataset_name = os.path.splitext(os.path.basename(path))[0]
    records: list[DatasetRecord] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw_line in enumerate(fh, start=1):
            line = raw_line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if format == "tsv":
                records.append(_tsv_record(line, line_no, dataset_name))
            else:
                records.append(_jsonl_record(line, line_no, dataset_name))
    return records


def _randbelow(rng: random.Random, n: int) -> int:
    # getrandbits-based rejection sampling: documented-stable across versions.
    bits = n.bit_length()
    value = rng.getrandbits(bits)
    while value >= n:
        value = rng.getrandbits(bits)
    return value


def _sample_indices(total: int, n: int, rng: random.Random) -> list[int]:
    pool = list(range(total))
    for i in range(n):
        j = i + _randbelow(rng, total - i)
        pool[i], pool[j] = pool[j], pool[i]
    return sorted(pool[:n])


def sample_subset(
    records: Sequence[DatasetRecord],
    n: int,
    seed: int = 42,
    *,
    balanced: bool = False,
) -> list[DatasetRecord]:
    """Uniform sample of ``n`` records without replacement, in original order.

    ``n`` at or above the record count returns everything unchanged. With
    ``balanced=True`` the sample targets an even split of positive and
    negative gold labels, topping up from the other side when one runs short.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n >= len(records):
        return list(records)
    rng = random.Random(seed)
    if not balanced:
        indices = _sample_indices(len(records), n, rng)
        return [records[i] for i in indices]

    positives = [i for i, r in enumerate(records) if r.triple.gold_label]
    negatives = [i for i, r in enumerate(records) if not r.triple.gold_label]
    want_pos = min(n - n // 2, len(positives))
    want_neg = min(n - want_pos, len(negatives))
    want_pos = min(n - want_neg, len(positives))
    chosen = [positives[i] for i in _sample_indices(len(positives), want_pos, rng)]
    chosen += [negatives[i] for i in _sample_indices(len(negatives), want_neg, rng)]
    return [records[i] for i in sorted(chosen)]


def label_balance(records: Sequence[DatasetRecord]) -> tuple[int, int]:
    """(positive, negative) gold-label counts; reported, never enforced."""
    positives = sum(1 for r in records if r.triple.gold_label)
    return positives, len(records) - positives
