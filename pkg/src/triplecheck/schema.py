"""Parse raw model output into a ValidatedTriple and enforce the response schema.

Models wrap JSON in prose and code fences, mis-echo the input triple, and
invent verdict spellings. The rules here decide what gets normalized and what
gets rejected:

* ``triple_is_valid`` accepts booleans, the boolean-like strings ``"true"`` /
  ``"false"`` (case-insensitive), and the abstention phrase
  ``"Not enough information to say"`` (case-insensitive, surrounding
  whitespace ignored). Anything else is rejected.
* The echoed subject/relation/object are checked against the expected triple
  but never trusted: the result always carries the input triple, and a
  mismatch only logs a warning.
* A missing or blank ``reason`` is rejected; verdicts without justification
  are useless downstream.
"""

from __future__ import annotations

import json
import logging
from typing import Any, Callable

from .types import (
    ABSTAIN_WIRE_LITERAL,
    SourceAttribution,
    Triple,
    ValidatedTriple,
    Verdict,
)

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = (
    "predicted_subject_name",
    "predicted_relation",
    "predicted_object_name",
    "triple_is_valid",
)


class SchemaError(ValueError):
    """Base class for response-schema violations."""


class NoJsonFound(SchemaError):
    def __init__(self, raw: str):
        super().__init__("no JSON object found in model response")
        self.raw = raw


class MissingField(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"required field missing: {name}")
        self.name = name


class InvalidVerdictLiteral(SchemaError):
    def __init__(self, got: Any):
        super().__init__(
            f"triple_is_valid must be true, false or {ABSTAIN_WIRE_LITERAL!r}; got {got!r}"
        )
        self.got = got


class EmptyReason(SchemaError):
    def __init__(self) -> None:
        super().__init__("reason is missing or blank")


def extract_json(raw: str) -> dict[str, Any]:
    """Return the first syntactically complete JSON object found in ``raw``.

    Code fences and leading/trailing prose are ignored: the scan starts at
    each ``{`` in turn and takes the first position that parses.
    """
    if not raw:
        raise NoJsonFound(raw)
    decoder = json.JSONDecoder()
    pos = raw.find("{")
    while pos != -1:
        try:
            doc, _ = decoder.raw_decode(raw, pos)
        except json.JSONDecodeError:
            pos = raw.find("{", pos + 1)
            continue
        if isinstance(doc, dict):
            return doc
        pos = raw.find("{", pos + 1)
    raise NoJsonFound(raw)


def _parse_verdict(value: Any) -> Verdict:
    if value is True:
        return Verdict.VALID
    if value is False:
        return Verdict.INVALID
    if isinstance(value, str):
        text = value.strip()
        if text.casefold() == ABSTAIN_WIRE_LITERAL.casefold():
            return Verdict.NOT_ENOUGH_INFORMATION
        if text.casefold() == "true":
            return Verdict.VALID
        if text.casefold() == "false":
            return Verdict.INVALID
    raise InvalidVerdictLiteral(value)


def _echoed_relations(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    if isinstance(value, list):
        return tuple(str(item) for item in value)
    return (str(value),)


def _parse_sources(value: Any) -> tuple[SourceAttribution, ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        raise SchemaError("sources must be a list")
    out: list[SourceAttribution] = []
    for i, entry in enumerate(value):
        if not isinstance(entry, dict):
            raise SchemaError(f"sources[{i}] must be an object")
        text = entry.get("relevant_text")
        if not isinstance(text, str):
            raise MissingField(f"sources[{i}].relevant_text")
        origin = entry.get("origin", "none")
        origin_id = entry.get("origin_id", "")
        if origin not in ("corpus", "wikidata", "web", "none"):
            raise SchemaError(f"sources[{i}].origin is not a known tag: {origin!r}")
        if origin != "none" and not text.strip():
            raise MissingField(f"sources[{i}].relevant_text")
        out.append(SourceAttribution(relevant_text=text, origin=origin, origin_id=str(origin_id)))
    return tuple(out)


def parse_validated_triple(doc: dict[str, Any], expected: Triple) -> ValidatedTriple:
    """Validate a decoded response object and build the result for ``expected``.

    The echoed triple fields are compared against ``expected`` and replaced by
    it in the result; drifted echoes are logged, not failed.
    """
    if not isinstance(doc, dict):
        raise SchemaError("response document must be a JSON object")
    for name in REQUIRED_FIELDS:
        if name not in doc:
            raise MissingField(name)

    verdict = _parse_verdict(doc["triple_is_valid"])

    reason = doc.get("reason")
    if not isinstance(reason, str) or not reason.strip():
        raise EmptyReason()

    echoed = (
        str(doc["predicted_subject_name"]),
        _echoed_relations(doc["predicted_relation"]),
        str(doc["predicted_object_name"]),
    )
    expected_fields = (expected.subject, expected.relations, expected.object)
    if echoed != expected_fields:
        logger.warning(
            "model echoed a mutated triple %r; keeping the input triple %r",
            echoed,
            expected_fields,
        )

    sources = _parse_sources(doc.get("sources"))
    return ValidatedTriple(triple=expected, verdict=verdict, reason=reason, sources=sources)


def response_parser(expected: Triple) -> Callable[[str], ValidatedTriple]:
    """A raw-text parser bound to one expected triple, for the retry loop."""

    def parse(raw: str) -> ValidatedTriple:
        return parse_validated_triple(extract_json(raw), expected)

    return parse
