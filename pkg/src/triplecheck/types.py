"""Shared domain vocabulary: triples, verdicts, evidence chunks, and bundles.

Everything here is an immutable value object, safe to share between
concurrent validation tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

RELATION_JOINER = "; "
ABSTAIN_WIRE_LITERAL = "Not enough information to say"

WORLD_KNOWLEDGE_PROVIDER = "world_knowledge"

ORIGIN_TAGS = ("corpus", "wikidata", "web", "none")


class Verdict(Enum):
    """Closed three-state outcome of validating one triple."""

    VALID = "valid"
    INVALID = "invalid"
    NOT_ENOUGH_INFORMATION = "not_enough_information"

    def to_wire(self) -> bool | str:
        """Wire value: booleans for the decided states, a fixed phrase for abstention."""
        if self is Verdict.VALID:
            return True
        if self is Verdict.INVALID:
            return False
        return ABSTAIN_WIRE_LITERAL


@dataclass(frozen=True)
class Triple:
    """A candidate (subject, relations, object) statement.

    ``relations`` is an ordered, non-empty sequence: a statement may carry
    several alternative relation labels and counts as valid if any holds.
    ``gold_label`` is only present on benchmark records.
    """

    subject: str
    relations: tuple[str, ...]
    object: str
    gold_label: bool | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "relations", tuple(self.relations))
        if not isinstance(self.subject, str) or not self.subject.strip():
            raise ValueError("triple subject must be non-empty text")
        if not isinstance(self.object, str) or not self.object.strip():
            raise ValueError("triple object must be non-empty text")
        if len(self.relations) < 1:
            raise ValueError("triple requires at least one relation")
        for rel in self.relations:
            if not isinstance(rel, str) or not rel.strip():
                raise ValueError("every relation label must be non-empty text")


def triple_to_query(triple: Triple) -> str:
    """Render a triple as the flat text query used for retrieval and prompts.

    Form: ``<subject> <relation1>[; <relationN>]* <object>``, with multiple
    relations joined by ``"; "`` and no leading or trailing whitespace.
    """
    relations = RELATION_JOINER.join(rel.strip() for rel in triple.relations)
    return f"{triple.subject.strip()} {relations} {triple.object.strip()}"


def render_relations(triple: Triple) -> str:
    """The relation label(s) as shown in prompts: same joining rule as queries."""
    return RELATION_JOINER.join(rel.strip() for rel in triple.relations)


@dataclass(frozen=True)
class SourceAttribution:
    """Verbatim evidence excerpt plus where it came from."""

    relevant_text: str
    origin: str = "none"
    origin_id: str = ""

    def __post_init__(self) -> None:
        if self.origin not in ORIGIN_TAGS:
            raise ValueError(f"unknown origin tag: {self.origin!r}")
        if self.origin != "none" and not self.relevant_text.strip():
            raise ValueError("relevant_text must be non-empty when origin is set")


@dataclass(frozen=True)
class ValidatedTriple:
    """The structured validation result for one input triple.

    The embedded triple is always the input triple, byte for byte; a model's
    echo never replaces it.
    """

    triple: Triple
    verdict: Verdict
    reason: str
    sources: tuple[SourceAttribution, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "sources", tuple(self.sources))
        if not isinstance(self.reason, str) or not self.reason.strip():
            raise ValueError("reason must be non-empty text")

    def to_wire(self) -> dict[str, Any]:
        """JSON wire form.

        A single relation serializes as a plain string, several as an array.
        ``sources`` is included only when non-empty.
        """
        relation: str | list[str]
        if len(self.triple.relations) == 1:
            relation = self.triple.relations[0]
        else:
            relation = list(self.triple.relations)
        doc: dict[str, Any] = {
            "predicted_subject_name": self.triple.subject,
            "predicted_relation": relation,
            "predicted_object_name": self.triple.object,
            "triple_is_valid": self.verdict.to_wire(),
            "reason": self.reason,
        }
        if self.sources:
            doc["sources"] = [
                {
                    "relevant_text": s.relevant_text,
                    "origin": s.origin,
                    "origin_id": s.origin_id,
                }
                for s in self.sources
            ]
        return doc


@dataclass(frozen=True)
class ContextChunk:
    """One retrieved piece of evidence text.

    ``score`` is cosine similarity against the query and is absent on
    unranked chunks (for example entries of a freshly built index).
    """

    text: str
    source_id: str
    score: float | None = None

    def __post_init__(self) -> None:
        if self.score is not None and not -1.0 <= self.score <= 1.0:
            raise ValueError(f"similarity score out of [-1, 1]: {self.score}")


@dataclass(frozen=True)
class ContextBundle:
    """Evidence chunks a provider gathered for one triple.

    ``fallback_used`` marks bundles where the provider found nothing and
    validation degrades to the model's inherent knowledge.
    """

    chunks: tuple[ContextChunk, ...]
    provider_name: str
    fallback_used: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "chunks", tuple(self.chunks))
        if not self.chunks and not self.fallback_used and self.provider_name != WORLD_KNOWLEDGE_PROVIDER:
            raise ValueError(
                "empty bundle requires fallback_used=true unless the provider "
                "is the inherent-knowledge provider"
            )
