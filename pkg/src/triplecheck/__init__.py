"""Triple validation toolkit: schema-constrained LLM verdicts over
knowledge-graph statements, with pluggable evidence providers and an
evaluation harness."""

from .backend import (
    BackendConfig,
    MockBackend,
    OpenAIChatBackend,
    RawCompletion,
    RetryExhausted,
    ScriptExhausted,
    StructuredCompletion,
    complete_structured,
    mock_backend,
    render_prompt,
)
from .datasets import DatasetRecord, Malformed, UnknownFormat, load_dataset, sample_subset
from .evaluation import (
    AbstainPolicy,
    ConfusionCounts,
    EvalReport,
    Metrics,
    RecordOutcome,
    build_report,
    confusion,
    metrics,
    table_consistency_check,
)
from .pipeline import ItemResult, validate_many, validate_triple
from .providers import (
    ContextService,
    EntityNotFound,
    ProviderConfig,
    WikidataClaim,
    WikidataEntity,
    entity_to_text,
    filter_trivial_properties,
)
from .retrieval import (
    ChunkingConfig,
    CorpusIndex,
    Document,
    HashEmbeddingProvider,
    RemoteEmbeddingProvider,
    build_index,
    chunk_document,
    cosine_similarity,
    embed,
    top_k,
)
from .schema import (
    EmptyReason,
    InvalidVerdictLiteral,
    MissingField,
    NoJsonFound,
    SchemaError,
    extract_json,
    parse_validated_triple,
    response_parser,
)
from .types import (
    ContextBundle,
    ContextChunk,
    SourceAttribution,
    Triple,
    ValidatedTriple,
    Verdict,
    triple_to_query,
)

__all__ = [
    "AbstainPolicy",
    "BackendConfig",
    "ChunkingConfig",
    "ConfusionCounts",
    "ContextBundle",
    "ContextChunk",
    "ContextService",
    "CorpusIndex",
    "DatasetRecord",
    "Document",
    "EmptyReason",
    "EntityNotFound",
    "EvalReport",
    "HashEmbeddingProvider",
    "InvalidVerdictLiteral",
    "ItemResult",
    "Malformed",
    "Metrics",
    "MissingField",
    "MockBackend",
    "NoJsonFound",
    "OpenAIChatBackend",
    "ProviderConfig",
    "RawCompletion",
    "RecordOutcome",
    "RemoteEmbeddingProvider",
    "RetryExhausted",
    "SchemaError",
    "ScriptExhausted",
    "SourceAttribution",
    "StructuredCompletion",
    "Triple",
    "UnknownFormat",
    "ValidatedTriple",
    "Verdict",
    "WikidataClaim",
    "WikidataEntity",
    "build_index",
    "build_report",
    "chunk_document",
    "complete_structured",
    "confusion",
    "cosine_similarity",
    "embed",
    "entity_to_text",
    "extract_json",
    "filter_trivial_properties",
    "load_dataset",
    "metrics",
    "mock_backend",
    "parse_validated_triple",
    "render_prompt",
    "response_parser",
    "sample_subset",
    "table_consistency_check",
    "top_k",
    "triple_to_query",
    "validate_many",
    "validate_triple",
]
