"""End-to-end validation of triples: gather context, prompt, parse, collect.

Items run concurrently up to a worker cap, but results always come back in
input order. Per-item failures (retry exhaustion, transport trouble) are
captured on the item instead of aborting the batch, so one bad triple never
loses a run.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .backend import ChatBackend, RetryExhausted, complete_structured, render_prompt
from .providers import ContextService
from .schema import response_parser
from .transport import TransportError
from .types import ContextBundle, Triple, ValidatedTriple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ItemResult:
    triple: Triple
    validated: ValidatedTriple | None
    bundle: ContextBundle
    attempt: int = 0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.validated is not None


def validate_triple(
    triple: Triple,
    service: ContextService,
    backend: ChatBackend,
    *,
    max_retries: int = 3,
) -> ItemResult:
    bundle = service.gather(triple)
    prompt = render_prompt(triple, bundle)
    try:
        completion = complete_structured(
            prompt, backend, response_parser(triple), max_retries=max_retries
        )
    except RetryExhausted as exc:
        logger.error("validation failed for %s: %s", triple.subject, exc)
        return ItemResult(triple=triple, validated=None, bundle=bundle, error=f"retry_exhausted: {exc}")
    except TransportError as exc:
        logger.error("transport failure for %s: %s", triple.subject, exc)
        return ItemResult(triple=triple, validated=None, bundle=bundle, error=f"transport: {exc}")
    return ItemResult(
        triple=triple,
        validated=completion.validated,
        bundle=bundle,
        attempt=completion.raw.attempt,
    )


def validate_many(
    triples: Sequence[Triple],
    service: ContextService,
    backend: ChatBackend,
    *,
    max_retries: int = 3,
    concurrency: int = 4,
) -> list[ItemResult]:
    """Validate every triple; output index i corresponds to input index i."""
    if concurrency < 1:
        raise ValueError("concurrency must be at least 1")
    if not triples:
        return []
    if concurrency == 1:
        return [
            validate_triple(t, service, backend, max_retries=max_retries) for t in triples
        ]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        return list(
            pool.map(
                lambda t: validate_triple(t, service, backend, max_retries=max_retries),
                triples,
            )
        )
