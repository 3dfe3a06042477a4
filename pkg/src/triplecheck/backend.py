"""Chat-completion backends and the schema-constrained request loop.

The no-context prompt is a frozen template and must stay byte-stable: tests
pin it against a golden file. The with-context variant prepends an evidence
block and inserts one clause into the instruction; both pieces live in
template constants so alternates can be swapped without touching the loop.

Schema retries and transport retries are separate budgets: the transport
retries network-level failures internally, while this module re-asks the
model (feeding the parse error back as a user turn) up to
``max_retries`` total chat requests.
"""

from __future__ import annotations

import logging
import os
import threading
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .schema import SchemaError
from .transport import RequestsTransport, TokenBucket
from .types import ContextBundle, Triple, ValidatedTriple, render_relations

logger = logging.getLogger(__name__)

PROMPT_OPENING = "Using your vast knowledge of the world, "

PROMPT_INSTRUCTION = (
    "evaluate the predicted Knowledge Graph triple for its accuracy by considering:\n"
    "1. Definitions, relevance, and any cultural or domain-specific nuances of key terms\n"
    "2. Historical and factual validity, including any recent updates or debates around the information\n"
    "3. The validity of synonyms or related terms of the prediction\n"
    "Approach this with a mindset that allows for exploratory analysis and the recognition of uncertainty or multiple valid perspectives. "
    "Use this approach to recognize a range of correct answers when nuances and context allow for it."
    "If multiple relations are provided, the triple is valid if any of them are valid. "
)

CONTEXT_HEADER = "Context retrieved from external sources:"

CONTEXT_INSTRUCTION_PREFIX = (
    "evaluate the predicted Knowledge Graph triple against the given context and "
)

RETRY_FEEDBACK_TEMPLATE = (
    "Your previous reply could not be used: {error}. "
    "Respond again with a single JSON object containing the fields "
    "predicted_subject_name, predicted_relation, predicted_object_name, "
    "triple_is_valid and reason."
)


def render_prompt(triple: Triple, context: ContextBundle | None = None) -> str:
    """Build the user prompt for one triple.

    An absent or empty context bundle (including fallback bundles) yields the
    plain inherent-knowledge prompt; evidence chunks prepend a context block
    and switch the instruction to the against-context wording.
    """
    tail = (
        f"\nSubject Name: {triple.subject}"
        f"\nRelation: {render_relations(triple)}"
        f"\nObject Name: {triple.object}"
    )
    if context is None or not context.chunks:
        return PROMPT_OPENING + PROMPT_INSTRUCTION + tail
    paragraphs = [CONTEXT_HEADER]
    for chunk in context.chunks:
        paragraphs.append(f"[source: {chunk.source_id}]\n{chunk.text}")
    block = "\n\n".join(paragraphs)
    return block + "\n\n" + PROMPT_OPENING + CONTEXT_INSTRUCTION_PREFIX + PROMPT_INSTRUCTION + tail


@dataclass(frozen=True)
class BackendConfig:
    """Connection settings for an OpenAI-compatible chat-completions API."""

    endpoint_url: str
    model_name: str
    temperature: float = 0.0
    max_retries: int = 3
    timeout: float = 60.0
    api_key_source: str = "LLM_API_KEY"

    def __post_init__(self) -> None:
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class RawCompletion:
    """The raw response body and which attempt produced it (1-based)."""

    text: str
    attempt: int


@dataclass(frozen=True)
class StructuredCompletion:
    validated: ValidatedTriple
    raw: RawCompletion


class ChatBackend(Protocol):
    def complete(self, messages: list[dict[str, str]]) -> str: ...


class ScriptExhausted(Exception):
    """A scripted backend received more requests than it has responses."""


class RetryExhausted(Exception):
    """Every attempt produced unparseable output; the backend is uncooperative."""

    def __init__(self, last_raw: str, last_parse_error: SchemaError):
        super().__init__(f"no parseable response after retries: {last_parse_error}")
        self.last_raw = last_raw
        self.last_parse_error = last_parse_error


class MockBackend:
    """Replays canned responses in order and records every request it sees."""

    def __init__(self, script: Sequence[str]):
        if not script:
            raise ValueError("mock backend requires a non-empty script")
        self._script = list(script)
        self._cursor = 0
        self._lock = threading.Lock()
        self.requests: list[list[dict[str, str]]] = []

    @property
    def prompts(self) -> list[str]:
        """First user turn of each recorded request."""
        return [msgs[0]["content"] for msgs in self.requests]

    def complete(self, messages: list[dict[str, str]]) -> str:
        with self._lock:
            self.requests.append([dict(m) for m in messages])
            if self._cursor >= len(self._script):
                raise ScriptExhausted(f"script exhausted after {len(self._script)} responses")
            text = self._script[self._cursor]
            self._cursor += 1
            return text


def mock_backend(script: Sequence[str]) -> MockBackend:
    return MockBackend(script)


class OpenAIChatBackend:
    """HTTP backend for any OpenAI-style ``/chat/completions`` endpoint.

    Model name and temperature are forwarded verbatim. The bearer token is
    read from the environment variable named by ``config.api_key_source``.
    Concurrent in-flight requests are capped (default 4) and a per-endpoint
    token bucket throttles the request rate.
    """

    def __init__(
        self,
        config: BackendConfig,
        transport: RequestsTransport | None = None,
        *,
        max_in_flight: int = 4,
        requests_per_second: float = 8.0,
    ):
        self.config = config
        self.transport = transport or RequestsTransport(timeout=config.timeout)
        self._slots = threading.Semaphore(max_in_flight)
        self._bucket = TokenBucket(requests_per_second)

    def complete(self, messages: list[dict[str, str]]) -> str:
        body = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": messages,
        }
        headers = {}
        api_key = os.environ.get(self.config.api_key_source, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        url = self.config.endpoint_url.rstrip("/") + "/chat/completions"
        with self._slots:
            self._bucket.acquire()
            response = self.transport.post_json(url, body, headers=headers, timeout=self.config.timeout)
        payload = response.json()
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise SchemaError(f"chat response has no message content: {exc}") from exc


def complete_structured(
    prompt: str,
    backend: ChatBackend,
    parser: Callable[[str], ValidatedTriple],
    *,
    max_retries: int = 3,
) -> StructuredCompletion:
    """Ask the backend for a response that parses, re-asking on schema failures.

    Each failed parse appends the model's reply and the parser's error text to
    the conversation before the next attempt. Never issues more than
    ``max_retries`` chat requests.
    """
    if max_retries < 1:
        raise ValueError("max_retries must be at least 1")
    messages: list[dict[str, str]] = [{"role": "user", "content": prompt}]
    last_raw = ""
    last_error: SchemaError | None = None
    for attempt in range(1, max_retries + 1):
        raw = backend.complete(messages)
        last_raw = raw
        try:
            validated = parser(raw)
        except SchemaError as exc:
            last_error = exc
            logger.debug("attempt %d failed to parse: %s", attempt, exc)
            messages.append({"role": "assistant", "content": raw})
            messages.append({"role": "user", "content": RETRY_FEEDBACK_TEMPLATE.format(error=exc)})
            continue
        return StructuredCompletion(validated=validated, raw=RawCompletion(text=raw, attempt=attempt))
    assert last_error is not None
    raise RetryExhausted(last_raw, last_error)
