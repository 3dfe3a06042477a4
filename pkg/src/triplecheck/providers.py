"""Context providers: where the evidence for a triple comes from.

Six configurations are supported: the model's own knowledge (no evidence), a
user-supplied text corpus, the Wikidata reference KG, web search, and the two
composites wikidata+web and wikipedia+wikidata. Every provider returns a
``ContextBundle``; a provider that finds nothing returns an empty bundle with
``fallback_used=True`` instead of raising, so validation can always proceed
on inherent knowledge.

Wikidata specifics: the subject label is searched with the entity-search API
and only the top hit is used. Fetched items are stripped of claims whose
property datatype is the external-identifier kind (IDs in outside databases
such as IMDb carry no checkable facts); the filter keys on the declared
datatype, not a hand-maintained property list. Wikipedia pages are reached
through the entity's English sitelink rather than a separate title search.

All external responses can be disk-cached (``cache_dir``), keyed by the
normalized request, which keeps runs cheap, rate-limit friendly, and
replayable from recorded fixtures.
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Any, Sequence

from .retrieval import (
    ChunkingConfig,
    CorpusIndex,
    Document,
    EmbeddingProvider,
    HashEmbeddingProvider,
    build_index,
    top_k,
)
from .transport import CachingTransport, RequestsTransport, TransportError
from .types import (
    WORLD_KNOWLEDGE_PROVIDER,
    ContextBundle,
    ContextChunk,
    Triple,
    triple_to_query,
)

logger = logging.getLogger(__name__)

EXTERNAL_ID_DATATYPE = "external-id"

DEFAULT_WIKIDATA_HOST = "https://www.wikidata.org"
DEFAULT_WIKIPEDIA_HOST = "https://en.wikipedia.org"

PROVIDER_KINDS = (
    "world_knowledge",
    "corpus",
    "wikidata",
    "web",
    "wikidata_web",
    "wikipedia_wikidata",
)

_QID_RE = re.compile(r"^Q[0-9]+$")
_PID_RE = re.compile(r"^P[0-9]+$")


class EntityNotFound(Exception):
    """The requested Wikidata entity id does not exist."""


@dataclass(frozen=True)
class WikidataClaim:
    property_id: str
    property_label: str
    datatype: str
    value_text: str


@dataclass(frozen=True)
class WikidataEntity:
    qid: str
    label: str
    description: str
    claims: tuple[WikidataClaim, ...]
    sitelinks: dict[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "claims", tuple(self.claims))
        if not _QID_RE.match(self.qid):
            raise ValueError(f"malformed entity id: {self.qid!r}")
        for claim in self.claims:
            if not _PID_RE.match(claim.property_id):
                raise ValueError(f"malformed property id: {claim.property_id!r}")


def filter_trivial_properties(entity: WikidataEntity) -> WikidataEntity:
    """Drop every claim whose datatype is the external-identifier kind.

    All other claims are kept untouched; applying the filter twice is the
    same as applying it once.
    """
    kept = tuple(c for c in entity.claims if c.datatype != EXTERNAL_ID_DATATYPE)
    return WikidataEntity(
        qid=entity.qid,
        label=entity.label,
        description=entity.description,
        claims=kept,
        sitelinks=entity.sitelinks,
    )


def entity_to_text(entity: WikidataEntity) -> Document:
    """Flatten an entity into one document: header line, then one line per claim."""
    lines = [f"{entity.label} — {entity.description}" if entity.description else entity.label]
    for claim in entity.claims:
        lines.append(f"{claim.property_label}: {claim.value_text}")
    return Document(id=entity.qid, body="\n".join(lines), origin="wikidata")


def _render_datavalue(datavalue: dict[str, Any], labels: dict[str, str]) -> str:
    value = datavalue.get("value")
    kind = datavalue.get("type")
    if kind == "wikibase-entityid" and isinstance(value, dict):
        target = value.get("id", "")
        return labels.get(target, target)
    if kind == "string":
        return str(value)
    if kind == "monolingualtext" and isinstance(value, dict):
        return str(value.get("text", ""))
    if kind == "time" and isinstance(value, dict):
        return str(value.get("time", "")).lstrip("+").split("T")[0]
    if kind == "quantity" and isinstance(value, dict):
        return str(value.get("amount", "")).lstrip("+")
    if kind == "globecoordinate" and isinstance(value, dict):
        return f"{value.get('latitude')}, {value.get('longitude')}"
    return json.dumps(value, ensure_ascii=False, sort_keys=True)


class WikidataClient:
    """Entity search and item fetching against the Wikidata action API."""

    def __init__(self, transport: Any, host: str = DEFAULT_WIKIDATA_HOST):
        self.transport = transport
        self.api_url = host.rstrip("/") + "/w/api.php"

    def _api_get(self, params: dict[str, str]) -> dict[str, Any]:
        response = self.transport.get(self.api_url, params=params)
        return json.loads(response.text)

    def search(self, label: str) -> str | None:
        """Top entity id for a label, or None. Blank labels never hit the network."""
        label = label.strip()
        if not label:
            return None
        payload = self._api_get(
            {
                "action": "wbsearchentities",
                "format": "json",
                "language": "en",
                "search": label,
            }
        )
        hits = payload.get("search") or []
        if not hits:
            return None
        return hits[0].get("id")

    def _resolve_labels(self, ids: Sequence[str]) -> dict[str, str]:
        labels: dict[str, str] = {}
        unique = sorted(set(ids))
        for start in range(0, len(unique), 50):
            batch = unique[start : start + 50]
            payload = self._api_get(
                {
                    "action": "wbgetentities",
                    "format": "json",
                    "ids": "|".join(batch),
                    "languages": "en",
                    "props": "labels",
                }
            )
            for entity_id, entity in (payload.get("entities") or {}).items():
                value = (entity.get("labels") or {}).get("en", {}).get("value")
                if value:
                    labels[entity_id] = value
        return labels

    def fetch(self, qid: str) -> WikidataEntity:
        """Fetch and flatten one item, resolving property and value labels."""
        payload = self._api_get(
            {
                "action": "wbgetentities",
                "format": "json",
                "ids": qid,
                "languages": "en",
                "props": "labels|descriptions|claims|sitelinks",
            }
        )
        entity = (payload.get("entities") or {}).get(qid)
        if entity is None or "missing" in entity:
            raise EntityNotFound(qid)

        label = (entity.get("labels") or {}).get("en", {}).get("value", qid)
        description = (entity.get("descriptions") or {}).get("en", {}).get("value", "")
        sitelinks = {
            site: link.get("title", "")
            for site, link in (entity.get("sitelinks") or {}).items()
        }

        raw_claims: list[tuple[str, str, dict[str, Any]]] = []
        need_labels: list[str] = []
        for pid, statements in (entity.get("claims") or {}).items():
            for statement in statements:
                mainsnak = statement.get("mainsnak") or {}
                if mainsnak.get("snaktype") != "value":
                    continue
                datavalue = mainsnak.get("datavalue") or {}
                raw_claims.append((pid, mainsnak.get("datatype", ""), datavalue))
                need_labels.append(pid)
                value = datavalue.get("value")
                if datavalue.get("type") == "wikibase-entityid" and isinstance(value, dict):
                    target = value.get("id")
                    if target:
                        need_labels.append(target)

        labels = self._resolve_labels(need_labels) if need_labels else {}
        claims = tuple(
            WikidataClaim(
                property_id=pid,
                property_label=labels.get(pid, pid),
                datatype=datatype,
                value_text=_render_datavalue(datavalue, labels),
            )
            for pid, datatype, datavalue in raw_claims
        )
        return WikidataEntity(
            qid=qid, label=label, description=description, claims=claims, sitelinks=sitelinks
        )


class WikipediaClient:
    """Plain-text page extracts from the Wikipedia action API."""

    def __init__(self, transport: Any, host: str = DEFAULT_WIKIPEDIA_HOST):
        self.transport = transport
        self.api_url = host.rstrip("/") + "/w/api.php"

    def extract(self, title: str) -> str | None:
        response = self.transport.get(
            self.api_url,
            params={
                "action": "query",
                "format": "json",
                "prop": "extracts",
                "explaintext": "1",
                "redirects": "1",
                "titles": title,
            },
        )
        payload = json.loads(response.text)
        pages = (payload.get("query") or {}).get("pages") or {}
        for page in pages.values():
            extract = page.get("extract")
            if extract:
                return extract
        return None


class _TextExtractor(HTMLParser):
    _SKIP = {"script", "style", "noscript"}

    def __init__(self) -> None:
        super().__init__()
        self._depth = 0
        self._parts: list[str] = []

    def handle_starttag(self, tag: str, attrs: list) -> None:
        if tag in self._SKIP:
            self._depth += 1

    def handle_endtag(self, tag: str) -> None:
        if tag in self._SKIP and self._depth > 0:
            self._depth -= 1

    def handle_data(self, data: str) -> None:
        if self._depth == 0 and data.strip():
            self._parts.append(data.strip())

    def text(self) -> str:
        return "\n".join(self._parts)


def strip_html(html: str) -> str:
    parser = _TextExtractor()
    parser.feed(html)
    return parser.text()


class WebSearchClient:
    """Search endpoint plus page fetching.

    The search endpoint is any GET API that takes ``q`` and ``max_results``
    and returns ``{"results": [{"title", "url", "snippet"}, ...]}``; hosts
    are overridable so fixture servers or self-hosted search adapters plug in
    directly. Result pages are fetched with plain GETs and stripped to text;
    an unreachable page degrades to its search snippet.
    """

    def __init__(self, transport: Any, endpoint_url: str):
        self.transport = transport
        self.endpoint_url = endpoint_url

    def search(self, query: str, n: int) -> list[dict[str, str]]:
        response = self.transport.get(
            self.endpoint_url, params={"q": query, "max_results": str(n)}
        )
        payload = json.loads(response.text)
        results = payload.get("results") or []
        return [
            {
                "title": str(r.get("title", "")),
                "url": str(r.get("url", "")),
                "snippet": str(r.get("snippet", "")),
            }
            for r in results[:n]
        ]

    def fetch_documents(self, query: str, n: int) -> list[Document]:
        documents: list[Document] = []
        for result in self.search(query, n):
            url = result["url"]
            if not url:
                continue
            try:
                page = self.transport.get(url)
                body = strip_html(page.text)
            except TransportError as exc:
                logger.warning("page fetch failed for %s (%s); using search snippet", url, exc)
                body = result["snippet"]
            body = body.strip() or result["snippet"].strip() or result["title"].strip()
            if not body:
                continue
            documents.append(Document(id=url, body=body, origin="web"))
        return documents


@dataclass(frozen=True)
class ProviderConfig:
    """Which provider to run and with what knobs."""

    kind: str
    k: int = 4
    corpus_paths: tuple[str, ...] = ()
    web_results: int = 5
    cache_dir: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "corpus_paths", tuple(self.corpus_paths))
        if self.kind not in PROVIDER_KINDS:
            raise ValueError(f"unknown provider kind: {self.kind!r}; expected one of {PROVIDER_KINDS}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.web_results < 1:
            raise ValueError("web_results must be at least 1")
        if self.kind == "corpus" and not self.corpus_paths:
            raise ValueError("corpus provider requires corpus_paths")


def _load_corpus_documents(paths: Sequence[str]) -> list[Document]:
    documents: list[Document] = []
    for path in paths:
        if os.path.isdir(path):
            names = sorted(os.listdir(path))
            files = [os.path.join(path, n) for n in names if os.path.isfile(os.path.join(path, n))]
        else:
            files = [path]
        for file_path in files:
            with open(file_path, encoding="utf-8") as fh:
                body = fh.read()
            if body.strip():
                documents.append(Document(id=os.path.basename(file_path), body=body, origin="corpus"))
    return documents


class ContextService:
    """Gathers a ContextBundle for a triple according to a ProviderConfig.

    A service instance is shareable across validation tasks; the corpus index
    is built once per run and reused, external responses go through the
    (optionally caching) transport.
    """

    def __init__(
        self,
        config: ProviderConfig,
        *,
        transport: Any = None,
        embedder: EmbeddingProvider | None = None,
        chunking: ChunkingConfig | None = None,
        wikidata_host: str = DEFAULT_WIKIDATA_HOST,
        wikipedia_host: str = DEFAULT_WIKIPEDIA_HOST,
        search_endpoint: str | None = None,
    ):
        self.config = config
        transport = transport or RequestsTransport()
        if config.cache_dir:
            transport = CachingTransport(transport, config.cache_dir)
        self.transport = transport
        self.embedder = embedder or HashEmbeddingProvider()
        self.chunking = chunking or ChunkingConfig()
        self.wikidata = WikidataClient(transport, wikidata_host)
        self.wikipedia = WikipediaClient(transport, wikipedia_host)
        self.search_endpoint = search_endpoint
        self._corpus_index: CorpusIndex | None = None

    def _web_client(self) -> WebSearchClient:
        if not self.search_endpoint:
            raise ValueError(
                "web provider requires a search endpoint "
                "(--search-endpoint or WEB_SEARCH_ENDPOINT)"
            )
        return WebSearchClient(self.transport, self.search_endpoint)

    def gather(self, triple: Triple) -> ContextBundle:
        kind = self.config.kind
        if kind == "world_knowledge":
            return self.world_knowledge()
        if kind == "corpus":
            return self.corpus_context(triple)
        if kind == "wikidata":
            return self.wikidata_context(triple)
        if kind == "web":
            return self.web_context(triple)
        if kind == "wikidata_web":
            return self._composite(triple, ("wikidata", "web"), "wikidata_web")
        if kind == "wikipedia_wikidata":
            return self._composite(triple, ("wikipedia", "wikidata"), "wikipedia_wikidata")
        raise ValueError(f"unknown provider kind: {kind!r}")

    def world_knowledge(self) -> ContextBundle:
        return ContextBundle(chunks=(), provider_name=WORLD_KNOWLEDGE_PROVIDER, fallback_used=False)

    def _ranked(self, docs: Sequence[Document], triple: Triple, provider_name: str) -> ContextBundle:
        index = build_index(docs, self.chunking, self.embedder)
        if len(index) == 0:
            return ContextBundle(chunks=(), provider_name=provider_name, fallback_used=True)
        chunks = top_k(index, triple_to_query(triple), self.config.k, self.embedder)
        return ContextBundle(chunks=tuple(chunks), provider_name=provider_name, fallback_used=False)

    def corpus_context(self, triple: Triple) -> ContextBundle:
        if self._corpus_index is None:
            docs = _load_corpus_documents(self.config.corpus_paths)
            self._corpus_index = build_index(docs, self.chunking, self.embedder)
        index = self._corpus_index
        if len(index) == 0:
            return ContextBundle(chunks=(), provider_name="corpus", fallback_used=True)
        chunks = top_k(index, triple_to_query(triple), self.config.k, self.embedder)
        return ContextBundle(chunks=tuple(chunks), provider_name="corpus", fallback_used=False)

    def wikidata_context(self, triple: Triple) -> ContextBundle:
        qid = self.wikidata.search(triple.subject)
        if qid is None:
            logger.warning(
                "wikidata search returned nothing for %r; falling back to inherent knowledge",
                triple.subject,
            )
            return ContextBundle(chunks=(), provider_name="wikidata", fallback_used=True)
        entity = filter_trivial_properties(self.wikidata.fetch(qid))
        return self._ranked([entity_to_text(entity)], triple, "wikidata")

    def web_context(self, triple: Triple) -> ContextBundle:
        docs = self._web_client().fetch_documents(triple_to_query(triple), self.config.web_results)
        if not docs:
            logger.warning("web search returned nothing for %r", triple_to_query(triple))
            return ContextBundle(chunks=(), provider_name="web", fallback_used=True)
        return self._ranked(docs, triple, "web")

    def wikipedia_context(self, triple: Triple) -> ContextBundle:
        qid = self.wikidata.search(triple.subject)
        if qid is None:
            logger.warning("no wikidata entity for %r; wikipedia lookup skipped", triple.subject)
            return ContextBundle(chunks=(), provider_name="wikipedia", fallback_used=True)
        entity = self.wikidata.fetch(qid)
        title = entity.sitelinks.get("enwiki")
        if not title:
            logger.warning("entity %s has no English Wikipedia sitelink", qid)
            return ContextBundle(chunks=(), provider_name="wikipedia", fallback_used=True)
        extract = self.wikipedia.extract(title)
        if not extract or not extract.strip():
            return ContextBundle(chunks=(), provider_name="wikipedia", fallback_used=True)
        doc = Document(id=f"enwiki:{title}", body=extract, origin="wikidata")
        return self._ranked([doc], triple, "wikipedia")

    def _composite(self, triple: Triple, members: tuple[str, ...], name: str) -> ContextBundle:
        gatherers = {
            "wikidata": self.wikidata_context,
            "web": self.web_context,
            "wikipedia": self.wikipedia_context,
        }
        merged: list[ContextChunk] = []
        for member in members:
            merged.extend(gatherers[member](triple).chunks)
        merged.sort(key=lambda c: -(c.score if c.score is not None else -1.0))
        merged = merged[: self.config.k]
        return ContextBundle(chunks=tuple(merged), provider_name=name, fallback_used=not merged)
