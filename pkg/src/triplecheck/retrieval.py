"""Recursive chunking, embedding, and exact cosine top-k search.

Chunking contract
-----------------
A document is split recursively: the first separator is tried on any span
longer than ``max_chunk_chars``; oversized pieces are re-split with the next
separator, and a hard character cut is the last resort. Separator text is
not part of any chunk. Overlap applies only at hard-cut boundaries, where
consecutive chunks share exactly ``min(overlap_chars, previous chunk
length)`` characters; separator boundaries carry no overlap.

``chunk_spans`` exposes each chunk's (start, end) position in the original
body. Chunks are verbatim substrings, so weaving spans back together (gap
text between spans, overlap dropped) reproduces the body exactly; the test
suite uses that as the coverage oracle.

Search is an exact scan: at the corpus sizes involved (one entity page, a
handful of web pages, small document sets) approximate structures buy
nothing. Ties are broken by insertion order, so rankings are stable.
"""

from __future__ import annotations

import math
import os
import zlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .transport import RequestsTransport
from .types import ContextChunk

DEFAULT_SEPARATORS = ("\n\n", "\n", ". ", " ")


class RetrievalError(ValueError):
    """Base class for retrieval failures."""


class EmptyText(RetrievalError):
    def __init__(self) -> None:
        super().__init__("cannot embed empty text")


class ZeroVector(RetrievalError):
    def __init__(self) -> None:
        super().__init__("cosine similarity is undefined for an all-zero vector")


class DimensionMismatch(RetrievalError):
    def __init__(self, a: int, b: int):
        super().__init__(f"vector dimensions differ: {a} vs {b}")


@dataclass(frozen=True)
class Document:
    """A retrievable text with a stable id and a provenance tag."""

    id: str
    body: str
    origin: str = "corpus"

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("document body must be non-empty")


@dataclass(frozen=True)
class ChunkingConfig:
    max_chunk_chars: int = 1000
    overlap_chars: int = 200
    separators: tuple[str, ...] = DEFAULT_SEPARATORS

    def __post_init__(self) -> None:
        object.__setattr__(self, "separators", tuple(self.separators))
        if self.max_chunk_chars <= 0:
            raise ValueError("max_chunk_chars must be positive")
        if self.overlap_chars < 0:
            raise ValueError("overlap_chars must be non-negative")
        if self.overlap_chars >= self.max_chunk_chars:
            raise ValueError("overlap_chars must be smaller than max_chunk_chars")
        if any(not sep for sep in self.separators):
            raise ValueError("separators must be non-empty strings")


def _pieces_between(body: str, start: int, end: int, sep: str) -> list[tuple[int, int]]:
    """Non-empty spans between non-overlapping occurrences of ``sep``.

    Interior separators become gaps between pieces. Separator runs at the
    very edges of the span have no neighbouring gap to live in, so they stay
    attached to the first/last piece; nothing of the body may be lost.
    """
    pieces: list[tuple[int, int]] = []
    cursor = start
    pos = body.find(sep, start, end)
    while pos != -1:
        if pos > cursor:
            pieces.append((cursor, pos))
        cursor = pos + len(sep)
        pos = body.find(sep, cursor, end)
    if cursor < end:
        pieces.append((cursor, end))
    if pieces:
        pieces[0] = (start, pieces[0][1])
        pieces[-1] = (pieces[-1][0], end)
    return pieces


def _hard_cut(start: int, end: int, cfg: ChunkingConfig) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    s = start
    while True:
        e = min(s + cfg.max_chunk_chars, end)
        spans.append((s, e))
        if e >= end:
            return spans
        s = e - min(cfg.overlap_chars, e - s)


def _split(body: str, start: int, end: int, sep_index: int, cfg: ChunkingConfig) -> list[tuple[int, int]]:
    if end - start <= cfg.max_chunk_chars:
        return [(start, end)]
    for i in range(sep_index, len(cfg.separators)):
        pieces = _pieces_between(body, start, end, cfg.separators[i])
        if not pieces or pieces == [(start, end)]:
            continue
        out: list[tuple[int, int]] = []
        for piece_start, piece_end in pieces:
            out.extend(_split(body, piece_start, piece_end, i + 1, cfg))
        return out
    return _hard_cut(start, end, cfg)


def chunk_spans(body: str, cfg: ChunkingConfig) -> list[tuple[int, int]]:
    """(start, end) span of every chunk, in order."""
    if not body:
        return []
    return _split(body, 0, len(body), 0, cfg)


def chunk_document(doc: Document, cfg: ChunkingConfig) -> list[str]:
    """Chunk texts for one document; each is a verbatim substring of the body."""
    return [doc.body[s:e] for s, e in chunk_spans(doc.body, cfg)]


class EmbeddingProvider(Protocol):
    @property
    def dimension(self) -> int: ...

    def embed_texts(self, texts: Sequence[str]) -> np.ndarray: ...


class HashEmbeddingProvider:
    """Deterministic offline embeddings: character n-grams hashed into a
    fixed-width vector (signed counts) and L2-normalized.

    Identical texts embed identically and the output is bit-stable across
    runs and platforms, which is what the offline test suite needs. It is a
    crude similarity signal, not a semantic model.
    """

    def __init__(self, dimension: int = 64, ngram: int = 3):
        if dimension <= 0 or ngram <= 0:
            raise ValueError("dimension and ngram must be positive")
        self._dimension = dimension
        self.ngram = ngram

    @property
    def dimension(self) -> int:
        return self._dimension

    def _embed_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self._dimension, dtype=np.float64)
        n = min(self.ngram, len(text))
        for i in range(len(text) - n + 1):
            h = zlib.crc32(text[i : i + n].encode("utf-8"))
            sign = 1.0 if (h >> 16) & 1 == 0 else -1.0
            vec[h % self._dimension] += sign
        if not vec.any():
            vec[zlib.crc32(text.encode("utf-8")) % self._dimension] = 1.0
        return vec / np.linalg.norm(vec)

    def embed_texts(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self._dimension), dtype=np.float64)
        for i, text in enumerate(texts):
            out[i] = self._embed_one(text)
        return out


class RemoteEmbeddingProvider:
    """OpenAI-compatible ``/embeddings`` endpoint behind the provider protocol."""

    def __init__(
        self,
        endpoint_url: str,
        model: str,
        dimension: int,
        transport: RequestsTransport | None = None,
        api_key_source: str = "EMBED_API_KEY",
    ):
        self.endpoint_url = endpoint_url.rstrip("/")
        self.model = model
        self._dimension = dimension
        self.transport = transport or RequestsTransport()
        self.api_key_source = api_key_source

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed_texts(self, texts: Sequence[str]) -> np.ndarray:
        headers = {}
        api_key = os.environ.get(self.api_key_source, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        response = self.transport.post_json(
            f"{self.endpoint_url}/embeddings",
            {"model": self.model, "input": list(texts)},
            headers=headers,
        )
        payload = response.json()
        rows = [entry["embedding"] for entry in payload["data"]]
        return np.asarray(rows, dtype=np.float64)


def embed(texts: Sequence[str], provider: EmbeddingProvider) -> np.ndarray:
    """One vector per text, in order; rejects empty input."""
    if not texts:
        raise ValueError("embed requires at least one text")
    for text in texts:
        if not text:
            raise EmptyText()
    vectors = provider.embed_texts(texts)
    if vectors.shape != (len(texts), provider.dimension):
        raise RetrievalError(
            f"provider returned shape {vectors.shape}, expected {(len(texts), provider.dimension)}"
        )
    if not np.isfinite(vectors).all():
        raise RetrievalError("provider returned non-finite embedding values")
    return vectors


def cosine_similarity(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """(a.b)/(|a||b|), clamped into [-1, 1] against rounding.

    Sums are correctly rounded (math.fsum), so the score depends only on the
    input values, not on summation order or the BLAS build; rankings and
    their ties come out identical everywhere.
    """
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.ndim != 1 or vb.ndim != 1 or va.shape != vb.shape:
        raise DimensionMismatch(va.size, vb.size)
    xs = va.tolist()
    ys = vb.tolist()
    norm_a = math.sqrt(math.fsum(x * x for x in xs))
    norm_b = math.sqrt(math.fsum(y * y for y in ys))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector()
    value = math.fsum(x * y for x, y in zip(xs, ys)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, value))


@dataclass(frozen=True)
class CorpusIndex:
    """Chunked and embedded documents, ready for similarity search."""

    chunks: tuple[ContextChunk, ...]
    vectors: np.ndarray
    provider_dimension: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "chunks", tuple(self.chunks))
        if self.vectors.shape != (len(self.chunks), self.provider_dimension):
            raise ValueError(
                f"index shape mismatch: {len(self.chunks)} chunks vs vectors {self.vectors.shape}"
            )

    def __len__(self) -> int:
        return len(self.chunks)


def build_index(
    docs: Sequence[Document],
    cfg: ChunkingConfig,
    provider: EmbeddingProvider,
) -> CorpusIndex:
    """Chunk and embed every document, preserving document then chunk order."""
    chunks: list[ContextChunk] = []
    texts: list[str] = []
    for doc in docs:
        for j, text in enumerate(chunk_document(doc, cfg)):
            chunks.append(ContextChunk(text=text, source_id=f"{doc.id}:{j}"))
            texts.append(text)
    if not texts:
        return CorpusIndex(
            chunks=(),
            vectors=np.empty((0, provider.dimension), dtype=np.float64),
            provider_dimension=provider.dimension,
        )
    vectors = embed(texts, provider)
    return CorpusIndex(chunks=tuple(chunks), vectors=vectors, provider_dimension=provider.dimension)


def top_k(index: CorpusIndex, query: str, k: int, provider: EmbeddingProvider) -> list[ContextChunk]:
    """At most ``k`` chunks by descending cosine score; ties keep insertion order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(index) == 0:
        raise RetrievalError("cannot search an empty index")
    query_vec = embed([query], provider)[0]
    scores = np.empty(len(index), dtype=np.float64)
    for i in range(len(index)):
        scores[i] = cosine_similarity(query_vec, index.vectors[i])
    order = np.argsort(-scores, kind="stable")[:k]
    return [
        ContextChunk(
            text=index.chunks[i].text,
            source_id=index.chunks[i].source_id,
            score=float(scores[i]),
        )
        for i in order
    ]
