"""HTTP plumbing shared by the chat backend and the context providers.

Three interchangeable transports:

* ``RequestsTransport`` talks to real services, with transport-level retries
  (exponential backoff capped at 30 s) and an optional token-bucket rate
  limiter. Throttling responses surface as ``RateLimitedError`` once the
  retry budget is spent.
* ``CachingTransport`` wraps another transport with a disk cache keyed by the
  normalized request, so repeated runs replay recorded responses without
  touching the network.
* ``FixtureTransport`` serves canned responses and counts requests; the test
  suite runs entirely on it.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable

import requests

logger = logging.getLogger(__name__)

BACKOFF_CAP_SECONDS = 30.0


class TransportError(Exception):
    """HTTP or network failure after transport-level retries."""

    def __init__(self, status: int, body: str):
        super().__init__(f"transport failure (status {status}): {body[:200]}")
        self.status = status
        self.body = body


class RateLimitedError(TransportError):
    """The endpoint signalled throttling and the retry budget is exhausted."""

    def __init__(self, retry_after: float, body: str = ""):
        Exception.__init__(self, f"rate limited; retry after {retry_after}s")
        self.status = 429
        self.body = body
        self.retry_after = retry_after


@dataclass(frozen=True)
class Response:
    status: int
    text: str

    def json(self) -> Any:
        return json.loads(self.text)


class TokenBucket:
    """Blocking token-bucket limiter; clock and sleep are injectable for tests."""

    def __init__(
        self,
        rate_per_second: float,
        capacity: float | None = None,
        *,
        time_fn: Callable[[], float] = time.monotonic,
        sleep_fn: Callable[[float], None] = time.sleep,
    ):
        if rate_per_second <= 0:
            raise ValueError("rate_per_second must be positive")
        self.rate = float(rate_per_second)
        self.capacity = float(capacity if capacity is not None else max(1.0, rate_per_second))
        self._tokens = self.capacity
        self._time_fn = time_fn
        self._sleep_fn = sleep_fn
        self._updated = time_fn()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._time_fn()
                self._tokens = min(self.capacity, self._tokens + (now - self._updated) * self.rate)
                self._updated = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            self._sleep_fn(wait)


def _canonical_request(method: str, url: str, params: dict[str, str] | None, body: Any) -> str:
    parts = [method.upper(), url]
    if params:
        parts.append("&".join(f"{k}={params[k]}" for k in sorted(params)))
    if body is not None:
        parts.append(json.dumps(body, sort_keys=True, ensure_ascii=False))
    return "\x00".join(parts)


def request_cache_key(method: str, url: str, params: dict[str, str] | None = None, body: Any = None) -> str:
    """Stable cache key for one normalized request."""
    canon = _canonical_request(method, url, params, body)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class RequestsTransport:
    """Real HTTP transport built on ``requests``."""

    def __init__(
        self,
        *,
        timeout: float = 30.0,
        max_attempts: int = 3,
        backoff_base: float = 1.0,
        rate_limiter: TokenBucket | None = None,
        sleep_fn: Callable[[float], None] = time.sleep,
        user_agent: str = "triplecheck/0.1 (triple validation toolkit)",
    ):
        self.timeout = timeout
        self.max_attempts = max(1, max_attempts)
        self.backoff_base = backoff_base
        self.rate_limiter = rate_limiter
        self._sleep = sleep_fn
        self._session = requests.Session()
        self._session.headers.update({"User-Agent": user_agent})

    def _attempt(self, send: Callable[[], requests.Response]) -> Response:
        last_error: TransportError | None = None
        for attempt in range(self.max_attempts):
            if self.rate_limiter is not None:
                self.rate_limiter.acquire()
            try:
                resp = send()
            except requests.RequestException as exc:
                last_error = TransportError(0, str(exc))
            else:
                if resp.status_code == 429:
                    retry_after = float(resp.headers.get("Retry-After", "1") or 1)
                    last_error = RateLimitedError(retry_after, resp.text)
                elif resp.status_code >= 500:
                    last_error = TransportError(resp.status_code, resp.text)
                elif resp.status_code >= 400:
                    raise TransportError(resp.status_code, resp.text)
                else:
                    return Response(resp.status_code, resp.text)
            if attempt + 1 < self.max_attempts:
                delay = min(self.backoff_base * (2**attempt), BACKOFF_CAP_SECONDS)
                if isinstance(last_error, RateLimitedError):
                    delay = min(max(delay, last_error.retry_after), BACKOFF_CAP_SECONDS)
                logger.warning("request failed (%s); retrying in %.1fs", last_error, delay)
                self._sleep(delay)
        assert last_error is not None
        raise last_error

    def get(self, url: str, params: dict[str, str] | None = None) -> Response:
        return self._attempt(lambda: self._session.get(url, params=params, timeout=self.timeout))

    def post_json(
        self,
        url: str,
        body: Any,
        headers: dict[str, str] | None = None,
        timeout: float | None = None,
    ) -> Response:
        return self._attempt(
            lambda: self._session.post(
                url, json=body, headers=headers, timeout=timeout or self.timeout
            )
        )


class CachingTransport:
    """Disk cache in front of another transport.

    GET responses are stored as JSON files under ``cache_dir`` keyed by the
    normalized request; hits never touch the inner transport. Writes are
    serialized per process.
    """

    def __init__(self, inner: Any, cache_dir: str):
        self.inner = inner
        self.cache_dir = cache_dir
        self._lock = threading.Lock()
        os.makedirs(cache_dir, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.json")

    def get(self, url: str, params: dict[str, str] | None = None) -> Response:
        key = request_cache_key("GET", url, params)
        path = self._path(key)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            return Response(entry["status"], entry["text"])
        resp = self.inner.get(url, params=params)
        if 200 <= resp.status < 300:
            with self._lock:
                tmp = f"{path}.tmp"
                with open(tmp, "w", encoding="utf-8") as fh:
                    json.dump({"status": resp.status, "text": resp.text}, fh, ensure_ascii=False)
                os.replace(tmp, path)
        return resp

    def post_json(
        self,
        url: str,
        body: Any,
        headers: dict[str, str] | None = None,
        timeout: float | None = None,
    ) -> Response:
        return self.inner.post_json(url, body, headers=headers, timeout=timeout)


def store_cached_response(cache_dir: str, url: str, params: dict[str, str] | None, text: str) -> str:
    """Pre-seed a cache entry, as recorded-fixture setups do. Returns the key."""
    os.makedirs(cache_dir, exist_ok=True)
    key = request_cache_key("GET", url, params)
    path = os.path.join(cache_dir, f"{key}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"status": 200, "text": text}, fh, ensure_ascii=False)
    return key


class FixtureTransport:
    """Canned-response transport for offline tests; counts every request."""

    def __init__(self) -> None:
        self._gets: dict[str, str] = {}
        self._posts: dict[str, list[str]] = {}
        self.get_requests: list[tuple[str, dict[str, str] | None]] = []
        self.post_requests: list[tuple[str, Any, dict[str, str] | None]] = []

    @property
    def request_count(self) -> int:
        return len(self.get_requests) + len(self.post_requests)

    def register_get(self, url: str, params: dict[str, str] | None, text: str) -> None:
        self._gets[request_cache_key("GET", url, params)] = text

    def register_post(self, url: str, text: str) -> None:
        self._posts.setdefault(url, []).append(text)

    def get(self, url: str, params: dict[str, str] | None = None) -> Response:
        self.get_requests.append((url, dict(params) if params else None))
        key = request_cache_key("GET", url, params)
        if key not in self._gets:
            raise TransportError(404, f"no fixture registered for GET {url} {params}")
        return Response(200, self._gets[key])

    def post_json(
        self,
        url: str,
        body: Any,
        headers: dict[str, str] | None = None,
        timeout: float | None = None,
    ) -> Response:
        self.post_requests.append((url, body, headers))
        queue = self._posts.get(url)
        if not queue:
            raise TransportError(404, f"no fixture registered for POST {url}")
        return Response(200, queue.pop(0))
