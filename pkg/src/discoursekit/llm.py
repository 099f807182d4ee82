"""LLM client plumbing: HTTP chat-completion client, scripted mock,
content-addressed response cache, and the append-only exchange log."""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import LlmUnavailable


@dataclass
class LlmClientConfig:
    endpoint: str = ""
    model: str = "mock"
    auth_env: str = "DISCOURSEKIT_LLM_TOKEN"  # env var holding the token; never logged
    timeout: float = 30.0
    retries: int = 2
    cache_dir: str | None = None


class HttpLlmClient:
    """JSON-over-HTTP chat-completion client.

    Wire shape: POST {model, messages[{role, content}], temperature, max_tokens}
    -> {content}. The auth token is read from the configured environment
    variable at call time and never written to logs or caches.
    """

    def __init__(self, config: LlmClientConfig, session=None):
        self.config = config
        self.model_name = config.model
        self._session = session or requests.Session()

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 1024) -> str:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        headers = {}
        token = os.environ.get(self.config.auth_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        last_exc = None
        for _ in range(self.config.retries + 1):
            try:
                resp = self._session.post(self.config.endpoint, json=payload,
                                          headers=headers, timeout=self.config.timeout)
                resp.raise_for_status()
                return resp.json()["content"]
            except (requests.RequestException, KeyError, ValueError) as exc:
                last_exc = exc
        raise LlmUnavailable(f"LLM endpoint failed after {self.config.retries + 1} attempts: {last_exc}")


class MockLlmClient:
    """Deterministic stand-in for tests and offline runs.

    script may be a list of responses (consumed in order), a dict mapping
    prompt -> response, or a callable prompt -> response.
    """

    def __init__(self, script, model_name="mock"):
        self.script = script
        self.model_name = model_name
        self.request_count = 0
        self.prompts: list[str] = []

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 1024) -> str:
        self.request_count += 1
        self.prompts.append(prompt)
        if callable(self.script):
            return self.script(prompt)
        if isinstance(self.script, dict):
            if prompt not in self.script:
                raise LlmUnavailable("mock has no scripted response for this prompt")
            return self.script[prompt]
        if self.request_count > len(self.script):
            raise LlmUnavailable("mock script exhausted")
        return self.script[self.request_count - 1]


class UnavailableClient:
    """Client that always fails; used to exercise fallback paths."""

    model_name = "unavailable"

    def complete(self, prompt, temperature=0.0, max_tokens=1024):
        raise LlmUnavailable("no LLM configured")


class ResponseCache:
    """Content-addressed file cache keyed by hash(prompt, decoding params)."""

    def __init__(self, cache_dir):
        self.dir = Path(cache_dir)
        self.dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(prompt: str, temperature: float, max_tokens: int) -> str:
        blob = json.dumps([prompt, temperature, max_tokens], ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def get(self, prompt, temperature, max_tokens) -> str | None:
        path = self.dir / self.key(prompt, temperature, max_tokens)
        if path.exists():
            return path.read_text(encoding="utf-8")
        return None

    def put(self, prompt, temperature, max_tokens, response: str) -> None:
        path = self.dir / self.key(prompt, temperature, max_tokens)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(response, encoding="utf-8")
        tmp.replace(path)


class CachingClient:
    """Wraps a client so identical (prompt, params) pairs are served from cache."""

    def __init__(self, inner, cache: ResponseCache):
        self.inner = inner
        self.cache = cache
        self.model_name = inner.model_name

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 1024) -> str:
        cached = self.cache.get(prompt, temperature, max_tokens)
        if cached is not None:
            return cached
        response = self.inner.complete(prompt, temperature=temperature, max_tokens=max_tokens)
        self.cache.put(prompt, temperature, max_tokens, response)
        return response


@dataclass
class ExchangeRecord:
    stage: str          # sense | implication | clean
    prompt: str
    response: str
    model_name: str
    timestamp: float


class ExchangeLog:
    """Append-only audit trail; every generated sense/implication traces to one record."""

    def __init__(self, path=None):
        self.path = Path(path) if path else None
        self.records: list[ExchangeRecord] = []
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self.records.append(ExchangeRecord(**rec))

    def append(self, stage: str, prompt: str, response: str, model_name: str) -> ExchangeRecord:
        rec = ExchangeRecord(stage=stage, prompt=prompt, response=response,
                             model_name=model_name, timestamp=time.time())
        self.records.append(rec)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec.__dict__, ensure_ascii=False) + "\n")
        return rec

    def count(self, stage=None) -> int:
        if stage is None:
            return len(self.records)
        return sum(1 for r in self.records if r.stage == stage)
