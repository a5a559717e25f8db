"""Generate annotations with a text-generation provider and keep only code that executes.

A run builds one prompt per sentence from a user-supplied template, asks the
provider for a completion, extracts (time_text, scate) items from it, and
drops every item whose expression fails to parse or evaluate.
"""
from __future__ import annotations

import abc
import collections
import concurrent.futures
import dataclasses
import datetime
import hashlib
import json
import logging
import os
import time
import urllib.error
import urllib.request
from collections.abc import Sequence

from .annotations import AnnotationItem, AnnotationRecord, parse_model_output
from .dsl import evaluate, parse
from .errors import MissingPlaceholderError, ProviderError, ScateError, UnparseableOutputError

log = logging.getLogger(__name__)

SENTENCE = "{{sentence}}"
DCT = "{{dct}}"


def build_prompt(template_text: str, sentence: str, dct: datetime.date | None = None) -> str:
    """Substitute ``{{sentence}}`` and ``{{dct}}`` into the template, verbatim."""
    if SENTENCE not in template_text:
        raise MissingPlaceholderError(f"prompt template has no {SENTENCE} placeholder")
    # the date goes in first so that text inside the sentence is never treated as a placeholder
    template_text = template_text.replace(DCT, "" if dct is None else dct.isoformat())
    return template_text.replace(SENTENCE, sentence)


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class GenerationProvider(abc.ABC):

    @abc.abstractmethod
    def complete(self, prompt: str, **params) -> str:
        ...


class MockProvider(GenerationProvider):
    """
    Replays canned completions keyed by the SHA-256 of the prompt.  A
    ``"*"`` entry, when present, answers any prompt without its own entry.
    """

    def __init__(self, responses: dict[str, str]):
        self.responses = dict(responses)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> MockProvider:
        with open(path, encoding="utf-8") as f:
            responses = json.load(f)
        if not isinstance(responses, dict) or not all(isinstance(v, str) for v in responses.values()):
            raise ValueError(f"{path}: a mock fixture must map prompt hashes to completion strings")
        return cls(responses)

    @classmethod
    def for_prompts(cls, pairs: dict[str, str]) -> MockProvider:
        """Build a fixture from prompt text -> completion."""
        return cls({prompt_key(p): c for p, c in pairs.items()})

    def complete(self, prompt: str, **params) -> str:
        key = prompt_key(prompt)
        if key in self.responses:
            return self.responses[key]
        if "*" in self.responses:
            return self.responses["*"]
        raise ProviderError(f"no canned response for prompt {key[:12]}")


class TransientProviderError(ProviderError):
    pass


@dataclasses.dataclass
class ProviderConfig:
    """Settings for :class:`HTTPProvider`, read from a JSON file."""
    endpoint: str
    model: str
    token_env: str | None = None
    temperature: float = 0.0
    max_tokens: int = 1024
    max_retries: int = 3
    backoff_base: float = 0.5
    backoff_cap: float = 8.0
    timeout: float = 60.0

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> ProviderConfig:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"{path}: unknown configuration keys {sorted(unknown)}")
        return cls(**data)


class HTTPProvider(GenerationProvider):
    """
    POSTs ``{"model", "prompt", "temperature", "max_tokens", ...}`` as JSON
    and reads the completion from ``text``, ``completion`` or an
    OpenAI-style ``choices[0]``.  Connection failures, 429 and 5xx
    responses are retried with capped exponential backoff; any other
    response is final.
    """

    def __init__(self, config: ProviderConfig, sleep=time.sleep):
        self.config = config
        self._sleep = sleep

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.token_env:
            token = os.environ.get(self.config.token_env)
            if not token:
                raise ProviderError(f"environment variable {self.config.token_env} is not set")
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _post(self, body: dict) -> dict:
        request = urllib.request.Request(self.config.endpoint, data=json.dumps(body).encode("utf-8"),
                                         headers=self._headers(), method="POST")
        try:
            with urllib.request.urlopen(request, timeout=self.config.timeout) as response:
                raw = response.read()
        except urllib.error.HTTPError as e:
            if e.code == 429 or e.code >= 500:
                raise TransientProviderError(f"HTTP {e.code} from {self.config.endpoint}") from e
            raise ProviderError(f"HTTP {e.code} from {self.config.endpoint}") from e
        except (urllib.error.URLError, TimeoutError, ConnectionError) as e:
            raise TransientProviderError(f"cannot reach {self.config.endpoint}: {e}") from e
        try:
            return json.loads(raw)
        except json.JSONDecodeError as e:
            # the request succeeded, so resending it is not safe
            raise ProviderError(f"malformed response body from {self.config.endpoint}") from e

    @staticmethod
    def _extract(payload: dict) -> str:
        if isinstance(payload.get("text"), str):
            return payload["text"]
        if isinstance(payload.get("completion"), str):
            return payload["completion"]
        try:
            choice = payload["choices"][0]
            if isinstance(choice.get("text"), str):
                return choice["text"]
            return choice["message"]["content"]
        except (KeyError, IndexError, TypeError, AttributeError):
            raise ProviderError("response has no completion text") from None

    def complete(self, prompt: str, **params) -> str:
        body = {"model": self.config.model, "prompt": prompt,
                "temperature": self.config.temperature, "max_tokens": self.config.max_tokens, **params}
        for attempt in range(self.config.max_retries + 1):
            try:
                return self._extract(self._post(body))
            except TransientProviderError as e:
                if attempt == self.config.max_retries:
                    raise ProviderError(f"giving up after {attempt + 1} attempts: {e}") from e
                delay = min(self.config.backoff_cap, self.config.backoff_base * 2 ** attempt)
                log.warning("%s; retrying in %.1fs", e, delay)
                self._sleep(delay)
        raise AssertionError("unreachable")


@dataclasses.dataclass
class FilterReport:
    total: int = 0
    parsed: int = 0
    executed_ok: int = 0
    dropped: collections.Counter = dataclasses.field(default_factory=collections.Counter)
    failed_sentences: list[dict] = dataclasses.field(default_factory=list)

    def add(self, other: FilterReport):
        self.total += other.total
        self.parsed += other.parsed
        self.executed_ok += other.executed_ok
        self.dropped.update(other.dropped)
        self.failed_sentences.extend(other.failed_sentences)

    def to_json(self) -> dict:
        return {"total": self.total, "parsed": self.parsed, "executed_ok": self.executed_ok,
                "dropped": dict(sorted(self.dropped.items())), "failed_sentences": list(self.failed_sentences)}


def filter_items(items: Sequence[AnnotationItem]) -> tuple[list[AnnotationItem], FilterReport]:
    """Keep the items whose expressions parse and evaluate without error."""
    report = FilterReport()
    kept = []
    for item in items:
        report.total += 1
        try:
            node = parse(item.scate)
            report.parsed += 1
            evaluate(node)
        except ScateError as e:
            report.dropped[e.category] += 1
            continue
        report.executed_ok += 1
        kept.append(item)
    return kept, report


def filter_records(records: Sequence[AnnotationRecord]) -> tuple[list[AnnotationRecord], FilterReport]:
    """Filter every record's items; records left with no items are omitted."""
    report = FilterReport()
    out = []
    for record in records:
        kept, partial = filter_items(record.items)
        report.add(partial)
        if kept:
            out.append(dataclasses.replace(record, items=tuple(kept)))
    return out, report


def run_augmentation(sentences: Sequence[str], template: str, provider: GenerationProvider,
                     concurrency_limit: int = 1, seed: int = 0, dct: datetime.date | None = None,
                     id_prefix: str = "aug") -> tuple[list[AnnotationRecord], FilterReport]:
    """
    Annotate `sentences` with `provider` and keep only executable items.

    At most `concurrency_limit` completions are in flight; output order
    follows input order.  `seed` is passed to the provider with every
    request.  Provider failures are recorded in the report and do not stop
    the run.
    """
    if concurrency_limit < 1:
        raise ValueError(f"concurrency_limit must be at least 1, got {concurrency_limit}")
    prompts = [build_prompt(template, s, dct) for s in sentences]

    def ask(prompt: str):
        try:
            return provider.complete(prompt, seed=seed), None
        except ProviderError as e:
            return None, str(e)

    with concurrent.futures.ThreadPoolExecutor(max_workers=concurrency_limit) as pool:
        completions = list(pool.map(ask, prompts))

    report = FilterReport()
    records = []
    for index, (sentence, (completion, error)) in enumerate(zip(sentences, completions)):
        record_id = f"{id_prefix}-{index + 1:06d}"
        if error is None:
            try:
                items = parse_model_output(completion)
            except UnparseableOutputError as e:
                error = str(e)
        if error is not None:
            report.failed_sentences.append({"id": record_id, "error": error})
            continue
        kept, partial = filter_items(items)
        report.add(partial)
        if kept:
            records.append(AnnotationRecord(record_id, sentence, tuple(kept), dct))
    return records, report
