"""Two-stage topic interpretation: keyword-sense retrieval followed by
topic-implication generation, plus the optional LLM cleaning pre-pass."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from importlib import resources

from .corpus import CleaningRules, Document, clean_document
from .errors import (
    EmptyResponse,
    LlmUnavailable,
    MalformedResponse,
    MissingSenses,
    TemplateError,
)
from .llm import ExchangeLog

log = logging.getLogger(__name__)

SKIPPED = "<skipped>"


@dataclass
class PromptInstructionSet:
    id: str                       # "I1" (senses), "I2" (implication), "Iclean"
    template: str
    temperature: float = 0.0
    max_tokens: int = 1024

    def render(self, **values) -> str:
        try:
            return self.template.format(**values)
        except (KeyError, IndexError) as exc:
            raise TemplateError(f"unresolved placeholder in template {self.id}: {exc}") from exc


def _load_template(name: str) -> str:
    return resources.files("discoursekit.templates").joinpath(name).read_text(encoding="utf-8")


def default_instruction_sets() -> dict[str, PromptInstructionSet]:
    return {
        "I1": PromptInstructionSet("I1", _load_template("sense_prompt.txt")),
        "I2": PromptInstructionSet("I2", _load_template("topic_prompt.txt")),
        "Iclean": PromptInstructionSet("Iclean", _load_template("clean_prompt.txt")),
    }


@dataclass
class TopicCard:
    """Analyst-facing topic: keywords with weights, senses, manual description,
    and the generated implication."""
    topic_id: int
    keywords: list[tuple[str, float]]
    senses: list[str] = field(default_factory=list)
    manual_description: str | None = None    # SKIPPED marks an explicit skip
    implication: str = ""

    @property
    def k(self) -> int:
        return len(self.keywords)

    @property
    def description_skipped(self) -> bool:
        return self.manual_description == SKIPPED

    def validate(self):
        if self.senses and len(self.senses) != self.k:
            raise ValueError("senses must align 1:1 with keywords")


def build_sense_prompt(card: TopicCard, iset: PromptInstructionSet) -> str:
    """Stage-1 prompt: enumerated keyword list requesting per-keyword senses."""
    if not card.keywords:
        raise TemplateError("topic card has no keywords")
    keyword_list = "\n".join(f"{i}. {word}" for i, (word, _) in enumerate(card.keywords, start=1))
    return iset.render(k=card.k, keyword_list=keyword_list)


def build_topic_prompt(card: TopicCard, iset: PromptInstructionSet) -> str:
    """Stage-2 prompt: keyword + 4-decimal weight + sense per line, plus the
    analyst description (or an explicit no-description clause when skipped)."""
    if not card.keywords:
        raise TemplateError("topic card has no keywords")
    if not card.senses:
        raise MissingSenses(f"topic {card.topic_id} has no keyword senses yet")
    if len(card.senses) != card.k:
        raise MissingSenses(f"topic {card.topic_id}: {len(card.senses)} senses for {card.k} keywords")
    if card.manual_description is None:
        raise TemplateError(f"topic {card.topic_id}: description neither written nor skipped")
    lines = [
        f"{i}. {word} (weight={weight:.4f}): {sense}"
        for i, ((word, weight), sense) in enumerate(zip(card.keywords, card.senses), start=1)
    ]
    if card.description_skipped:
        description = "no analyst description provided"
    else:
        description = card.manual_description
    return iset.render(keyword_block="\n".join(lines), description=description)


_ENUM_LINE = re.compile(r"^\s*(\d+)[.)]\s*(.*\S)\s*$")


def parse_enumerated(response: str, expected: int) -> list[str]:
    """Parse a "1. ... 2. ..." response into exactly `expected` items, in order."""
    items = []
    for line in response.splitlines():
        m = _ENUM_LINE.match(line)
        if m:
            items.append((int(m.group(1)), m.group(2)))
    if len(items) != expected or [n for n, _ in items] != list(range(1, expected + 1)):
        raise MalformedResponse(
            f"expected {expected} enumerated items, got {len(items)}", response=response)
    return [text for _, text in items]


def retrieve_keyword_senses(client, card: TopicCard, iset: PromptInstructionSet,
                            exchange_log: ExchangeLog | None = None) -> TopicCard:
    """Stage 1: fill in one sense string per keyword from the LLM."""
    if card.senses:
        raise ValueError(f"topic {card.topic_id} already has senses")
    prompt = build_sense_prompt(card, iset)
    response = client.complete(prompt, temperature=iset.temperature, max_tokens=iset.max_tokens)
    if exchange_log is not None:
        exchange_log.append("sense", prompt, response, client.model_name)
    senses = parse_enumerated(response, card.k)
    return replace(card, senses=senses)


def generate_topic_implication(client, card: TopicCard, iset: PromptInstructionSet,
                               exchange_log: ExchangeLog | None = None) -> TopicCard:
    """Stage 2: generate the topic's media-discourse implication."""
    prompt = build_topic_prompt(card, iset)
    response = client.complete(prompt, temperature=iset.temperature, max_tokens=iset.max_tokens)
    if exchange_log is not None:
        exchange_log.append("implication", prompt, response, client.model_name)
    if not response.strip():
        raise EmptyResponse(f"empty implication for topic {card.topic_id}")
    return replace(card, implication=response)


def label_topics(client, cards: list[TopicCard], isets: dict[str, PromptInstructionSet],
                 exchange_log: ExchangeLog | None = None) -> list[TopicCard]:
    """Run both stages over a list of cards, senses first for each card."""
    out = []
    for card in cards:
        card = retrieve_keyword_senses(client, card, isets["I1"], exchange_log)
        card = generate_topic_implication(client, card, isets["I2"], exchange_log)
        out.append(card)
    return out


def assist_clean(client, doc: Document, iset: PromptInstructionSet,
                 exchange_log: ExchangeLog | None = None,
                 fallback_rules: CleaningRules | None = None) -> Document:
    """Optional LLM cleaning pre-pass; falls back to deterministic cleaning
    when the client is unavailable or returns nothing."""
    rules = fallback_rules or CleaningRules()
    try:
        prompt = iset.render(body=doc.body)
        response = client.complete(prompt, temperature=iset.temperature, max_tokens=iset.max_tokens)
    except LlmUnavailable:
        log.warning("LLM unavailable for assist_clean(%s); using deterministic cleaning", doc.id)
        return clean_document(doc, rules)
    if exchange_log is not None:
        exchange_log.append("clean", prompt, response, client.model_name)
    if not response.strip():
        log.warning("empty LLM cleaning response for %s; using deterministic cleaning", doc.id)
        return clean_document(doc, rules)
    return replace(doc, body=response)
