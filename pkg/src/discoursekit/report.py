"""Deterministic report rendering: topic keyword tables and pattern analysis
tables (semantic category / frequency / examples) in markdown or CSV."""

from __future__ import annotations

import csv
import io

from .errors import MissingSection
from .labeling import TopicCard
from .patterns import PatternMatch, filler_surface


def _match_example(match: PatternMatch, index=None) -> str:
    """Render the matched token span (with a little context when an index is given)."""
    if index is not None and match.doc_id in index.docs:
        tokens = index.docs[match.doc_id].tokens
        lo = max(0, match.span[0] - 3)
        hi = min(len(tokens), match.span[1] + 3)
        return filler_surface(tokens[lo:hi])
    spans = [t for si in sorted(match.slot_fillers) for t in match.slot_fillers[si]]
    return filler_surface(spans)


def render_topic_tables_md(cards: list[TopicCard]) -> str:
    out = []
    for card in cards:
        out.append(f"## Topic {card.topic_id}")
        if card.manual_description and card.manual_description != "<skipped>":
            out.append(f"*Analyst description:* {card.manual_description}")
        out.append("")
        out.append("| Rank | Keyword | Weight |")
        out.append("| --- | --- | --- |")
        for rank, (word, weight) in enumerate(card.keywords, start=1):
            out.append(f"| {rank} | {word} | {weight:.3f} |")
        if card.implication:
            out.append("")
            out.append(f"*Implication:* {card.implication}")
        out.append("")
    return "\n".join(out)


def render_pattern_table_md(pattern_name: str, classified: dict, index=None,
                            max_examples: int = 3) -> str:
    out = [f"## Pattern: {pattern_name}", "",
           "| Semantic Category | Frequency | Examples |",
           "| --- | --- | --- |"]
    for label in sorted(classified, key=lambda l: (-classified[l][0], l)):
        count, examples = classified[label]
        shown = "; ".join(_match_example(m, index) for m in examples[:max_examples])
        out.append(f"| {label} | {count} | {shown} |")
    out.append("")
    return "\n".join(out)


def render_prosody_table_md(name: str, summary: dict) -> str:
    out = [f"## Semantic prosody: {name}", "",
           "| Label | Count | Proportion |",
           "| --- | --- | --- |"]
    for label in ("positive", "neutral", "negative"):
        out.append(f"| {label} | {summary['counts'][label]} | {summary['proportions'][label]:.3f} |")
    out.append(f"| unannotated | {summary['unannotated']} | - |")
    out.append("")
    return "\n".join(out)


def render_report(cards: list[TopicCard] | None = None,
                  pattern_sections: list[tuple[str, dict]] | None = None,
                  prosody_sections: list[tuple[str, dict]] | None = None,
                  index=None, format: str = "markdown") -> str:
    """Assemble the full analysis report; same inputs render byte-identically."""
    if not cards and not pattern_sections and not prosody_sections:
        raise MissingSection("nothing to report")
    if format == "markdown":
        parts = ["# Discourse analysis report", ""]
        if cards:
            parts.append(render_topic_tables_md(cards))
        for name, classified in pattern_sections or []:
            parts.append(render_pattern_table_md(name, classified, index))
        for name, summary in prosody_sections or []:
            parts.append(render_prosody_table_md(name, summary))
        return "\n".join(parts)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for card in cards or []:
            for rank, (word, weight) in enumerate(card.keywords, start=1):
                writer.writerow(["topic", card.topic_id, rank, word, f"{weight:.3f}"])
        for name, classified in pattern_sections or []:
            for label in sorted(classified, key=lambda l: (-classified[l][0], l)):
                count, _ = classified[label]
                writer.writerow(["pattern", name, label, count])
        for name, summary in prosody_sections or []:
            for label in ("positive", "neutral", "negative"):
                writer.writerow(["prosody", name, label, summary["counts"][label]])
            writer.writerow(["prosody", name, "unannotated", summary["unannotated"]])
        return buf.getvalue()
    raise ValueError(f"unknown report format {format!r}")
