"""Positional inverted index over surface forms, powering frequency, KWIC,
collocation and pattern queries.

The index is keyed by surface form, never lemma: different forms of the same
lemma are analyzed separately (word-form analysis)."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Token, TokenizedDocument
from .errors import EmptyCorpus


@dataclass
class ConcordanceLine:
    doc_id: str
    node_index: int
    left: list[Token]
    right: list[Token]
    node_surface: str


class PositionIndex:
    """Immutable after build; safe for concurrent readers."""

    def __init__(self, corpus: list[TokenizedDocument]):
        if not corpus:
            raise EmptyCorpus("cannot index an empty corpus")
        self.docs = {tdoc.doc_id: tdoc for tdoc in corpus}
        self.doc_order = [tdoc.doc_id for tdoc in corpus]
        self.postings: dict[str, list[tuple[str, int]]] = {}
        self.total_tokens = 0
        for tdoc in corpus:
            for i, tok in enumerate(tdoc.tokens):
                self.postings.setdefault(tok.surface, []).append((tdoc.doc_id, i))
                self.total_tokens += 1

    def frequency(self, form: str) -> int:
        """Exact occurrence count of a surface form; 0 when absent."""
        return len(self.postings.get(form, []))

    def occurrences(self, form: str) -> list[tuple[str, int]]:
        return self.postings.get(form, [])

    def kwic(self, node: str, window: int = 5, limit: int | None = None) -> list[ConcordanceLine]:
        """One concordance line per node occurrence, document then position order."""
        if window < 1:
            raise ValueError("window must be >= 1")
        lines = []
        for doc_id, i in self.postings.get(node, []):
            if limit is not None and len(lines) >= limit:
                break
            tokens = self.docs[doc_id].tokens
            lines.append(ConcordanceLine(
                doc_id=doc_id,
                node_index=i,
                left=tokens[max(0, i - window):i],
                right=tokens[i + 1:i + 1 + window],
                node_surface=node,
            ))
        return lines


def build_index(corpus: list[TokenizedDocument]) -> PositionIndex:
    return PositionIndex(corpus)


def format_kwic_line(line: ConcordanceLine, width: int = 40) -> str:
    left = " ".join(t.surface for t in line.left)
    right = " ".join(t.surface for t in line.right)
    return f"{left:>{width}}  [{line.node_surface}]  {right}"
