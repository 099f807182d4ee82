"""Semantic prosody annotation store and summaries.

Prosody labels are human judgments; the store keeps full revision history and
never merges disagreeing annotators."""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import UnknownMatch
from .patterns import PatternMatch

LABELS = ("positive", "neutral", "negative")


@dataclass
class ProsodyAnnotation:
    match_id: str
    label: str
    annotator: str
    note: str = ""
    timestamp: float = 0.0


class AnnotationStore:
    """Append-only store; single writer at a time, consistent snapshots for readers."""

    def __init__(self, path=None):
        self.path = Path(path) if path else None
        self._lock = threading.Lock()
        self._matches: dict[str, PatternMatch] = {}
        self._annotations: list[ProsodyAnnotation] = []
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._annotations.append(ProsodyAnnotation(**json.loads(line)))

    def register_matches(self, matches: list[PatternMatch]) -> None:
        with self._lock:
            for m in matches:
                self._matches[m.match_id] = m

    def known_matches(self) -> list[PatternMatch]:
        return list(self._matches.values())

    def get_match(self, match_id: str) -> PatternMatch:
        try:
            return self._matches[match_id]
        except KeyError:
            raise UnknownMatch(match_id) from None

    def annotate(self, match_id: str, label: str, annotator: str, note: str = "") -> ProsodyAnnotation:
        """Persist one label; re-annotation by the same annotator supersedes
        (history retained)."""
        if label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        if match_id not in self._matches:
            raise UnknownMatch(match_id)
        ann = ProsodyAnnotation(match_id=match_id, label=label, annotator=annotator,
                                note=note, timestamp=time.time())
        with self._lock:
            self._annotations.append(ann)
            if self.path:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(ann.__dict__, ensure_ascii=False) + "\n")
        return ann

    def history(self, match_id: str, annotator: str | None = None) -> list[ProsodyAnnotation]:
        return [a for a in self._annotations
                if a.match_id == match_id and (annotator is None or a.annotator == annotator)]

    def latest_labels(self, match_ids=None) -> dict[tuple[str, str], str]:
        """Latest label per (match, annotator)."""
        latest: dict[tuple[str, str], str] = {}
        for a in self._annotations:
            if match_ids is not None and a.match_id not in match_ids:
                continue
            latest[(a.match_id, a.annotator)] = a.label
        return latest


def prosody_summary(store: AnnotationStore, pattern_name: str | None = None,
                    node: str | None = None) -> dict:
    """Label distribution over latest-per-annotator annotations.

    Disagreeing annotators are reported side by side in per_annotator; the
    overall counts tally every (match, annotator) latest label, never a merged
    verdict."""
    matches = store.known_matches()
    if pattern_name is not None:
        matches = [m for m in matches if m.pattern_name == pattern_name]
    if node is not None:
        matches = [m for m in matches
                   if any(t.surface == node for toks in m.slot_fillers.values() for t in toks)]
    ids = {m.match_id for m in matches}
    latest = store.latest_labels(ids)

    counts = {label: 0 for label in LABELS}
    per_annotator: dict[str, dict[str, int]] = {}
    annotated_ids = set()
    for (match_id, annotator), label in latest.items():
        counts[label] += 1
        annotated_ids.add(match_id)
        per_annotator.setdefault(annotator, {l: 0 for l in LABELS})[label] += 1
    unannotated = len(ids) - len(annotated_ids)
    total_labels = sum(counts.values())
    proportions = {label: (counts[label] / total_labels if total_labels else 0.0)
                   for label in LABELS}
    return {
        "counts": counts,
        "proportions": proportions,
        "unannotated": unannotated,
        "per_annotator": per_annotator,
        "n_matches": len(ids),
    }
