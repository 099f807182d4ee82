"""Manual topic curation: merging and dropping raw LDA topics into analysis topics."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidMapping
from .lda import TopicKeywords


@dataclass
class MergedTopic:
    """Analysis-topic skeleton: union keyword list with per-keyword provenance."""
    analysis_id: int
    source_ids: list[int]
    keywords: list[tuple[str, float]]            # weight-descending
    provenance: dict[str, list[int]] = field(default_factory=dict)  # word -> raw topic ids


@dataclass
class AnalysisTopicSet:
    topics: list[MergedTopic]
    merge_log: dict[int, int]   # raw topic id -> analysis topic id
    dropped: list[int]


def merge_topics(raw: list[TopicKeywords], mapping: dict[int, str]) -> AnalysisTopicSet:
    """Apply a merge specification to raw topics.

    mapping assigns each raw topic id one of: "keep", "drop", or
    "merge:<target-id>" where target must itself be kept. Merged keyword lists
    are unions keeping the maximum weight, sorted weight-descending then
    lexicographic; every keyword records which raw topics contributed it.
    """
    raw_by_id = {t.topic_id: t for t in raw}
    if len(raw_by_id) != len(raw):
        raise InvalidMapping("duplicate raw topic ids")
    if set(mapping) != set(raw_by_id):
        missing = set(raw_by_id) - set(mapping)
        unknown = set(mapping) - set(raw_by_id)
        raise InvalidMapping(f"mapping must cover raw topics exactly "
                             f"(missing {sorted(missing)}, unknown {sorted(unknown)})")

    targets: dict[int, int] = {}   # raw id -> group root raw id
    dropped: list[int] = []
    for rid in sorted(mapping):
        action = mapping[rid]
        if action == "keep":
            targets[rid] = rid
        elif action == "drop":
            dropped.append(rid)
        elif action.startswith("merge:"):
            try:
                tgt = int(action.split(":", 1)[1])
            except ValueError:
                raise InvalidMapping(f"bad merge target in {action!r}")
            if tgt not in raw_by_id:
                raise InvalidMapping(f"merge target {tgt} is not a raw topic")
            if tgt == rid or mapping.get(tgt, "").startswith("merge:"):
                # chains and self-merges would make group membership ambiguous
                raise InvalidMapping(f"merge target {tgt} must be a kept topic")
            if mapping[tgt] != "keep":
                raise InvalidMapping(f"merge target {tgt} is dropped")
            targets[rid] = tgt
        else:
            raise InvalidMapping(f"unknown action {action!r} for topic {rid}")

    groups: dict[int, list[int]] = {}
    for rid, root in sorted(targets.items()):
        groups.setdefault(root, []).append(rid)

    topics = []
    merge_log: dict[int, int] = {}
    for analysis_id, root in enumerate(sorted(groups)):
        members = groups[root]
        weights: dict[str, float] = {}
        provenance: dict[str, list[int]] = {}
        for rid in members:
            for word, weight in raw_by_id[rid].items:
                if word not in weights or weight > weights[word]:
                    weights[word] = weight
                provenance.setdefault(word, []).append(rid)
            merge_log[rid] = analysis_id
        ordered = sorted(weights, key=lambda w: (-weights[w], w))
        topics.append(MergedTopic(
            analysis_id=analysis_id,
            source_ids=members,
            keywords=[(w, weights[w]) for w in ordered],
            provenance=provenance,
        ))
    return AnalysisTopicSet(topics=topics, merge_log=merge_log, dropped=dropped)
