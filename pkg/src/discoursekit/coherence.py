"""Topic coherence scoring and the topic-count sweep used for model selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .corpus import Vocabulary
from .errors import WordAbsentFromCorpus
from .lda import LdaConfig, TopicModel, train_lda


def doc_occurrence_counts(bow: list[list[int]]) -> tuple[dict[int, int], dict[tuple[int, int], int]]:
    """Document frequencies D(w) and co-document frequencies D(w1,w2), w1<w2."""
    single: dict[int, int] = {}
    pair: dict[tuple[int, int], int] = {}
    for ids in bow:
        present = sorted(set(ids))
        for w in present:
            single[w] = single.get(w, 0) + 1
        for i in range(len(present)):
            for j in range(i + 1, len(present)):
                key = (present[i], present[j])
                pair[key] = pair.get(key, 0) + 1
    return single, pair


def _pair_count(pair: dict, a: int, b: int) -> int:
    return pair.get((a, b) if a < b else (b, a), 0)


def topic_umass(top_words: list[int], single: dict, pair: dict) -> float:
    """UMass coherence of one topic: sum over ranked pairs of
    log((D(w_i, w_j) + 1) / D(w_j)) with w_i ranked above w_j."""
    score = 0.0
    for j in range(1, len(top_words)):
        dj = single.get(top_words[j], 0)
        if dj == 0:
            raise WordAbsentFromCorpus(str(top_words[j]))
        for i in range(j):
            score += math.log((_pair_count(pair, top_words[i], top_words[j]) + 1) / dj)
    return score


def topic_npmi(top_words: list[int], single: dict, pair: dict, n_docs: int) -> float:
    """Mean NPMI over ranked pairs; never-co-occurring pairs score -1."""
    total = 0.0
    n_pairs = 0
    for j in range(1, len(top_words)):
        if single.get(top_words[j], 0) == 0:
            raise WordAbsentFromCorpus(str(top_words[j]))
        for i in range(j):
            n_pairs += 1
            d_ij = _pair_count(pair, top_words[i], top_words[j])
            if d_ij == 0:
                total += -1.0
                continue
            p_ij = d_ij / n_docs
            p_i = single[top_words[i]] / n_docs
            p_j = single[top_words[j]] / n_docs
            if p_ij == 1.0:
                total += 1.0
            else:
                total += math.log(p_ij / (p_i * p_j)) / -math.log(p_ij)
    return total / n_pairs if n_pairs else 0.0


def coherence(model: TopicModel, bow: list[list[int]], topN: int = 10,
              metric: str = "umass") -> float:
    """Mean per-topic coherence over the model's topics."""
    if topN < 2:
        raise ValueError("topN must be >= 2")
    single, pair = doc_occurrence_counts(bow)
    scores = []
    for t in range(model.K):
        top = model.top_keywords(t, min(topN, len(model.vocab)))
        ids = [model.vocab.word_to_id[w] for w, _ in top.items]
        if metric == "umass":
            scores.append(topic_umass(ids, single, pair))
        elif metric == "npmi":
            scores.append(topic_npmi(ids, single, pair, len(bow)))
        else:
            raise ValueError(f"unknown coherence metric {metric!r}")
    return sum(scores) / len(scores)


@dataclass
class CoherenceCurve:
    metric: str
    points: list[tuple[int, float]]  # (K, score), covering the range once
    best_K: int

    def to_csv(self) -> str:
        lines = ["K,score"]
        lines += [f"{k},{score:.12g}" for k, score in self.points]
        return "\n".join(lines) + "\n"


def pick_best_k(points: list[tuple[int, float]]) -> int:
    """Maximum score; ties resolve to the smallest K."""
    best_k, best_s = points[0]
    for k, s in points[1:]:
        if s > best_s:
            best_k, best_s = k, s
    return best_k


def sweep_topic_count(bow: list[list[int]], vocab: Vocabulary, K_min: int, K_max: int,
                      cfg_base: LdaConfig, topN: int = 10, metric: str = "umass",
                      score_fn=None) -> CoherenceCurve:
    """Train one model per K in [K_min, K_max] and score each.

    Per-K seeds derive as cfg_base.seed XOR K so sweep members are independent
    but reproducible. score_fn overrides the coherence metric (used in tests).
    """
    if not (2 <= K_min <= K_max):
        raise ValueError("require 2 <= K_min <= K_max")
    points = []
    for K in range(K_min, K_max + 1):
        cfg = replace(cfg_base, K=K, seed=cfg_base.seed ^ K)
        try:
            model = train_lda(bow, vocab, cfg)
        except Exception as exc:
            raise type(exc)(f"K={K}: {exc}") from exc
        if score_fn is not None:
            score = score_fn(model, bow)
        else:
            score = coherence(model, bow, topN=topN, metric=metric)
        points.append((K, score))
    return CoherenceCurve(metric=metric, points=points, best_K=pick_best_k(points))
