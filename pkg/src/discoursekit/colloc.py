"""Collocation statistics around a node word: raw window counts, pointwise
mutual information, and log-likelihood over a 2x2 contingency table."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NodeAbsent
from .index import PositionIndex


@dataclass
class Collocate:
    form: str
    stat: float
    freq: int  # co-occurrence count within the window


def _window_cooccurrences(index: PositionIndex, node: str, window: int) -> tuple[dict[str, int], int]:
    """Co-occurrence counts within +/-window of each node occurrence, plus the
    total number of window slots actually available (edges truncate)."""
    counts: dict[str, int] = {}
    slots = 0
    for doc_id, i in index.occurrences(node):
        tokens = index.docs[doc_id].tokens
        lo = max(0, i - window)
        hi = min(len(tokens), i + window + 1)
        for j in range(lo, hi):
            if j == i:
                continue
            slots += 1
            surf = tokens[j].surface
            counts[surf] = counts.get(surf, 0) + 1
    return counts, slots


def _log_likelihood(o11: int, o12: int, o21: int, o22: int) -> float:
    """Dunning log-likelihood ratio for a 2x2 table; 0*ln(0) taken as 0."""
    n = o11 + o12 + o21 + o22
    row1, row2 = o11 + o12, o21 + o22
    col1, col2 = o11 + o21, o12 + o22

    def term(obs, exp):
        if obs == 0 or exp == 0:
            return 0.0
        return obs * math.log(obs / exp)

    return 2.0 * (
        term(o11, row1 * col1 / n)
        + term(o12, row1 * col2 / n)
        + term(o21, row2 * col1 / n)
        + term(o22, row2 * col2 / n)
    )


def collocates(index: PositionIndex, node: str, window: int = 5, min_freq: int = 1,
               measure: str = "raw") -> list[Collocate]:
    """Ranked collocates of a node within +/-window.

    MI = log2(f(n,c) * N / (f(n) * f(c))) with N the total window slots.
    Sorted by statistic descending, lexicographic tie-break.
    """
    if window < 1 or min_freq < 1:
        raise ValueError("window and min_freq must be >= 1")
    if index.frequency(node) == 0:
        raise NodeAbsent(node)
    counts, n_slots = _window_cooccurrences(index, node, window)
    f_node = index.frequency(node)
    total = index.total_tokens
    out = []
    for form, joint in counts.items():
        if joint < min_freq:
            continue
        if measure == "raw":
            stat = float(joint)
        elif measure == "mi":
            stat = math.log2(joint * n_slots / (f_node * index.frequency(form)))
        elif measure == "log_likelihood":
            f_c = index.frequency(form)
            o11 = joint
            o12 = n_slots - joint
            o21 = max(f_c - joint, 0)
            o22 = max(total - n_slots - o21, 0)
            stat = _log_likelihood(o11, o12, o21, o22)
        else:
            raise ValueError(f"unknown collocation measure {measure!r}")
        out.append(Collocate(form=form, stat=stat, freq=joint))
    out.sort(key=lambda c: (-c.stat, c.form))
    return out
