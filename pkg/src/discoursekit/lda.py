"""Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

The sampler is strictly sequential and fully deterministic: topic choices are
driven by an explicit xorshift64* generator seeded from the config, so the
same corpus + config always reproduces bit-identical count matrices.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, asdict

import numpy as np
from numba import njit

from .corpus import Vocabulary
from .errors import (
    DocOutOfRange,
    EmptyCorpus,
    InvalidConfig,
    KTooLarge,
    TopicOutOfRange,
)


@dataclass(frozen=True)
class LdaConfig:
    K: int
    alpha: float | None = None  # default 50/K
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 42

    def resolved_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.K

    def validate(self):
        if self.K < 1:
            raise InvalidConfig("K must be >= 1")
        if self.iterations < 1:
            raise InvalidConfig("iterations must be >= 1")
        if not (0 <= self.burn_in < self.iterations):
            raise InvalidConfig("burn_in must satisfy 0 <= burn_in < iterations")
        if self.resolved_alpha() <= 0 or self.beta <= 0:
            raise InvalidConfig("alpha and beta must be positive")


@njit(cache=True)
def _xorshift(state):
    # xorshift64*; all arithmetic kept in uint64 so shifts stay logical
    state = np.uint64(state)
    state ^= state >> np.uint64(12)
    state ^= state << np.uint64(25)
    state ^= state >> np.uint64(27)
    return state


@njit(cache=True)
def _rand_uniform(state):
    state = _xorshift(state)
    mixed = state * np.uint64(0x2545F4914F6CDD1D)
    return state, np.float64(mixed >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _init_assignments(words, docs, K, n_tw, n_dt, n_t, z, state):
    for i in range(words.size):
        state, u = _rand_uniform(state)
        t = int(u * K)
        if t == K:
            t = K - 1
        z[i] = t
        n_tw[t, words[i]] += 1
        n_dt[docs[i], t] += 1
        n_t[t] += 1
    return state


@njit(cache=True)
def _gibbs_sweeps(words, docs, K, V, alpha, beta, n_tw, n_dt, n_t, z, state, sweeps):
    p = np.empty(K)
    for _ in range(sweeps):
        for i in range(words.size):
            w = words[i]
            d = docs[i]
            t = z[i]
            n_tw[t, w] -= 1
            n_dt[d, t] -= 1
            n_t[t] -= 1
            total = 0.0
            for k in range(K):
                p[k] = (n_tw[k, w] + beta) / (n_t[k] + V * beta) * (n_dt[d, k] + alpha)
                total += p[k]
            state, u = _rand_uniform(state)
            target = u * total
            acc = 0.0
            t = K - 1
            for k in range(K):
                acc += p[k]
                if acc >= target:
                    t = k
                    break
            z[i] = t
            n_tw[t, w] += 1
            n_dt[d, t] += 1
            n_t[t] += 1
    return state


class TopicModel:
    """Trained LDA state: count matrices plus per-token assignments."""

    def __init__(self, config: LdaConfig, vocab: Vocabulary, n_tw, n_dt, n_t, z,
                 doc_lengths):
        self.config = config
        self.vocab = vocab
        self.n_tw = n_tw
        self.n_dt = n_dt
        self.n_t = n_t
        self.z = z
        self.doc_lengths = doc_lengths

    @property
    def K(self) -> int:
        return self.config.K

    @property
    def D(self) -> int:
        return self.n_dt.shape[0]

    def check_invariants(self):
        assert (self.n_tw >= 0).all() and (self.n_dt >= 0).all()
        assert (self.n_tw.sum(axis=1) == self.n_t).all()
        assert (self.n_dt.sum(axis=1) == self.doc_lengths).all()
        assert self.n_t.sum() == self.doc_lengths.sum()

    def topic_word_dist(self, t: int) -> np.ndarray:
        """Smoothed topic-word distribution (n_tw+beta)/(n_t+V*beta)."""
        if not (0 <= t < self.K):
            raise TopicOutOfRange(str(t))
        beta = self.config.beta
        V = len(self.vocab)
        return (self.n_tw[t] + beta) / (self.n_t[t] + V * beta)

    def doc_topic_dist(self, d: int) -> np.ndarray:
        if not (0 <= d < self.D):
            raise DocOutOfRange(str(d))
        alpha = self.config.resolved_alpha()
        return (self.n_dt[d] + alpha) / (self.doc_lengths[d] + self.K * alpha)

    def top_keywords(self, t: int, k: int = 10) -> "TopicKeywords":
        """The k highest-probability words of topic t, lexicographic tie-break."""
        if not (0 <= t < self.K):
            raise TopicOutOfRange(str(t))
        if not (1 <= k <= len(self.vocab)):
            raise KTooLarge(f"k={k} outside [1, {len(self.vocab)}]")
        dist = self.topic_word_dist(t)
        order = sorted(range(len(dist)), key=lambda w: (-dist[w], self.vocab.id_to_word[w]))
        items = [(self.vocab.id_to_word[w], float(dist[w])) for w in order[:k]]
        return TopicKeywords(topic_id=t, items=items)

    # --- snapshot ---

    SNAPSHOT_VERSION = 1

    def to_snapshot(self) -> dict:
        return {
            "version": self.SNAPSHOT_VERSION,
            "config": asdict(self.config),
            "vocab_hash": vocab_hash(self.vocab),
            "vocab": self.vocab.id_to_word,
            "doc_freq": [self.vocab.doc_freq[w] for w in self.vocab.id_to_word],
            "n_tw": self.n_tw.ravel().tolist(),
            "n_dt": self.n_dt.ravel().tolist(),
            "z": self.z.tolist(),
            "doc_lengths": self.doc_lengths.tolist(),
        }

    @classmethod
    def from_snapshot(cls, snap: dict) -> "TopicModel":
        if snap.get("version") != cls.SNAPSHOT_VERSION:
            raise InvalidConfig(f"unsupported snapshot version {snap.get('version')}")
        config = LdaConfig(**snap["config"])
        words = snap["vocab"]
        vocab = Vocabulary(
            word_to_id={w: i for i, w in enumerate(words)},
            id_to_word=list(words),
            doc_freq=dict(zip(words, snap["doc_freq"])),
        )
        K, V = config.K, len(words)
        doc_lengths = np.array(snap["doc_lengths"], dtype=np.int64)
        n_tw = np.array(snap["n_tw"], dtype=np.int64).reshape(K, V)
        n_dt = np.array(snap["n_dt"], dtype=np.int64).reshape(len(doc_lengths), K)
        n_t = n_tw.sum(axis=1)
        z = np.array(snap["z"], dtype=np.int32)
        return cls(config, vocab, n_tw, n_dt, n_t, z, doc_lengths)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_snapshot(), fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "TopicModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_snapshot(json.load(fh))


@dataclass
class TopicKeywords:
    topic_id: int
    items: list[tuple[str, float]]


def vocab_hash(vocab: Vocabulary) -> str:
    h = hashlib.sha256()
    for w in vocab.id_to_word:
        h.update(w.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def train_lda(bow: list[list[int]], vocab: Vocabulary, cfg: LdaConfig,
              check_every_sweep: bool = False) -> TopicModel:
    """Run collapsed Gibbs sampling over a bag-of-words corpus.

    bow is one id-sequence per document (ids < len(vocab)). With
    check_every_sweep the count invariants are asserted after each sweep
    instead of only at the end.
    """
    cfg.validate()
    if not bow or all(len(d) == 0 for d in bow):
        raise EmptyCorpus("no unmasked tokens to train on")
    for d, ids in enumerate(bow):
        if len(ids) == 0:
            raise EmptyCorpus(f"document {d} has no unmasked tokens")
    V = len(vocab)
    if V < cfg.K:
        warnings.warn(f"vocabulary size {V} is smaller than K={cfg.K}")

    words = np.array([w for ids in bow for w in ids], dtype=np.int32)
    docs = np.array([d for d, ids in enumerate(bow) for _ in ids], dtype=np.int32)
    doc_lengths = np.array([len(ids) for ids in bow], dtype=np.int64)
    K = cfg.K
    n_tw = np.zeros((K, V), dtype=np.int64)
    n_dt = np.zeros((len(bow), K), dtype=np.int64)
    n_t = np.zeros(K, dtype=np.int64)
    z = np.zeros(words.size, dtype=np.int32)

    state = np.uint64((cfg.seed or 1) ^ 0x9E3779B97F4A7C15) or np.uint64(1)
    state = _init_assignments(words, docs, K, n_tw, n_dt, n_t, z, np.uint64(state))
    model = TopicModel(cfg, vocab, n_tw, n_dt, n_t, z, doc_lengths)
    alpha = cfg.resolved_alpha()
    if check_every_sweep:
        for _ in range(cfg.iterations):
            state = _gibbs_sweeps(words, docs, K, V, alpha, cfg.beta,
                                  n_tw, n_dt, n_t, z, np.uint64(state), 1)
            model.check_invariants()
    else:
        _gibbs_sweeps(words, docs, K, V, alpha, cfg.beta,
                      n_tw, n_dt, n_t, z, np.uint64(state), cfg.iterations)
        model.check_invariants()
    return model
