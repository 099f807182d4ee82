import random

import numpy as np
import pytest

from discoursekit.corpus import Vocabulary
from discoursekit.errors import (
    DocOutOfRange,
    EmptyCorpus,
    InvalidConfig,
    KTooLarge,
    TopicOutOfRange,
)
from discoursekit.lda import LdaConfig, TopicModel, train_lda


def make_vocab(words):
    return Vocabulary(word_to_id={w: i for i, w in enumerate(words)},
                      id_to_word=list(words),
                      doc_freq={w: 1 for w in words})


def toy_model(counts, beta=0.1, alpha=0.5):
    """Single-topic model with the given word counts over {a, b, ...}."""
    words = [chr(ord("a") + i) for i in range(len(counts))]
    vocab = make_vocab(words)
    n_tw = np.array([counts], dtype=np.int64)
    n_t = n_tw.sum(axis=1)
    n_dt = np.array([[sum(counts)]], dtype=np.int64)
    cfg = LdaConfig(K=1, alpha=alpha, beta=beta, iterations=1, burn_in=0, seed=0)
    z = np.zeros(sum(counts), dtype=np.int32)
    return TopicModel(cfg, vocab, n_tw, n_dt, n_t, z,
                      doc_lengths=np.array([sum(counts)], dtype=np.int64))


class TestConfig:
    def test_burn_in_bound(self):
        with pytest.raises(InvalidConfig):
            LdaConfig(K=2, iterations=10, burn_in=10).validate()

    def test_positive_priors(self):
        with pytest.raises(InvalidConfig):
            LdaConfig(K=2, alpha=-1.0, iterations=2, burn_in=0).validate()

    def test_default_alpha_is_50_over_k(self):
        assert LdaConfig(K=25).resolved_alpha() == 2.0


class TestTrain:
    def test_single_word_degenerate(self):
        vocab = make_vocab(["a"])
        model = train_lda([[0, 0, 0]], vocab,
                          LdaConfig(K=1, iterations=5, burn_in=0, seed=1))
        assert model.topic_word_dist(0) == pytest.approx([1.0])

    def test_determinism_bit_identical(self):
        vocab = make_vocab(["a", "b", "c"])
        bow = [[0, 1, 2, 0], [2, 2, 1], [0, 0, 1, 2]]
        cfg = LdaConfig(K=2, iterations=50, burn_in=0, seed=123)
        m1 = train_lda(bow, vocab, cfg)
        m2 = train_lda(bow, vocab, cfg)
        assert (m1.n_tw == m2.n_tw).all()
        assert (m1.n_dt == m2.n_dt).all()
        assert (m1.z == m2.z).all()

    def test_different_seeds_differ(self):
        vocab = make_vocab(["a", "b", "c", "d"])
        rng = random.Random(0)
        bow = [[rng.randrange(4) for _ in range(12)] for _ in range(8)]
        m1 = train_lda(bow, vocab, LdaConfig(K=3, iterations=30, burn_in=0, seed=1))
        m2 = train_lda(bow, vocab, LdaConfig(K=3, iterations=30, burn_in=0, seed=2))
        assert (m1.z != m2.z).any()

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_lda([], make_vocab(["a"]), LdaConfig(K=1, iterations=1, burn_in=0))

    def test_count_conservation_every_sweep(self):
        rng = random.Random(9)
        vocab = make_vocab([f"w{i}" for i in range(10)])
        bow = [[rng.randrange(10) for _ in range(rng.randint(2, 15))] for _ in range(20)]
        # check_every_sweep asserts the marginal invariants after each sweep
        model = train_lda(bow, vocab, LdaConfig(K=4, iterations=20, burn_in=0, seed=5),
                          check_every_sweep=True)
        assert model.n_t.sum() == sum(len(d) for d in bow)

    def test_topic_recovery_disjoint_vocabularies(self):
        # DERIVED oracle: corpus generated from 3 disjoint 20-word topic
        # vocabularies; learned top-5 words must each lie in one of them
        rng = random.Random(42)
        vocabs = [[f"t{k}w{i}" for i in range(20)] for k in range(3)]
        words = [w for v in vocabs for w in v]
        vocab = make_vocab(words)
        bow = []
        for _ in range(200):
            k = rng.randrange(3)
            bow.append([vocab.word_to_id[rng.choice(vocabs[k])] for _ in range(30)])
        model = train_lda(bow, vocab, LdaConfig(K=3, alpha=0.1, beta=0.01,
                                                iterations=150, burn_in=0, seed=7))
        group_sets = [set(range(20 * k, 20 * (k + 1))) for k in range(3)]
        hit_groups = set()
        for t in range(3):
            top5 = {vocab.word_to_id[w] for w, _ in model.top_keywords(t, 5).items}
            containing = [g for g, ids in enumerate(group_sets) if top5 <= ids]
            assert len(containing) == 1
            hit_groups.add(containing[0])
        assert hit_groups == {0, 1, 2}


class TestDistributions:
    def test_topic_word_dist_hand_formula(self):
        # counts a:3, b:1, beta=0.1 -> [(3.1)/4.2, (1.1)/4.2]
        model = toy_model([3, 1], beta=0.1)
        assert model.topic_word_dist(0) == pytest.approx([3.1 / 4.2, 1.1 / 4.2], abs=1e-12)

    def test_normalization(self):
        rng = random.Random(3)
        vocab = make_vocab([f"w{i}" for i in range(6)])
        bow = [[rng.randrange(6) for _ in range(10)] for _ in range(5)]
        model = train_lda(bow, vocab, LdaConfig(K=3, iterations=10, burn_in=0, seed=2))
        for t in range(3):
            dist = model.topic_word_dist(t)
            assert abs(dist.sum() - 1.0) < 1e-9 and (dist > 0).all()
        for d in range(5):
            dist = model.doc_topic_dist(d)
            assert abs(dist.sum() - 1.0) < 1e-9 and (dist > 0).all()

    def test_topic_out_of_range(self):
        model = toy_model([2, 2])
        with pytest.raises(TopicOutOfRange):
            model.topic_word_dist(1)

    def test_doc_topic_hand_formula(self):
        # n_dt=[3,1], alpha=0.5, 4 tokens -> [3.5/5, 1.5/5]
        vocab = make_vocab(["a"])
        cfg = LdaConfig(K=2, alpha=0.5, beta=0.1, iterations=1, burn_in=0, seed=0)
        model = TopicModel(cfg, vocab,
                           n_tw=np.array([[3], [1]], dtype=np.int64),
                           n_dt=np.array([[3, 1]], dtype=np.int64),
                           n_t=np.array([3, 1], dtype=np.int64),
                           z=np.zeros(4, dtype=np.int32),
                           doc_lengths=np.array([4], dtype=np.int64))
        assert model.doc_topic_dist(0) == pytest.approx([3.5 / 5, 1.5 / 5], abs=1e-12)

    def test_single_topic_doc_dist(self):
        model = toy_model([3, 1])
        assert model.doc_topic_dist(0) == pytest.approx([1.0])

    def test_doc_out_of_range(self):
        with pytest.raises(DocOutOfRange):
            toy_model([1]).doc_topic_dist(1)


class TestTopKeywords:
    def test_hand_derived_weights(self):
        model = toy_model([3, 1], beta=0.1)
        top = model.top_keywords(0, 2)
        assert top.items[0][0] == "a" and top.items[1][0] == "b"
        assert top.items[0][1] == pytest.approx(3.1 / 4.2, abs=1e-12)
        assert top.items[1][1] == pytest.approx(1.1 / 4.2, abs=1e-12)

    def test_k_equals_vocab_gives_full_sort(self):
        model = toy_model([1, 5, 3])
        top = model.top_keywords(0, 3)
        assert [w for w, _ in top.items] == ["b", "c", "a"]

    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            toy_model([1, 1]).top_keywords(0, 3)

    def test_matches_sort_then_truncate_oracle(self):
        rng = random.Random(8)
        vocab = make_vocab([f"w{i}" for i in range(15)])
        bow = [[rng.randrange(15) for _ in range(20)] for _ in range(10)]
        model = train_lda(bow, vocab, LdaConfig(K=3, iterations=15, burn_in=0, seed=4))
        for t in range(3):
            dist = model.topic_word_dist(t)
            oracle = sorted(vocab.id_to_word, key=lambda w: (-dist[vocab.word_to_id[w]], w))[:6]
            assert [w for w, _ in model.top_keywords(t, 6).items] == oracle

    def test_lexicographic_tie_break(self):
        model = toy_model([2, 2, 2])
        assert [w for w, _ in model.top_keywords(0, 3).items] == ["a", "b", "c"]


class TestSnapshot:
    def test_round_trip_reproduces_queries(self, tmp_path):
        rng = random.Random(1)
        vocab = make_vocab([f"w{i}" for i in range(8)])
        bow = [[rng.randrange(8) for _ in range(12)] for _ in range(6)]
        model = train_lda(bow, vocab, LdaConfig(K=3, iterations=20, burn_in=0, seed=11))
        path = tmp_path / "model.json"
        model.save(path)
        back = TopicModel.load(path)
        assert (back.n_tw == model.n_tw).all()
        for t in range(3):
            assert back.top_keywords(t, 5).items == model.top_keywords(t, 5).items
        for d in range(6):
            assert back.doc_topic_dist(d) == pytest.approx(model.doc_topic_dist(d))
