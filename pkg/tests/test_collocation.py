import pytest

from lscd.collocation import (
    CollocationProfile,
    build_profile,
    dice,
    load_profiles,
    profile_similarity,
    save_profiles,
)
from lscd.corpus import CorpusBin, MinCount, TimeBinnedCorpus, build_vocabulary


def bin_and_vocab(lines, period="t1"):
    b = CorpusBin.from_lines(period, lines)
    vocab = build_vocabulary(TimeBinnedCorpus((b,)), MinCount(1))
    return b, vocab


class TestDice:
    def test_zero_numerator(self):
        assert dice(0, 3, 4) == 0.0

    def test_perfect_association(self):
        assert dice(7, 7, 7) == 1.0

    def test_direct_arithmetic(self):
        assert dice(3, 10, 5) == pytest.approx(0.4)

    def test_symmetry_in_marginals(self):
        assert dice(2, 9, 4) == dice(2, 4, 9)

    def test_inconsistent_counts(self):
        with pytest.raises(ValueError):
            dice(5, 3, 8)
        with pytest.raises(ValueError):
            dice(0, 0, 0)


class TestBuildProfile:
    def test_word_not_in_vocab(self):
        b, vocab = bin_and_vocab(["a b"])
        with pytest.raises(KeyError):
            build_profile(b, vocab, "zzz", window=1)

    def test_word_unseen_in_bin_yields_empty(self):
        b1, _ = bin_and_vocab(["a b"])
        _, vocab = bin_and_vocab(["a b zzz"])
        profile = build_profile(b1, vocab, "zzz", window=1)
        assert not profile
        assert profile.weights == {}

    def test_support_smaller_than_top_n(self):
        b, vocab = bin_and_vocab(["a x a y", "z z"])
        profile = build_profile(b, vocab, "x", window=1, top_n=10)
        assert set(profile.weights) == {"a"}

    def test_scores_match_hand_computed_dice(self):
        # window-1 pair counts: (x,a)=2, (x,b)=1; marginals over pair
        # occurrences: f_x=3, f_a=4, f_b=3
        b, vocab = bin_and_vocab(["a x a", "x b", "b a b"])
        profile = build_profile(b, vocab, "x", window=1, top_n=10)
        assert profile.weights["a"] == pytest.approx(2 * 2 / (3 + 4))
        assert profile.weights["b"] == pytest.approx(2 * 1 / (3 + 3))

    def test_top_n_truncates(self):
        b, vocab = bin_and_vocab(["a x b x c x d"])
        profile = build_profile(b, vocab, "x", window=1, top_n=2)
        assert len(profile.weights) == 2

    def test_min_dice_threshold(self):
        b, vocab = bin_and_vocab(["a x a", "x b", "b a b"])
        profile = build_profile(b, vocab, "x", window=1, min_dice=0.4)
        assert set(profile.weights) == {"a"}

    def test_duplication_leaves_dice_unchanged(self):
        lines = ["a x a", "x b", "b a b"]
        b1, vocab = bin_and_vocab(lines)
        b2 = CorpusBin.from_lines("t1", lines * 3)
        p1 = build_profile(b1, vocab, "x", window=1, top_n=10)
        p2 = build_profile(b2, vocab, "x", window=1, top_n=10)
        assert p1.weights == pytest.approx(p2.weights)


class TestProfileSimilarity:
    def test_identical_nonempty(self):
        p = CollocationProfile("w", "t1", {"a": 0.3, "b": 0.1})
        assert profile_similarity(p, p) == pytest.approx(1.0)

    def test_disjoint_supports(self):
        p1 = CollocationProfile("w", "t1", {"a": 0.5})
        p2 = CollocationProfile("w", "t2", {"b": 0.5})
        assert profile_similarity(p1, p2) == 0.0

    def test_half_overlap(self):
        p1 = CollocationProfile("w", "t1", {"a": 0.5, "b": 0.5})
        p2 = CollocationProfile("w", "t2", {"a": 0.5, "c": 0.5})
        assert profile_similarity(p1, p2) == pytest.approx(0.5)

    def test_empty_profile_gives_zero(self):
        p1 = CollocationProfile("w", "t1", {})
        p2 = CollocationProfile("w", "t2", {"a": 0.5})
        assert profile_similarity(p1, p2) == 0.0

    def test_symmetric_and_bounded(self):
        import random

        rng = random.Random(0)
        for _ in range(50):
            p1 = CollocationProfile(
                "w", "t1", {f"c{i}": rng.random() for i in range(rng.randint(1, 8))}
            )
            p2 = CollocationProfile(
                "w", "t2", {f"c{i}": rng.random() for i in range(rng.randint(1, 8))}
            )
            s12 = profile_similarity(p1, p2)
            assert s12 == pytest.approx(profile_similarity(p2, p1))
            assert 0.0 <= s12 <= 1.0


def test_profile_serialization_roundtrip(tmp_path):
    profiles = [
        CollocationProfile("w", "t1", {"a": 0.25, "b": 1 / 3}),
        CollocationProfile("v", "t2", {}),
    ]
    path = tmp_path / "profiles.tsv"
    save_profiles(profiles, path)
    loaded = load_profiles(path)
    assert [(p.word, p.period_id, p.weights) for p in loaded] == [
        (p.word, p.period_id, p.weights) for p in profiles
    ]
