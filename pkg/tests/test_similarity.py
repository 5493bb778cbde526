import math

import numpy as np
import pytest

from lscd.embeddings import EmbeddingSpace
from lscd.similarity import (
    SimilaritySet,
    cosine,
    neighborhood_similarity,
    pearson,
    target_similarities,
)


def random_space(rng, n_words, dim, period="t1", prefix="w"):
    space = EmbeddingSpace(dim, period)
    for i in range(n_words):
        space[f"{prefix}{i:03d}"] = rng.normal(size=dim)
    return space


class TestCosine:
    def test_identical(self):
        assert cosine([1, 2, 3], [1, 2, 3]) == 1.0

    def test_orthogonal(self):
        assert cosine([1, 0], [0, 1]) == 0.0

    def test_derived_value(self):
        assert cosine([1, 2], [2, 1]) == pytest.approx(0.8)

    def test_zero_vector(self):
        with pytest.raises(ValueError, match="undefined cosine"):
            cosine([0, 0], [1, 1])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            cosine([1, 2], [1, 2, 3])

    def test_clamped_to_unit_interval(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            u = rng.normal(size=5)
            assert -1.0 <= cosine(u, rng.normal(size=5)) <= 1.0

    def test_scale_invariance(self):
        u, v = [1.0, 2.0, -1.0], [0.5, -2.0, 3.0]
        assert cosine(np.multiply(u, 7.5), v) == pytest.approx(cosine(u, v))


class TestPearson:
    def test_self_correlation(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_anti_correlation(self):
        u = np.array([1.0, -2.0, 0.5])
        assert pearson(u, -u) == pytest.approx(-1.0)

    def test_equals_cosine_on_centered(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            u = rng.normal(size=8)
            v = rng.normal(size=8)
            u -= u.mean()
            v -= v.mean()
            assert abs(pearson(u, v) - cosine(u, v)) < 1e-12

    def test_constant_vector(self):
        with pytest.raises(ValueError, match="undefined correlation"):
            pearson([2, 2, 2], [1, 2, 3])


def brute_force_ns(E1, E2, w, k):
    """Exhaustive second-order oracle, pure python, independent of the
    library's neighbor search."""

    def cos(u, v):
        dot = sum(a * b for a, b in zip(u, v))
        nu = math.sqrt(sum(a * a for a in u))
        nv = math.sqrt(sum(b * b for b in v))
        return dot / (nu * nv)

    def nbrs(space):
        scored = sorted(
            ((cos(space[w], space[t]), t) for t in space.tokens() if t != w),
            key=lambda st: (-st[0], st[1]),
        )
        return [t for _, t in scored[:k]]

    union = sorted(set(nbrs(E1)) | set(nbrs(E2)))
    u1 = [cos(E1[w], E1[t]) if t in E1 else 0.0 for t in union]
    u2 = [cos(E2[w], E2[t]) if t in E2 else 0.0 for t in union]
    return cos(u1, u2)


class TestNeighborhoodSimilarity:
    def test_identical_spaces(self):
        rng = np.random.default_rng(2)
        space = random_space(rng, 10, 4)
        for w in space.tokens():
            assert neighborhood_similarity(space, space, w, k=3) == 1.0

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(3)
        for trial in range(20):
            n = int(rng.integers(6, 50))
            dim = int(rng.integers(2, 10))
            k = int(rng.integers(1, 5))
            E1 = random_space(rng, n, dim, "t1")
            E2 = random_space(rng, n, dim, "t2")
            w = f"w{rng.integers(n):03d}"
            got = neighborhood_similarity(E1, E2, w, k=k)
            assert abs(got - brute_force_ns(E1, E2, w, k)) < 1e-12

    def test_bounded(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            E1 = random_space(rng, 8, 3, "t1")
            E2 = random_space(rng, 8, 3, "t2")
            assert -1.0 <= neighborhood_similarity(E1, E2, "w000", k=2) <= 1.0

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        E1 = random_space(rng, 12, 4, "t1")
        E2 = random_space(rng, 12, 4, "t2")
        for w in ["w000", "w005"]:
            assert neighborhood_similarity(E1, E2, w, k=3) == pytest.approx(
                neighborhood_similarity(E2, E1, w, k=3), abs=1e-12
            )

    def test_uniform_scaling_invariance(self):
        rng = np.random.default_rng(6)
        E1 = random_space(rng, 10, 4, "t1")
        E2 = random_space(rng, 10, 4, "t2")
        scaled = EmbeddingSpace(4, "t1", {w: 3.0 * E1[w] for w in E1.tokens()})
        assert neighborhood_similarity(scaled, E2, "w001", k=3) == pytest.approx(
            neighborhood_similarity(E1, E2, "w001", k=3)
        )

    def test_missing_word(self):
        rng = np.random.default_rng(7)
        E1 = random_space(rng, 6, 3, "t1")
        E2 = random_space(rng, 6, 3, "t2")
        with pytest.raises(KeyError):
            neighborhood_similarity(E1, E2, "absent", k=2)

    def test_union_member_missing_from_other_space(self):
        rng = np.random.default_rng(8)
        E1 = random_space(rng, 10, 3, "t1")
        E2 = random_space(rng, 10, 3, "t2")
        del E2.vectors["w003"]
        w = "w000"
        got = neighborhood_similarity(E1, E2, w, k=4)
        assert -1.0 <= got <= 1.0


class TestTargetSimilarities:
    def test_identical_spaces_cs(self):
        rng = np.random.default_rng(9)
        space = random_space(rng, 6, 4)
        sset = target_similarities(space, space, ["w000"], measure="CS")
        assert sset.scores == {"w000": 1.0}

    def test_missing_targets_are_skipped_with_reason(self):
        rng = np.random.default_rng(10)
        E1 = random_space(rng, 6, 4, "t1")
        E2 = random_space(rng, 6, 4, "t2")
        del E2.vectors["w002"]
        sset = target_similarities(E1, E2, ["w000", "w001", "w002"], measure="CS")
        assert len(sset.scores) == 2
        assert sset.skipped == {"w002": "missing in t2"}

    def test_pc_matches_centering_oracle(self):
        rng = np.random.default_rng(11)
        E1 = random_space(rng, 6, 8, "t1")
        E2 = random_space(rng, 6, 8, "t2")
        sset = target_similarities(E1, E2, E1.tokens(), measure="PC")
        for w, score in sset.scores.items():
            u = E1[w] - E1[w].mean()
            v = E2[w] - E2[w].mean()
            assert score == pytest.approx(cosine(u, v), abs=1e-12)

    def test_all_skipped_is_error(self):
        rng = np.random.default_rng(12)
        E1 = random_space(rng, 4, 3, "t1")
        E2 = random_space(rng, 4, 3, "t2")
        with pytest.raises(ValueError, match="skipped"):
            target_similarities(E1, E2, ["absent"], measure="CS")

    def test_empty_targets_is_error(self):
        rng = np.random.default_rng(13)
        space = random_space(rng, 4, 3)
        with pytest.raises(ValueError):
            target_similarities(space, space, [], measure="CS")

    def test_unknown_measure(self):
        rng = np.random.default_rng(14)
        space = random_space(rng, 4, 3)
        with pytest.raises(ValueError):
            target_similarities(space, space, ["w000"], measure="XX")


def test_similarity_set_roundtrip(tmp_path):
    sset = SimilaritySet(
        scores={"cat": 0.75, "dog": -0.125},
        measure="PC",
        metadata={"backend": "tri"},
        skipped={"fox": "missing in t2"},
    )
    path = tmp_path / "sims.tsv"
    sset.save(path)
    loaded = SimilaritySet.load(path)
    assert loaded.scores == sset.scores
    assert loaded.measure == "PC"
    assert loaded.metadata["backend"] == "tri"
    assert loaded.skipped == sset.skipped


def test_embedding_space_roundtrip(tmp_path):
    rng = np.random.default_rng(15)
    space = random_space(rng, 5, 7, period="t2")
    path = tmp_path / "space.emb"
    space.save(path)
    loaded = EmbeddingSpace.load(path)
    assert loaded.dim == 7
    assert loaded.period_id == "t2"
    for w in space.tokens():
        assert np.array_equal(space[w], loaded[w])
