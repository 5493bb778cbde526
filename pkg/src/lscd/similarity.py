"""Cross-period similarity measures and the per-target similarity set."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingSpace

MEASURES = ("CS", "PC", "NS")


def cosine(u, v) -> float:
    """Cosine of the angle between u and v, clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("undefined cosine: zero vector")
    if np.array_equal(u, v):
        return 1.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def pearson(u, v) -> float:
    """Pearson correlation, i.e. cosine of the mean-centered vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.size < 2:
        raise ValueError("pearson needs two equal-length vectors of size >= 2")
    uc = u - u.mean()
    vc = v - v.mean()
    if not uc.any() or not vc.any():
        raise ValueError("undefined correlation: constant vector")
    return cosine(uc, vc)


def _nearest_neighbors(space: EmbeddingSpace, word: str, k: int) -> list[str]:
    """k nearest tokens to `word` by cosine, excluding the word itself.

    Ties at rank k are resolved by keeping the lexicographically
    smallest tokens, so the result is deterministic.
    """
    toks, mat = space.as_matrix()
    if len(toks) - 1 < k:
        raise ValueError(f"space has fewer than k={k} tokens besides {word!r}")
    wvec = space[word]
    norms = np.linalg.norm(mat, axis=1)
    wnorm = np.linalg.norm(wvec)
    if wnorm == 0.0 or (norms == 0.0).any():
        raise ValueError("undefined cosine: zero vector")
    sims = np.clip(mat @ wvec / (norms * wnorm), -1.0, 1.0)
    ranked = sorted(
        ((float(s), t) for s, t in zip(sims, toks) if t != word),
        key=lambda st: (-st[0], st[1]),
    )
    return [t for _, t in ranked[:k]]


def neighborhood_similarity(
    E1: EmbeddingSpace, E2: EmbeddingSpace, w: str, k: int = 25
) -> float:
    """Second-order similarity over the union of the word's k-nearest
    neighbor sets in the two spaces.

    The union is ordered lexicographically; a union member missing from
    one space contributes component 0 on that side.
    """
    for space in (E1, E2):
        if w not in space:
            raise KeyError(f"{w!r} missing from space {space.period_id!r}")
    union = sorted(
        set(_nearest_neighbors(E1, w, k)) | set(_nearest_neighbors(E2, w, k))
    )
    u1 = np.array(
        [cosine(E1[w], E1[t]) if t in E1 else 0.0 for t in union]
    )
    u2 = np.array(
        [cosine(E2[w], E2[t]) if t in E2 else 0.0 for t in union]
    )
    return cosine(u1, u2)


@dataclass
class SimilaritySet:
    """The per-target cross-period similarity scores."""

    scores: dict[str, float] = field(default_factory=dict)
    measure: str = "CS"
    metadata: dict = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.scores)

    def values(self) -> np.ndarray:
        return np.array(list(self.scores.values()))

    def save(self, path) -> None:
        """`target<TAB>score` lines; headers record measure and metadata,
        skipped targets become `#skip target reason` lines."""
        with open(path, "w", encoding="utf-8") as fh:
            meta = " ".join(f"{k}={v}" for k, v in sorted(self.metadata.items()))
            fh.write(f"#measure={self.measure} {meta}".rstrip() + "\n")
            for tgt, reason in sorted(self.skipped.items()):
                fh.write(f"#skip {tgt} {reason}\n")
            for tgt in sorted(self.scores):
                fh.write(f"{tgt}\t{repr(self.scores[tgt])}\n")

    @classmethod
    def load(cls, path) -> "SimilaritySet":
        sset = cls()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            if line.startswith("#skip "):
                _, tgt, reason = line.split(" ", 2)
                sset.skipped[tgt] = reason
            elif line.startswith("#"):
                fields = line[1:].split()
                for f in fields:
                    key, _, val = f.partition("=")
                    if key == "measure":
                        sset.measure = val
                    else:
                        sset.metadata[key] = val
            else:
                tgt, score = line.split("\t")
                sset.scores[tgt] = float(score)
        return sset


def target_similarities(
    E1: EmbeddingSpace,
    E2: EmbeddingSpace,
    targets,
    measure: str = "CS",
    k: int = 25,
    metadata: dict | None = None,
) -> SimilaritySet:
    """Apply the chosen measure per target; targets missing from either
    space are recorded in the skipped list rather than dropped silently."""
    targets = list(targets)
    if not targets:
        raise ValueError("no targets given")
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    sset = SimilaritySet(measure=measure, metadata=dict(metadata or {}))
    for w in targets:
        missing = [s.period_id for s in (E1, E2) if w not in s]
        if missing:
            sset.skipped[w] = "missing in " + ",".join(missing)
            continue
        if measure == "CS":
            sset.scores[w] = cosine(E1[w], E2[w])
        elif measure == "PC":
            sset.scores[w] = pearson(E1[w], E2[w])
        else:
            sset.scores[w] = neighborhood_similarity(E1, E2, w, k=k)
    if not sset.scores:
        raise ValueError("all targets were skipped")
    return sset
