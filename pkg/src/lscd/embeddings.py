"""Embedding spaces and their text serialization."""

from pathlib import Path

import numpy as np


class EmbeddingSpace:
    """Map from token to a dense d-dimensional vector for one time period.

    Tokens never seen in the period are simply absent, not zero-filled.
    Vectors are stored unnormalized; similarity measures normalize.
    """

    def __init__(self, dim: int, period_id: str, vectors: dict | None = None):
        self.dim = dim
        self.period_id = period_id
        self.vectors: dict[str, np.ndarray] = {}
        if vectors:
            for tok, vec in vectors.items():
                self[tok] = vec

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, token):
        return token in self.vectors

    def __getitem__(self, token) -> np.ndarray:
        return self.vectors[token]

    def __setitem__(self, token, vec):
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(
                f"vector for {token!r} has shape {vec.shape}, expected ({self.dim},)"
            )
        self.vectors[token] = vec

    def tokens(self) -> list[str]:
        return list(self.vectors)

    def as_matrix(self) -> tuple[list[str], np.ndarray]:
        """Tokens in lexicographic order plus the stacked vector matrix."""
        toks = sorted(self.vectors)
        if not toks:
            return toks, np.zeros((0, self.dim))
        return toks, np.stack([self.vectors[t] for t in toks])

    def save(self, path) -> None:
        """One line per token: `token<TAB>v1 v2 ... vd`, with a
        `#dim=<d> period=<id>` header."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"#dim={self.dim} period={self.period_id}\n")
            for tok in sorted(self.vectors):
                vals = " ".join(repr(float(x)) for x in self.vectors[tok])
                fh.write(f"{tok}\t{vals}\n")

    @classmethod
    def load(cls, path) -> "EmbeddingSpace":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith("#dim="):
            raise ValueError(f"{path}: missing embedding header")
        head = lines[0][1:].split()
        dim = int(head[0].split("=", 1)[1])
        period = head[1].split("=", 1)[1]
        space = cls(dim, period)
        for line in lines[1:]:
            if not line:
                continue
            tok, vals = line.split("\t", 1)
            space[tok] = np.array([float(x) for x in vals.split()])
        return space
