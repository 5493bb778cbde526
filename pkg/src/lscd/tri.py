"""Temporal Random Indexing.

Per-period spaces are built by accumulating, for every (target, context)
window pair, the context word's sparse ternary index vector into the
target's dense vector. Because every time bin reuses the same index
vector table, the resulting spaces are implicitly aligned.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import CorpusBin, Vocabulary, stream_pairs
from .embeddings import EmbeddingSpace


@dataclass(frozen=True)
class TriOptions:
    init_from_previous: bool = False
    positive_only: bool = False
    ppmi_weights: bool = False


class IndexVectorTable:
    """One sparse ternary index vector in {-1,0,+1}^dim per vocabulary id.

    Each vector has exactly `seeds_per_vector` nonzero entries, as close
    to half +1 / half -1 as parity allows (the extra one is +1).
    Generated once per run and shared by every time bin.
    """

    def __init__(self, vocab: Vocabulary, dim: int, seeds_per_vector: int, rng_seed: int):
        if not 0 < seeds_per_vector <= dim:
            raise ValueError(
                f"seeds_per_vector must be in (0, dim]; got {seeds_per_vector} with dim={dim}"
            )
        self.vocab = vocab
        self.dim = dim
        self.seeds_per_vector = seeds_per_vector
        self.rng_seed = rng_seed
        rng = np.random.default_rng(rng_seed)
        n_pos = (seeds_per_vector + 1) // 2
        signs = np.ones(seeds_per_vector, dtype=np.int8)
        signs[n_pos:] = -1
        self.positions = np.empty((len(vocab), seeds_per_vector), dtype=np.int64)
        self.signs = np.tile(signs, (len(vocab), 1))
        for i in range(len(vocab)):
            self.positions[i] = rng.choice(dim, size=seeds_per_vector, replace=False)

    def __len__(self):
        return len(self.positions)

    def dense(self, token_id: int, positive_only: bool = False) -> np.ndarray:
        vec = np.zeros(self.dim)
        signs = self.signs[token_id]
        if positive_only:
            signs = np.maximum(signs, 0)
        vec[self.positions[token_id]] = signs
        return vec


def make_index_vectors(
    vocab: Vocabulary, dim: int, seeds: int, rng_seed: int
) -> IndexVectorTable:
    return IndexVectorTable(vocab, dim, seeds, rng_seed)


def _ppmi_weights(pair_counts: Counter) -> dict:
    """PPMI per pair, probabilities taken from this bin's pair counts only."""
    total = sum(pair_counts.values())
    left = Counter()
    right = Counter()
    for (t, c), n in pair_counts.items():
        left[t] += n
        right[c] += n
    weights = {}
    for (t, c), n in pair_counts.items():
        pmi = math.log(n * total / (left[t] * right[c]))
        weights[(t, c)] = max(0.0, pmi)
    return weights


def train_tri(
    bin: CorpusBin,
    table: IndexVectorTable,
    options: TriOptions,
    window: int,
    prev: EmbeddingSpace | None = None,
) -> EmbeddingSpace:
    """Accumulate index vectors of context words into target vectors.

    Weight per pair is 1, or the pair's PPMI when options.ppmi_weights.
    With init_from_previous, accumulation starts from the previous
    period's vectors rather than zeros.
    """
    if options.init_from_previous and prev is not None and prev.dim != table.dim:
        raise ValueError(
            f"previous space dim {prev.dim} does not match table dim {table.dim}"
        )
    vocab = table.vocab
    pair_counts = Counter(stream_pairs(bin, vocab, window))
    if options.ppmi_weights:
        weights = _ppmi_weights(pair_counts)
    else:
        weights = None

    space = EmbeddingSpace(table.dim, bin.period_id)
    acc: dict[int, np.ndarray] = {}
    if options.init_from_previous and prev is not None:
        for tok, vec in prev.vectors.items():
            acc[vocab.id_of(tok)] = vec.copy()
    for (t, c), n in pair_counts.items():
        w = n * (weights[(t, c)] if weights else 1.0)
        vec = acc.get(t)
        if vec is None:
            vec = acc[t] = np.zeros(table.dim)
        signs = table.signs[c]
        if options.positive_only:
            signs = np.maximum(signs, 0)
        np.add.at(vec, table.positions[c], w * signs)
    for t, vec in acc.items():
        space[vocab.tokens[t]] = vec
    return space


def train_tri_all(
    corpus, table: IndexVectorTable, options: TriOptions, window: int
) -> list[EmbeddingSpace]:
    """Train every bin in order, chaining previous spaces when requested."""
    spaces: list[EmbeddingSpace] = []
    prev = None
    for b in corpus.bins:
        space = train_tri(b, table, options, window, prev=prev)
        spaces.append(space)
        prev = space
    return spaces
