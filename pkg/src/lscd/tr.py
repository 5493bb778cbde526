"""Temporal Referencing: skip-gram with negative sampling where target
occurrences are tagged with their time period while context vectors stay
shared, so per-period target vectors come out implicitly aligned."""

import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np
from numba import njit

from .corpus import MinCount, TimeBinnedCorpus, build_vocabulary
from .embeddings import EmbeddingSpace

TAG_SEP = "#"  # whitespace tokenization can never split this off


def tag(word: str, period_id: str) -> str:
    return f"{word}{TAG_SEP}{period_id}"


@dataclass(frozen=True)
class SgnsParams:
    dim: int = 100
    window: int = 5
    negatives: int = 20
    min_count: int = 10
    epochs: int = 8
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    subsample_threshold: float | None = None
    rng_seed: int = 1


@dataclass(frozen=True)
class ReferencedCorpus:
    """A time-binned corpus whose target occurrences are split per period.

    Target positions train under the tagged identity `word#period`;
    context positions always keep the plain form.
    """

    corpus: TimeBinnedCorpus
    targets: frozenset[str]

    @property
    def period_ids(self):
        return self.corpus.period_ids


def reference_targets(corpus: TimeBinnedCorpus, targets) -> ReferencedCorpus:
    targets = frozenset(targets)
    if not targets:
        raise ValueError("targets must be nonempty")
    seen = set()
    for b in corpus.bins:
        for sent in b.sentences:
            seen.update(t for t in sent if t in targets)
    for t in sorted(targets - seen):
        warnings.warn(f"target {t!r} occurs in no time bin", stacklevel=2)
    return ReferencedCorpus(corpus, targets)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def sgns_pair_loss(v, u_pos, u_negs) -> float:
    """Loss of one (target, context, negatives) triple:
    -log sigma(u_c . v) - sum_k log sigma(-u_k . v)."""
    v = np.asarray(v, dtype=np.float64)
    loss = -np.log(_sigmoid(np.dot(u_pos, v)))
    for u in np.atleast_2d(u_negs):
        loss -= np.log(_sigmoid(-np.dot(u, v)))
    return float(loss)


def sgns_pair_grads(v, u_pos, u_negs):
    """Analytic gradients of sgns_pair_loss w.r.t. (v, u_pos, u_negs)."""
    v = np.asarray(v, dtype=np.float64)
    u_pos = np.asarray(u_pos, dtype=np.float64)
    u_negs = np.atleast_2d(np.asarray(u_negs, dtype=np.float64))
    g_pos = _sigmoid(np.dot(u_pos, v)) - 1.0
    gv = g_pos * u_pos
    gu_pos = g_pos * v
    gu_negs = np.empty_like(u_negs)
    for k in range(u_negs.shape[0]):
        g = _sigmoid(np.dot(u_negs[k], v))
        gv = gv + g * u_negs[k]
        gu_negs[k] = g * v
    return gv, gu_pos, gu_negs


@njit(cache=True)
def _rand_uniform(state):
    # xorshift64; state is a length-1 uint64 array mutated in place
    s = state[0]
    s ^= s << np.uint64(13)
    s ^= s >> np.uint64(7)
    s ^= s << np.uint64(17)
    state[0] = s
    return (s >> np.uint64(11)) / 9007199254740992.0  # 2**53


@njit(cache=True)
def _sample_negative(cdf, state):
    u = _rand_uniform(state)
    lo, hi = 0, len(cdf) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] < u:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _train_pairs(tgt, ctx, pairs, cdf, negatives, lr0, lr_min, done, total, state):
    """One pass of SGD over (target, context) pairs; returns summed loss.

    Learning rate decays linearly with overall training progress; racy
    parallel updates are deliberately not used, so results are
    reproducible for a fixed rng state.
    """
    dim = tgt.shape[1]
    loss = 0.0
    grad_v = np.empty(dim, dtype=np.float32)
    for i in range(pairs.shape[0]):
        progress = (done + i) / total
        lr = lr0 * (1.0 - progress)
        if lr < lr_min:
            lr = lr_min
        t = pairs[i, 0]
        c = pairs[i, 1]
        v = tgt[t]
        # positive sample
        dot = 0.0
        for d in range(dim):
            dot += v[d] * ctx[c, d]
        sig = 1.0 / (1.0 + np.exp(-dot))
        loss -= np.log(max(sig, 1e-12))
        g = sig - 1.0
        for d in range(dim):
            grad_v[d] = g * ctx[c, d]
            ctx[c, d] -= lr * g * v[d]
        # negative samples
        for _ in range(negatives):
            neg = _sample_negative(cdf, state)
            dot = 0.0
            for d in range(dim):
                dot += v[d] * ctx[neg, d]
            sig = 1.0 / (1.0 + np.exp(-dot))
            loss -= np.log(max(1.0 - sig, 1e-12))
            g = sig
            for d in range(dim):
                grad_v[d] += g * ctx[neg, d]
                ctx[neg, d] -= lr * g * v[d]
        for d in range(dim):
            tgt[t, d] -= lr * grad_v[d]
    return loss


class _SgnsVocab:
    """Target- and context-side vocabularies for a referenced corpus."""

    def __init__(self, ref: ReferencedCorpus, min_count: int):
        plain = build_vocabulary(ref.corpus, MinCount(min_count))
        self.plain = plain
        # context side: plain forms only
        self.ctx_tokens = list(plain.tokens)
        self.ctx_ids = dict(plain.token_to_id)
        # target side: plain non-targets plus per-period tagged targets
        self.tgt_tokens = [t for t in plain.tokens if t not in ref.targets]
        for w in sorted(ref.targets):
            if w in plain:
                for pid in ref.period_ids:
                    self.tgt_tokens.append(tag(w, pid))
        self.tgt_ids = {t: i for i, t in enumerate(self.tgt_tokens)}


def _sentence_pairs(ref: ReferencedCorpus, vocab: _SgnsVocab, params: SgnsParams):
    """Pair arrays per sentence, target side tagged, context side plain."""
    rng = np.random.default_rng(params.rng_seed + 1)
    keep_prob = None
    if params.subsample_threshold:
        total = sum(vocab.plain.counts)
        keep_prob = {
            tok: min(1.0, np.sqrt(params.subsample_threshold * total / cnt))
            for tok, cnt in zip(vocab.plain.tokens, vocab.plain.counts)
        }
    out = []
    for b in ref.corpus.bins:
        for sent in b.sentences:
            kept = [
                tok
                for tok in sent
                if tok in vocab.plain
                and (keep_prob is None or rng.random() < keep_prob[tok])
            ]
            t_ids = [
                vocab.tgt_ids[tag(tok, b.period_id) if tok in ref.targets else tok]
                for tok in kept
            ]
            c_ids = [vocab.ctx_ids[tok] for tok in kept]
            n = len(kept)
            pairs = []
            for i in range(n):
                lo = max(0, i - params.window)
                hi = min(n, i + params.window + 1)
                for j in range(lo, hi):
                    if j != i:
                        pairs.append((t_ids[i], c_ids[j]))
            if pairs:
                out.append(np.array(pairs, dtype=np.int64))
    return out


def train_sgns(
    ref: ReferencedCorpus, params: SgnsParams, loss_callback=None
) -> tuple[EmbeddingSpace, EmbeddingSpace]:
    """Train SGNS over the referenced corpus.

    Negatives are drawn from the plain-form context unigram distribution
    raised to the 3/4 power; sentences are reshuffled each epoch.
    Returns (target_space, context_space).
    """
    vocab = _SgnsVocab(ref, params.min_count)
    sent_pairs = _sentence_pairs(ref, vocab, params)
    if not sent_pairs:
        raise ValueError("empty referenced corpus: no trainable pairs")

    freqs = np.array(vocab.plain.counts, dtype=np.float64) ** 0.75
    cdf = np.cumsum(freqs / freqs.sum())
    cdf[-1] = 1.0

    rng = np.random.default_rng(params.rng_seed)
    tgt = (
        rng.random((len(vocab.tgt_tokens), params.dim), dtype=np.float32) - 0.5
    ) / params.dim
    ctx = np.zeros((len(vocab.ctx_tokens), params.dim), dtype=np.float32)

    n_pairs = sum(len(p) for p in sent_pairs)
    total = n_pairs * params.epochs
    state = np.array([rng.integers(1, 2**63)], dtype=np.uint64)
    done = 0
    for epoch in range(params.epochs):
        order = rng.permutation(len(sent_pairs))
        pairs = np.concatenate([sent_pairs[i] for i in order])
        loss = _train_pairs(
            tgt,
            ctx,
            pairs,
            cdf,
            params.negatives,
            params.learning_rate,
            params.min_learning_rate,
            done,
            total,
            state,
        )
        done += len(pairs)
        if loss_callback is not None:
            loss_callback(epoch, loss / len(pairs))

    target_space = EmbeddingSpace(params.dim, "all")
    for tok, i in vocab.tgt_ids.items():
        target_space[tok] = tgt[i].astype(np.float64)
    context_space = EmbeddingSpace(params.dim, "all")
    for tok, i in vocab.ctx_ids.items():
        context_space[tok] = ctx[i].astype(np.float64)
    return target_space, context_space


def extract_temporal_pair(target_space: EmbeddingSpace, w: str, periods=("t1", "t2")):
    """The target's tagged vectors in bin order."""
    vecs = []
    for pid in periods:
        tagged = tag(w, pid)
        if tagged not in target_space:
            raise KeyError(f"target unseen in period: {tagged!r}")
        vecs.append(target_space[tagged])
    return tuple(vecs)


def tagged_occurrences(ref: ReferencedCorpus) -> Counter:
    """Occurrence count per tagged target identity (for conservation checks)."""
    counts: Counter = Counter()
    for b in ref.corpus.bins:
        for sent in b.sentences:
            for tok in sent:
                if tok in ref.targets:
                    counts[tag(tok, b.period_id)] += 1
    return counts
