"""Per-period collocation profiles scored with the Dice coefficient."""

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import math

from .corpus import CorpusBin, Vocabulary, stream_pairs


def dice(f_wc: int, f_w: int, f_c: int) -> float:
    """Dice association: 2*f(w,c) / (f(w) + f(c))."""
    if not (0 <= f_wc <= f_w and f_wc <= f_c):
        raise ValueError(
            f"inconsistent counts: f_wc={f_wc}, f_w={f_w}, f_c={f_c}"
        )
    if f_w + f_c == 0:
        raise ValueError("f_w + f_c must be positive")
    return 2.0 * f_wc / (f_w + f_c)


@dataclass
class CollocationProfile:
    word: str
    period_id: str
    weights: dict[str, float] = field(default_factory=dict)

    def __bool__(self):
        return bool(self.weights)


def build_profile(
    bin: CorpusBin,
    vocab: Vocabulary,
    word: str,
    window: int,
    top_n: int = 100,
    min_dice: float | None = None,
) -> CollocationProfile:
    """Score the word's window co-occurrences with Dice and keep the
    top_n highest-scoring contexts (ties broken lexicographically).

    A word unseen in the bin yields an empty profile. Passing min_dice
    thresholds on the score instead of taking a fixed top_n.
    """
    if word not in vocab:
        raise KeyError(f"{word!r} not in vocabulary")
    wid = vocab.id_of(word)
    pair_counts: Counter = Counter()
    marginals: Counter = Counter()
    for t, c in stream_pairs(bin, vocab, window):
        marginals[t] += 1
        if t == wid:
            pair_counts[c] += 1
    profile = CollocationProfile(word, bin.period_id)
    if not pair_counts:
        return profile
    f_w = marginals[wid]
    scored = [
        (dice(n, f_w, marginals[c]), vocab.tokens[c]) for c, n in pair_counts.items()
    ]
    scored.sort(key=lambda sc: (-sc[0], sc[1]))
    if min_dice is not None:
        kept = [(s, t) for s, t in scored if s >= min_dice]
    else:
        kept = scored[:top_n]
    profile.weights = {t: s for s, t in kept}
    return profile


def profile_similarity(p1: CollocationProfile, p2: CollocationProfile) -> float:
    """Cosine over the union support of the two weighted profiles;
    0 if either profile is empty."""
    if not p1 or not p2:
        return 0.0
    dot = sum(w * p2.weights.get(ctx, 0.0) for ctx, w in p1.weights.items())
    n1 = math.sqrt(sum(w * w for w in p1.weights.values()))
    n2 = math.sqrt(sum(w * w for w in p2.weights.values()))
    return dot / (n1 * n2)


def save_profiles(profiles, path) -> None:
    """`word<TAB>period<TAB>context:score,context:score,...` per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in profiles:
            body = ",".join(f"{c}:{repr(s)}" for c, s in sorted(p.weights.items()))
            fh.write(f"{p.word}\t{p.period_id}\t{body}\n")


def load_profiles(path) -> list[CollocationProfile]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        word, period, body = line.split("\t")
        weights = {}
        if body:
            for item in body.split(","):
                ctx, score = item.rsplit(":", 1)
                weights[ctx] = float(score)
        out.append(CollocationProfile(word, period, weights))
    return out
