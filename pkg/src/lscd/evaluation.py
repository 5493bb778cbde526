"""Task metrics and a synthetic diachronic corpus generator used as a
ground-truth oracle in end-to-end tests."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .corpus import CorpusBin, TimeBinnedCorpus
from .detect import LabelSet, RankedList, format_score


@dataclass
class GoldStandard:
    binary: dict[str, int] = field(default_factory=dict)
    graded: dict[str, float] = field(default_factory=dict)

    def save(self, binary_path=None, graded_path=None) -> None:
        if binary_path is not None:
            with open(binary_path, "w", encoding="utf-8") as fh:
                for w in sorted(self.binary):
                    fh.write(f"{w}\t{self.binary[w]}\n")
        if graded_path is not None:
            with open(graded_path, "w", encoding="utf-8") as fh:
                for w in sorted(self.graded):
                    fh.write(f"{w}\t{format_score(self.graded[w])}\n")

    @classmethod
    def load(cls, binary_path=None, graded_path=None) -> "GoldStandard":
        gold = cls()
        if binary_path is not None:
            for line in Path(binary_path).read_text(encoding="utf-8").splitlines():
                if line:
                    w, lab = line.split("\t")
                    gold.binary[w] = int(lab)
        if graded_path is not None:
            for line in Path(graded_path).read_text(encoding="utf-8").splitlines():
                if line:
                    w, s = line.split("\t")
                    gold.graded[w] = float(s)
        return gold


def accuracy(pred: LabelSet, gold: GoldStandard) -> float:
    """Fraction of gold targets whose predicted label matches exactly."""
    missing = sorted(set(gold.binary) - set(pred.labels))
    if missing:
        raise ValueError(f"predictions missing gold targets: {missing}")
    if not gold.binary:
        raise ValueError("empty gold standard")
    hits = sum(pred.labels[w] == lab for w, lab in gold.binary.items())
    return hits / len(gold.binary)


def spearman(pred: RankedList, gold: GoldStandard) -> float:
    """Spearman rho between predicted distances and gold graded scores,
    with average ranks for ties."""
    pred_scores = dict(pred.entries)
    missing = sorted(set(gold.graded) - set(pred_scores))
    if missing:
        raise ValueError(f"ranking missing gold targets: {missing}")
    words = sorted(gold.graded)
    if len(words) < 2:
        raise ValueError("need at least 2 targets")
    a = rankdata([pred_scores[w] for w in words], method="average")
    b = rankdata([gold.graded[w] for w in words], method="average")
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a * a).sum() * (b * b).sum())
    if denom == 0.0:
        raise ValueError("undefined correlation: constant ranking")
    return float((a * b).sum() / denom)


@dataclass(frozen=True)
class SynthSpec:
    vocab_size: int = 500
    n_targets: int = 40
    n_changed: int = 10
    sentences_per_bin: int = 20000
    change_strength: float = 0.9
    rng_seed: int = 0
    community_size: int = 8
    sentence_length: int = 8

    def __post_init__(self):
        if not 0 <= self.n_changed <= self.n_targets <= self.vocab_size:
            raise ValueError("need n_changed <= n_targets <= vocab_size")
        if self.n_changed and self.change_strength < 0.05:
            raise ValueError(
                "change_strength below 0.05 is indistinguishable from stable"
            )


def generate_synthetic(spec: SynthSpec) -> tuple[TimeBinnedCorpus, GoldStandard]:
    """Build a two-bin corpus with known change structure.

    Every target owns a community of context words; in the second bin a
    changed target draws each context word from a disjoint second
    community with probability change_strength. Stable targets keep
    their community in both bins, so change strength is monotonically
    related to cross-period dissimilarity.
    """
    rng = np.random.default_rng(spec.rng_seed)
    targets = [f"tgt{i:03d}" for i in range(spec.n_targets)]
    n_ctx = spec.vocab_size - spec.n_targets
    need = spec.community_size * (spec.n_targets + spec.n_changed)
    if n_ctx < need:
        raise ValueError(
            f"vocab_size too small: need {need} context words, have {n_ctx}"
        )
    ctx_words = [f"ctx{i:04d}" for i in range(n_ctx)]
    communities_a = {}
    communities_b = {}
    pos = 0
    for i, w in enumerate(targets):
        communities_a[w] = ctx_words[pos : pos + spec.community_size]
        pos += spec.community_size
        if i < spec.n_changed:
            communities_b[w] = ctx_words[pos : pos + spec.community_size]
            pos += spec.community_size
    background = ctx_words[pos:] or ctx_words

    def make_bin(period_id: str, second: bool) -> CorpusBin:
        sentences = []
        for _ in range(spec.sentences_per_bin):
            w = targets[rng.integers(spec.n_targets)]
            sent = [w]
            for _ in range(spec.sentence_length - 1):
                if rng.random() < 0.25:
                    sent.append(background[rng.integers(len(background))])
                    continue
                comm = communities_a[w]
                if (
                    second
                    and w in communities_b
                    and rng.random() < spec.change_strength
                ):
                    comm = communities_b[w]
                sent.append(comm[rng.integers(len(comm))])
            rng.shuffle(sent)
            sentences.append(tuple(sent))
        return CorpusBin(period_id, tuple(sentences))

    corpus = TimeBinnedCorpus((make_bin("t1", False), make_bin("t2", True)))
    gold = GoldStandard()
    for i, w in enumerate(targets):
        changed = i < spec.n_changed
        gold.binary[w] = int(changed)
        gold.graded[w] = spec.change_strength if changed else 0.0
    return corpus, gold
