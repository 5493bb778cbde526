"""Corpus ingestion: tokenization, time bins, vocabularies, window pairs."""

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator


def tokenize(line: str) -> list[str]:
    """Split a line on runs of whitespace. No lowercasing, no stripping
    of punctuation; an empty or all-whitespace line yields []."""
    return line.split()


@dataclass(frozen=True)
class CorpusBin:
    """All sentences of one time period. One input line = one sentence."""

    period_id: str
    sentences: tuple[tuple[str, ...], ...]

    @classmethod
    def from_lines(cls, period_id: str, lines) -> "CorpusBin":
        return cls(period_id, tuple(tuple(tokenize(ln)) for ln in lines))

    @classmethod
    def from_path(cls, period_id: str, path) -> "CorpusBin":
        """Read a plain-text file, or every *.txt file in a directory."""
        path = Path(path)
        if path.is_dir():
            lines = []
            for f in sorted(path.glob("*.txt")):
                lines.extend(f.read_text(encoding="utf-8").splitlines())
        else:
            lines = path.read_text(encoding="utf-8").splitlines()
        return cls.from_lines(period_id, lines)

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True)
class TimeBinnedCorpus:
    bins: tuple[CorpusBin, ...]

    def __post_init__(self):
        ids = [b.period_id for b in self.bins]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate period ids: {ids}")

    @property
    def period_ids(self) -> list[str]:
        return [b.period_id for b in self.bins]

    def bin(self, period_id: str) -> CorpusBin:
        for b in self.bins:
            if b.period_id == period_id:
                return b
        raise KeyError(period_id)


@dataclass(frozen=True)
class TopK:
    k: int


@dataclass(frozen=True)
class MinCount:
    n: int


@dataclass
class Vocabulary:
    """Dense token -> id map with frequency counts.

    Ids are 0..len-1, assigned by descending count with lexicographic
    tie-breaking so that builds are reproducible.
    """

    token_to_id: dict[str, int] = field(default_factory=dict)
    counts: list[int] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id[token]

    def get(self, token: str, default=None):
        return self.token_to_id.get(token, default)

    def count_of(self, token: str) -> int:
        return self.counts[self.token_to_id[token]]


def build_vocabulary(corpus: TimeBinnedCorpus, policy) -> Vocabulary:
    """Count tokens pooled over all bins and apply a selection policy.

    TopK(k) keeps the min(k, #distinct) most frequent tokens; MinCount(n)
    keeps tokens occurring at least n times. Ties in TopK are broken
    lexicographically on the token string.
    """
    if not corpus.bins:
        raise ValueError("empty corpus")
    counter: Counter[str] = Counter()
    for b in corpus.bins:
        for sent in b.sentences:
            counter.update(sent)
    ordered = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    if isinstance(policy, TopK):
        kept = ordered[: policy.k]
    elif isinstance(policy, MinCount):
        kept = [(t, c) for t, c in ordered if c >= policy.n]
    else:
        raise TypeError(f"unknown vocabulary policy: {policy!r}")
    vocab = Vocabulary()
    for i, (tok, cnt) in enumerate(kept):
        vocab.token_to_id[tok] = i
        vocab.tokens.append(tok)
        vocab.counts.append(cnt)
    return vocab


def stream_pairs(
    bin: CorpusBin, vocab: Vocabulary, window: int
) -> Iterator[tuple[int, int]]:
    """Yield (target_id, context_id) pairs within a symmetric window.

    Out-of-vocabulary tokens keep their positions (they block nothing,
    but are never emitted on either side); windows never cross sentences.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    get = vocab.token_to_id.get
    for sent in bin.sentences:
        ids = [get(tok) for tok in sent]
        n = len(ids)
        for i, tid in enumerate(ids):
            if tid is None:
                continue
            lo = max(0, i - window)
            hi = min(n, i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                cid = ids[j]
                if cid is not None:
                    yield tid, cid


def load_manifest(manifest: dict[str, str]) -> TimeBinnedCorpus:
    """Build a corpus from {period_id: path} in insertion order."""
    bins = tuple(
        CorpusBin.from_path(pid, path) for pid, path in manifest.items()
    )
    return TimeBinnedCorpus(bins)


def read_targets(path) -> list[str]:
    """Targets file: one target word per line; blank lines ignored."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            out.append(line)
    return out
