"""Lexical semantic change detection with temporal word embeddings.

Trains per-period word representations over a two-bin corpus (random
indexing, temporally referenced skip-gram, or Dice collocation
profiles), measures per-target cross-period similarity, and labels or
ranks targets by semantic change.
"""

from .corpus import (
    CorpusBin,
    MinCount,
    TimeBinnedCorpus,
    TopK,
    Vocabulary,
    build_vocabulary,
    stream_pairs,
    tokenize,
)
from .detect import (
    GaussianMixture1D,
    GmmModel,
    LabelSet,
    RankedList,
    assign_labels,
    fit_gmm_1d,
    rank_targets,
    select_model,
    threshold_labels,
    winsorize_labels,
)
from .embeddings import EmbeddingSpace
from .evaluation import GoldStandard, SynthSpec, accuracy, generate_synthetic, spearman
from .pipeline import PipelineConfig, run_pipeline
from .similarity import (
    SimilaritySet,
    cosine,
    neighborhood_similarity,
    pearson,
    target_similarities,
)

__all__ = [
    "CorpusBin",
    "EmbeddingSpace",
    "GaussianMixture1D",
    "GmmModel",
    "GoldStandard",
    "LabelSet",
    "MinCount",
    "PipelineConfig",
    "RankedList",
    "SimilaritySet",
    "SynthSpec",
    "TimeBinnedCorpus",
    "TopK",
    "Vocabulary",
    "accuracy",
    "assign_labels",
    "build_vocabulary",
    "cosine",
    "fit_gmm_1d",
    "generate_synthetic",
    "neighborhood_similarity",
    "pearson",
    "rank_targets",
    "run_pipeline",
    "select_model",
    "spearman",
    "stream_pairs",
    "target_similarities",
    "threshold_labels",
    "tokenize",
    "winsorize_labels",
]

__version__ = "0.1.0"
