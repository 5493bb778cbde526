"""Change detection: two-component 1-D Gaussian mixture clustering with
label inversion, threshold baselines, and graded ranking."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator

from .similarity import SimilaritySet

VARIANCE_FLOOR = 1e-6


def format_score(x: float) -> str:
    """Full-precision plain decimal (never scientific notation), as the
    answer-file grammar requires."""
    return np.format_float_positional(x, unique=True, trim="0")

STRATEGIES = ("GMM", "Mean", "MeanMinusSigma", "MeanPlusSigma", "Winsorizing")


@dataclass
class GmmModel:
    """Fitted two-component 1-D Gaussian mixture."""

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    responsibilities: np.ndarray
    log_likelihood: float
    loglik_history: list[float]
    converged: bool


def _log_density(x, weights, means, variances):
    """Per-point log of the mixture density, shape (n,)."""
    x = np.asarray(x, dtype=np.float64).reshape(-1, 1)
    log_norm = -0.5 * np.log(2.0 * np.pi * variances)
    log_comp = log_norm - 0.5 * (x - means) ** 2 / variances
    return logsumexp(log_comp + np.log(weights), axis=1)


def log_likelihood(model: GmmModel, scores) -> float:
    """Sum over points of the log mixture density under the model."""
    x = _scores_array(scores)
    return float(_log_density(x, model.weights, model.means, model.variances).sum())


def _scores_array(scores) -> np.ndarray:
    if isinstance(scores, SimilaritySet):
        return scores.values()
    return np.asarray(scores, dtype=np.float64).ravel()


def _em(x, means0, tol, max_iter):
    """Run EM from a fixed starting point; returns a GmmModel."""
    n = x.shape[0]
    weights = np.array([0.5, 0.5])
    means = means0.copy()
    variances = np.full(2, max(x.var(), VARIANCE_FLOOR))
    history = []
    prev_ll = -np.inf
    converged = False
    resp = np.full((n, 2), 0.5)
    for _ in range(max_iter):
        # E step
        log_norm = -0.5 * np.log(2.0 * np.pi * variances)
        log_comp = log_norm - 0.5 * (x[:, None] - means) ** 2 / variances
        log_joint = log_comp + np.log(weights)
        log_total = logsumexp(log_joint, axis=1)
        resp = np.exp(log_joint - log_total[:, None])
        ll = float(log_total.sum())
        history.append(ll)
        if ll - prev_ll < tol:
            converged = True
            break
        prev_ll = ll
        # M step
        nk = resp.sum(axis=0)
        weights = nk / n
        means = resp.T @ x / nk
        variances = np.maximum(
            (resp * (x[:, None] - means) ** 2).sum(axis=0) / nk, VARIANCE_FLOOR
        )
    return GmmModel(
        weights=weights,
        means=means,
        variances=variances,
        responsibilities=resp,
        log_likelihood=history[-1],
        loglik_history=history,
        converged=converged,
    )


class GaussianMixture1D(BaseEstimator):
    """Two-component 1-D Gaussian mixture fitted by EM.

    Deterministic initialization: component means at the 25th/75th
    percentiles of the data, equal weights, pooled variance; further
    restarts jitter the means. Each component keeps its own variance,
    floored at 1e-6. predict() labels points 1 when they belong to the
    lower-mean (changed) component.
    """

    def __init__(self, tol=1e-8, max_iter=200, n_restarts=5, random_state=0):
        self.tol = tol
        self.max_iter = max_iter
        self.n_restarts = n_restarts
        self.random_state = random_state

    def fit(self, X, y=None):
        x = np.asarray(X, dtype=np.float64).ravel()
        if x.size < 4:
            raise ValueError("insufficient targets: need at least 4 scores")
        if np.ptp(x) == 0.0:
            raise ValueError("degenerate similarity set: all scores equal")
        base_means = np.percentile(x, [25.0, 75.0])
        scale = x.std()
        rng = np.random.default_rng(self.random_state)
        best = None
        for r in range(self.n_restarts):
            means0 = base_means.copy()
            if r > 0:
                means0 = means0 + rng.normal(scale=0.25 * scale, size=2)
            model = _em(x, means0, self.tol, self.max_iter)
            if best is None or model.log_likelihood > best.log_likelihood:
                best = model
        self.model_ = best
        self.weights_ = best.weights
        self.means_ = best.means
        self.variances_ = best.variances
        return self

    def predict(self, X):
        """1 for points assigned to the low-mean component, else 0.

        Equal responsibilities resolve to 0 (stable), the conservative
        default."""
        if not hasattr(self, "model_"):
            raise ValueError("estimator is not fitted")
        x = np.asarray(X, dtype=np.float64).ravel()
        ll = -0.5 * np.log(2.0 * np.pi * self.variances_) - 0.5 * (
            x[:, None] - self.means_
        ) ** 2 / self.variances_
        log_joint = ll + np.log(self.weights_)
        resp = np.exp(log_joint - logsumexp(log_joint, axis=1)[:, None])
        stable = int(np.argmax(self.means_))
        return (resp[:, stable] < 0.5).astype(int)

    def score(self, X, y=None):
        """Total log-likelihood of X under the fitted mixture."""
        if not hasattr(self, "model_"):
            raise ValueError("estimator is not fitted")
        x = np.asarray(X, dtype=np.float64).ravel()
        return float(_log_density(x, self.weights_, self.means_, self.variances_).sum())


def fit_gmm_1d(
    S, tol: float = 1e-8, max_iter: int = 200, restarts: int = 5, random_state: int = 0
) -> GmmModel:
    """Fit the two-component mixture to a similarity set; the best of
    `restarts` EM runs by final log-likelihood wins."""
    est = GaussianMixture1D(
        tol=tol, max_iter=max_iter, n_restarts=restarts, random_state=random_state
    )
    est.fit(_scores_array(S))
    return est.model_


@dataclass
class LabelSet:
    labels: dict[str, int] = field(default_factory=dict)
    strategy: str = "GMM"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for w in sorted(self.labels):
                fh.write(f"{w}\t{self.labels[w]}\n")

    @classmethod
    def load(cls, path, strategy: str = "GMM") -> "LabelSet":
        labels = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            w, lab = line.split("\t")
            labels[w] = int(lab)
        return cls(labels, strategy)


def assign_labels(
    S: SimilaritySet, initial_labeling=(0, 1), model: GmmModel | None = None, **fit_kwargs
) -> LabelSet:
    """Cluster the similarity set with the two-component mixture and
    label each target by maximum responsibility, then flip all labels
    if the "stable" component has the lower mean.

    `initial_labeling` maps labels (0, 1) to component indices; the
    flip rule makes the output invariant to it. A prefitted model may
    be passed to skip refitting.
    """
    if model is None:
        model = fit_gmm_1d(S, **fit_kwargs)
    comp0, comp1 = initial_labeling
    mu0, mu1 = model.means[comp0], model.means[comp1]
    stable_comp = comp1 if mu0 < mu1 else comp0
    labels = {}
    for i, w in enumerate(S.scores):
        r_stable = model.responsibilities[i, stable_comp]
        labels[w] = 0 if r_stable >= 0.5 else 1
    return LabelSet(labels, "GMM")


def threshold_labels(S: SimilaritySet, strategy: str) -> LabelSet:
    """Label 1 every target whose score falls strictly below the
    strategy's threshold (mean, mean-sigma, or mean+sigma)."""
    x = S.values()
    if x.size < 2:
        raise ValueError("need at least 2 scores")
    mu = x.mean()
    sigma = x.std()
    theta = {
        "Mean": mu,
        "MeanMinusSigma": mu - sigma,
        "MeanPlusSigma": mu + sigma,
    }.get(strategy)
    if theta is None:
        raise ValueError(f"unknown threshold strategy {strategy!r}")
    labels = {w: int(s < theta) for w, s in S.scores.items()}
    return LabelSet(labels, strategy)


def winsorize_labels(S: SimilaritySet) -> LabelSet:
    """Clamp scores into [mu-sigma, mu+sigma], recompute the mean on the
    clamped scores, and label 1 every original score below it."""
    x = S.values()
    if x.size < 2:
        raise ValueError("need at least 2 scores")
    mu = x.mean()
    sigma = x.std()
    clamped = np.clip(x, mu - sigma, mu + sigma)
    theta = clamped.mean()
    labels = {w: int(s < theta) for w, s in S.scores.items()}
    return LabelSet(labels, "Winsorizing")


def select_model(candidates: list[tuple[SimilaritySet, GmmModel]]):
    """Pick the (similarity set, model) pair with the highest final
    log-likelihood.

    Returns (best_pair, caveat): the caveat flags that log-likelihoods
    of models fitted on different similarity sets are not strictly
    comparable.
    """
    if not candidates:
        raise ValueError("no candidates")
    best = max(candidates, key=lambda c: c[1].log_likelihood)
    caveat = (
        "model selection compares log-likelihoods across different similarity sets"
    )
    return best, caveat


@dataclass
class RankedList:
    """Targets ordered by change distance 1 - |similarity|, descending."""

    entries: list[tuple[str, float]] = field(default_factory=list)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for w, d in self.entries:
                fh.write(f"{w}\t{format_score(d)}\n")

    @classmethod
    def load(cls, path) -> "RankedList":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            w, d = line.split("\t")
            entries.append((w, float(d)))
        return cls(entries)


def rank_targets(S: SimilaritySet) -> RankedList:
    """Distance 1 - |score|, sorted descending, ties lexicographic."""
    entries = [(w, 1.0 - abs(s)) for w, s in S.scores.items()]
    entries.sort(key=lambda wd: (-wd[1], wd[0]))
    return RankedList(entries)
