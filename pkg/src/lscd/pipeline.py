"""Pipeline orchestration: config parsing, stage sequencing, artifact
caching, and SemEval-style answer files."""

import configparser
import hashlib
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import collocation as colloc
from . import detect, evaluation, similarity, tr, tri
from .corpus import MinCount, TimeBinnedCorpus, TopK, build_vocabulary, load_manifest, read_targets
from .embeddings import EmbeddingSpace

TASK1_LINE = re.compile(r"^\S+\t(0|1)$")
TASK2_LINE = re.compile(r"^\S+\t-?\d+(\.\d+)?$")

BACKENDS = ("tri", "tr", "collocation")


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage


@dataclass
class PipelineConfig:
    corpus_paths: dict[str, str]
    targets_path: str
    backend: str = "tr"
    backend_params: dict[str, str] = field(default_factory=dict)
    measure: str = "CS"
    ns_k: int = 25
    strategy: str = "GMM"
    detect_params: dict[str, str] = field(default_factory=dict)
    rng_seed: int = 1
    output_dir: str = "out"
    name: str = "run"
    cache_dir: str | None = None

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise FileNotFoundError(path)
        corpus = dict(parser["corpus"])
        targets = corpus.pop("targets")
        backend_sec = dict(parser["backend"]) if parser.has_section("backend") else {}
        backend = backend_sec.pop("name", "tr").lower()
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
        sim_sec = dict(parser["similarity"]) if parser.has_section("similarity") else {}
        det_sec = dict(parser["detect"]) if parser.has_section("detect") else {}
        out_sec = dict(parser["output"]) if parser.has_section("output") else {}
        run_sec = dict(parser["run"]) if parser.has_section("run") else {}
        return cls(
            corpus_paths=corpus,
            targets_path=targets,
            backend=backend,
            backend_params=backend_sec,
            measure=sim_sec.get("measure", "CS").upper(),
            ns_k=int(sim_sec.get("k", 25)),
            strategy=det_sec.pop("strategy", "GMM") if det_sec else "GMM",
            detect_params=det_sec,
            rng_seed=int(run_sec.get("seed", 1)),
            output_dir=out_sec.get("dir", "out"),
            name=out_sec.get("name", "run"),
            cache_dir=out_sec.get("cache"),
        )

    def canonical_items(self):
        """Stable (key, value) view of everything that affects outputs."""
        items = [("backend", self.backend), ("measure", self.measure),
                 ("ns_k", str(self.ns_k)), ("strategy", self.strategy),
                 ("rng_seed", str(self.rng_seed))]
        items += sorted((f"corpus.{k}", v) for k, v in self.corpus_paths.items())
        items.append(("targets", self.targets_path))
        items += sorted((f"backend.{k}", v) for k, v in self.backend_params.items())
        items += sorted((f"detect.{k}", v) for k, v in self.detect_params.items())
        return items


def config_hash(config: PipelineConfig) -> str:
    h = hashlib.sha256()
    for k, v in config.canonical_items():
        h.update(f"{k}={v}\n".encode("utf-8"))
    return h.hexdigest()


def _training_hash(config: PipelineConfig) -> str:
    """Cache key for trained artifacts: corpus contents + backend params."""
    h = hashlib.sha256()
    for pid, path in sorted(config.corpus_paths.items()):
        h.update(f"bin {pid}\n".encode())
        p = Path(path)
        files = sorted(p.glob("*.txt")) if p.is_dir() else [p]
        for f in files:
            h.update(f.read_bytes())
    h.update(Path(config.targets_path).read_bytes())
    h.update(f"backend={config.backend}\n".encode())
    for k, v in sorted(config.backend_params.items()):
        h.update(f"{k}={v}\n".encode())
    h.update(f"seed={config.rng_seed}\n".encode())
    return h.hexdigest()


def _atomic_write(path: Path, write_fn) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    os.close(fd)
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _param(params: dict, key: str, default, cast):
    raw = params.get(key)
    if raw is None:
        return default
    if cast is bool:
        return str(raw).lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _train_embeddings(config: PipelineConfig, corpus: TimeBinnedCorpus, targets):
    """Train (or load cached) per-period embedding spaces for tri/tr."""
    params = config.backend_params
    cache = Path(config.cache_dir or Path(config.output_dir) / "cache")
    key = _training_hash(config)
    period_ids = corpus.period_ids
    cached = [cache / f"{key}.{pid}.emb" for pid in period_ids]
    if all(p.exists() for p in cached):
        return [EmbeddingSpace.load(p) for p in cached], True

    if config.backend == "tri":
        vocab_k = _param(params, "vocab_top_k", 50000, int)
        dim = _param(params, "dim", 400, int)
        seeds = _param(params, "seeds", 10, int)
        window = _param(params, "window", 5, int)
        vocab = build_vocabulary(corpus, TopK(vocab_k))
        table = tri.make_index_vectors(vocab, dim, seeds, config.rng_seed)
        options = tri.TriOptions(
            init_from_previous=_param(params, "init_from_previous", False, bool),
            positive_only=_param(params, "positive_only", False, bool),
            ppmi_weights=_param(params, "ppmi_weights", False, bool),
        )
        spaces = tri.train_tri_all(corpus, table, options, window)
    else:  # tr
        sgns = tr.SgnsParams(
            dim=_param(params, "dim", 100, int),
            window=_param(params, "window", 5, int),
            negatives=_param(params, "negatives", 20, int),
            min_count=_param(params, "min_count", 10, int),
            epochs=_param(params, "epochs", 4, int),
            learning_rate=_param(params, "learning_rate", 0.025, float),
            subsample_threshold=_param(params, "subsample_threshold", None, float),
            rng_seed=config.rng_seed,
        )
        ref = tr.reference_targets(corpus, targets)
        target_space, _ = tr.train_sgns(ref, sgns)
        spaces = []
        for pid in period_ids:
            space = EmbeddingSpace(sgns.dim, pid)
            for tok in target_space.tokens():
                word, _, tok_pid = tok.rpartition(tr.TAG_SEP)
                if word and word in ref.targets:
                    if tok_pid == pid:
                        space[word] = target_space[tok]
                else:
                    space[tok] = target_space[tok]
            spaces.append(space)

    for space, path in zip(spaces, cached):
        _atomic_write(path, space.save)
    return spaces, False


def _collocation_similarities(config: PipelineConfig, corpus, targets):
    params = config.backend_params
    window = _param(params, "window", 5, int)
    top_n = _param(params, "top_n", 100, int)
    min_count = _param(params, "min_count", 1, int)
    vocab = build_vocabulary(corpus, MinCount(min_count))
    b1, b2 = corpus.bins
    sset = similarity.SimilaritySet(
        measure="CS", metadata={"backend": "collocation", "top_n": top_n}
    )
    for w in targets:
        if w not in vocab:
            sset.skipped[w] = "missing in vocabulary"
            continue
        p1 = colloc.build_profile(b1, vocab, w, window, top_n)
        p2 = colloc.build_profile(b2, vocab, w, window, top_n)
        if not p1 or not p2:
            empty = [b.period_id for b, p in ((b1, p1), (b2, p2)) if not p]
            sset.skipped[w] = "missing in " + ",".join(empty)
            continue
        sset.scores[w] = colloc.profile_similarity(p1, p2)
    if not sset.scores:
        raise ValueError("all targets were skipped")
    return sset


def compute_similarities(config: PipelineConfig, corpus, targets):
    if config.backend == "collocation":
        return _collocation_similarities(config, corpus, targets)
    spaces, from_cache = _train_embeddings(config, corpus, targets)
    e1, e2 = spaces[0], spaces[-1]
    sset = similarity.target_similarities(
        e1,
        e2,
        targets,
        measure=config.measure,
        k=config.ns_k,
        metadata={"backend": config.backend, "cached": from_cache},
    )
    return sset


def detect_labels(config: PipelineConfig, sset) -> tuple[detect.LabelSet, detect.GmmModel | None]:
    strategy = config.strategy
    if strategy == "GMM":
        dp = config.detect_params
        model = detect.fit_gmm_1d(
            sset,
            tol=_param(dp, "tol", 1e-8, float),
            max_iter=_param(dp, "max_iter", 200, int),
            restarts=_param(dp, "restarts", 5, int),
            random_state=config.rng_seed,
        )
        labels = detect.assign_labels(sset, model=model)
        return labels, model
    if strategy == "Winsorizing":
        return detect.winsorize_labels(sset), None
    return detect.threshold_labels(sset, strategy), None


def run_pipeline(config: PipelineConfig) -> dict:
    """Execute ingest -> train -> similarities -> detect/rank and write
    SemEval answer files plus a run report.

    Raises StageError naming the failing stage; partially written
    outputs for this run are removed on failure.
    """
    out = Path(config.output_dir)
    task1 = out / "task1" / f"{config.name}.txt"
    task2 = out / "task2" / f"{config.name}.txt"
    report_path = out / f"{config.name}.report.txt"
    written: list[Path] = []
    stage = "ingest"
    try:
        corpus = load_manifest(config.corpus_paths)
        if len(corpus.bins) != 2:
            raise ValueError(f"detection needs exactly 2 bins, got {len(corpus.bins)}")
        targets = read_targets(config.targets_path)

        stage = "similarities"
        sset = compute_similarities(config, corpus, targets)

        stage = "detect"
        labels, model = detect_labels(config, sset)

        stage = "rank"
        ranking = detect.rank_targets(sset)

        stage = "write"
        for path, writer in (
            (task1, labels.save),
            (task2, ranking.save),
        ):
            path.parent.mkdir(parents=True, exist_ok=True)
            writer(path)
            written.append(path)
        report = _render_report(config, sset, model)
        report_path.write_text(report, encoding="utf-8")
        written.append(report_path)
    except Exception as exc:
        for p in written:
            p.unlink(missing_ok=True)
        if isinstance(exc, StageError):
            raise
        raise StageError(stage, str(exc)) from exc
    return {
        "labels_file": task1,
        "ranking_file": task2,
        "report_file": report_path,
        "similarities": sset,
        "labels": labels,
        "ranking": ranking,
        "gmm": model,
        "config_hash": config_hash(config),
    }


def _render_report(config, sset, model) -> str:
    lines = [f"run\t{config.name}", f"config_hash\t{config_hash(config)}"]
    for k, v in config.canonical_items():
        lines.append(f"param\t{k}\t{v}")
    lines.append(f"n_scored\t{len(sset.scores)}")
    for w, reason in sorted(sset.skipped.items()):
        lines.append(f"skipped\t{w}\t{reason}")
    if model is not None:
        lines.append(f"gmm_log_likelihood\t{repr(model.log_likelihood)}")
        lines.append(
            "caveat\tlog-likelihoods from different similarity sets are "
            "not strictly comparable"
        )
    return "\n".join(lines) + "\n"


def check_answer_format(path, task: str) -> None:
    """Validate an answer file against the task's line grammar."""
    pattern = TASK1_LINE if task == "task1" else TASK2_LINE
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not pattern.match(line):
            raise ValueError(f"{path}:{i}: malformed {task} line: {line!r}")


def evaluate(pred_dir, gold_dir) -> tuple[str, dict]:
    """Score answer files in pred_dir/task{1,2}/ against identically named
    gold files; returns (text report, metrics dict)."""
    pred_dir, gold_dir = Path(pred_dir), Path(gold_dir)
    metrics: dict[tuple[str, str], float] = {}
    for task, metric in (("task1", "accuracy"), ("task2", "spearman")):
        gdir = gold_dir / task
        pdir = pred_dir / task
        if not gdir.is_dir():
            continue
        for gold_file in sorted(gdir.glob("*.txt")):
            pred_file = pdir / gold_file.name
            if not pred_file.exists():
                raise ValueError(f"missing prediction file: {pred_file}")
            name = gold_file.stem
            if task == "task1":
                gold = evaluation.GoldStandard.load(binary_path=gold_file)
                pred = detect.LabelSet.load(pred_file)
                metrics[(task, name)] = evaluation.accuracy(pred, gold)
            else:
                gold = evaluation.GoldStandard.load(graded_path=gold_file)
                pred = detect.RankedList.load(pred_file)
                metrics[(task, name)] = evaluation.spearman(pred, gold)
    if not metrics:
        raise ValueError(f"no gold files found under {gold_dir}")
    return _render_metrics(metrics), metrics


def _render_metrics(metrics: dict) -> str:
    width = max(len(name) for _, name in metrics)
    lines = [f"{'task':<6} {'dataset':<{width}} {'metric':<9} value"]
    for (task, name), value in sorted(metrics.items()):
        metric = "accuracy" if task == "task1" else "spearman"
        lines.append(f"{task:<6} {name:<{width}} {metric:<9} {value:.6f}")
    lines.append("")
    for (task, name), value in sorted(metrics.items()):
        metric = "accuracy" if task == "task1" else "spearman"
        lines.append(f"#metric\t{task}\t{name}\t{metric}\t{repr(value)}")
    return "\n".join(lines) + "\n"


def parse_metrics(text: str) -> dict:
    """Parse the machine-readable `#metric` lines back into a dict."""
    out = {}
    for line in text.splitlines():
        if line.startswith("#metric\t"):
            _, task, name, _metric, value = line.split("\t")
            out[(task, name)] = float(value)
    return out
