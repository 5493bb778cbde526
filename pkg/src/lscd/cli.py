"""Command-line interface for the change detection pipeline."""

import argparse
import sys
from pathlib import Path

from . import detect as detect_mod
from . import pipeline
from .corpus import load_manifest, read_targets
from .evaluation import SynthSpec, generate_synthetic
from .similarity import SimilaritySet


def _load_config(args) -> pipeline.PipelineConfig:
    config = pipeline.PipelineConfig.from_file(args.config)
    if args.seed is not None:
        config.rng_seed = args.seed
    return config


def _sim_path(config) -> Path:
    return Path(config.output_dir) / "similarities" / f"{config.name}.txt"


def cmd_ingest(args):
    config = _load_config(args)
    corpus = load_manifest(config.corpus_paths)
    targets = read_targets(config.targets_path)
    for b in corpus.bins:
        print(f"bin {b.period_id}: {len(b.sentences)} sentences, "
              f"{b.token_count()} tokens")
    print(f"targets: {len(targets)}")


def cmd_train(args):
    config = _load_config(args)
    corpus = load_manifest(config.corpus_paths)
    targets = read_targets(config.targets_path)
    if config.backend == "collocation":
        print("collocation backend trains no embeddings; profiles are "
              "computed during the similarities stage")
        return
    spaces, cached = pipeline._train_embeddings(config, corpus, targets)
    out = Path(config.output_dir) / "embeddings"
    out.mkdir(parents=True, exist_ok=True)
    for space in spaces:
        path = out / f"{config.name}.{space.period_id}.emb"
        space.save(path)
        print(f"wrote {path} ({len(space)} vectors, cached={cached})")


def cmd_similarities(args):
    config = _load_config(args)
    corpus = load_manifest(config.corpus_paths)
    targets = read_targets(config.targets_path)
    sset = pipeline.compute_similarities(config, corpus, targets)
    path = _sim_path(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    sset.save(path)
    print(f"wrote {path} ({len(sset)} scores, {len(sset.skipped)} skipped)")


def _load_similarities(args, config) -> SimilaritySet:
    path = Path(args.similarities) if args.similarities else _sim_path(config)
    if not path.exists():
        raise FileNotFoundError(
            f"{path}: run the `similarities` subcommand first or pass --similarities"
        )
    return SimilaritySet.load(path)


def cmd_detect(args):
    config = _load_config(args)
    sset = _load_similarities(args, config)
    labels, _ = pipeline.detect_labels(config, sset)
    path = Path(config.output_dir) / "task1" / f"{config.name}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    labels.save(path)
    print(f"wrote {path}")


def cmd_rank(args):
    config = _load_config(args)
    sset = _load_similarities(args, config)
    ranking = detect_mod.rank_targets(sset)
    path = Path(config.output_dir) / "task2" / f"{config.name}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    ranking.save(path)
    print(f"wrote {path}")


def cmd_run(args):
    config = _load_config(args)
    result = pipeline.run_pipeline(config)
    print(f"wrote {result['labels_file']}")
    print(f"wrote {result['ranking_file']}")
    print(f"wrote {result['report_file']}")


def cmd_eval(args):
    report, _ = pipeline.evaluate(args.pred, args.gold)
    print(report, end="")


def cmd_synth(args):
    spec = SynthSpec(
        vocab_size=args.vocab_size,
        n_targets=args.n_targets,
        n_changed=args.n_changed,
        sentences_per_bin=args.sentences_per_bin,
        change_strength=args.change_strength,
        rng_seed=args.seed if args.seed is not None else 0,
    )
    corpus, gold = generate_synthetic(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for b in corpus.bins:
        path = out / f"{b.period_id}.txt"
        with open(path, "w", encoding="utf-8") as fh:
            for sent in b.sentences:
                fh.write(" ".join(sent) + "\n")
        print(f"wrote {path}")
    targets_path = out / "targets.txt"
    targets_path.write_text(
        "".join(w + "\n" for w in sorted(gold.binary)), encoding="utf-8"
    )
    gold_dir = out / "gold"
    (gold_dir / "task1").mkdir(parents=True, exist_ok=True)
    (gold_dir / "task2").mkdir(parents=True, exist_ok=True)
    gold.save(
        binary_path=gold_dir / "task1" / "synthetic.txt",
        graded_path=gold_dir / "task2" / "synthetic.txt",
    )
    print(f"wrote {targets_path} and {gold_dir}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lscd",
        description="Detect and rank lexical semantic change between two "
        "time periods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help, config=True):
        p = sub.add_parser(name, help=help)
        if config:
            p.add_argument("--config", required=True, help="pipeline config file")
            p.add_argument("--seed", type=int, default=None,
                           help="override the config's rng seed")
            p.add_argument("--strict-deterministic", action="store_true",
                           help="force single-threaded, reproducible training "
                           "(the default and only mode of this implementation)")
        p.set_defaults(fn=fn)
        return p

    add("ingest", cmd_ingest, "load corpora and report statistics")
    add("train", cmd_train, "train embedding spaces and write them to disk")
    p = add("similarities", cmd_similarities, "compute per-target similarities")
    p = add("detect", cmd_detect, "label targets as stable (0) or changed (1)")
    p.add_argument("--similarities", default=None, help="similarity file to read")
    p = add("rank", cmd_rank, "rank targets by change distance")
    p.add_argument("--similarities", default=None, help="similarity file to read")
    add("run", cmd_run, "run the full pipeline")

    p = add("eval", cmd_eval, "score answer files against gold files", config=False)
    p.add_argument("--pred", required=True, help="directory with task1/ task2/")
    p.add_argument("--gold", required=True, help="directory with task1/ task2/")

    p = add("synth", cmd_synth, "generate a synthetic diachronic corpus",
            config=False)
    p.add_argument("--out", required=True)
    p.add_argument("--vocab-size", type=int, default=500)
    p.add_argument("--n-targets", type=int, default=40)
    p.add_argument("--n-changed", type=int, default=10)
    p.add_argument("--sentences-per-bin", type=int, default=20000)
    p.add_argument("--change-strength", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except pipeline.StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
