import pytest

from lscd.evaluation import SynthSpec, generate_synthetic


def write_corpus(out_dir, spec):
    """Write a synthetic corpus plus targets and gold files; returns paths."""
    corpus, gold = generate_synthetic(spec)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for b in corpus.bins:
        p = out_dir / f"{b.period_id}.txt"
        with open(p, "w", encoding="utf-8") as fh:
            for sent in b.sentences:
                fh.write(" ".join(sent) + "\n")
        paths[b.period_id] = p
    targets = out_dir / "targets.txt"
    targets.write_text("".join(w + "\n" for w in sorted(gold.binary)))
    gold_dir = out_dir / "gold"
    (gold_dir / "task1").mkdir(parents=True)
    (gold_dir / "task2").mkdir(parents=True)
    gold.save(
        binary_path=gold_dir / "task1" / "synthetic.txt",
        graded_path=gold_dir / "task2" / "synthetic.txt",
    )
    return paths, targets, gold_dir, gold


SMALL_SPEC = SynthSpec(
    vocab_size=200,
    n_targets=12,
    n_changed=4,
    sentences_per_bin=600,
    change_strength=0.9,
    rng_seed=17,
)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    return write_corpus(out, SMALL_SPEC)


def make_config(path, corpus_paths, targets, out_dir, backend="tr", **overrides):
    backend_lines = {
        "tr": "dim = 32\nwindow = 3\nnegatives = 5\nmin_count = 2\nepochs = 2",
        "tri": "dim = 64\nseeds = 4\nwindow = 3\nvocab_top_k = 1000",
        "collocation": "window = 3\ntop_n = 50",
    }[backend]
    text = f"""[corpus]
t1 = {corpus_paths['t1']}
t2 = {corpus_paths['t2']}
targets = {targets}

[backend]
name = {backend}
{backend_lines}

[similarity]
measure = {overrides.get('measure', 'CS')}
k = {overrides.get('k', 5)}

[detect]
strategy = {overrides.get('strategy', 'GMM')}
restarts = 3

[output]
dir = {out_dir}
name = {overrides.get('name', 'synthetic')}

[run]
seed = {overrides.get('seed', 1)}
"""
    path.write_text(text, encoding="utf-8")
    return path
