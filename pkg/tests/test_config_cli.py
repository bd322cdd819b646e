import pytest

from seedalign import pipeline
from seedalign.cli import main
from seedalign.config import PipelineConfig
from seedalign.errors import StageError, ValidationError
from seedalign.metrics import GroundTruth
from seedalign.seeds import SeedList

K3 = "a b\nb c\nc a\n"
K3_COPY = "x y\ny z\nz x\n"
SMALL = ["--walks.per_node", "2", "--walks.length", "10", "--train.dim", "2", "--train.epochs", "1"]


@pytest.fixture
def k3_pair(tmp_path):
    (tmp_path / "g1.txt").write_text(K3)
    (tmp_path / "g2.txt").write_text(K3_COPY)
    return tmp_path


def base_args(root, out="out"):
    return ["--graph1", str(root / "g1.txt"), "--graph2", str(root / "g2.txt"), "--out", str(root / out)] + SMALL


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# comment\nstrategy = node2vec\nwalks.p=2\ntrain.dim=16\n")
    cfg = PipelineConfig.read(path, {"train.dim": 8})
    assert cfg["walks.p"] == 2.0 and cfg["train.dim"] == 8 and cfg["mix.lambda"] == 0.5
    assert cfg.walk_params().p == 2.0
    assert cfg.train_config().rng_seed == 1


def test_manifest_round_trip():
    cfg = PipelineConfig({"graph1": "a", "graph2": "b", "strategy": "struct2vec", "walks.k_max": 2})
    text = cfg.to_text()
    assert "walks.p=" not in text and "walks.k_max=2" in text and "contextual" not in text
    assert PipelineConfig.from_text(text).values == cfg.values


@pytest.mark.parametrize(
    "values",
    [
        {"strategy": "deepwalk", "walks.p": 2.0},
        {"strategy": "node2vec", "walks.stay_prob": 0.5},
        {"strategy": "line"},
        {"bogus": 1},
        {"mix.lambda": 2.0},
        {"align.seed_threshold": 0.3},
        {"similarity.top_k": 0},
    ],
)
def test_invalid_configs(values):
    with pytest.raises(ValueError):
        PipelineConfig(values)


def test_bad_value_text():
    with pytest.raises(ValidationError):
        PipelineConfig.from_text("train.dim=abc\n")
    with pytest.raises(ValidationError):
        PipelineConfig.from_text("just words\n")


def test_struct2vec_union_file(k3_pair):
    assert main(["embed"] + base_args(k3_pair)) == 0
    lines = (k3_pair / "out" / "embeddings.txt").read_text().splitlines()
    assert lines[0] == "6 2" and len(lines) == 7
    assert {line.split()[0] for line in lines[1:]} == {"g1:a", "g1:b", "g1:c", "g2:x", "g2:y", "g2:z"}
    assert (k3_pair / "out" / "manifest.conf").exists()


def test_deepwalk_two_files_and_rerun_identical(k3_pair):
    args = ["embed", "--strategy", "deepwalk"] + base_args(k3_pair)
    assert main(args) == 0
    first = [(k3_pair / "out" / n).read_bytes() for n in pipeline.EMBEDDINGS]
    assert main(args) == 0
    assert [(k3_pair / "out" / n).read_bytes() for n in pipeline.EMBEDDINGS] == first
    assert not (k3_pair / "out" / "embeddings.txt").exists()


def test_similarity_entry_count(tmp_path):
    (tmp_path / "g1.txt").write_text("a b\nb c\nc d\nd a\na c\n")
    (tmp_path / "g2.txt").write_text("w x\nx y\ny z\nz w\nw y\n")
    assert main(["embed"] + base_args(tmp_path)) == 0
    assert main(["similarity", "--similarity.top_k", "3"] + base_args(tmp_path)) == 0
    seeds = SeedList.read(tmp_path / "out" / "m_emb.tsv")
    assert len(seeds) == 12 and seeds.source == "embedding"


def test_missing_m_final_names_mix(k3_pair, capsys):
    assert main(["align"] + base_args(k3_pair)) == 1
    err = capsys.readouterr().err
    assert "[align]" in err and "'mix'" in err


def test_stage_error_attribution(k3_pair):
    cfg = PipelineConfig({"graph1": str(k3_pair / "missing.txt"), "graph2": str(k3_pair / "g2.txt"), "out": str(k3_pair / "o")})
    with pytest.raises(StageError) as info:
        pipeline.run_embed(cfg)
    assert info.value.stage == "embed"


def test_config_error_exit_code(k3_pair, capsys):
    assert main(["embed", "--strategy", "deepwalk", "--walks.stay_prob", "0.5"] + base_args(k3_pair)) == 2
    assert "stay_prob" in capsys.readouterr().err


def test_pipeline_equals_manual_stages(k3_pair):
    (k3_pair / "ctx.tsv").write_text("a\tx\t1.0\nb\ty\t1.0\nc\tz\t1.0\n")
    GroundTruth({"a": "x", "b": "y", "c": "z"}).write(k3_pair / "truth.tsv")
    extra = ["--contextual", str(k3_pair / "ctx.tsv"), "--truth", str(k3_pair / "truth.tsv"), "--mix.lambda", "0"]
    assert main(["pipeline"] + base_args(k3_pair, "auto") + extra) == 0
    for cmd in ("embed", "similarity", "mix", "align"):
        assert main([cmd] + base_args(k3_pair, "manual") + extra) == 0
    auto = pipeline.output_files(k3_pair / "auto")
    manual = pipeline.output_files(k3_pair / "manual")
    assert [p.name for p in auto] == [p.name for p in manual]
    for a, m in zip(auto, manual):
        if a.name != "manifest.conf":
            assert a.read_bytes() == m.read_bytes(), a.name
    metrics = (k3_pair / "auto" / "metrics.txt").read_text()
    assert "node_correctness\t1.000000" in metrics and "edge_correctness\t1.000000" in metrics


def test_eval_subcommand(k3_pair, capsys):
    GroundTruth({"a": "x", "b": "y", "c": "z"}).write(k3_pair / "truth.tsv")
    (k3_pair / "ctx.tsv").write_text("a\ty\t1.0\nb\tx\t1.0\nc\tz\t1.0\n")
    args = base_args(k3_pair) + ["--contextual", str(k3_pair / "ctx.tsv"), "--mix.lambda", "0"]
    assert main(["pipeline"] + args) == 0
    capsys.readouterr()
    assert main(["eval", "--truth", str(k3_pair / "truth.tsv")] + args) == 0
    out = capsys.readouterr().out
    assert "node_correctness\t0.333333" in out


def test_eval_requires_truth(k3_pair):
    assert main(["eval"] + base_args(k3_pair)) == 1


def test_mix_without_contextual_notes_manifest(k3_pair):
    for cmd in ("embed", "similarity", "mix"):
        assert main([cmd] + base_args(k3_pair)) == 0
    assert SeedList.read(k3_pair / "out" / "m_final.tsv").source == "mixed"
    assert (k3_pair / "out" / "manifest.conf").read_text().startswith("# note:")


def test_synth(tmp_path):
    assert main(["synth", "--out", str(tmp_path), "--nodes", "30", "--rho", "0.1"]) == 0
    truth = GroundTruth.read(tmp_path / "truth.tsv")
    assert len(truth) == 30
    assert len(SeedList.read(tmp_path / "identity_seeds.tsv")) == 30
