import os
import random
import subprocess
import sys

import pytest

from bilex.cli import main, read_config

from oracles import ref_extract


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def corpus_text(sentences):
    return "\n".join(" ".join(s) for s in sentences) + "\n"


@pytest.fixture
def workspace(tmp_path):
    """A tiny deterministic end-to-end fixture on disk."""
    rng = random.Random(107)
    vocab = [f"w{i}" for i in range(12)]
    weights = [1.0 / (i + 1) for i in range(12)]
    sentences = []
    produced = 0
    while produced < 260:
        length = rng.randint(3, 8)
        sentences.append(rng.choices(vocab, weights=weights, k=length))
        produced += length
    rename = {w: w.replace("w", "v") for w in vocab}
    target = [[rename[t] for t in s] for s in sentences]
    entries = [(w, rename[w]) for w in vocab[:8]]
    paths = {
        "source": write(tmp_path / "source.txt", corpus_text(sentences)),
        "target": write(tmp_path / "target.txt", corpus_text(target)),
        "dict": write(tmp_path / "dic.tsv",
                      "".join(f"{s}\t{t}\n" for s, t in entries)),
        "gold": write(tmp_path / "gold.tsv",
                      "".join(f"{w}\t{rename[w]}\n" for w in vocab[8:])),
        "out": str(tmp_path / "lexicon.tsv"),
        "tmp": tmp_path,
    }
    paths["sentences"] = sentences
    paths["target_sentences"] = target
    paths["entries"] = [(s, t, "D") for s, t in entries]
    return paths


class TestExtractCommand:

    def args(self, ws, *extra):
        return ["extract",
                "--source-corpus", ws["source"],
                "--target-corpus", ws["target"],
                "--dict", "D=" + ws["dict"],
                "--out", ws["out"], *extra]

    def test_exit_zero_and_header(self, workspace, capsys):
        assert main(self.args(workspace, "--window", "3")) == 0
        lines = open(workspace["out"], encoding="utf-8").read().splitlines()
        assert lines[0].startswith("#metric=dicemin mode=unordered k=3")

    def test_output_matches_reference_pipeline(self, workspace):
        assert main(self.args(workspace, "--window", "3", "--top-k", "4")) == 0
        expected = ref_extract(workspace["sentences"],
                               workspace["target_sentences"],
                               workspace["entries"], "dicemin", k=3,
                               measure="llr", normalize=True, top_k=4)
        got = {}
        for line in open(workspace["out"], encoding="utf-8").read().splitlines()[1:]:
            source, rank, target, score = line.split("\t")
            got.setdefault(source, []).append((target, float(score)))
        assert set(got) == set(expected)
        for word, candidates in expected.items():
            assert [t for t, _ in got[word]] == [t for t, _ in candidates]
            for (_, ours), (_, ref) in zip(got[word], candidates):
                assert ours == pytest.approx(ref, abs=1e-12)

    def test_rerun_is_byte_identical(self, workspace):
        argv = self.args(workspace, "--window", "3")
        assert main(argv) == 0
        first = open(workspace["out"], "rb").read()
        assert main(argv) == 0
        assert open(workspace["out"], "rb").read() == first

    def test_missing_file_exits_2(self, workspace):
        argv = self.args(workspace)
        argv[argv.index("--source-corpus") + 1] = "/nonexistent/corpus.txt"
        assert main(argv) == 2

    def test_newdicemin_without_independent_exits_2(self, workspace, capsys):
        assert main(self.args(workspace, "--metric", "newdicemin")) == 2
        assert "independent" in capsys.readouterr().err

    def test_weights_ignored_with_warning(self, workspace, capsys):
        argv = self.args(workspace, "--weight-source", "explicit",
                         "--weight", "D=2.0")
        assert main(argv) == 0
        assert "ignored" in capsys.readouterr().err

    def test_empty_corpus_exits_1(self, workspace, tmp_path):
        empty = write(tmp_path / "empty.txt", "42 99\n")
        argv = self.args(workspace)
        argv[argv.index("--source-corpus") + 1] = empty
        assert main(argv) == 1

    def test_config_file_with_flag_override(self, workspace, tmp_path):
        config = write(tmp_path / "run.conf", "\n".join([
            f"source_corpus={workspace['source']}",
            f"target_corpus={workspace['target']}",
            f"dicts=D={workspace['dict']}",
            "window=4",
            "metric=cosine",
            f"out={workspace['out']}",
        ]) + "\n")
        assert main(["extract", "--config", config, "--window", "2"]) == 0
        header = open(workspace["out"], encoding="utf-8").readline()
        assert "k=2" in header          # flag beat the config
        assert "metric=cosine" in header  # config beat the default

    def test_unknown_config_key_exits_2(self, workspace, tmp_path):
        config = write(tmp_path / "bad.conf", "no_such_key=1\n")
        assert main(["extract", "--config", config]) == 2


class TestPipelineCommand:

    def test_extract_plus_evaluate(self, workspace, capsys, tmp_path):
        report = str(tmp_path / "report.tsv")
        argv = ["pipeline",
                "--source-corpus", workspace["source"],
                "--target-corpus", workspace["target"],
                "--dict", "D=" + workspace["dict"],
                "--window", "3",
                "--gold", workspace["gold"],
                "--report", report,
                "--out", workspace["out"]]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "Top-1" in out and "Top-10" in out
        body = open(report, encoding="utf-8").read().splitlines()
        assert body[0] == "k\tscore"
        assert len(body) == 3

    def test_threads_do_not_change_bytes(self, workspace):
        base = ["pipeline",
                "--source-corpus", workspace["source"],
                "--target-corpus", workspace["target"],
                "--dict", "D=" + workspace["dict"],
                "--window", "3",
                "--out", workspace["out"]]
        assert main(base + ["--threads", "1"]) == 0
        one = open(workspace["out"], "rb").read()
        assert main(base + ["--threads", "4"]) == 0
        assert open(workspace["out"], "rb").read() == one

    def test_byte_identical_across_processes_and_hash_seeds(self, workspace):
        # Hash randomization differs per process; output must not.
        outputs = []
        for seed in ("1", "31337"):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            argv = [sys.executable, "-m", "bilex.cli", "pipeline",
                    "--source-corpus", workspace["source"],
                    "--target-corpus", workspace["target"],
                    "--dict", "D=" + workspace["dict"],
                    "--window", "3",
                    "--out", workspace["out"]]
            proc = subprocess.run(argv, env=env, capture_output=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append(open(workspace["out"], "rb").read())
        assert outputs[0] == outputs[1]


class TestBuildPivotCommand:

    def test_happy_path(self, tmp_path, capsys):
        src = write(tmp_path / "fa-en.tsv", "casa\thome dwelling\n"
                                            "pane\tbread loaf\n")
        tgt = write(tmp_path / "en-it.tsv", "home\tcasa_it\n"
                                            "bread\tpane_it\n"
                                            "dwelling\tcasa_it\n")
        out = str(tmp_path / "pivot.tsv")
        argv = ["build-pivot", "--src-pivot", src, "--pivot-tgt", tgt,
                "--top-n", "10", "--out", out]
        assert main(argv) == 0
        lines = open(out, encoding="utf-8").read().splitlines()
        assert "casa\tcasa_it" in lines
        assert "pane\tpane_it" in lines

    def test_missing_file_exits_2(self, tmp_path):
        argv = ["build-pivot", "--src-pivot", "/missing.tsv",
                "--pivot-tgt", "/missing2.tsv", "--top-n", "5",
                "--out", str(tmp_path / "o.tsv")]
        assert main(argv) == 2

    def test_top_n_zero_exits_2(self, tmp_path):
        src = write(tmp_path / "s.tsv", "a\tx\n")
        tgt = write(tmp_path / "t.tsv", "x\tb\n")
        argv = ["build-pivot", "--src-pivot", src, "--pivot-tgt", tgt,
                "--top-n", "0", "--out", str(tmp_path / "o.tsv")]
        assert main(argv) == 2


class TestIngestTableCommand:

    def test_happy_path(self, tmp_path):
        table = write(tmp_path / "t.tsv", "x\ta\t0.9\nx\tb\t0.2\ny\tc\t0.5\n")
        out = str(tmp_path / "dic.tsv")
        assert main(["ingest-table", "--table", table, "--top-n", "5",
                     "--out", out]) == 0
        assert open(out, encoding="utf-8").read() == "x\ta\ny\tc\n"

    def test_bad_probability_exits_2(self, tmp_path):
        table = write(tmp_path / "t.tsv", "x\ta\t1.5\n")
        assert main(["ingest-table", "--table", table, "--top-n", "5",
                     "--out", str(tmp_path / "d.tsv")]) == 2


class TestCombineCommand:

    def test_simple(self, tmp_path):
        d1 = write(tmp_path / "d1.tsv", "x\ta\n")
        d2 = write(tmp_path / "d2.tsv", "x\tb\ny\tc\n")
        out = str(tmp_path / "c.tsv")
        assert main(["combine", "--dict", f"D1={d1}", "--dict", f"D2={d2}",
                     "--combination", "simple", "--out", out]) == 0
        body = open(out, encoding="utf-8").read().splitlines()
        assert body[0].startswith("#mode=simple")
        assert body[1:] == ["x\ta\tD1", "y\tc\tD2"]

    def test_independent(self, tmp_path):
        d1 = write(tmp_path / "d1.tsv", "x\ta\n")
        d2 = write(tmp_path / "d2.tsv", "x\tb\n")
        out = str(tmp_path / "c.tsv")
        assert main(["combine", "--dict", f"D1={d1}", "--dict", f"D2={d2}",
                     "--combination", "independent", "--out", out]) == 0
        body = open(out, encoding="utf-8").read().splitlines()
        assert body[1:] == ["x\ta\tD1", "x\tb\tD2"]


class TestBuildMatrixCommand:

    def test_writes_header_and_cells(self, workspace, tmp_path):
        out = str(tmp_path / "m.tsv")
        argv = ["build-matrix", "--corpus", workspace["source"],
                "--dict", "D=" + workspace["dict"], "--side", "source",
                "--window", "2", "--measure", "raw", "--no-normalize",
                "--out", out]
        assert main(argv) == 0
        lines = open(out, encoding="utf-8").read().splitlines()
        assert lines[0] == "#mode=unordered k=2 measure=raw normalized=0"
        assert len(lines) > 1


class TestEvaluateCommand:

    def test_perfect_fixture_prints_top1(self, tmp_path, capsys):
        lex = write(tmp_path / "lex.tsv",
                    "#config\ncasa\t1\thome\t0.9\npane\t1\tbread\t0.8\n")
        gold = write(tmp_path / "gold.tsv", "casa\thome\npane\tbread\n")
        assert main(["evaluate", "--lexicon", lex, "--gold", gold,
                     "--ks", "1,10"]) == 0
        out = capsys.readouterr().out
        assert "Top-1 1.0000" in out
        assert "Top-10 1.0000" in out

    def test_ks_parsing_two_rows(self, tmp_path, capsys):
        lex = write(tmp_path / "lex.tsv", "#c\na\t1\tb\t0.5\n")
        gold = write(tmp_path / "gold.tsv", "a\tz\n")
        out_path = str(tmp_path / "report.tsv")
        assert main(["evaluate", "--lexicon", lex, "--gold", gold,
                     "--ks", "1,10", "--out", out_path]) == 0
        rows = open(out_path, encoding="utf-8").read().splitlines()
        assert rows == ["k\tscore", "1\t0.0000", "10\t0.0000"]

    def test_bad_gold_exits_2(self, tmp_path):
        lex = write(tmp_path / "lex.tsv", "#c\na\t1\tb\t0.5\n")
        gold = write(tmp_path / "gold.tsv", "a\tb\na\tc\n")
        assert main(["evaluate", "--lexicon", lex, "--gold", gold]) == 2


class TestTopLevel:

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert "bilex" in capsys.readouterr().out


class TestReadConfig:

    def test_comments_and_blanks(self, tmp_path):
        path = write(tmp_path / "c.conf", "# comment\n\nkey=value\n")
        assert read_config(path) == {"key": "value"}

    def test_missing_equals_rejected(self, tmp_path):
        from bilex.errors import ConfigError
        path = write(tmp_path / "c.conf", "novalue\n")
        with pytest.raises(ConfigError):
            read_config(path)
