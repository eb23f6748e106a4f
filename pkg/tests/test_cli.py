import pytest

from logbase_ir.cli import main
from logbase_ir.index import InvertedIndex


@pytest.fixture
def collection(tmp_path):
    """31 documents: 30 contain only 'zebra', one contains only 'yak'."""
    docs = "".join(f".I {i}\n.W\nzebra\n" for i in range(1, 31)) + ".I 31\n.W\nyak\n"
    queries = ".I 1\n.W\nzebra\n"
    qrels = "".join(f"1 {i}\n" for i in range(1, 31))
    paths = {
        "docs": tmp_path / "docs.all",
        "queries": tmp_path / "queries.qry",
        "qrels": tmp_path / "qrels.txt",
    }
    paths["docs"].write_text(docs)
    paths["queries"].write_text(queries)
    paths["qrels"].write_text(qrels)
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStatsAndIndex:
    def test_stats_reports_counts(self, capsys, collection):
        code, out, _ = run(capsys, "stats", "--docs", collection["docs"])
        assert code == 0
        assert "documents=31" in out
        assert "distinct_terms=2" in out

    def test_missing_file_is_usage_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "stats", "--docs", tmp_path / "nope.all")
        assert code == 2
        assert "cannot read" in err

    def test_empty_collection_is_domain_error(self, capsys, tmp_path):
        empty = tmp_path / "empty.all"
        empty.write_text("")
        code, _, err = run(capsys, "stats", "--docs", empty)
        assert code == 1
        assert "empty collection" in err

    def test_malformed_file_is_domain_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.all"
        bad.write_text(".I one\n.W\nx\n")
        code, _, err = run(capsys, "stats", "--docs", bad)
        assert code == 1
        assert "line 1" in err

    def test_index_snapshot_round_trip(self, capsys, collection, tmp_path):
        snap = tmp_path / "index.json"
        code, out, _ = run(
            capsys, "index", "--docs", collection["docs"], "--save-index", snap
        )
        assert code == 0
        assert snap.exists()
        index = InvertedIndex.load(str(snap))
        assert index.n_docs == 31


class TestSearch:
    def test_ranks_matching_documents(self, capsys, collection):
        code, out, _ = run(capsys, "search", "--docs", collection["docs"], "-k", "3", "zebra")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3
        first = lines[0].split("\t")
        assert first[0] == "1" and first[1] == "1"

    def test_k_zero_prints_nothing(self, capsys, collection):
        code, out, _ = run(capsys, "search", "--docs", collection["docs"], "-k", "0", "zebra")
        assert code == 0
        assert out == ""

    def test_stopword_only_query_prints_nothing(self, capsys, collection):
        code, out, _ = run(capsys, "search", "--docs", collection["docs"], "the and a")
        assert code == 0
        assert out == ""

    def test_with_snapshot(self, capsys, collection, tmp_path):
        snap = tmp_path / "index.json"
        run(capsys, "index", "--docs", collection["docs"], "--save-index", snap)
        code, out, _ = run(capsys, "search", "--load-index", snap, "-k", "2", "zebra")
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_invalid_base_is_usage_error(self, capsys, collection):
        code, _, err = run(
            capsys, "search", "--docs", collection["docs"], "--base", "1.0", "zebra"
        )
        assert code == 2
        assert "base" in err


class TestEval:
    def test_perfect_retrieval_scores_one(self, capsys, collection, tmp_path):
        code, out, _ = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", collection["qrels"],
            "--out", tmp_path / "out",
        )
        assert code == 0
        assert "map 1.000000" in out
        assert "map_at_30 1.000000" in out
        csv = (tmp_path / "out" / "eval.csv").read_text().splitlines()
        assert csv[0].startswith("base,level_0.0")
        assert len(csv) == 2

    def test_save_run_writes_tsv(self, capsys, collection, tmp_path):
        run_path = tmp_path / "run.tsv"
        code, _, _ = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", collection["qrels"],
            "--out", tmp_path / "out",
            "--save-run", run_path,
        )
        assert code == 0
        lines = run_path.read_text().splitlines()
        assert len(lines) == 30  # one per ranked zebra document
        qid, doc_id, rank_pos, score = lines[0].split("\t")
        assert (qid, doc_id, rank_pos) == ("1", "1", "1")
        assert float(score) == pytest.approx(1.0)

    def test_save_run_inside_fresh_out_dir(self, capsys, collection, tmp_path):
        out = tmp_path / "newout"
        code, _, _ = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", collection["qrels"],
            "--out", out,
            "--save-run", out / "run.tsv",
        )
        assert code == 0
        assert (out / "run.tsv").exists()

    def test_zero_hit_scores_zero(self, capsys, collection, tmp_path):
        zero = collection["qrels"].parent / "zero.txt"
        zero.write_text("1 31\n")  # only the yak document is relevant
        code, out, err = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", zero,
            "--out", tmp_path / "out",
        )
        assert code == 0
        assert "map 0.000000" in out
        assert "empty-bucket" in err

    def test_unknown_query_in_qrels_is_domain_error(self, capsys, collection, tmp_path):
        bad = collection["qrels"].parent / "bad.txt"
        bad.write_text("7 1\n")
        code, _, err = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", bad,
            "--out", tmp_path / "out",
        )
        assert code == 1
        assert "unknown query ids" in err

    def test_out_dir_from_environment(self, capsys, collection, tmp_path, monkeypatch):
        monkeypatch.setenv("LOGBASE_IR_OUT", str(tmp_path / "envout"))
        code, _, _ = run(
            capsys,
            "eval",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", collection["qrels"],
        )
        assert code == 0
        assert (tmp_path / "envout" / "eval.csv").exists()


class TestSweep:
    def sweep_args(self, collection, out):
        return [
            "sweep",
            "--docs", collection["docs"],
            "--queries", collection["queries"],
            "--qrels", collection["qrels"],
            "--out", out,
        ]

    def test_small_grid_artifacts(self, capsys, collection, tmp_path):
        out = tmp_path / "out"
        code, stdout, _ = run(
            capsys, *self.sweep_args(collection, out), "--grid", "9.9:10.1:0.1"
        )
        assert code == 0
        assert "3 bases evaluated" in stdout
        csv = (out / "sweep.csv").read_text().splitlines()
        assert len(csv) == 4
        assert (out / "top5_map.txt").exists()
        assert (out / "top5_map_at_30.txt").exists()
        assert (out / "compare_map.txt").exists()
        assert (out / "curve_map.csv").exists()
        assert (out / "levels_map.csv").exists()

    def test_grid_without_base_ten_skips_comparison(self, capsys, collection, tmp_path):
        out = tmp_path / "out"
        code, _, err = run(
            capsys, *self.sweep_args(collection, out), "--grid", "2:3:0.5"
        )
        assert code == 0
        assert "comparison table skipped" in err
        assert not (out / "compare_map.txt").exists()

    def test_rerun_is_byte_identical(self, capsys, collection, tmp_path):
        out = tmp_path / "out"
        args = self.sweep_args(collection, out) + ["--grid", "0.5:2.0:0.5"]
        assert run(capsys, *args)[0] == 0
        first = (out / "sweep.csv").read_bytes()
        assert run(capsys, *args)[0] == 0
        assert (out / "sweep.csv").read_bytes() == first

    def test_all_bases_tie_on_toy_data(self, capsys, collection, tmp_path):
        out = tmp_path / "out"
        code, _, _ = run(
            capsys, *self.sweep_args(collection, out), "--grid", "0.5:30:3.7"
        )
        assert code == 0
        rows = (out / "sweep.csv").read_text().splitlines()[1:]
        maps = {float(r.split(",")[-2]) for r in rows}
        assert max(maps) - min(maps) < 1e-9

    def test_base_and_grid_conflict(self, capsys, collection, tmp_path):
        code, _, err = run(
            capsys,
            *self.sweep_args(collection, tmp_path / "out"),
            "--base", "10", "--grid", "1:2:1",
        )
        assert code == 2
        assert "mutually exclusive" in err

    def test_single_base_sweep(self, capsys, collection, tmp_path):
        out = tmp_path / "out"
        code, _, _ = run(capsys, *self.sweep_args(collection, out), "--base", "10")
        assert code == 0
        rows = (out / "sweep.csv").read_text().splitlines()
        assert len(rows) == 2
        assert rows[1].startswith("10.0,")


class TestConfigPrecedence:
    def test_config_supplies_defaults_flags_override(self, capsys, collection, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"docs={collection['docs']}\ntop=1\n")
        code, out, _ = run(capsys, "search", "--config", cfg, "zebra")
        assert code == 0
        assert len(out.strip().splitlines()) == 1
        code, out, _ = run(capsys, "search", "--config", cfg, "-k", "2", "zebra")
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_malformed_config_is_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("this is not a pair\n")
        code, _, err = run(capsys, "stats", "--config", cfg)
        assert code == 2
        assert "key=value" in err
