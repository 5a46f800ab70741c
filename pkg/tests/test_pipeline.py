"""Manifest-driven extraction, evaluation, and export."""

import json

import numpy as np
import pytest

from wgdv.synth import compact_cluster_pdb, extended_strand_pdb
from wgdv.binfmt import read_matrix
from wgdv.cli import main as cli_main
from wgdv.errors import DegenerateInputError, FormatError, GraphInputError
from wgdv.pipeline import (
    ExtractConfig,
    FeatureStore,
    evaluate,
    export_dnn,
    extract,
    parse_manifest,
)

N_PER_CLASS = 5


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """Synthetic two-class corpus: compact blobs vs extended strands,
    plus two samples that are broken on purpose."""
    root = tmp_path_factory.mktemp("corpus")
    rng = np.random.default_rng(2024)
    rows = ["id,pdb,chain,range,label"]
    for k in range(N_PER_CLASS):
        name = f"blob{k}.pdb"
        (root / name).write_text(compact_cluster_pdb(rng, 13 + k))
        rows.append(f"blob{k},{name},A,,compact")
    for k in range(N_PER_CLASS):
        name = f"strand{k}.pdb"
        (root / name).write_text(extended_strand_pdb(rng, 13 + k))
        rows.append(f"strand{k},{name},A,,extended")
    rows.append("gone,missing.pdb,A,,compact")
    rows.append(f"badchain,blob0.pdb,B,,extended")
    (root / "manifest.csv").write_text("\n".join(rows) + "\n")
    return root


class TestManifest:
    def test_parse_ok(self, corpus):
        entries = parse_manifest(corpus / "manifest.csv")
        assert len(entries) == 2 * N_PER_CLASS + 2
        assert entries[0].id == "blob0"
        assert entries[0].pdb == corpus / "blob0.pdb"
        assert entries[0].residue_range is None
        assert entries[0].label == "compact"

    def test_range_parsing(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("id,pdb,chain,range,label\na,x.pdb,A,3-17,l1\nb,y.pdb,B,-2-4,l2\n")
        entries = parse_manifest(path)
        assert entries[0].residue_range == (3, 17)
        assert entries[1].residue_range == (-2, 4)

    @pytest.mark.parametrize(
        "body,message",
        [
            ("id,pdb,chain,label\na,x.pdb,A,l", "header"),
            ("id,pdb,chain,range,label\na,x.pdb,A,,l\na,y.pdb,A,,l", "duplicate"),
            ("id,pdb,chain,range,label\na b,x.pdb,A,,l", "bad sample id"),
            ("id,pdb,chain,range,label\na,x.pdb,A,,", "empty label"),
            ("id,pdb,chain,range,label\na,x.pdb,AB,,l", "one character"),
            ("id,pdb,chain,range,label\na,x.pdb,A,5:9,l", "start-end"),
            ("id,pdb,chain,range,label\na,x.pdb,A,9-5,l", "empty range"),
            ("id,pdb,chain,range,label\n", "no samples"),
        ],
    )
    def test_parse_errors(self, tmp_path, body, message):
        path = tmp_path / "bad.csv"
        path.write_text(body + "\n")
        with pytest.raises(FormatError, match=message):
            parse_manifest(path)


class TestExtract:
    def test_vector_store(self, corpus, tmp_path):
        out = tmp_path / "store"
        index = extract(corpus / "manifest.csv", out, ExtractConfig("graphlet35"))
        by_status = {}
        for s in index["samples"]:
            by_status.setdefault(s["status"], []).append(s["id"])
        assert len(by_status["ok"]) == 2 * N_PER_CLASS
        assert sorted(by_status["failed"]) == ["badchain", "gone"]
        failed = {s["id"]: s for s in index["samples"] if s["status"] == "failed"}
        assert "ChainNotFoundError" in failed["badchain"]["error"]
        assert index["kind"] == "vector"
        assert index["config"]["statistic"] is None
        for s in index["samples"]:
            if s["status"] == "ok":
                assert s["nodes"] >= 13 and s["edges"] > 0
        lines = (out / "features.csv").read_text().splitlines()
        assert lines[0] == "id,label," + ",".join(f"f{i}" for i in range(29))
        assert len(lines) == 1 + 2 * N_PER_CLASS
        # counts are written as exact integers
        assert all(tok.lstrip("-").isdigit() for tok in lines[1].split(",")[2:])

    def test_matrix_store(self, corpus, tmp_path):
        out = tmp_path / "wstore"
        index = extract(
            corpus / "manifest.csv", out, ExtractConfig("wegdvm", statistic="cvm")
        )
        assert index["kind"] == "matrix"
        assert index["config"]["statistic"] == "cvm"
        store = FeatureStore(out)
        seen = 0
        for sample, matrix in store.iter_matrices():
            assert matrix.shape == (sample["rows"], 68)
            assert sample["cols"] == 68
            assert np.all(np.isfinite(matrix))
            seen += 1
        assert seen == 2 * N_PER_CLASS

    def test_deterministic_bytes_and_worker_independence(self, corpus, tmp_path):
        config = ExtractConfig("wegdvm", statistic="cvm")
        outs = []
        for tag, workers in (("a", 1), ("b", 1), ("c", 2)):
            out = tmp_path / tag
            extract(corpus / "manifest.csv", out, config, workers=workers)
            outs.append(out)
        ref_index = (outs[0] / "index.json").read_bytes()
        ref_files = sorted(p.name for p in (outs[0] / "matrices").iterdir())
        for other in outs[1:]:
            assert (other / "index.json").read_bytes() == ref_index
            assert sorted(p.name for p in (other / "matrices").iterdir()) == ref_files
            for name in ref_files:
                assert (other / "matrices" / name).read_bytes() == (
                    outs[0] / "matrices" / name
                ).read_bytes()

    def test_vector_store_determinism(self, corpus, tmp_path):
        config = ExtractConfig("egdvm-cc")
        extract(corpus / "manifest.csv", tmp_path / "x", config)
        extract(corpus / "manifest.csv", tmp_path / "y", config, workers=2)
        assert (tmp_path / "x" / "features.csv").read_bytes() == (
            tmp_path / "y" / "features.csv"
        ).read_bytes()
        assert (tmp_path / "x" / "index.json").read_bytes() == (
            tmp_path / "y" / "index.json"
        ).read_bytes()


@pytest.fixture(scope="module")
def vector_store(corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("eval") / "store"
    extract(corpus / "manifest.csv", out, ExtractConfig("graphlet35"))
    return out


class TestEvaluate:
    def test_end_to_end_separates_classes(self, vector_store):
        report = evaluate(vector_store, folds=2, seed=0, lam=1.0)
        assert report.classifier == "logreg"
        assert report.measure == "graphlet35"
        assert len(report.folds) == 2
        assert sum(f.size for f in report.folds) == 2 * N_PER_CLASS
        # compact vs extended graphlet profiles are trivially separable
        assert report.mean_error <= 0.2
        saved = json.loads((vector_store / "report.json").read_text())
        assert saved["mean_error"] == report.mean_error

    def test_report_bytes_deterministic(self, vector_store, tmp_path):
        a = tmp_path / "r1.json"
        b = tmp_path / "r2.json"
        evaluate(vector_store, folds=2, seed=7, out_path=a)
        evaluate(vector_store, folds=2, seed=7, out_path=b)
        assert a.read_bytes() == b.read_bytes()

    def test_matrix_store_is_rejected_with_guidance(self, corpus, tmp_path):
        out = tmp_path / "mstore"
        extract(corpus / "manifest.csv", out, ExtractConfig("wegdvm"))
        with pytest.raises(GraphInputError, match="egdvm-cc / wegdvm-cc"):
            evaluate(out, folds=2)

    def test_single_class_store_is_rejected(self, corpus, tmp_path):
        manifest = tmp_path / "one.csv"
        manifest.write_text(
            "id,pdb,chain,range,label\n"
            + "\n".join(
                f"blob{k},{corpus}/blob{k}.pdb,A,,compact" for k in range(N_PER_CLASS)
            )
            + "\n"
        )
        out = tmp_path / "onestore"
        extract(manifest, out, ExtractConfig("graphlet35"))
        with pytest.raises(DegenerateInputError, match="C >= 2"):
            evaluate(out, folds=2)


class TestExportDnn:
    def test_roundtrip(self, corpus, tmp_path):
        store = tmp_path / "wstore"
        extract(corpus / "manifest.csv", store, ExtractConfig("wegdvm"))
        export = tmp_path / "export"
        index = export_dnn(store, export)
        assert index["format"] == "wgdv-dnn-export"
        assert index["classes"] == ["compact", "extended"]
        assert len(index["samples"]) == 2 * N_PER_CLASS
        for sample in index["samples"]:
            assert sample["class_id"] == index["classes"].index(sample["label"])
            matrix = read_matrix(export / sample["file"])
            assert matrix.shape == (sample["rows"], sample["cols"])
            original = read_matrix(store / "matrices" / f"{sample['id']}.wgdv")
            np.testing.assert_array_equal(matrix, original)
        doc = json.loads((export / "index.json").read_text())
        assert doc["statistic"] == "cvm"

    def test_rejects_non_wegdvm_stores(self, corpus, tmp_path):
        vstore = tmp_path / "vstore"
        extract(corpus / "manifest.csv", vstore, ExtractConfig("graphlet35"))
        with pytest.raises(GraphInputError, match="wegdvm"):
            export_dnn(vstore, tmp_path / "nope")
        estore = tmp_path / "estore"
        extract(corpus / "manifest.csv", estore, ExtractConfig("egdvm"))
        with pytest.raises(GraphInputError, match="wegdvm"):
            export_dnn(estore, tmp_path / "nope2")


class TestCli:
    def test_atlas_dump(self, tmp_path, capsys):
        out = tmp_path / "atlas.json"
        assert cli_main(["atlas", "dump", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["counts"] == {
            "graphlets": 29, "edge_orbits": 68, "ordered_classes": 42,
        }
        assert cli_main(["atlas", "dump"]) == 0
        assert '"graphlets": 29' in capsys.readouterr().out

    def test_psn_build(self, corpus, capsys):
        code = cli_main(["psn", "build", str(corpus / "strand0.pdb"), "--chain", "A"])
        assert code == 0
        header = capsys.readouterr().out.splitlines()[0].split()
        assert header[0] == "13" and header[2] == "6"

    def test_psn_build_missing_chain_fails_cleanly(self, corpus, capsys):
        code = cli_main(["psn", "build", str(corpus / "strand0.pdb"), "--chain", "Z"])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_full_cli_flow(self, corpus, tmp_path, capsys):
        store = tmp_path / "store"
        assert cli_main([
            "extract", str(corpus / "manifest.csv"),
            "--measure", "graphlet35", "--out", str(store),
        ]) == 0
        assert "10 samples (2 failed)" in capsys.readouterr().out
        assert cli_main([
            "evaluate", str(store), "--folds", "2", "--seed", "1",
            "--lambda", "0.5",
        ]) == 0
        assert "mean error" in capsys.readouterr().out
        wstore = tmp_path / "wstore"
        assert cli_main([
            "extract", str(corpus / "manifest.csv"),
            "--measure", "wegdvm", "--statistic", "sum", "--out", str(wstore),
        ]) == 0
        capsys.readouterr()
        assert cli_main(["export-dnn", str(wstore), "--out", str(tmp_path / "exp")]) == 0
        assert "exported 10 matrices" in capsys.readouterr().out

    def test_unknown_measure_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            cli_main(["extract", "m.csv", "--measure", "gdv", "--out", "x"])
