"""End-to-end feature extraction and evaluation over a sample manifest.

A manifest is a CSV with header ``id,pdb,chain,range,label``; ``range`` is
an optional inclusive author-number interval ``start-end``.  ``extract``
writes a feature store directory:

    index.json             store metadata and per-sample status
    features.csv           one row per sample (vector measures)
    matrices/<id>.wgdv     one binary matrix per sample (matrix measures)

Samples that fail (missing file, absent chain, too few residues, ...) are
recorded with their error message and skipped; they never abort the run.
All outputs are byte-deterministic for a fixed manifest and configuration,
independent of the worker count.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .binfmt import read_matrix, write_matrix
from .errors import DegenerateInputError, FormatError, GraphInputError, WgdvError
from .logreg import CVReport, LabeledDataset, cross_validate
from .measures import MEASURE_NAMES, STATISTICS, VECTOR_LENGTHS, compute_measure
from .pdb_ingest import parse_pdb
from .psn import build_psn

log = logging.getLogger("wgdv")

_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")
_RANGE_RE = re.compile(r"^(-?\d+)-(-?\d+)$")

MATRIX_MEASURES = ("egdvm", "wegdvm")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    pdb: Path
    chain: str
    residue_range: tuple[int, int] | None
    label: str


def parse_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "pdb", "chain", "range", "label"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise FormatError(
                f"{path}: manifest header must contain {sorted(required)}, "
                f"got {reader.fieldnames}"
            )
        for row_number, row in enumerate(reader, start=2):
            sid = (row["id"] or "").strip()
            if not _ID_RE.match(sid):
                raise FormatError(f"{path}:{row_number}: bad sample id {sid!r}")
            if sid in seen:
                raise FormatError(f"{path}:{row_number}: duplicate sample id {sid!r}")
            seen.add(sid)
            label = (row["label"] or "").strip()
            if not label:
                raise FormatError(f"{path}:{row_number}: empty label")
            chain = (row["chain"] or "").strip()
            if len(chain) != 1:
                raise FormatError(f"{path}:{row_number}: chain must be one character")
            rng_text = (row["range"] or "").strip()
            residue_range = None
            if rng_text:
                m = _RANGE_RE.match(rng_text)
                if not m:
                    raise FormatError(
                        f"{path}:{row_number}: range must be 'start-end', got {rng_text!r}"
                    )
                residue_range = (int(m.group(1)), int(m.group(2)))
                if residue_range[0] > residue_range[1]:
                    raise FormatError(f"{path}:{row_number}: empty range {rng_text!r}")
            pdb = Path(row["pdb"] or "")
            if not pdb.is_absolute():
                pdb = path.parent / pdb
            entries.append(ManifestEntry(sid, pdb, chain, residue_range, label))
    if not entries:
        raise FormatError(f"{path}: manifest has no samples")
    return entries


@dataclass(frozen=True)
class ExtractConfig:
    measure: str
    cutoff: float = 6.0
    statistic: str = "cvm"
    sequence_distance: str = "ordinal"

    def __post_init__(self):
        if self.measure not in MEASURE_NAMES:
            raise GraphInputError(f"unknown measure {self.measure!r}")
        if self.statistic not in STATISTICS:
            raise GraphInputError(f"unknown statistic {self.statistic!r}")

    @property
    def is_matrix(self) -> bool:
        return self.measure in MATRIX_MEASURES

    @property
    def uses_statistic(self) -> bool:
        return self.measure.startswith("wegdvm")


def _extract_one(args: tuple[ManifestEntry, ExtractConfig, str | None]) -> dict:
    entry, config, matrices_dir = args
    record: dict = {"id": entry.id, "label": entry.label}
    try:
        text = entry.pdb.read_text()
        chain = parse_pdb(text, entry.chain, entry.residue_range)
        psn = build_psn(
            chain, cutoff=config.cutoff, sequence_distance=config.sequence_distance
        )
        result = compute_measure(psn, config.measure, statistic=config.statistic)
    except (WgdvError, OSError, UnicodeDecodeError) as exc:
        record["status"] = "failed"
        record["error"] = f"{type(exc).__name__}: {exc}"
        return record
    record["status"] = "ok"
    record["nodes"] = psn.n
    record["edges"] = psn.m
    if matrices_dir is not None:
        rel = f"matrices/{entry.id}.wgdv"
        write_matrix(Path(matrices_dir) / f"{entry.id}.wgdv", result.values)
        record["rows"] = int(result.values.shape[0])
        record["cols"] = int(result.values.shape[1])
        record["file"] = rel
    else:
        record["vector"] = result.values
    return record


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.9g}"


def extract(
    manifest_path: str | Path,
    out_dir: str | Path,
    config: ExtractConfig,
    workers: int = 1,
) -> dict:
    """Run the measure over every manifest sample; returns the index dict."""
    entries = parse_manifest(manifest_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    matrices_dir: str | None = None
    if config.is_matrix:
        (out / "matrices").mkdir(exist_ok=True)
        matrices_dir = str(out / "matrices")

    jobs = [(entry, config, matrices_dir) for entry in entries]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_extract_one, jobs))
    else:
        records = [_extract_one(job) for job in jobs]

    samples = []
    vector_rows = []
    for record in records:
        vector = record.pop("vector", None)
        if vector is not None:
            record["row"] = len(vector_rows)
            vector_rows.append((record["id"], record["label"], vector))
        samples.append(record)
        if record["status"] == "failed":
            log.warning("sample %s failed: %s", record["id"], record["error"])

    index = {
        "format": "wgdv-store",
        "version": 1,
        "dataset": Path(manifest_path).stem,
        "measure": config.measure,
        "kind": "matrix" if config.is_matrix else "vector",
        "config": {
            "cutoff": config.cutoff,
            "statistic": config.statistic if config.uses_statistic else None,
            "sequence_distance": config.sequence_distance,
            "tool_version": __version__,
        },
        "samples": samples,
    }
    if not config.is_matrix:
        index["vector_table"] = "features.csv"
        length = VECTOR_LENGTHS[config.measure.replace("-", "_")]
        with open(out / "features.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "label"] + [f"f{i}" for i in range(length)])
            for sid, label, vector in vector_rows:
                writer.writerow([sid, label] + [_format_value(v) for v in vector])
    (out / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    return index


class FeatureStore:
    """Read access to an extract output directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        index_path = self.root / "index.json"
        if not index_path.exists():
            raise FormatError(f"{self.root}: no index.json (not a feature store)")
        self.index = json.loads(index_path.read_text())
        if self.index.get("format") != "wgdv-store":
            raise FormatError(f"{self.root}: unrecognized store format")

    @property
    def kind(self) -> str:
        return self.index["kind"]

    @property
    def measure(self) -> str:
        return self.index["measure"]

    @property
    def dataset(self) -> str:
        return self.index.get("dataset", self.root.name)

    def ok_samples(self) -> list[dict]:
        return [s for s in self.index["samples"] if s["status"] == "ok"]

    def class_names(self) -> list[str]:
        return sorted({s["label"] for s in self.ok_samples()})

    def load_vectors(self) -> tuple[LabeledDataset, list[str]]:
        """Vector store -> (dataset with integer class ids, class names)."""
        if self.kind != "vector":
            raise GraphInputError(
                f"store holds {self.measure} matrices; evaluate needs a vector "
                "measure (use egdvm-cc / wegdvm-cc, or export-dnn for matrices)"
            )
        classes = self.class_names()
        class_id = {name: i for i, name in enumerate(classes)}
        ids = []
        labels = []
        rows = []
        with open(self.root / self.index["vector_table"], newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            width = len(header) - 2
            for row in reader:
                ids.append(row[0])
                labels.append(class_id[row[1]])
                rows.append([float(v) for v in row[2:]])
                if len(row) - 2 != width:
                    raise FormatError(f"{self.root}: ragged feature row for {row[0]}")
        features = np.array(rows, dtype=np.float64).reshape(len(rows), width)
        return (
            LabeledDataset(features, np.array(labels, dtype=np.int64), tuple(ids)),
            classes,
        )

    def iter_matrices(self):
        """Yield (sample record, matrix) for every ok sample of a matrix store."""
        if self.kind != "matrix":
            raise GraphInputError(f"store holds {self.measure} vectors, not matrices")
        for sample in self.ok_samples():
            yield sample, read_matrix(self.root / sample["file"])


def evaluate(
    store_dir: str | Path,
    folds: int = 5,
    seed: int = 0,
    lam: float = 1.0,
    out_path: str | Path | None = None,
) -> CVReport:
    """Stratified CV of the regularized classifier over a vector store."""
    store = FeatureStore(store_dir)
    dataset, classes = store.load_vectors()
    if len(classes) < 2:
        raise DegenerateInputError(
            f"C >= 2 required: store has classes {classes}"
        )
    report = cross_validate(
        dataset,
        k=folds,
        lam=lam,
        seed=seed,
        dataset_name=store.dataset,
        measure_name=store.measure,
    )
    target = Path(out_path) if out_path is not None else store.root / "report.json"
    target.write_text(report.to_json())
    return report


def export_dnn(store_dir: str | Path, out_dir: str | Path) -> dict:
    """Repackage a wegdvm matrix store for the sequence-model trainer.

    Writes an export directory containing the matrices and an index with a
    frozen label -> class id mapping (sorted label order).
    """
    store = FeatureStore(store_dir)
    if store.kind != "matrix" or store.measure != "wegdvm":
        raise GraphInputError(
            f"export needs a wegdvm matrix store, found {store.measure!r}"
        )
    out = Path(out_dir)
    (out / "matrices").mkdir(parents=True, exist_ok=True)
    classes = store.class_names()
    class_id = {name: i for i, name in enumerate(classes)}
    samples = []
    for sample, matrix in store.iter_matrices():
        rel = f"matrices/{sample['id']}.wgdv"
        write_matrix(out / rel, matrix)
        samples.append(
            {
                "id": sample["id"],
                "label": sample["label"],
                "class_id": class_id[sample["label"]],
                "rows": sample["rows"],
                "cols": sample["cols"],
                "file": rel,
            }
        )
    export_index = {
        "format": "wgdv-dnn-export",
        "version": 1,
        "statistic": store.index["config"].get("statistic"),
        "classes": classes,
        "samples": samples,
    }
    (out / "index.json").write_text(json.dumps(export_index, indent=2, sort_keys=True) + "\n")
    return export_index
