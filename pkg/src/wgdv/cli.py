"""Command-line interface.

Verbs: atlas dump, psn build, extract, evaluate, export-dnn.
The only environment variable honored is WGDV_LOG_LEVEL.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .atlas import get_atlas
from .errors import WgdvError
from .measures import MEASURE_NAMES, STATISTICS
from .pdb_ingest import parse_pdb
from .pipeline import ExtractConfig, evaluate, export_dnn, extract
from .psn import build_psn, dump_psn


def _parse_range(text: str) -> tuple[int, int]:
    import re

    m = re.match(r"^(-?\d+)-(-?\d+)$", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError(f"range must be 'start-end', got {text!r}")
    return int(m.group(1)), int(m.group(2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgdv",
        description="Weighted structure networks, graphlet edge-orbit features, "
        "and cross-validated classification.",
    )
    parser.add_argument("--version", action="version", version=f"wgdv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_atlas = sub.add_parser("atlas", help="graphlet catalog operations")
    atlas_sub = p_atlas.add_subparsers(dest="atlas_command", required=True)
    p_dump = atlas_sub.add_parser("dump", help="write the full catalog as JSON")
    p_dump.add_argument("--out", type=Path, help="output file (default stdout)")

    p_psn = sub.add_parser("psn", help="structure network operations")
    psn_sub = p_psn.add_subparsers(dest="psn_command", required=True)
    p_build = psn_sub.add_parser("build", help="build one chain's network")
    p_build.add_argument("pdb", type=Path, help="PDB file")
    p_build.add_argument("--chain", required=True, help="chain id (one character)")
    p_build.add_argument("--range", type=_parse_range, default=None,
                         help="inclusive author-number interval start-end")
    p_build.add_argument("--cutoff", type=float, default=6.0,
                         help="adjacency cutoff in angstroms (default 6.0)")
    p_build.add_argument("--sequence-distance", choices=("ordinal", "author"),
                         default="ordinal")
    p_build.add_argument("--out", type=Path, help="output file (default stdout)")

    p_extract = sub.add_parser("extract", help="run a measure over a manifest")
    p_extract.add_argument("manifest", type=Path)
    p_extract.add_argument("--measure", required=True, choices=MEASURE_NAMES)
    p_extract.add_argument("--cutoff", type=float, default=6.0)
    p_extract.add_argument("--statistic", choices=STATISTICS, default="cvm")
    p_extract.add_argument("--sequence-distance", choices=("ordinal", "author"),
                           default="ordinal")
    p_extract.add_argument("--workers", type=int, default=1)
    p_extract.add_argument("--out", type=Path, required=True, help="store directory")

    p_eval = sub.add_parser("evaluate", help="cross-validate a vector store")
    p_eval.add_argument("store", type=Path)
    p_eval.add_argument("--folds", type=int, default=5)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--lambda", dest="lam", type=float, default=1.0,
                        help="L2 penalty strength (default 1.0)")
    p_eval.add_argument("--out", type=Path, help="report path (default store/report.json)")

    p_export = sub.add_parser("export-dnn", help="package a wegdvm store for the trainer")
    p_export.add_argument("store", type=Path)
    p_export.add_argument("--out", type=Path, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("WGDV_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        if args.command == "atlas":
            text = get_atlas().to_json() + "\n"
            if args.out:
                args.out.write_text(text)
            else:
                sys.stdout.write(text)
        elif args.command == "psn":
            chain = parse_pdb(args.pdb.read_text(), args.chain, args.range)
            psn = build_psn(chain, cutoff=args.cutoff,
                            sequence_distance=args.sequence_distance)
            text = dump_psn(psn)
            if args.out:
                args.out.write_text(text)
            else:
                sys.stdout.write(text)
        elif args.command == "extract":
            config = ExtractConfig(
                measure=args.measure,
                cutoff=args.cutoff,
                statistic=args.statistic,
                sequence_distance=args.sequence_distance,
            )
            index = extract(args.manifest, args.out, config, workers=args.workers)
            ok = sum(1 for s in index["samples"] if s["status"] == "ok")
            failed = len(index["samples"]) - ok
            print(f"extracted {args.measure} for {ok} samples "
                  f"({failed} failed) -> {args.out}")
        elif args.command == "evaluate":
            report = evaluate(args.store, folds=args.folds, seed=args.seed,
                              lam=args.lam, out_path=args.out)
            for fold in report.folds:
                print(f"fold {fold.index}: size {fold.size} error {fold.error:.4f}")
            print(f"mean error {report.mean_error:.4f}")
        elif args.command == "export-dnn":
            index = export_dnn(args.store, args.out)
            print(f"exported {len(index['samples'])} matrices "
                  f"({len(index['classes'])} classes) -> {args.out}")
    except (WgdvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
