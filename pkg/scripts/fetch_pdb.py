#!/usr/bin/env python3
"""Download PDB entries from RCSB into data/.

The acceptance anchor (1ERJ chain A) needs the real structure file, which
is not bundled with the repository.  On a host with network access:

    python scripts/fetch_pdb.py 1ERJ
"""

import argparse
import sys
import urllib.request
from pathlib import Path

URL = "https://files.rcsb.org/download/{pdb_id}.pdb"


def fetch(pdb_id: str, out_dir: Path) -> Path:
    pdb_id = pdb_id.upper()
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{pdb_id}.pdb"
    url = URL.format(pdb_id=pdb_id)
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as response:
        target.write_bytes(response.read())
    print(f"wrote {target} ({target.stat().st_size} bytes)")
    return target


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("ids", nargs="+", help="PDB ids, e.g. 1ERJ")
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "data",
        help="target directory (default: repository data/)",
    )
    args = parser.parse_args()
    for pdb_id in args.ids:
        try:
            fetch(pdb_id, args.out)
        except OSError as exc:
            print(f"error fetching {pdb_id}: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
