"""Binary container for per-edge feature matrices.

Layout, all little-endian:

    bytes 0-3   magic  b"WGDV"
    bytes 4-7   u32    format version (1)
    bytes 8-11  u32    m, number of rows (edges)
    bytes 12-15 u32    k, number of columns (68)
    then        m*k    IEEE-754 binary32 values, row-major

The column count is stored rather than assumed so readers can reject
foreign files early.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"WGDV"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def write_matrix(path: str | Path, matrix: np.ndarray) -> None:
    values = np.ascontiguousarray(matrix, dtype="<f4")
    if values.ndim != 2:
        raise FormatError(f"matrix must be 2-D, got shape {values.shape}")
    m, k = values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, m, k))
        fh.write(values.tobytes())


def read_matrix(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, m, k = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 4 * m * k
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size)
    return data.reshape(m, k).astype(np.float32)
