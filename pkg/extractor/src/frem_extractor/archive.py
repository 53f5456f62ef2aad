"""Writer for the .frem embedding archive interface.

Layout (little-endian): magic "FREM", version u16 = 1, role u8
(0 frame, 1 video, 2 text), dimension u32, count u64, then an id table of
u16 length-prefixed UTF-8 strings and count*dimension float32 values,
row-major. This mirrors the retrieval engine's reader; the file is the
contract between the two packages.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"FREM"
VERSION = 1
ROLE_CODES = {"frame": 0, "video": 1, "text": 2}

_HEADER = struct.Struct("<4sHBIQ")


def write_archive(ids: list[str], matrix: np.ndarray, role: str, path) -> None:
    matrix = np.ascontiguousarray(matrix, dtype=np.float32)
    if matrix.ndim != 2 or matrix.shape[0] != len(ids):
        raise ValueError(f"{len(ids)} ids but matrix shape {matrix.shape}")
    if len(set(ids)) != len(ids):
        raise ValueError("archive ids must be unique")
    count, dim = matrix.shape
    chunks = [_HEADER.pack(MAGIC, VERSION, ROLE_CODES[role], dim, count)]
    for i in ids:
        raw = i.encode("utf-8")
        chunks.append(struct.pack("<H", len(raw)))
        chunks.append(raw)
    chunks.append(matrix.astype("<f4", copy=False).tobytes())
    Path(path).write_bytes(b"".join(chunks))
