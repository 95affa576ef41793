"""Counter-based random streams with stable, order-independent stream ids."""

from __future__ import annotations

import zlib

import numpy as np

# Sub-stream tags used by the harness: code construction, pilot runs,
# measurement runs.
BUILD, PILOT, MEASURE = 0, 1, 2


def _as_key(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError(f"stream path parts must be non-negative, got {part}")
        return int(part)
    raise TypeError(f"stream path part must be int or str, got {type(part)!r}")


def stream(seed: int, *path) -> np.random.Generator:
    """Independent Philox stream identified by (seed, *path).

    Streams for distinct paths are independent; the same (seed, path)
    always replays the same values, regardless of creation order.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1),
                                spawn_key=tuple(_as_key(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
