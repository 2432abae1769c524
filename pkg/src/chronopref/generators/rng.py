"""Block-wise random streams keyed by (seed, pair, block index).

Trials are generated in fixed-size blocks, each with its own generator, so
output does not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import zlib

import numpy as np

BLOCK_SIZE = 4096


def pair_key(x: str, y: str) -> int:
    return zlib.crc32(f"{x}\x1f{y}".encode("utf-8"))


def block_rng(seed: int, x: str, y: str, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(pair_key(x, y), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


def blocks(n: int, size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """``(block_index, count)`` for ``n`` trials."""
    return [(i, min(size, n - i * size)) for i in range((n + size - 1) // size)]
