"""Splittable random streams and deterministic chunked generation.

Every random quantity in the library is produced chunk by chunk.  Chunk ``k``
of a computation seeded with ``seed`` draws from::

    substream(seed, k, stream=s) = Generator(PCG64DXSM(SeedSequence(seed, spawn_key=(s, k))))

where ``s`` is a small integer naming the purpose of the stream (inner samples,
thinning coin flips, ...).  Chunks have a fixed length, so the output depends on
``(seed, n)`` only and never on how many workers process the chunks.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

CHUNK_SIZE = 1 << 16

# named stream purposes
SAMPLES = 0
THINNING = 1
RENEWAL = 2
FRESH = 3


def substream(seed: int, k: int, stream: int = SAMPLES) -> np.random.Generator:
    """Return the generator for chunk ``k`` of purpose ``stream``."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(k)))
    return np.random.Generator(np.random.PCG64DXSM(seq))


def derive_seed(seed: int, tag: int) -> int:
    """Derive an independent 64-bit seed from ``seed`` (used to seed sub-experiments)."""
    state = np.random.SeedSequence(int(seed), spawn_key=(0xD1CE, int(tag))).generate_state(1, np.uint64)
    return int(state[0])


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return 1
    if workers <= 0:
        return os.cpu_count() or 1
    return int(workers)


def chunk_sizes(n: int, chunk_size: int = CHUNK_SIZE) -> list[int]:
    full, rest = divmod(int(n), chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def map_chunks(fn: Callable[[int], object], count: int, workers: int | None = 1) -> list:
    """Evaluate ``fn(k)`` for ``k < count``; results are ordered by ``k``."""
    workers = resolve_workers(workers)
    if workers == 1 or count <= 1:
        return [fn(k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=min(workers, count)) as pool:
        return list(pool.map(fn, range(count)))


def generate(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    seed: int,
    workers: int | None = 1,
    stream: int = SAMPLES,
    chunk_size: int = CHUNK_SIZE,
) -> np.ndarray:
    """Draw ``n`` values with ``draw(rng, size)``, one substream per chunk."""
    sizes = chunk_sizes(n, chunk_size)
    parts = map_chunks(lambda k: draw(substream(seed, k, stream), sizes[k]), len(sizes), workers)
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    u = rng.random(size)
    u[u == 0.0] = 2.0**-54
    return u
