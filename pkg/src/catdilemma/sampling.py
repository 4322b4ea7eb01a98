"""Seeded uniform sampling of the three strategy spaces.

Stream layout (fixed, so runs are reproducible):

* Bit source: Philox-4x64-10 (numpy's ``Philox``), keyed by a 64-bit seed.
  Only ``random_raw`` words are consumed; no numpy distribution code is used.
* Uniform:  ``u = (w >> 11) * 2**-53`` in [0, 1).
* Normal:   Box-Muller on consecutive word pairs (w1, w2),
  ``r = sqrt(-2 log(1 - u1))``, emitting ``r cos(2 pi u2)`` then
  ``r sin(2 pi u2)``.
* Exponential: ``-log(1 - u)``.
* Batches are cut into chunks of ``CHUNK_SIZE`` strategies; chunk ``i`` is
  drawn from a fresh generator keyed by ``chunk_seed(seed, i)`` (SplitMix64
  finaliser), so output does not depend on how chunks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from catdilemma.model import (
    ClassicalStrategy,
    Model,
    PrequantStrategy,
    QuantumStrategy,
)

CHUNK_SIZE = 1 << 16

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * math.pi


def splitmix64(x: int) -> int:
    """SplitMix64 output function (Steele, Lea & Flood constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def chunk_seed(seed: int, index: int) -> int:
    return splitmix64(splitmix64(seed & _MASK64) ^ (index & _MASK64))


@dataclass
class SeededGenerator:
    """Single-owner stream of uniforms, normals and exponentials."""

    seed: int
    _bits: np.random.Philox = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        self._bits = np.random.Philox(key=self.seed, counter=0)

    def raw(self, n: int) -> np.ndarray:
        return np.asarray(self._bits.random_raw(n), dtype=np.uint64)

    def uniform(self, n: int) -> np.ndarray:
        """n doubles in [0, 1)."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        m = (n + 1) // 2
        u = self.uniform(2 * m).reshape(m, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        theta = _TWO_PI * u[:, 1]
        out = np.empty((m, 2))
        out[:, 0] = r * np.cos(theta)
        out[:, 1] = r * np.sin(theta)
        return out.reshape(-1)[:n]

    def exponential(self, n: int) -> np.ndarray:
        return -np.log1p(-self.uniform(n))


def sphere_points(dim: int, n: int, g: SeededGenerator) -> np.ndarray:
    """n points uniform on S^dim, shape (n, dim + 1)."""
    if dim < 1:
        raise ValueError("sphere dimension must be >= 1")
    x = g.normal(n * (dim + 1)).reshape(n, dim + 1)
    norm = np.sqrt(np.einsum("ij,ij->i", x, x))
    bad = np.flatnonzero(norm == 0.0)
    for i in bad:  # measure zero; redraw in row order
        while norm[i] == 0.0:
            x[i] = g.normal(dim + 1)
            norm[i] = math.sqrt(float(x[i] @ x[i]))
    return x / norm[:, None]


def simplex_points(k: int, n: int, g: SeededGenerator) -> np.ndarray:
    """n points uniform on the k-simplex, shape (n, k + 1)."""
    if k < 1:
        raise ValueError("simplex dimension must be >= 1")
    e = g.exponential(n * (k + 1)).reshape(n, k + 1)
    total = e.sum(axis=1)
    for i in np.flatnonzero(total == 0.0):
        while total[i] == 0.0:
            e[i] = g.exponential(k + 1)
            total[i] = e[i].sum()
    return e / total[:, None]


def sphere_point(dim: int, g: SeededGenerator) -> np.ndarray:
    return sphere_points(dim, 1, g)[0]


def simplex_point(k: int, g: SeededGenerator) -> np.ndarray:
    return simplex_points(k, 1, g)[0]


def _draw(model: Model, n: int, g: SeededGenerator) -> np.ndarray:
    if model is Model.CLASSICAL:
        return simplex_points(7, n, g)
    if model is Model.PREQUANT:
        return sphere_points(15, n, g)
    return sphere_points(2, n, g)


def _chunk(model: Model, seed: int, index: int, size: int) -> np.ndarray:
    return _draw(model, size, SeededGenerator(chunk_seed(seed, index)))


@dataclass(frozen=True)
class SampleBatch:
    """``strategies`` is an (n, model.dim) array, one strategy per row."""

    model: Model
    strategies: np.ndarray
    seed: int | None = None

    @property
    def n(self) -> int:
        return len(self.strategies)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        for row in self.strategies:
            yield self.strategy(row)

    def strategy(self, row):
        if self.model is Model.CLASSICAL:
            return ClassicalStrategy(tuple(row))
        if self.model is Model.PREQUANT:
            return PrequantStrategy(tuple(row))
        return QuantumStrategy(*row)


def sample(model: Model | str, n: int, seed: int, workers: int = 1) -> SampleBatch:
    """Draw ``n`` uniform strategies of ``model``, reproducible from ``seed``."""
    model = Model(model)
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = [min(CHUNK_SIZE, n - start) for start in range(0, n, CHUNK_SIZE)]
    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk(model, seed, *job), jobs))
    else:
        parts = [_chunk(model, seed, i, size) for i, size in jobs]
    return SampleBatch(model, np.concatenate(parts), seed)


def sample_classical(n: int, seed: int, workers: int = 1) -> SampleBatch:
    return sample(Model.CLASSICAL, n, seed, workers)


def sample_prequant(n: int, seed: int, workers: int = 1) -> SampleBatch:
    return sample(Model.PREQUANT, n, seed, workers)


def sample_quant(n: int, seed: int, workers: int = 1) -> SampleBatch:
    return sample(Model.QUANT, n, seed, workers)
