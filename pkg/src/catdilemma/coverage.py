"""Coverage of the frequency triangle by optimal strategies.

The triangle is cut into R^2 congruent cells by R-fold edge subdivision.
In scaled coordinates ``u = R*q1``, ``v = R*q2``:

* up cell (i, j), i + j <= R-1:   u >= i, v >= j, u + v <= i + j + 1
* down cell (i, j), i + j <= R-2: u <= i + 1, v <= j + 1, u + v >= i + j + 1

Cells are grouped into rows by ``floor(u + v)`` (row 0 is the q0 apex) and
numbered row by row: row r starts at index r^2 and alternates
up(i=0), down(i=0), up(i=1), ... so ``index = r^2 + 2 i + (0 up | 1 down)``.
A point on a shared edge or vertex belongs to the containing cell with the
lowest index.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np

from catdilemma import oracle
from catdilemma.model import (
    ClassFilter,
    Model,
    class_filter_mask,
    conditionals_array,
    optimal_frequencies_array,
)
from catdilemma.sampling import SampleBatch, sample

# published reference coverage percentages
REFERENCE_TABLE = {
    "classical": {"all": 0.67, "intransitive": 0.44, "transitive": 0.67},
    "quant": {"all": 0.60, "intransitive": 0.44, "transitive": 0.37},
}
REFERENCE_TABLE["prequant"] = dict(REFERENCE_TABLE["classical"])

DEFAULT_ORACLE_R = 256
DEFAULT_EMPIRICAL_R = 100


@dataclass(frozen=True)
class TriangleGrid:
    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("grid resolution must be >= 1")

    @property
    def n_cells(self) -> int:
        return self.resolution**2

    @cached_property
    def cells(self) -> np.ndarray:
        """(R^2, 3) int array of (i, j, down) ordered by cell index."""
        R = self.resolution
        out = np.empty((R * R, 3), dtype=np.int64)
        for r in range(R):
            k = np.arange(2 * r + 1)
            i = k // 2
            down = k % 2
            j = r - i - down
            out[r * r : (r + 1) ** 2] = np.stack([i, j, down], axis=1)
        return out

    def index(self, i, j, down) -> np.ndarray:
        i, j, down = np.asarray(i), np.asarray(j), np.asarray(down)
        r = i + j + down
        return r * r + 2 * i + down

    def row_position_orientation(self, index: int) -> tuple[int, int, str]:
        i, j, down = self.cells[index]
        return int(i + j + down), int(i), "down" if down else "up"

    @cached_property
    def centroids(self) -> np.ndarray:
        """(R^2, 3) barycentric centroids (q0, q1, q2)."""
        i, j, down = self.cells.T
        off = np.where(down == 1, 2.0 / 3.0, 1.0 / 3.0)
        q1 = (i + off) / self.resolution
        q2 = (j + off) / self.resolution
        return np.stack([1.0 - q1 - q2, q1, q2], axis=1)

    def vertices(self, index: int) -> np.ndarray:
        """Barycentric corners of one cell, shape (3, 3)."""
        i, j, down = (int(v) for v in self.cells[index])
        if down:
            uv = [(i + 1, j), (i, j + 1), (i + 1, j + 1)]
        else:
            uv = [(i, j), (i + 1, j), (i, j + 1)]
        R = self.resolution
        return np.array([(1.0 - (u + v) / R, u / R, v / R) for u, v in uv])

    def locate(self, q) -> np.ndarray:
        """Cell index of each barycentric point (lowest index on ties)."""
        q = np.asarray(q, dtype=float)
        single = q.ndim == 1
        q = q.reshape(-1, 3)
        R = self.resolution
        u = np.clip(q[:, 1], 0.0, 1.0) * R
        v = np.clip(q[:, 2], 0.0, 1.0) * R
        over = u + v > R  # rounding outside the hypotenuse
        scale = np.where(over, R / np.where(over, u + v, 1.0), 1.0)
        u, v = u * scale, v * scale
        fi = np.minimum(np.floor(u), R - 1).astype(np.int64)
        fj = np.minimum(np.floor(v), R - 1).astype(np.int64)

        best = np.full(len(q), np.iinfo(np.int64).max)
        for di in (-1, 0):
            for dj in (-1, 0):
                i, j = fi + di, fj + dj
                inside = (i >= 0) & (j >= 0)
                up_ok = inside & (i + j <= R - 1) & (u >= i) & (v >= j) & (u + v <= i + j + 1)
                dn_ok = (
                    inside
                    & (i + j <= R - 2)
                    & (u <= i + 1)
                    & (v <= j + 1)
                    & (u + v >= i + j + 1)
                )
                best = np.where(up_ok, np.minimum(best, self.index(i, j, 0)), best)
                best = np.where(dn_ok, np.minimum(best, self.index(i, j, 1)), best)
        if np.any(best == np.iinfo(np.int64).max):
            raise ValueError("point outside the triangle")
        return int(best[0]) if single else best


def build_grid(R: int) -> TriangleGrid:
    return TriangleGrid(R)


@dataclass(frozen=True)
class CoverageReport:
    model: str
    klass: str
    resolution: int
    method: str  # "empirical" | "oracle"
    covered_cells: int
    fraction: float
    sample_count: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("klass")
        return {k: d[k] for k in ("model", "class", "method", "resolution", "fraction",
                                  "covered_cells", "sample_count", "seed")}


def mapped_frequencies(batch: SampleBatch, klass: ClassFilter | str = "all"):
    """Optimal q of every strategy in ``batch`` passing ``klass``.

    Returns ``(q, keep)`` where ``keep`` marks rows that are optimal and in class.
    """
    c = conditionals_array(batch.model, batch.strategies)
    q, ok, _ = optimal_frequencies_array(c)
    keep = ok & class_filter_mask(c, klass)
    return q, keep


def hit_counts(batch: SampleBatch, grid: TriangleGrid, klass: ClassFilter | str = "all"):
    q, keep = mapped_frequencies(batch, klass)
    counts = np.zeros(grid.n_cells, dtype=np.int64)
    if keep.any():
        np.add.at(counts, grid.locate(q[keep]), 1)
    return counts


def empirical_coverage(
    batch: SampleBatch, grid: TriangleGrid, klass: ClassFilter | str = "all"
) -> CoverageReport:
    klass = ClassFilter(klass)
    if batch.n < 1:
        raise ValueError("empty batch")
    covered = int(np.count_nonzero(hit_counts(batch, grid, klass)))
    return CoverageReport(
        model=batch.model.value,
        klass=klass.value,
        resolution=grid.resolution,
        method="empirical",
        covered_cells=covered,
        fraction=covered / grid.n_cells,
        sample_count=batch.n,
        seed=batch.seed,
    )


def oracle_mask(grid: TriangleGrid, model: Model | str, klass: ClassFilter | str) -> np.ndarray:
    feasible, _ = oracle.feasible_array(grid.centroids, model, klass)
    return feasible


def oracle_coverage(
    grid: TriangleGrid, model: Model | str, klass: ClassFilter | str = "all"
) -> CoverageReport:
    model, klass = Model(model), ClassFilter(klass)
    covered = int(np.count_nonzero(oracle_mask(grid, model, klass)))
    return CoverageReport(
        model=model.value,
        klass=klass.value,
        resolution=grid.resolution,
        method="oracle",
        covered_cells=covered,
        fraction=covered / grid.n_cells,
    )


CLASSES = (ClassFilter.ALL, ClassFilter.INTRANSITIVE, ClassFilter.TRANSITIVE)


def coverage_table(
    oracle_R: int = DEFAULT_ORACLE_R,
    n: int = 100_000,
    seed: int = 0,
    empirical_R: int = DEFAULT_EMPIRICAL_R,
    workers: int = 1,
) -> dict:
    """Both coverage methods for every model and class, next to the reference table."""
    og, eg = build_grid(oracle_R), build_grid(empirical_R)
    rows = {}
    for model in Model:
        batch = sample(model, n, seed, workers=workers)
        row = {}
        for klass in CLASSES:
            ref = REFERENCE_TABLE[model.value][klass.value]
            orc = oracle_coverage(og, model, klass)
            emp = empirical_coverage(batch, eg, klass)
            row[klass.value] = {
                "reference": ref,
                "oracle": orc.fraction,
                "oracle_delta": orc.fraction - ref,
                "empirical": emp.fraction,
                "empirical_delta": emp.fraction - ref,
            }
        rows[model.value] = row
    agreement = max(
        abs(rows["prequant"][k.value]["empirical"] - rows["classical"][k.value]["empirical"])
        for k in CLASSES
    )
    return {
        "oracle_resolution": oracle_R,
        "empirical_resolution": empirical_R,
        "samples": n,
        "seed": seed,
        "rows": rows,
        "prequant_classical_empirical_max_delta": agreement,
    }
