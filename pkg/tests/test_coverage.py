import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catdilemma.coverage import (
    CLASSES,
    REFERENCE_TABLE,
    TriangleGrid,
    build_grid,
    coverage_table,
    empirical_coverage,
    hit_counts,
    mapped_frequencies,
    oracle_coverage,
    oracle_mask,
)
from catdilemma.sampling import sample


def inside_cell(grid, index, q, tol=1e-12):
    """Barycentric containment test against the cell's three corners."""
    v = grid.vertices(index)
    # solve q = lambda @ v with sum(lambda) = 1 (v rows are barycentric already)
    lam = np.linalg.solve(v.T, np.asarray(q, dtype=float))
    return bool(np.all(lam >= -tol))


# ---------------------------------------------------------------------------
# grid


def test_grid_r1_is_one_cell():
    g = build_grid(1)
    assert g.n_cells == 1
    assert g.locate((1 / 3, 1 / 3, 1 / 3)) == 0
    assert g.locate((1.0, 0.0, 0.0)) == 0
    assert g.centroids[0] == pytest.approx((1 / 3, 1 / 3, 1 / 3))


def test_grid_r2_layout():
    g = build_grid(2)
    assert g.n_cells == 4
    assert [g.row_position_orientation(k) for k in range(4)] == [
        (0, 0, "up"),
        (1, 0, "up"),
        (1, 0, "down"),
        (1, 1, "up"),
    ]
    # the centroid of the whole triangle is the centroid of the middle cell
    assert g.locate((1 / 3, 1 / 3, 1 / 3)) == 2
    assert g.centroids[2] == pytest.approx((1 / 3, 1 / 3, 1 / 3))


def test_grid_index_formula_matches_enumeration():
    g = build_grid(9)
    i, j, d = g.cells.T
    assert np.array_equal(g.index(i, j, d), np.arange(g.n_cells))
    assert np.all(i + j + d <= 8)


def test_cells_partition_area():
    # equal-area cells: each corner set spans a triangle of area 1/R^2 of the whole
    g = build_grid(6)
    areas = []
    for k in range(g.n_cells):
        v = g.vertices(k)
        areas.append(abs(np.linalg.det(v)))
    assert np.allclose(areas, 1 / g.n_cells)


def test_centroids_locate_to_their_own_cell():
    for R in (1, 2, 5, 17):
        g = build_grid(R)
        assert np.array_equal(g.locate(g.centroids), np.arange(g.n_cells))


def test_vertex_tie_goes_to_lowest_index():
    g = build_grid(4)
    # an interior grid vertex touches six cells
    q = np.array([0.5, 0.25, 0.25])
    k = g.locate(q)
    touching = [c for c in range(g.n_cells) if inside_cell(g, c, q)]
    assert len(touching) == 6
    assert k == min(touching)


def test_edge_tie_goes_to_lowest_index():
    g = build_grid(3)
    q = np.array([1 - 0.5 / 3 - 1 / 3, 0.5 / 3, 1 / 3])  # on the line v = 1
    touching = [c for c in range(g.n_cells) if inside_cell(g, c, q)]
    assert len(touching) == 2
    assert g.locate(q) == min(touching)


@settings(max_examples=300)
@given(st.integers(1, 40), st.floats(0, 1), st.floats(0, 1))
def test_locate_returns_a_containing_cell(R, a, b):
    if a + b > 1:
        a, b = 1 - a, 1 - b
    q = np.array([max(0.0, 1 - a - b), a, b])
    g = build_grid(R)
    k = g.locate(q)
    assert 0 <= k < g.n_cells
    assert inside_cell(g, k, q, tol=1e-9)


def test_bad_resolution():
    with pytest.raises(ValueError):
        TriangleGrid(0)


# ---------------------------------------------------------------------------
# empirical coverage


def test_single_sample_covers_at_most_one_cell():
    for model in ("classical", "prequant", "quant"):
        batch = sample(model, 1, 3)
        rep = empirical_coverage(batch, build_grid(10))
        assert rep.fraction in (0.0, 1 / 100)
        assert rep.sample_count == 1


def test_hit_counts_sum_to_kept_samples():
    batch = sample("quant", 5000, 1)
    g = build_grid(20)
    for klass in CLASSES:
        _, keep = mapped_frequencies(batch, klass)
        assert hit_counts(batch, g, klass).sum() == keep.sum()


def test_empirical_grows_with_sample_size():
    g = build_grid(50)
    fr = [
        empirical_coverage(sample("quant", n, 4), g).fraction
        for n in (1_000, 10_000, 100_000)
    ]
    assert fr[0] < fr[1] < fr[2]


@pytest.mark.parametrize("model", ["classical", "prequant", "quant"])
def test_empirical_does_not_exceed_oracle(model):
    R = 40
    g = build_grid(R)
    batch = sample(model, 50_000, 2)
    for klass in CLASSES:
        emp = empirical_coverage(batch, g, klass).fraction
        orc = oracle_coverage(g, model, klass).fraction
        assert emp <= orc + 2 / R


@pytest.mark.parametrize("model", ["classical", "prequant"])
def test_central_condensation(model):
    # hits pile up around the centre: the central 20% of the triangle receives
    # more than twice its area share
    g = build_grid(10)
    batch = sample(model, 100_000, 5)
    counts = hit_counts(batch, g)
    central = np.all(g.centroids > 0.2, axis=1)
    share = counts[central].sum() / counts.sum()
    area = central.mean()
    assert share / area > 2


def test_prequant_and_classical_coverage_agree():
    g = build_grid(100)
    for klass in CLASSES:
        a = empirical_coverage(sample("classical", 100_000, 0), g, klass).fraction
        b = empirical_coverage(sample("prequant", 100_000, 0), g, klass).fraction
        assert abs(a - b) <= 0.01


# ---------------------------------------------------------------------------
# oracle coverage


@pytest.mark.parametrize("model", ["classical", "quant"])
def test_oracle_refinement_is_stable(model):
    for R in (32, 64):
        for klass in CLASSES:
            a = oracle_coverage(build_grid(R), model, klass).fraction
            b = oracle_coverage(build_grid(2 * R), model, klass).fraction
            assert abs(b - a) <= 4 / R


def test_prequant_oracle_equals_classical():
    g = build_grid(64)
    for klass in CLASSES:
        assert np.array_equal(oracle_mask(g, "prequant", klass), oracle_mask(g, "classical", klass))


def test_union_of_classes():
    g = build_grid(64)
    for model in ("classical", "quant"):
        all_ = oracle_mask(g, model, "all")
        union = oracle_mask(g, model, "intransitive") | oracle_mask(g, model, "transitive")
        assert np.array_equal(all_, union)


def test_report_serialisation():
    rep = oracle_coverage(build_grid(8), "quant", "transitive")
    d = rep.to_dict()
    assert d["class"] == "transitive" and d["method"] == "oracle"
    assert d["covered_cells"] == round(d["fraction"] * 64)


def test_coverage_table_shape():
    rep = coverage_table(oracle_R=32, n=2_000, seed=1, empirical_R=20)
    assert set(rep["rows"]) == {"classical", "prequant", "quant"}
    for model, row in rep["rows"].items():
        for klass, cell in row.items():
            assert cell["reference"] == REFERENCE_TABLE[model][klass]
            assert cell["oracle_delta"] == pytest.approx(cell["oracle"] - cell["reference"])
            assert 0 <= cell["empirical"] <= 1
