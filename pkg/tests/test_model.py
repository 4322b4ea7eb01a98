from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catdilemma.model import (
    NOT_OPTIMAL,
    ClassicalStrategy,
    ConditionalTriple,
    FrequencyTriple,
    PrequantStrategy,
    QuantumStrategy,
    TransitivityClass,
    choice_table,
    classical_conditionals,
    classical_conditionals_array,
    classical_embed,
    classify,
    determinant_array,
    determinant_d,
    map_strategy,
    occupancy,
    optimal_frequencies,
    optimal_frequencies_array,
    prequant_conditionals,
    prequant_conditionals_array,
    product_preimage,
    quant_conditionals,
    squared_moduli_array,
    z_to_sphere,
)

unit = st.floats(0.0, 1.0, allow_nan=False)
cube_points = st.tuples(unit, unit, unit).map(lambda t: ConditionalTriple(*t))


def e(k, n=8):
    v = [0.0] * n
    v[k] = 1.0
    return tuple(v)


def brute_conditionals(p):
    """P(C_k|B_j) by walking the choice table, independent of the index sets."""
    table = choice_table()
    pairs = {(1, 0): 2, (2, 0): 1, (2, 1): 0}  # pair -> food it lacks
    out = {}
    for col, pair in enumerate(pairs):
        lacking = pairs[pair]
        for food in pair:
            out[(food, lacking)] = sum(p[k] for k in range(8) if table[k][col] == food)
    return out[(0, 1)], out[(1, 0)], out[(0, 2)]


# ---------------------------------------------------------------------------
# choice table


@pytest.mark.parametrize(
    "k, expected", [(0, (0, 0, 1)), (7, (1, 2, 2)), (5, (1, 0, 2))]
)
def test_choice_table_entries(k, expected):
    assert choice_table()[k] == expected


def test_choice_table_enumerates_every_pattern_once():
    t = choice_table().entries
    assert set(t[:, 0]) <= {0, 1} and set(t[:, 1]) <= {0, 2} and set(t[:, 2]) <= {1, 2}
    assert len({tuple(row) for row in t.tolist()}) == 8


# ---------------------------------------------------------------------------
# strategy -> cube


@pytest.mark.parametrize(
    "p, expected",
    [(e(0), (1, 1, 1)), ((1 / 8,) * 8, (0.5, 0.5, 0.5)), (e(7), (0, 0, 0))],
)
def test_classical_conditionals(p, expected):
    c = classical_conditionals(ClassicalStrategy(p))
    assert c.as_tuple() == pytest.approx(expected, abs=1e-15)


def test_classical_conditionals_match_table_walk():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = rng.dirichlet(np.ones(8))
        p = tuple(p / p.sum())
        got = classical_conditionals(ClassicalStrategy(p)).as_tuple()
        assert got == pytest.approx(brute_conditionals(p), abs=1e-14)


def test_complement_identities_are_exact():
    c = ConditionalTriple(0.3, 0.9, 0.25)
    m = c.matrix()
    assert np.all(m.sum(axis=0) == 1.0)
    assert m[0, 0] == m[1, 1] == m[2, 2] == 0.0
    assert c.conditional(2, 1) == 1 - c.alpha
    assert c.conditional(2, 0) == 1 - c.beta
    assert c.conditional(1, 2) == 1 - c.gamma


def test_prequant_conditionals_examples():
    assert prequant_conditionals(PrequantStrategy(e(0, 16))).as_tuple() == (1, 1, 1)
    half = prequant_conditionals(PrequantStrategy((0.25,) * 16)).as_tuple()
    assert half == pytest.approx((0.5, 0.5, 0.5), abs=1e-15)
    x = [0.0] * 16
    x[0] = x[8] = 1 / np.sqrt(2)
    got = prequant_conditionals(PrequantStrategy(tuple(x))).as_tuple()
    assert got == pytest.approx((1, 1, 0.5), abs=1e-15)


def test_prequant_agrees_with_classical_on_squared_moduli():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(10_000, 16))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    via_p = classical_conditionals_array(squared_moduli_array(x))
    direct = prequant_conditionals_array(x)
    assert np.max(np.abs(via_p - direct)) < 1e-12


@pytest.mark.parametrize(
    "x, expected",
    [((0, 0, -1), (0.5, 0.5, 1)), ((1, 0, 0), (1, 0.5, 0.5)), ((0, 1, 0), (0.5, 1, 0.5))],
)
def test_quant_conditionals(x, expected):
    assert quant_conditionals(QuantumStrategy(*x)).as_tuple() == expected


# ---------------------------------------------------------------------------
# z parametrisation


def basis_readouts(z):
    """Normalised squared moduli of |z> in the three bases, from homogeneous
    coordinates so z = -1 and z = -i need no special case."""

    def first_share(c0, c1):
        return abs(c0) ** 2 / (abs(c0) ** 2 + abs(c1) ** 2)

    if z is None:
        # |z> ~ |1>_2; in the other bases the ratios tend to -1 and i
        return first_share(1, -1), first_share(1, 1j), 0.0
    gamma = first_share(1, z)  # |0>_2 + z |1>_2
    alpha = first_share(1 + z, 1 - z)  # |0>_1 + (1-z)/(1+z) |2>_1
    beta = first_share(1 - 1j * z, 1 + 1j * z)  # |1>_0 + (1+iz)/(1-iz) |2>_0
    return alpha, beta, gamma


def test_z_examples():
    assert z_to_sphere(0).as_tuple() == (0, 0, -1)
    assert quant_conditionals(z_to_sphere(0)).gamma == 1
    assert z_to_sphere(None).as_tuple() == (0, 0, 1)
    assert z_to_sphere(complex("inf")).as_tuple() == (0, 0, 1)
    assert quant_conditionals(z_to_sphere(None)).gamma == 0
    assert z_to_sphere(1).as_tuple() == (1, 0, 0)
    assert quant_conditionals(z_to_sphere(1)).alpha == 1


def test_z_chart_matches_basis_readouts():
    rng = np.random.default_rng(5)
    zs = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    zs *= np.exp(rng.normal(size=1000))  # spread moduli over decades
    zs = list(zs) + [0, 1, -1, 1j, -1j, None]
    for z in zs:
        got = quant_conditionals(z_to_sphere(z)).as_tuple()
        assert got == pytest.approx(basis_readouts(z), abs=1e-12)


# ---------------------------------------------------------------------------
# determinant, optimal frequencies, occupancy


@pytest.mark.parametrize(
    "c, d", [((0.5, 0.5, 0.5), 0.25), ((1, 1, 1), 0.0), ((1, 0, 0), 1.0)]
)
def test_determinant_examples(c, d):
    assert determinant_d(ConditionalTriple(*c)) == pytest.approx(d, abs=1e-15)


def test_determinant_matches_direct_3x3():
    rng = np.random.default_rng(0)
    c = rng.random((10_000, 3))
    a, b, g = c.T
    m = np.zeros((len(c), 3, 3))
    m[:, 0, 1], m[:, 0, 2] = a, g
    m[:, 1, 0], m[:, 1, 2] = b, 1 - g
    m[:, 2, 0], m[:, 2, 1] = 1 - b, 1 - a
    assert np.max(np.abs(np.linalg.det(m) - determinant_array(c))) < 1e-12


# independent route: q = M^{-1} (1/3, 1/3, 1/3), exact rationals for (0.8, 0.3, 0.3)
@pytest.mark.parametrize(
    "c, q",
    [
        ((0.5, 0.5, 0.5), (1 / 3, 1 / 3, 1 / 3)),
        ((0.5, 0.5, 1.0), (2 / 3, 0.0, 1 / 3)),
        ((0.8, 0.3, 0.3), (16 / 41, 37 / 123, 38 / 123)),
    ],
)
def test_optimal_frequencies_examples(c, q):
    got = optimal_frequencies(ConditionalTriple(*c))
    assert isinstance(got, FrequencyTriple)
    assert got.as_tuple() == pytest.approx(q, abs=1e-12)


def test_exact_rational_oracle_for_asymmetric_case():
    a, b, g = Fraction(4, 5), Fraction(3, 10), Fraction(3, 10)
    q = (Fraction(16, 41), Fraction(37, 123), Fraction(38, 123))
    assert sum(q) == 1
    assert a * q[1] + g * q[2] == Fraction(1, 3)
    assert b * q[0] + (1 - g) * q[2] == Fraction(1, 3)


def test_singular_strategy_is_not_optimal():
    assert optimal_frequencies(ConditionalTriple(1, 1, 1)) is NOT_OPTIMAL
    assert not NOT_OPTIMAL


def test_occupancy_examples():
    third = (1 / 3,) * 3
    w = occupancy(ConditionalTriple(0.5, 0.5, 0.5), FrequencyTriple(*third))
    assert w.as_tuple() == pytest.approx(third, abs=1e-15)
    w = occupancy(ConditionalTriple(0.2, 0.9, 0.4), FrequencyTriple(1, 0, 0))
    assert w.w0 == 0
    w = occupancy(ConditionalTriple(0.5, 0.5, 1), FrequencyTriple(2 / 3, 0, 1 / 3))
    assert w.as_tuple() == pytest.approx(third, abs=1e-15)


@settings(max_examples=300)
@given(cube_points)
def test_optimal_frequencies_equalise_shares(c):
    q = optimal_frequencies(c)
    if q is NOT_OPTIMAL:
        return
    assert abs(sum(q.as_tuple()) - 1) < 1e-10
    w = occupancy(c, q).as_tuple()
    assert max(abs(v - 1 / 3) for v in w) < 1e-10


def test_round_trip_on_sampled_cube():
    rng = np.random.default_rng(1)
    c = rng.random((100_000, 3))
    q, ok, _ = optimal_frequencies_array(c)
    from catdilemma.model import occupancy_array

    w = occupancy_array(c[ok], q[ok])
    assert ok.any()
    assert np.max(np.abs(w - 1 / 3)) < 1e-10
    assert np.max(np.abs(q[ok].sum(axis=1) - 1)) < 1e-10


def test_negative_rounding_is_clamped_on_edges():
    # (1/2, 1/2, 1) maps to the q1 = 0 edge; the zero must survive as 0
    q = optimal_frequencies(ConditionalTriple(0.5, 0.5, 1.0))
    assert q.q1 == 0.0


# ---------------------------------------------------------------------------
# classification


@pytest.mark.parametrize(
    "c, tag",
    [
        ((0.8, 0.3, 0.3), TransitivityClass.CYCLE_A),
        ((0.2, 0.7, 0.7), TransitivityClass.CYCLE_B),
        ((0.5, 0.5, 0.5), TransitivityClass.TRANSITIVE),
        ((0.8, 0.3, 0.5), TransitivityClass.TRANSITIVE),
        ((0.9, 0.9, 0.1), TransitivityClass.TRANSITIVE),
    ],
)
def test_classify(c, tag):
    assert classify(ConditionalTriple(*c)) is tag


@given(cube_points)
def test_flip_swaps_cycles(c):
    tag, flipped = classify(c), classify(c.flipped())
    swap = {
        TransitivityClass.CYCLE_A: TransitivityClass.CYCLE_B,
        TransitivityClass.CYCLE_B: TransitivityClass.CYCLE_A,
        TransitivityClass.TRANSITIVE: TransitivityClass.TRANSITIVE,
    }
    assert flipped is swap[tag]


def test_cycle_a_prefers_zero_over_two_over_one():
    c = ConditionalTriple(0.8, 0.3, 0.3)
    # 0 beats 2 in B1, 2 beats 1 in B0, 1 beats 0 in B2
    assert c.conditional(0, 1) > 0.5
    assert c.conditional(2, 0) > 0.5
    assert c.conditional(1, 2) > 0.5


# ---------------------------------------------------------------------------
# preimages


@pytest.mark.parametrize(
    "c, p",
    [
        ((1, 1, 1), e(0)),
        ((0.5, 0.5, 0.5), (1 / 8,) * 8),
        ((1, 1, 0.5), (0.5, 0, 0, 0, 0.5, 0, 0, 0)),
    ],
)
def test_product_preimage_examples(c, p):
    assert product_preimage(ConditionalTriple(*c)).p == pytest.approx(p, abs=1e-15)


@pytest.mark.parametrize(
    "p, x",
    [
        (e(0), e(0, 16)),
        ((1 / 8,) * 8, tuple(v for _ in range(8) for v in (1 / (2 * np.sqrt(2)), 0.0))),
        ((0.5, 0, 0, 0, 0.5, 0, 0, 0), tuple(1 / np.sqrt(2) if i in (0, 8) else 0 for i in range(16))),
    ],
)
def test_classical_embed_examples(p, x):
    s = ClassicalStrategy(p)
    emb = classical_embed(s)
    assert emb.x == pytest.approx(x, abs=1e-15)
    assert prequant_conditionals(emb).as_tuple() == pytest.approx(
        classical_conditionals(s).as_tuple(), abs=1e-12
    )


def test_surjectivity_witness():
    rng = np.random.default_rng(2)
    for a, b, g in rng.random((10_000, 3)):
        c = ConditionalTriple(a, b, g)
        p = product_preimage(c)
        assert classical_conditionals(p).as_tuple() == pytest.approx(c.as_tuple(), abs=1e-12)
        x = classical_embed(p)
        assert prequant_conditionals(x).as_tuple() == pytest.approx(c.as_tuple(), abs=1e-12)


# ---------------------------------------------------------------------------
# validation


def test_invalid_strategies_rejected():
    with pytest.raises(ValueError):
        ClassicalStrategy((0.5,) * 8)
    with pytest.raises(ValueError):
        ClassicalStrategy((-0.1, 1.1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        PrequantStrategy((1.0,) * 16)
    with pytest.raises(ValueError):
        QuantumStrategy(1, 1, 0)
    with pytest.raises(ValueError):
        ConditionalTriple(1.2, 0, 0)
    with pytest.raises(ValueError):
        FrequencyTriple(0.5, 0.6, 0)


def test_map_strategy():
    mp = map_strategy(QuantumStrategy(0, 0, -1))
    assert mp.model.value == "quant"
    assert mp.optimal and mp.q.as_tuple() == pytest.approx((2 / 3, 0, 1 / 3))
    assert mp.klass is TransitivityClass.TRANSITIVE
    assert not map_strategy(ClassicalStrategy(e(0))).optimal
