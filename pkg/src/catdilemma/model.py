"""Strategy spaces of the Cat's Dilemma and the maps between them.

Three strategy spaces push forward onto the cube of conditional choice
probabilities, and from there onto the triangle of pair frequencies:

    classical  p  in the 7-simplex  --\
    prequant   x  on S^15           ----> (alpha, beta, gamma) in [0,1]^3 --> q in T2
    quant      x  on S^2            --/

Pairs are named by the food they lack: B0 = {1,2}, B1 = {0,2}, B2 = {0,1}.
The canonical cube coordinates are

    alpha = P(C0|B1),  beta = P(C1|B0),  gamma = P(C0|B2)

and the other three nonzero conditionals are their complements.

The ``*_array`` functions operate on stacked inputs (last axis = coordinates)
and are what the sampling and coverage code use; the dataclass API wraps them.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

D_TOL = 1e-12
Q_TOL = 1e-12

_SUM_TOL = 1e-12
_SIMPLEX_TOL = 1e-10

# f_k applied to the pairs (1,0), (2,0), (2,1).  Bit 2 of k picks from (1,0),
# bit 1 from (2,0), bit 0 from (2,1).
_CHOICES = np.array(
    [
        [0, 0, 1],
        [0, 0, 2],
        [0, 2, 1],
        [0, 2, 2],
        [1, 0, 1],
        [1, 0, 2],
        [1, 2, 1],
        [1, 2, 2],
    ],
    dtype=np.int8,
)
_CHOICES.setflags(write=False)

# index sets of p_k summed by each canonical conditional
_ALPHA_IDX = (0, 1, 4, 5)  # f_k(2,0) = 0
_BETA_IDX = (0, 2, 4, 6)  # f_k(2,1) = 1
_GAMMA_IDX = (0, 1, 2, 3)  # f_k(1,0) = 0


class Model(str, enum.Enum):
    CLASSICAL = "classical"
    PREQUANT = "prequant"
    QUANT = "quant"

    @property
    def dim(self) -> int:
        """Number of real coordinates of one strategy."""
        return {"classical": 8, "prequant": 16, "quant": 3}[self.value]


class TransitivityClass(str, enum.Enum):
    CYCLE_A = "intransitive_cycle_a"  # 0 > 2 > 1 > 0
    CYCLE_B = "intransitive_cycle_b"  # 0 > 1 > 2 > 0
    TRANSITIVE = "transitive"

    @property
    def intransitive(self) -> bool:
        return self is not TransitivityClass.TRANSITIVE


class ClassFilter(str, enum.Enum):
    """Coarse class selector used by the oracle, coverage and CLI."""

    ALL = "all"
    INTRANSITIVE = "intransitive"
    TRANSITIVE = "transitive"

    def admits(self, tag: TransitivityClass) -> bool:
        if self is ClassFilter.ALL:
            return True
        return tag.intransitive == (self is ClassFilter.INTRANSITIVE)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class ChoiceFunctionTable:
    """The eight deterministic choice functions f_0..f_7.

    ``entries[k]`` holds f_k applied to the pairs (1,0), (2,0), (2,1).
    """

    entries: np.ndarray

    def __getitem__(self, k: int) -> tuple[int, int, int]:
        return tuple(int(v) for v in self.entries[k])


@dataclass(frozen=True)
class ClassicalStrategy:
    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if len(p) != 8:
            raise ValueError(f"classical strategy needs 8 weights, got {len(p)}")
        if min(p) < 0.0 or abs(math.fsum(p) - 1.0) > _SUM_TOL:
            raise ValueError(f"not a probability vector: {p}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class PrequantStrategy:
    """Eight complex amplitudes stored as 16 reals (re, im interleaved)."""

    x: tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if len(x) != 16:
            raise ValueError(f"prequant strategy needs 16 coordinates, got {len(x)}")
        if abs(math.fsum(v * v for v in x) - 1.0) > _SUM_TOL:
            raise ValueError("prequant strategy is not a unit vector")
        object.__setattr__(self, "x", x)

    @property
    def amplitudes(self) -> tuple[complex, ...]:
        return tuple(complex(self.x[2 * i], self.x[2 * i + 1]) for i in range(8))


@dataclass(frozen=True)
class QuantumStrategy:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if abs(self.x1**2 + self.x2**2 + self.x3**2 - 1.0) > _SUM_TOL:
            raise ValueError("quantum strategy is not on the unit sphere")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class ConditionalTriple:
    """(alpha, beta, gamma) = (P(C0|B1), P(C1|B0), P(C0|B2))."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def conditional(self, k: int, j: int) -> float:
        """P(C_k | B_j): probability of choosing food k from the pair lacking j."""
        a, b, g = self.alpha, self.beta, self.gamma
        table = {
            (0, 1): a, (2, 1): 1.0 - a,
            (1, 0): b, (2, 0): 1.0 - b,
            (0, 2): g, (1, 2): 1.0 - g,
        }  # fmt: skip
        if not (0 <= k <= 2 and 0 <= j <= 2):
            raise IndexError((k, j))
        return table.get((k, j), 0.0)

    def matrix(self) -> np.ndarray:
        """M[k, j] = P(C_k | B_j); every column sums to one."""
        return np.array([[self.conditional(k, j) for j in range(3)] for k in range(3)])

    def flipped(self) -> ConditionalTriple:
        return ConditionalTriple(1.0 - self.alpha, 1.0 - self.beta, 1.0 - self.gamma)


@dataclass(frozen=True)
class FrequencyTriple:
    """Barycentric point of the pair-frequency triangle; q_j = P(B_j)."""

    q0: float
    q1: float
    q2: float

    def __post_init__(self):
        q = [float(self.q0), float(self.q1), float(self.q2)]
        if min(q) < 0.0 or abs(sum(q) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"not a point of the triangle: {q}")
        object.__setattr__(self, "q0", q[0])
        object.__setattr__(self, "q1", q[1])
        object.__setattr__(self, "q2", q[2])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.q0, self.q1, self.q2)


@dataclass(frozen=True)
class OccupancyTriple:
    """Long-run share of each food in the diet."""

    w0: float
    w1: float
    w2: float

    def __post_init__(self):
        w = (self.w0, self.w1, self.w2)
        if not all(-_SIMPLEX_TOL <= v <= 1.0 + _SIMPLEX_TOL for v in w):
            raise ValueError(f"occupancy outside [0, 1]: {w}")
        if abs(sum(w) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"occupancies do not sum to one: {w}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w0, self.w1, self.w2)


class NotOptimal:
    """Marker: the strategy is optimal for no frequency triple."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_OPTIMAL"

    def __bool__(self):
        return False


NOT_OPTIMAL = NotOptimal()

Strategy = Union[ClassicalStrategy, PrequantStrategy, QuantumStrategy]


@dataclass(frozen=True)
class MappedPoint:
    model: Model
    conditionals: ConditionalTriple
    d: float
    q: FrequencyTriple | NotOptimal
    klass: TransitivityClass

    @property
    def optimal(self) -> bool:
        return isinstance(self.q, FrequencyTriple)


# ---------------------------------------------------------------------------
# array kernels


def classical_conditionals_array(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.stack(
        [
            p[..., list(_ALPHA_IDX)].sum(axis=-1),
            p[..., list(_BETA_IDX)].sum(axis=-1),
            p[..., list(_GAMMA_IDX)].sum(axis=-1),
        ],
        axis=-1,
    )


def squared_moduli_array(x: np.ndarray) -> np.ndarray:
    """|a_k|^2 = x_{2k}^2 + x_{2k+1}^2 for stacked 16-vectors."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] ** 2 + x[..., 1::2] ** 2


def prequant_conditionals_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    sq = x * x
    gamma = sq[..., 0:8].sum(axis=-1)
    beta = sq[..., [0, 1, 4, 5, 8, 9, 12, 13]].sum(axis=-1)
    alpha = 1.0 - sq[..., [4, 5, 6, 7, 12, 13, 14, 15]].sum(axis=-1)
    return np.clip(np.stack([alpha, beta, gamma], axis=-1), 0.0, 1.0)


def quant_conditionals_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.stack(
        [(1.0 + x[..., 0]) / 2.0, (1.0 + x[..., 1]) / 2.0, (1.0 - x[..., 2]) / 2.0],
        axis=-1,
    )


def conditionals_array(model: Model | str, strategies: np.ndarray) -> np.ndarray:
    model = Model(model)
    if model is Model.CLASSICAL:
        return classical_conditionals_array(strategies)
    if model is Model.PREQUANT:
        return prequant_conditionals_array(strategies)
    return quant_conditionals_array(strategies)


def determinant_array(c: np.ndarray) -> np.ndarray:
    a, b, g = np.moveaxis(np.asarray(c, dtype=float), -1, 0)
    return a * (1.0 - b) * (1.0 - g) + (1.0 - a) * b * g


def frequency_numerators_array(c: np.ndarray) -> np.ndarray:
    """(n0, n1, n2) with q_j = n_j / d."""
    a, b, g = np.moveaxis(np.asarray(c, dtype=float), -1, 0)
    nb, ng, na = 1.0 - b, 1.0 - g, 1.0 - a
    n2 = (a + b) / 3.0 - a * b
    n1 = (g + nb) / 3.0 - g * nb
    n0 = (ng + na) / 3.0 - ng * na
    return np.stack([n0, n1, n2], axis=-1)


def optimal_frequencies_array(
    c: np.ndarray, d_tol: float = D_TOL, q_tol: float = Q_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised optimal frequencies.

    Returns ``(q, ok, d)``.  Rows with ``ok == False`` are NotOptimal and
    their ``q`` entries are NaN.
    """
    c = np.asarray(c, dtype=float)
    d = determinant_array(c)
    num = frequency_numerators_array(c)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        q = num / d[..., None]
    ok = (d > d_tol) & np.all(q >= -q_tol, axis=-1)
    q = np.where(np.abs(q) < q_tol, 0.0, q)
    q = np.where(ok[..., None], q, np.nan)
    return q, ok, d


def occupancy_array(c: np.ndarray, q: np.ndarray) -> np.ndarray:
    a, b, g = np.moveaxis(np.asarray(c, dtype=float), -1, 0)
    q0, q1, q2 = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    w0 = a * q1 + g * q2
    w1 = b * q0 + (1.0 - g) * q2
    w2 = (1.0 - b) * q0 + (1.0 - a) * q1
    return np.stack([w0, w1, w2], axis=-1)


def cycle_masks_array(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks (cycle_a, cycle_b); strict inequalities, so 1/2 is neither."""
    a, b, g = np.moveaxis(np.asarray(c, dtype=float), -1, 0)
    cycle_a = (a > 0.5) & (b < 0.5) & (g < 0.5)
    cycle_b = (a < 0.5) & (b > 0.5) & (g > 0.5)
    return cycle_a, cycle_b


def intransitive_array(c: np.ndarray) -> np.ndarray:
    cycle_a, cycle_b = cycle_masks_array(c)
    return cycle_a | cycle_b


def class_filter_mask(c: np.ndarray, klass: ClassFilter | str) -> np.ndarray:
    klass = ClassFilter(klass)
    c = np.asarray(c, dtype=float)
    if klass is ClassFilter.ALL:
        return np.ones(c.shape[:-1], dtype=bool)
    intr = intransitive_array(c)
    return intr if klass is ClassFilter.INTRANSITIVE else ~intr


# ---------------------------------------------------------------------------
# typed API


def choice_table() -> ChoiceFunctionTable:
    return ChoiceFunctionTable(_CHOICES)


def classical_conditionals(s: ClassicalStrategy) -> ConditionalTriple:
    p = s.p
    alpha = math.fsum(p[k] for k in _ALPHA_IDX)
    beta = math.fsum(p[k] for k in _BETA_IDX)
    gamma = math.fsum(p[k] for k in _GAMMA_IDX)
    return ConditionalTriple(*(min(max(v, 0.0), 1.0) for v in (alpha, beta, gamma)))


def prequant_conditionals(s: PrequantStrategy) -> ConditionalTriple:
    return ConditionalTriple(*prequant_conditionals_array(np.array(s.x)).tolist())


def quant_conditionals(s: QuantumStrategy) -> ConditionalTriple:
    return ConditionalTriple(*quant_conditionals_array(np.array(s.as_tuple())).tolist())


def conditionals(s: Strategy) -> ConditionalTriple:
    if isinstance(s, ClassicalStrategy):
        return classical_conditionals(s)
    if isinstance(s, PrequantStrategy):
        return prequant_conditionals(s)
    if isinstance(s, QuantumStrategy):
        return quant_conditionals(s)
    raise TypeError(f"unknown strategy type {type(s).__name__}")


def model_of(s: Strategy) -> Model:
    return {
        ClassicalStrategy: Model.CLASSICAL,
        PrequantStrategy: Model.PREQUANT,
        QuantumStrategy: Model.QUANT,
    }[type(s)]


def z_to_sphere(z: complex | None) -> QuantumStrategy:
    """Map the state |z> = |0>_2 + z|1>_2 to its point on S^2.

    ``z=None`` or an infinite ``z`` denotes the point at infinity (|1>_2).
    The chart is the one for which the three basis read-outs of |z> give
    P(C0|B2) = (1-x3)/2, P(C0|B1) = (1+x1)/2 and P(C1|B0) = (1+x2)/2.
    """
    if z is None or cmath.isinf(z):
        return QuantumStrategy(0.0, 0.0, 1.0)
    z = complex(z)
    r2 = abs(z) ** 2
    den = 1.0 + r2
    return QuantumStrategy(2.0 * z.real / den, 2.0 * z.imag / den, (r2 - 1.0) / den)


def determinant_d(c: ConditionalTriple) -> float:
    return float(determinant_array(np.array(c.as_tuple())))


def optimal_frequencies(c: ConditionalTriple) -> FrequencyTriple | NotOptimal:
    """Pair frequencies for which ``c`` equalises the three food shares.

    Returns NOT_OPTIMAL when the conditional matrix is singular or the
    candidate frequencies leave the triangle.
    """
    q, ok, _ = optimal_frequencies_array(np.array(c.as_tuple()))
    if not ok:
        return NOT_OPTIMAL
    return FrequencyTriple(*q.tolist())


def occupancy(c: ConditionalTriple, q: FrequencyTriple) -> OccupancyTriple:
    w = occupancy_array(np.array(c.as_tuple()), np.array(q.as_tuple()))
    return OccupancyTriple(*w.tolist())


def classify(c: ConditionalTriple) -> TransitivityClass:
    cycle_a, cycle_b = cycle_masks_array(np.array(c.as_tuple()))
    if cycle_a:
        return TransitivityClass.CYCLE_A
    if cycle_b:
        return TransitivityClass.CYCLE_B
    return TransitivityClass.TRANSITIVE


def product_preimage(c: ConditionalTriple) -> ClassicalStrategy:
    """A classical mixture whose conditionals are exactly ``c``.

    The three pair choices are drawn independently: 0 from (1,0) with
    probability gamma, 0 from (2,0) with probability alpha, 1 from (2,1)
    with probability beta.
    """
    a, b, g = c.as_tuple()
    p = []
    for k in range(8):
        w = (1.0 - g) if k & 4 else g
        w *= (1.0 - a) if k & 2 else a
        w *= (1.0 - b) if k & 1 else b
        p.append(w)
    return ClassicalStrategy(tuple(p))


def classical_embed(s: ClassicalStrategy) -> PrequantStrategy:
    x = [0.0] * 16
    for k, pk in enumerate(s.p):
        x[2 * k] = math.sqrt(pk)
    return PrequantStrategy(tuple(x))


def map_strategy(s: Strategy) -> MappedPoint:
    """Push a strategy all the way to the triangle."""
    c = conditionals(s)
    return MappedPoint(
        model=model_of(s),
        conditionals=c,
        d=determinant_d(c),
        q=optimal_frequencies(c),
        klass=classify(c),
    )
