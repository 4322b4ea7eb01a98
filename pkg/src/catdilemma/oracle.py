"""Exact existence test for optimal strategies at a given frequency triple.

For fixed q the optimality condition (all food shares 1/3) is two linear
equations in (alpha, beta, gamma):

    alpha*q1 + gamma*q2       = 1/3
    beta*q0  + (1-gamma)*q2   = 1/3

(the third share then follows).  Away from the triangle vertices the
solutions form a line ``point + t*direction``.  The classical question
"does the line meet a region of the cube" becomes an intersection of
intervals in t; the quantum question intersects the line with the sphere
(2a-1)^2 + (2b-1)^2 + (2g-1)^2 = 1 and classifies the (at most two) roots.

Everything below works on stacked q's so coverage maps can be evaluated in
one pass; :func:`classical_feasible` and friends wrap single points and
attach a re-verified witness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from catdilemma.model import (
    ClassFilter,
    ConditionalTriple,
    FrequencyTriple,
    Model,
    PrequantStrategy,
    classical_embed,
    classify,
    occupancy_array,
    prequant_conditionals,
    product_preimage,
)

EDGE_TOL = 1e-14
DISC_CUTOFF = 1e-14
# slack (in distance along the unit-speed line) for closed constraints, so a
# line grazing a cube edge or corner still counts as touching it
TOUCH_TOL = 1e-12

_THIRD = 1.0 / 3.0


class EmptySet(ValueError):
    """The optimality equations have no solution for this q."""


@dataclass(frozen=True)
class SolutionLine:
    """Solutions of the optimality condition: ``point + t * direction``, t real.

    ``point`` is the solution closest to the cube centre (1/2, 1/2, 1/2) and
    ``direction`` has unit length, so t is Euclidean distance along the line.
    """

    point: tuple[float, float, float]
    direction: tuple[float, float, float]

    def at(self, t: float) -> tuple[float, float, float]:
        return tuple(p + t * d for p, d in zip(self.point, self.direction))


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    witness: ConditionalTriple | None = None
    strategy: PrequantStrategy | None = None  # lifted witness, prequant model only
    residuals: dict | None = None


# ---------------------------------------------------------------------------
# vectorised core


def solution_lines(q: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked solution lines for stacked q's.

    The two optimality equations are planes ``n1.c = 1/3`` and
    ``n2.c = 1/3 - q2`` with normals n1 = (q1, 0, q2), n2 = (0, q0, -q2).
    Their intersection is returned as ``(point, direction, valid)``: the
    point nearest the cube centre and a unit direction.  The normals are
    parallel (or vanish) only at the triangle vertices, where the equations
    are inconsistent; those rows have ``valid == False``.  No q_j is ever
    divided by, so the edges q_j = 0 need no special treatment.
    """
    q = np.asarray(q, dtype=float).reshape(-1, 3)
    q0, q1, q2 = q.T
    zero = np.zeros_like(q0)
    n1 = np.stack([q1, zero, q2], axis=1)
    n2 = np.stack([zero, q0, -q2], axis=1)
    r1 = _THIRD - 0.5 * (q1 + q2)
    r2 = (_THIRD - q2) - 0.5 * (q0 - q2)
    g11 = np.einsum("ij,ij->i", n1, n1)
    g22 = np.einsum("ij,ij->i", n2, n2)
    g12 = np.einsum("ij,ij->i", n1, n2)
    det = g11 * g22 - g12 * g12  # = |n1 x n2|^2
    valid = det > EDGE_TOL**2
    safe = np.where(valid, det, 1.0)
    lam1 = (g22 * r1 - g12 * r2) / safe
    lam2 = (g11 * r2 - g12 * r1) / safe
    point = 0.5 + lam1[:, None] * n1 + lam2[:, None] * n2
    direction = np.cross(n1, n2) / np.sqrt(safe)[:, None]
    point[~valid] = np.nan
    direction[~valid] = np.nan
    return point, direction, valid


class _Intervals:
    """Vectorised intervals of t with per-endpoint openness."""

    def __init__(self, n: int):
        self.lo = np.full(n, -np.inf)
        self.hi = np.full(n, np.inf)
        self.lo_open = np.zeros(n, dtype=bool)
        self.hi_open = np.zeros(n, dtype=bool)

    def copy(self) -> _Intervals:
        out = _Intervals(0)
        out.lo, out.hi = self.lo.copy(), self.hi.copy()
        out.lo_open, out.hi_open = self.lo_open.copy(), self.hi_open.copy()
        return out

    def _cut_lo(self, v, is_open, mask):
        tighter = mask & ((v > self.lo) | ((v == self.lo) & is_open))
        self.lo = np.where(tighter, v, self.lo)
        self.lo_open = np.where(tighter, is_open, self.lo_open)

    def _cut_hi(self, v, is_open, mask):
        tighter = mask & ((v < self.hi) | ((v == self.hi) & is_open))
        self.hi = np.where(tighter, v, self.hi)
        self.hi_open = np.where(tighter, is_open, self.hi_open)

    def _kill(self, mask):
        self.lo = np.where(mask, np.inf, self.lo)
        self.hi = np.where(mask, -np.inf, self.hi)

    def require(self, base, direction, bound, side, strict=False):
        """Keep t with ``base + t*direction`` ``<=`` (side='le') or ``>=`` bound."""
        pos, neg, flat = direction > 0, direction < 0, direction == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (bound - base) / direction
        strict = np.broadcast_to(strict, base.shape)
        if side == "le":
            self._cut_hi(t, strict, pos)
            self._cut_lo(t, strict, neg)
            ok = np.where(strict, base < bound, base <= bound + TOUCH_TOL)
        else:
            self._cut_lo(t, strict, pos)
            self._cut_hi(t, strict, neg)
            ok = np.where(strict, base > bound, base >= bound - TOUCH_TOL)
        self._kill(flat & ~ok)

    def nonempty(self) -> np.ndarray:
        closed = ~self.lo_open & ~self.hi_open
        return (self.lo < self.hi) | (closed & (self.lo <= self.hi + TOUCH_TOL))

    def width(self) -> np.ndarray:
        return np.where(self.nonempty(), self.hi - self.lo, -np.inf)

    def midpoint(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(self.lo >= self.hi, self.lo, 0.5 * (self.lo + self.hi))


# sign patterns (coordinate, side) violating cycle A resp. cycle B
_NOT_A = ((0, "le"), (1, "ge"), (2, "ge"))
_NOT_B = ((0, "ge"), (1, "le"), (2, "le"))
_CYCLE_A = ((0, "ge"), (1, "le"), (2, "le"))
_CYCLE_B = ((0, "le"), (1, "ge"), (2, "ge"))


def _cube(base, direction) -> _Intervals:
    iv = _Intervals(len(base))
    for i in range(3):
        iv.require(base[:, i], direction[:, i], 0.0, "ge")
        iv.require(base[:, i], direction[:, i], 1.0, "le")
    return iv


def _classical_pieces(base, direction, klass: ClassFilter) -> list[_Intervals]:
    """Interval pieces whose union is the admissible t-set for ``klass``."""
    cube = _cube(base, direction)
    if klass is ClassFilter.ALL:
        return [cube]
    pieces = []
    if klass is ClassFilter.INTRANSITIVE:
        for pattern in (_CYCLE_A, _CYCLE_B):
            iv = cube.copy()
            for i, side in pattern:
                iv.require(base[:, i], direction[:, i], 0.5, side, strict=True)
            pieces.append(iv)
        return pieces
    # closed complement of the two open octants
    for i, side_i in _NOT_A:
        for j, side_j in _NOT_B:
            iv = cube.copy()
            iv.require(base[:, i], direction[:, i], 0.5, side_i)
            iv.require(base[:, j], direction[:, j], 0.5, side_j)
            pieces.append(iv)
    return pieces


def classical_feasible_array(
    q: np.ndarray, klass: ClassFilter | str
) -> tuple[np.ndarray, np.ndarray]:
    """Returns ``(feasible, witness)``; witness rows are NaN where infeasible."""
    klass = ClassFilter(klass)
    base, direction, valid = solution_lines(q)
    base, direction = np.nan_to_num(base), np.nan_to_num(direction)
    pieces = _classical_pieces(base, direction, klass)
    widths = np.stack([p.width() for p in pieces])
    best = np.argmax(widths, axis=0)
    rows = np.arange(len(base))
    feasible = valid & np.isfinite(widths[best, rows])
    t = np.stack([p.midpoint() for p in pieces])[best, rows]
    t = np.where(feasible, t, 0.0)
    witness = np.clip(base + t[:, None] * direction, 0.0, 1.0)
    witness[~feasible] = np.nan
    return feasible, witness


def sphere_roots(point: np.ndarray, direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Parameters t where each line meets the sphere; NaN where it does not.

    In centred coordinates u = 2c - 1 the line is ``u0 + 2 t d`` with u0
    orthogonal to the unit vector d, so |u|^2 = 1 reduces to the monic
    t^2 - (1 - |u0|^2)/4 = 0.  A discriminant within ``DISC_CUTOFF`` of zero
    is a tangency and yields the double root t = 0.
    """
    u0 = 2.0 * point - 1.0
    disc = (1.0 - np.einsum("ij,ij->i", u0, u0)) / 4.0
    real = disc >= -DISC_CUTOFF
    tangent = np.abs(disc) < DISC_CUTOFF
    root = np.sqrt(np.where(real & ~tangent, disc, 0.0))
    t1 = np.where(real, -root, np.nan)
    t2 = np.where(real, root, np.nan)
    return t1, t2


def _class_ok(c: np.ndarray, klass: ClassFilter) -> np.ndarray:
    if klass is ClassFilter.ALL:
        return np.all(np.isfinite(c), axis=-1)
    a, b, g = c.T
    intr = ((a > 0.5) & (b < 0.5) & (g < 0.5)) | ((a < 0.5) & (b > 0.5) & (g > 0.5))
    if klass is ClassFilter.INTRANSITIVE:
        return intr
    return np.all(np.isfinite(c), axis=-1) & ~intr


def quant_feasible_array(
    q: np.ndarray, klass: ClassFilter | str
) -> tuple[np.ndarray, np.ndarray]:
    klass = ClassFilter(klass)
    base, direction, valid = solution_lines(q)
    t1, t2 = sphere_roots(base, direction)
    base, direction = np.nan_to_num(base), np.nan_to_num(direction)
    c1 = np.clip(base + t1[:, None] * direction, 0.0, 1.0)
    c2 = np.clip(base + t2[:, None] * direction, 0.0, 1.0)
    ok1 = valid & np.isfinite(t1) & _class_ok(c1, klass)
    ok2 = valid & np.isfinite(t2) & _class_ok(c2, klass)
    witness = np.where(ok1[:, None], c1, c2)
    feasible = ok1 | ok2
    witness[~feasible] = np.nan
    return feasible, witness


def feasible_array(q: np.ndarray, model: Model | str, klass: ClassFilter | str):
    model = Model(model)
    if model is Model.QUANT:
        return quant_feasible_array(q, klass)
    return classical_feasible_array(q, klass)


# ---------------------------------------------------------------------------
# single-point API


def solution_line(q: FrequencyTriple) -> SolutionLine:
    point, direction, valid = solution_lines(np.array([q.as_tuple()]))
    if not valid[0]:
        raise EmptySet(f"no strategy equalises food shares at q={q.as_tuple()}")
    return SolutionLine(tuple(point[0].tolist()), tuple(direction[0].tolist()))


def witness_residuals(c: ConditionalTriple, q: FrequencyTriple) -> dict:
    w = occupancy_array(np.array(c.as_tuple()), np.array(q.as_tuple()))
    a, b, g = c.as_tuple()
    return {
        "occupancy": float(np.max(np.abs(w - _THIRD))),
        "sphere": abs((2 * a - 1) ** 2 + (2 * b - 1) ** 2 + (1 - 2 * g) ** 2 - 1.0),
    }


def _verdict(q: FrequencyTriple, model: Model, klass: ClassFilter) -> Verdict:
    feasible, witness = feasible_array(np.array([q.as_tuple()]), model, klass)
    if not feasible[0]:
        return Verdict(False)
    c = ConditionalTriple(*np.clip(witness[0], 0.0, 1.0).tolist())
    residuals = witness_residuals(c, q)
    residuals["class"] = classify(c).value
    strategy = None
    if model is Model.PREQUANT:
        strategy = classical_embed(product_preimage(c))
        lifted = prequant_conditionals(strategy)
        residuals["lift"] = max(abs(x - y) for x, y in zip(lifted.as_tuple(), c.as_tuple()))
    return Verdict(True, c, strategy, residuals)


def classical_feasible(q: FrequencyTriple, klass: ClassFilter | str = "all") -> Verdict:
    return _verdict(q, Model.CLASSICAL, ClassFilter(klass))


def prequant_feasible(q: FrequencyTriple, klass: ClassFilter | str = "all") -> Verdict:
    # same cube image as the classical model; the witness is lifted to S^15
    return _verdict(q, Model.PREQUANT, ClassFilter(klass))


def quant_feasible(q: FrequencyTriple, klass: ClassFilter | str = "all") -> Verdict:
    return _verdict(q, Model.QUANT, ClassFilter(klass))


def feasible(q: FrequencyTriple, model: Model | str, klass: ClassFilter | str = "all") -> Verdict:
    return _verdict(q, Model(model), ClassFilter(klass))
