"""Point files: one row per sampled strategy.

CSV columns, in order::

    model, s0 .. s{D-1}, alpha, beta, gamma, d, q0, q1, q2, class

with D = 8 (classical), 16 (prequant) or 3 (quant).  Floats use the
shortest decimal that round-trips (``repr``); q0..q2 are empty when the
strategy is optimal for no frequency triple.  JSON output is one object per
line with the same keys, ``s`` holding the strategy list and q's ``null``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from catdilemma.model import (
    Model,
    TransitivityClass,
    conditionals_array,
    cycle_masks_array,
    optimal_frequencies_array,
)
from catdilemma.sampling import SampleBatch


@dataclass(frozen=True)
class PointRecord:
    model: Model
    strategy: tuple[float, ...]
    alpha: float
    beta: float
    gamma: float
    d: float
    q: tuple[float, float, float] | None
    klass: TransitivityClass


def header(model: Model | str) -> list[str]:
    model = Model(model)
    return (
        ["model"]
        + [f"s{i}" for i in range(model.dim)]
        + ["alpha", "beta", "gamma", "d", "q0", "q1", "q2", "class"]
    )


def records(batch: SampleBatch) -> list[PointRecord]:
    c = conditionals_array(batch.model, batch.strategies)
    q, ok, d = optimal_frequencies_array(c)
    cycle_a, cycle_b = cycle_masks_array(c)
    out = []
    for k in range(batch.n):
        tag = (
            TransitivityClass.CYCLE_A
            if cycle_a[k]
            else TransitivityClass.CYCLE_B
            if cycle_b[k]
            else TransitivityClass.TRANSITIVE
        )
        out.append(
            PointRecord(
                model=batch.model,
                strategy=tuple(batch.strategies[k].tolist()),
                alpha=float(c[k, 0]),
                beta=float(c[k, 1]),
                gamma=float(c[k, 2]),
                d=float(d[k]),
                q=tuple(q[k].tolist()) if ok[k] else None,
                klass=tag,
            )
        )
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def _row(r: PointRecord) -> list[str]:
    q = [_fmt(v) for v in r.q] if r.q is not None else ["", "", ""]
    return (
        [r.model.value]
        + [_fmt(v) for v in r.strategy]
        + [_fmt(r.alpha), _fmt(r.beta), _fmt(r.gamma), _fmt(r.d)]
        + q
        + [r.klass.value]
    )


def to_csv(recs: list[PointRecord], model: Model | str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header(model))
    for r in recs:
        w.writerow(_row(r))
    return buf.getvalue()


def to_jsonl(recs: list[PointRecord]) -> str:
    lines = []
    for r in recs:
        obj = {
            "model": r.model.value,
            "s": list(r.strategy),
            "alpha": r.alpha,
            "beta": r.beta,
            "gamma": r.gamma,
            "d": r.d,
            "q0": r.q[0] if r.q else None,
            "q1": r.q[1] if r.q else None,
            "q2": r.q[2] if r.q else None,
            "class": r.klass.value,
        }
        lines.append(json.dumps(obj, allow_nan=False))
    return "".join(line + "\n" for line in lines)


def parse_csv(text: str) -> list[PointRecord]:
    reader = csv.reader(io.StringIO(text))
    cols = next(reader)
    dim = len(cols) - 9
    out = []
    for row in reader:
        if len(row) != len(cols):
            raise ValueError(f"row width {len(row)} != header width {len(cols)}")
        model = Model(row[0])
        if model.dim != dim:
            raise ValueError(f"{model.value} rows need {model.dim} strategy columns")
        vals = row[1 : 1 + dim]
        a, b, g, d = (float(v) for v in row[1 + dim : 5 + dim])
        qs = row[5 + dim : 8 + dim]
        q = None if qs[0] == "" else tuple(float(v) for v in qs)
        out.append(
            PointRecord(
                model=model,
                strategy=tuple(float(v) for v in vals),
                alpha=a,
                beta=b,
                gamma=g,
                d=d,
                q=q,
                klass=TransitivityClass(row[-1]),
            )
        )
    return out


def surviving_points(recs: list[PointRecord], keep) -> np.ndarray:
    """(m, 3) array of q for optimal records accepted by ``keep(record)``."""
    qs = [r.q for r in recs if r.q is not None and keep(r)]
    return np.array(qs, dtype=float).reshape(-1, 3)

