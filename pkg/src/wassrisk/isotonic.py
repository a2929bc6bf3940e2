"""Least-squares projection onto the non-decreasing cone.

Pool-adjacent-violators in O(n): scan left to right keeping a stack of
blocks; whenever the newest block mean drops below its neighbour, merge.
Block levels are then recomputed from scratch with exact summation so
the output does not depend on the merge order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class IsotonicResult:
    """Projection output: the vector plus its block structure.

    blocks are (start, end, level) with end exclusive; within a block the
    projection is constant and equals the block average of the input.
    """

    projected: np.ndarray
    blocks: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        p = np.asarray(self.projected, dtype=float).copy()
        p.setflags(write=False)
        object.__setattr__(self, "projected", p)


def _finalize(values: np.ndarray, bounds: list[tuple[int, int]]) -> IsotonicResult:
    # Canonical levels: exactly rounded block sums, independent of how
    # the blocks were formed.  Merge any ulp-level inversion that exact
    # re-summation uncovers so the output is weakly increasing, exactly.
    spans = list(bounds)
    while True:
        levels = [math.fsum(values[s:e]) / (e - s) for s, e in spans]
        bad = next((j for j in range(len(levels) - 1) if levels[j] > levels[j + 1]), None)
        if bad is None:
            break
        spans[bad] = (spans[bad][0], spans[bad + 1][1])
        del spans[bad + 1]
    out = np.empty(values.size, dtype=float)
    blocks = []
    for (s, e), lv in zip(spans, levels):
        out[s:e] = lv
        blocks.append((s, e, lv))
    return IsotonicResult(projected=out, blocks=tuple(blocks))


def isotonic_project(v) -> IsotonicResult:
    """Project a vector onto the non-decreasing cone in the 1/n metric.

    Already-monotone input is returned bit for bit (every block is a
    singleton).  Ties form valid monotone runs and are never perturbed.
    """
    values = np.asarray(v, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("cannot project an empty vector")
    if not np.all(np.isfinite(values)):
        raise ValueError("isotonic projection requires finite input")
    if values.size == 1 or np.all(np.diff(values) >= 0.0):
        blocks = tuple((i, i + 1, float(values[i])) for i in range(values.size))
        return IsotonicResult(projected=values.copy(), blocks=blocks)

    starts: list[int] = []
    ends: list[int] = []
    totals: list[float] = []
    means: list[float] = []
    for i, x in enumerate(values):
        starts.append(i)
        ends.append(i + 1)
        totals.append(float(x))
        means.append(float(x))
        while len(starts) > 1 and means[-2] > means[-1]:
            totals[-2] += totals[-1]
            ends[-2] = ends[-1]
            means[-2] = totals[-2] / (ends[-2] - starts[-2])
            starts.pop(), ends.pop(), totals.pop(), means.pop()
    return _finalize(values, list(zip(starts, ends)))


def projection_gap(v, result: IsotonicResult) -> float:
    """Squared L2 distance (1/n measure) between input and projection."""
    values = np.asarray(v, dtype=float).ravel()
    if values.size != result.projected.size:
        raise ValueError("projection_gap: size mismatch")
    return float(np.mean((values - result.projected) ** 2))
