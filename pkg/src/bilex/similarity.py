"""Similarity metrics over sparse context vectors.

Seven metrics are available through one table-driven entry point:
cityblock, cosine, dicemin, diceprod, jaccardmin, jaccardprod and lin.
cityblock is a distance (smaller is closer); the rest are similarities.
The weighted variant newdice_min scales each matched component by the
weight of the origin dictionary that contributed its column.

Absent keys count as zero. Every accumulation walks the two key sets in
ascending order, so scores are reproducible bit-for-bit however the
vectors were built. Metrics bounded by 1 are clamped there to keep the
bound exact against floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dictionaries import WeightSet
from .errors import ConfigError


@dataclass
class ContextVector:
    """Sparse nonnegative vector bound to one matrix column space."""

    values: dict
    space_id: str = ""
    _items: list = field(default=None, repr=False, compare=False)

    def sorted_items(self) -> list:
        if self._items is None:
            self._items = sorted(self.values.items())
        return self._items


class PartitionedVector(ContextVector):
    """Context vector over (origin dictionary, column) keyed components."""


METRICS = ("cityblock", "cosine", "dicemin", "diceprod",
           "jaccardmin", "jaccardprod", "lin")

# Metrics where a smaller value means a better match.
ASCENDING_METRICS = frozenset({"cityblock"})


def similarity(metric: str, x: ContextVector, y: ContextVector) -> float:
    """Score two vectors from the same column space with the named metric."""
    try:
        fn = _DISPATCH[metric.lower()]
    except KeyError:
        raise ConfigError(f"unknown metric {metric!r}; choose from {METRICS}")
    if x.space_id != y.space_id:
        raise ConfigError("vectors come from different column spaces: "
                          f"{x.space_id!r} vs {y.space_id!r}")
    return fn(x.sorted_items(), y.sorted_items())


def _cityblock(xs, ys) -> float:
    total = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            total += abs(vx - vy)
            i += 1
            j += 1
        elif kx < ky:
            total += abs(vx)
            i += 1
        else:
            total += abs(vy)
            j += 1
    while i < nx:
        total += abs(xs[i][1])
        i += 1
    while j < ny:
        total += abs(ys[j][1])
        j += 1
    return total


def _cosine(xs, ys) -> float:
    dot = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            dot += vx * vy
            i += 1
            j += 1
        elif kx < ky:
            i += 1
        else:
            j += 1
    sx2 = 0.0
    for _, v in xs:
        sx2 += v * v
    sy2 = 0.0
    for _, v in ys:
        sy2 += v * v
    den = math.sqrt(sx2) * math.sqrt(sy2)
    if den == 0.0:
        return 0.0
    value = dot / den
    return 1.0 if value > 1.0 else value  # Cauchy-Schwarz bound


def _min_and_sums(xs, ys):
    smin = 0.0
    sx = 0.0
    sy = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            smin += vx if vx < vy else vy
            sx += vx
            sy += vy
            i += 1
            j += 1
        elif kx < ky:
            sx += vx
            i += 1
        else:
            sy += vy
            j += 1
    while i < nx:
        sx += xs[i][1]
        i += 1
    while j < ny:
        sy += ys[j][1]
        j += 1
    return smin, sx, sy


def _dicemin(xs, ys) -> float:
    smin, sx, sy = _min_and_sums(xs, ys)
    den = sx + sy
    if den == 0.0:
        return 0.0
    value = 2.0 * smin / den
    return 1.0 if value > 1.0 else value


def _jaccardmin(xs, ys) -> float:
    smin = 0.0
    smax = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            if vx < vy:
                smin += vx
                smax += vy
            else:
                smin += vy
                smax += vx
            i += 1
            j += 1
        elif kx < ky:
            smax += vx
            i += 1
        else:
            smax += vy
            j += 1
    while i < nx:
        smax += xs[i][1]
        i += 1
    while j < ny:
        smax += ys[j][1]
        j += 1
    if smax == 0.0:
        return 0.0
    value = smin / smax
    return 1.0 if value > 1.0 else value


def _dot_and_squares(xs, ys):
    dot = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            dot += vx * vy
            i += 1
            j += 1
        elif kx < ky:
            i += 1
        else:
            j += 1
    sx2 = 0.0
    for _, v in xs:
        sx2 += v * v
    sy2 = 0.0
    for _, v in ys:
        sy2 += v * v
    return dot, sx2, sy2


def _diceprod(xs, ys) -> float:
    dot, sx2, sy2 = _dot_and_squares(xs, ys)
    den = sx2 + sy2
    return 0.0 if den == 0.0 else 2.0 * dot / den


def _jaccardprod(xs, ys) -> float:
    dot, sx2, sy2 = _dot_and_squares(xs, ys)
    den = sx2 + sy2 - dot
    return 0.0 if den == 0.0 else dot / den


def _lin(xs, ys) -> float:
    # Stored cells are never zero, so a matched key means both sides are
    # nonzero, which is exactly lin's numerator condition.
    shared = 0.0
    sx = 0.0
    sy = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            shared += vx + vy
            sx += vx
            sy += vy
            i += 1
            j += 1
        elif kx < ky:
            sx += vx
            i += 1
        else:
            sy += vy
            j += 1
    while i < nx:
        sx += xs[i][1]
        i += 1
    while j < ny:
        sy += ys[j][1]
        j += 1
    den = sx + sy
    if den == 0.0:
        return 0.0
    value = shared / den
    return 1.0 if value > 1.0 else value


_DISPATCH = {
    "cityblock": _cityblock,
    "cosine": _cosine,
    "dicemin": _dicemin,
    "diceprod": _diceprod,
    "jaccardmin": _jaccardmin,
    "jaccardprod": _jaccardprod,
    "lin": _lin,
}


def newdice_min(x: PartitionedVector, y: PartitionedVector,
                weights: WeightSet) -> float:
    """dicemin with each matched component scaled by its origin's weight.

    Keys are (origin dictionary id, column) pairs. The numerator weights
    every min(X_i, Y_i) by w(origin); the denominator stays the plain
    sum of both vectors, so with unit weights this is exactly dicemin on
    the flattened vectors. Weighted scores may exceed 1; only their
    ordering matters downstream.
    """
    if x.space_id != y.space_id:
        raise ConfigError("vectors come from different column spaces: "
                          f"{x.space_id!r} vs {y.space_id!r}")
    return _newdicemin_items(x.sorted_items(), y.sorted_items(),
                             weights.weights)


def _newdicemin_items(xs, ys, table: dict) -> float:
    num = 0.0
    sx = 0.0
    sy = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            try:
                w = table[kx[0]]
            except KeyError:
                raise ConfigError(f"no weight for dictionary {kx[0]!r}")
            num += (vx if vx < vy else vy) * w
            sx += vx
            sy += vy
            i += 1
            j += 1
        elif kx < ky:
            sx += vx
            i += 1
        else:
            sy += vy
            j += 1
    while i < nx:
        sx += xs[i][1]
        i += 1
    while j < ny:
        sy += ys[j][1]
        j += 1
    den = sx + sy
    if den == 0.0:
        return 0.0
    return 2.0 * num / den


def _newdicemin_wcol(xs, ys, wcol) -> float:
    # Same merge as _newdicemin_items, but keys are integer column ids
    # and weights come from a per-column array resolved up front.
    num = 0.0
    sx = 0.0
    sy = 0.0
    i = j = 0
    nx, ny = len(xs), len(ys)
    while i < nx and j < ny:
        kx, vx = xs[i]
        ky, vy = ys[j]
        if kx == ky:
            num += (vx if vx < vy else vy) * wcol[kx]
            sx += vx
            sy += vy
            i += 1
            j += 1
        elif kx < ky:
            sx += vx
            i += 1
        else:
            sy += vy
            j += 1
    while i < nx:
        sx += xs[i][1]
        i += 1
    while j < ny:
        sy += ys[j][1]
        j += 1
    den = sx + sy
    if den == 0.0:
        return 0.0
    return 2.0 * num / den
