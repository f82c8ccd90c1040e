"""Box-counting estimates for attractors, intersections and orbit closures.

Counts come from exact level covers; only the final least-squares fit of
log(count) against log(1/scale) is done in floating point.  The fit uses
the deepest half of the supplied depths.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import algebraic as A
from .encoding import fraction_text
from .errors import CommensurableBases, PrefixTooShort
from .selfsimilar import (
    CentralCantor,
    HomogeneousIFS,
    IntervalCover,
    Periodic,
    level_cover,
)


@dataclass
class DimEstimate:
    scales: list
    counts: list
    slope: float
    residual: float
    empty: bool = False

    @property
    def boxes_deepest(self) -> int:
        return self.counts[-1] if self.counts else 0


def _fit(depths: Sequence[int], counts: Sequence[int], log_inv_ratio: float) -> DimEstimate:
    depths, counts = list(depths), list(counts)
    if counts and counts[-1] == 0:
        return DimEstimate(depths, counts, 0.0, 0.0, empty=True)
    keep = math.ceil(len(depths) / 2)
    xs = np.array([d * log_inv_ratio for d in depths[-keep:]], dtype=float)
    ys = np.array([math.log(c) for c in counts[-keep:]], dtype=float)
    if len(xs) == 1:
        slope, residual = ys[0] / xs[0] if xs[0] else 0.0, 0.0
    else:
        coeffs, res, *_ = np.polyfit(xs, ys, 1, full=True)
        slope = float(coeffs[0])
        residual = float(res[0]) if len(res) else 0.0
    slope = min(max(slope, 0.0), 1.0)
    return DimEstimate(depths, counts, slope, residual)


def _check_depths(depths) -> list[int]:
    depths = sorted(set(int(d) for d in depths))
    if len(depths) < 3 or depths[0] < 0:
        raise ValueError("need at least three non-negative depths")
    return depths


def _box_size(ifs: HomogeneousIFS, n: int) -> float:
    return float(ifs.ratio) ** n * float(ifs.width)


def _boxes(cover: IntervalCover, delta: float):
    """Split each cover interval into boxes of length about delta."""
    for a, b in cover.intervals:
        k = max(1, round(float(b - a) / delta)) if delta > 0 else 1
        step = (b - a) / k
        for j in range(k):
            yield a + j * step, a + (j + 1) * step


def box_count(cover: IntervalCover, delta: float) -> int:
    return sum(1 for _ in _boxes(cover, delta))


def attractor_dim_estimate(ifs: HomogeneousIFS, depths, budget: int | None = None) -> DimEstimate:
    depths = _check_depths(depths)
    counts = [box_count(level_cover(ifs, n, budget), _box_size(ifs, n)) for n in depths]
    return _fit(depths, counts, -math.log(float(ifs.ratio)))


def _rational_bounds(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(x)
    return A.enclose(x, Fraction(1, 2 ** 80))


def image_cover(F: HomogeneousIFS, lam, c, m: int, budget: int | None = None) -> IntervalCover:
    """A rational cover of lam * cover_m(F) + c, rounded outward if lam or c is irrational."""
    lam_lo, lam_hi = _rational_bounds(lam)
    c_lo, c_hi = _rational_bounds(c)
    out = []
    for a, b in level_cover(F, m, budget).intervals:
        ends = [l * x for l in (lam_lo, lam_hi) for x in (a, b)]
        out.append((min(ends) + c_lo, max(ends) + c_hi))
    return IntervalCover(out, m, "image")


def matched_image_depth(E: HomogeneousIFS, F: HomogeneousIFS, lam, n: int) -> int:
    """Smallest m with |lam| beta**m width(F) <= alpha**n width(E)."""
    target = _box_size(E, n)
    size = abs(float(lam)) * float(F.width)
    m = 0
    while size * float(F.ratio) ** m > target * (1 + 1e-12):
        m += 1
    return m


def intersection_count(E: HomogeneousIFS, F: HomogeneousIFS, lam, c, n: int,
                       budget: int | None = None) -> int:
    """Number of depth-n boxes of E's cover that meet the matched image cover of F."""
    image = image_cover(F, lam, c, matched_image_depth(E, F, lam, n), budget)
    return sum(1 for lo, hi in _boxes(level_cover(E, n, budget), _box_size(E, n))
               if image.meets(lo, hi))


def intersection_dim_estimate(E: HomogeneousIFS, F: HomogeneousIFS, lam, c, depths,
                              budget: int | None = None) -> DimEstimate:
    if A.exact_sign(lam) == 0:
        raise ValueError("lambda must be nonzero")
    depths = _check_depths(depths)
    counts = [intersection_count(E, F, lam, c, n, budget) for n in depths]
    return _fit(depths, counts, -math.log(float(E.ratio)))


# -- the Furstenberg-type sweep ------------------------------------------------------------

def _primitive_base(p: int) -> int:
    """Smallest b with p = b**k."""
    for k in range(p.bit_length(), 1, -1):
        b = round(p ** (1 / k))
        for cand in (b - 1, b, b + 1):
            if cand > 1 and cand ** k == p:
                return _primitive_base(cand)
    return p


def _integer_base(ifs: HomogeneousIFS) -> int:
    inv = 1 / A.as_fraction(ifs.ratio) if A.is_exact_rational(ifs.ratio) else None
    if inv is None or Fraction(inv).denominator != 1:
        raise ValueError("a Cantor p-set needs ratio 1/p for an integer p")
    return int(inv)


def check_incommensurable(p: int, q: int) -> None:
    if _primitive_base(p) == _primitive_base(q):
        raise CommensurableBases(f"{p} and {q} are powers of {_primitive_base(p)}; log p/log q is rational")


@dataclass
class SweepCell:
    lam: Fraction
    c: Fraction
    estimate: DimEstimate | None

    @property
    def rejected(self) -> bool:
        return self.estimate is None


@dataclass
class SweepResult:
    cells: list = field(default_factory=list)
    depth: int = 0

    @property
    def accepted(self):
        return [cell for cell in self.cells if not cell.rejected]

    @property
    def max_cell(self) -> SweepCell | None:
        best = None
        for cell in self.accepted:
            if best is None or cell.estimate.slope > best.estimate.slope:
                best = cell
        return best

    @property
    def max_slope(self) -> float:
        best = self.max_cell
        return best.estimate.slope if best else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda", "c", "slope", "residual", "boxes_deepest"])
        for cell in self.cells:
            if cell.rejected:
                writer.writerow([fraction_text(cell.lam), fraction_text(cell.c), "rejected", "", ""])
            else:
                est = cell.estimate
                writer.writerow([fraction_text(cell.lam), fraction_text(cell.c),
                                 repr(est.slope), repr(est.residual), est.boxes_deepest])
        return buf.getvalue()

    def summary(self) -> dict:
        best = self.max_cell
        return {
            "depth": self.depth,
            "cells": len(self.cells),
            "rejected": len(self.cells) - len(self.accepted),
            "max_slope": self.max_slope,
            "argmax": None if best is None else {"lambda": fraction_text(best.lam),
                                                  "c": fraction_text(best.c)},
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def default_grid(count: int, lo, hi) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(k, count - 1) for k in range(count)]


def _sweep_cell(args):
    E, F, lam, c, depths = args
    if lam == 0:
        return SweepCell(lam, c, None)
    return SweepCell(lam, c, intersection_dim_estimate(E, F, lam, c, depths))


def furstenberg_sweep(p_set: HomogeneousIFS, q_set: HomogeneousIFS, lambda_grid, c_grid,
                      depth: int, jobs: int = 1) -> SweepResult:
    """Intersection slopes of p_set with lam * q_set + c over a grid of (lam, c).

    Cells with lam = 0 are rejected (the map would not be invertible).
    """
    check_incommensurable(_integer_base(p_set), _integer_base(q_set))
    depths = list(range(1, depth + 1))
    tasks = [(p_set, q_set, Fraction(lam), Fraction(c), depths)
             for lam in lambda_grid for c in c_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_sweep_cell, tasks, chunksize=8))
    else:
        cells = [_sweep_cell(t) for t in tasks]
    return SweepResult(cells, depth)


# -- orbit closures ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitPrefix:
    """A finite binary prefix of a one-sided sequence."""

    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("prefix must be binary")


def factors(z, n: int) -> set[tuple]:
    """Length-n words seen in some shift of z."""
    if isinstance(z, Periodic):
        pat = z.pattern
        reps = (n // len(pat)) + 2
        long = pat * reps
        return {long[i:i + n] for i in range(len(pat))}
    bits = z.bits
    return {bits[i:i + n] for i in range(len(bits) - n + 1)}


def orbit_closure_dim_estimate(alpha, z, depths) -> DimEstimate:
    """Box estimate for the coding image of the shift-orbit closure of z.

    At depth n the closure meets exactly the cylinders of the length-n
    factors of z, each of size alpha**n.
    """
    depths = _check_depths(depths)
    if isinstance(z, ExplicitPrefix) and len(z.bits) < 4 * depths[-1]:
        raise PrefixTooShort(f"need at least {4 * depths[-1]} bits, got {len(z.bits)}")
    CentralCantor(alpha)  # validates alpha
    counts = [len(factors(z, n)) for n in depths]
    return _fit(depths, counts, -math.log(float(alpha)))


def all_words_prefix(length: int) -> ExplicitPrefix:
    """Concatenation of all binary words by length then lexicographically."""
    out = []
    k = 1
    while len(out) < length:
        for w in range(2 ** k):
            out.extend(int(b) for b in format(w, f"0{k}b"))
        k += 1
    return ExplicitPrefix(out[:length])


def fibonacci_prefix(length: int) -> ExplicitPrefix:
    a, b = "0", "01"
    while len(b) < length:
        a, b = b, b + a
    return ExplicitPrefix(b[:length])
