"""Homogeneous self-similar sets on the line.

An IFS {r x + a_i} is stored with its ratio and digits either as exact
Fractions or as elements of one real number field.  Level-n covers are the
unions of the l**n cylinder images of the convex hull; they are exact for
rational data and outward-rounded dyadic over-approximations otherwise.

Words are 0-based: letter i selects the i-th smallest digit.
"""

from __future__ import annotations

import bisect
import csv
import io
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv

from . import algebraic as A
from .encoding import encode_real, fraction_text
from .errors import DepthBudgetExceeded, InvalidLetter, NotApplicable

DEFAULT_DEPTH_BUDGET = 2 ** 20
BUDGET_ENV = "CANTOREMBED_DEPTH_BUDGET"


def default_depth_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_DEPTH_BUDGET


class HomogeneousIFS:
    """The maps x -> ratio*x + a for a in ``digits``."""

    def __init__(self, ratio, digits: Sequence, *, name: str | None = None):
        values = A.lift_all(ratio, *digits)
        ratio, digits = values[0], values[1:]
        if not (A.compare(ratio, 0) > 0 and A.compare(ratio, 1) < 0):
            raise ValueError("ratio must lie strictly between 0 and 1")
        if len(digits) < 2:
            raise ValueError("an IFS needs at least two maps")
        digits = sorted(digits, key=_SortKey)
        for x, y in zip(digits, digits[1:]):
            if A.compare(x, y) == 0:
                raise ValueError("digits must be distinct")
        self.ratio = ratio
        self.digits = tuple(digits)
        self.field = A.common_field(values)
        self.name = name
        self.hull = (digits[0] / (1 - ratio), digits[-1] / (1 - ratio))

    @property
    def size(self) -> int:
        return len(self.digits)

    @property
    def is_rational(self) -> bool:
        return self.field is None

    @property
    def width(self):
        return self.hull[1] - self.hull[0]

    def __eq__(self, other):
        if not isinstance(other, HomogeneousIFS):
            return NotImplemented
        return (self.size == other.size and A.compare(self.ratio, other.ratio) == 0
                and all(A.compare(x, y) == 0 for x, y in zip(self.digits, other.digits)))

    def __hash__(self):
        if self.is_rational:
            return hash((self.ratio, self.digits))
        return hash(self.size)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<HomogeneousIFS{label} ratio={float(self.ratio):.6g} digits={[float(d) for d in self.digits]}>"

    def reflected(self) -> "HomogeneousIFS":
        """The mirror image x -> (hull_lo + hull_hi) - x of the attractor."""
        top, bottom = self.digits[-1], self.digits[0]
        return HomogeneousIFS(self.ratio, [top + bottom - d for d in self.digits])

    def to_json(self) -> dict:
        return {
            "ratio": encode_real(self.ratio),
            "digits": [encode_real(d) for d in self.digits],
            "hull": [encode_real(h) for h in self.hull],
        }


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return A.compare(self.v, other.v) < 0


def CentralCantor(rho, *, strict: bool = True) -> HomogeneousIFS:
    """C_rho, the attractor of {rho x, rho x + 1 - rho}; its hull is [0, 1]."""
    (rho,) = A.lift_all(rho)
    if strict and not (A.compare(rho, 0) > 0 and A.compare(rho, Fraction(1, 2)) < 0):
        raise ValueError("a central Cantor set needs 0 < rho < 1/2")
    ifs = HomogeneousIFS(rho, [Fraction(0), 1 - rho], name="central")
    return ifs


def is_central(ifs: HomogeneousIFS) -> bool:
    return (ifs.size == 2 and A.compare(ifs.digits[0], 0) == 0
            and A.compare(ifs.digits[1], 1 - ifs.ratio) == 0)


def cantor_p_set(p: int, digits: Iterable[int]) -> HomogeneousIFS:
    """Points of [0, 1] whose base-p digits all lie in ``digits``."""
    p = int(p)
    digits = sorted(set(int(d) for d in digits))
    if p < 2 or len(digits) < 2 or digits[0] < 0 or digits[-1] >= p:
        raise ValueError("need p >= 2 and at least two digits in 0..p-1")
    return HomogeneousIFS(Fraction(1, p), [Fraction(d, p) for d in digits], name=f"base{p}")


# -- words and cylinders ---------------------------------------------------------

def parse_word(word, size: int) -> tuple[int, ...]:
    if isinstance(word, str):
        letters = tuple(int(ch) for ch in word if not ch.isspace() and ch != ",")
    else:
        letters = tuple(int(ch) for ch in word)
    for letter in letters:
        if not 0 <= letter < size:
            raise InvalidLetter(f"letter {letter} outside 0..{size - 1}")
    return letters


def word_offset(ifs: HomogeneousIFS, word) -> object:
    """Translation part of phi_word = phi_w0 o phi_w1 o ..."""
    word = parse_word(word, ifs.size)
    total = Fraction(0)
    scale = Fraction(1)
    for letter in word:
        total = total + scale * ifs.digits[letter]
        scale = scale * ifs.ratio
    return total


def cylinder_interval(ifs: HomogeneousIFS, word):
    """Exact interval phi_word(hull)."""
    word = parse_word(word, ifs.size)
    offset = word_offset(ifs, word)
    scale = ifs.ratio ** len(word) if word else Fraction(1)
    return offset + scale * ifs.hull[0], offset + scale * ifs.hull[1]


# -- covers ----------------------------------------------------------------------

def merge_intervals(intervals: Iterable[tuple]) -> list[tuple[Fraction, Fraction]]:
    """Sort closed intervals and merge any that overlap or touch."""
    out: list[list] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


class IntervalCover:
    """Sorted, pairwise disjoint closed intervals with rational endpoints."""

    __slots__ = ("intervals", "level", "source", "exact", "_lefts")

    def __init__(self, intervals: Iterable[tuple] = (), level: int = 0, source: str = "",
                 exact: bool = True, *, merged: bool = False):
        ivs = [(Fraction(a), Fraction(b)) for a, b in intervals]
        for a, b in ivs:
            if a > b:
                raise ValueError(f"reversed interval [{a}, {b}]")
        self.intervals = tuple(ivs if merged else merge_intervals(ivs))
        self.level = level
        self.source = source
        self.exact = exact
        self._lefts = [a for a, _ in self.intervals]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __eq__(self, other):
        return isinstance(other, IntervalCover) and self.intervals == other.intervals

    def __repr__(self):
        return f"IntervalCover(level={self.level}, {len(self)} intervals, source={self.source!r})"

    @property
    def hull(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def total_length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def locate(self, x: Fraction) -> int | None:
        """Index of the interval containing the rational ``x``, if any."""
        k = bisect.bisect_right(self._lefts, x) - 1
        if k >= 0 and x <= self.intervals[k][1]:
            return k
        return None

    def contains(self, x: Fraction) -> bool:
        return self.locate(Fraction(x)) is not None

    def contains_interval(self, lo: Fraction, hi: Fraction) -> bool:
        k = self.locate(lo)
        return k is not None and hi <= self.intervals[k][1]

    def meets(self, lo: Fraction, hi: Fraction) -> bool:
        """Does [lo, hi] intersect the cover?"""
        k = bisect.bisect_right(self._lefts, hi) - 1
        return k >= 0 and self.intervals[k][1] >= lo

    def gap_around(self, x: Fraction):
        """The open gap (possibly unbounded, as None) containing ``x``, or None if covered."""
        k = bisect.bisect_right(self._lefts, x) - 1
        if k >= 0 and x <= self.intervals[k][1]:
            return None
        left = self.intervals[k][1] if k >= 0 else None
        right = self.intervals[k + 1][0] if k + 1 < len(self.intervals) else None
        return left, right

    def gap_for_interval(self, lo: Fraction, hi: Fraction):
        """The gap containing all of [lo, hi], or None if [lo, hi] meets the cover."""
        if self.meets(lo, hi):
            return None
        return self.gap_around(lo)

    def subset_of(self, other: "IntervalCover") -> bool:
        return all(other.contains_interval(a, b) for a, b in self.intervals)

    def intersect(self, other: "IntervalCover") -> "IntervalCover":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalCover(out, self.level, self.source, self.exact and other.exact)

    def min_gap(self) -> Fraction | None:
        g = gaps(self)
        return min((b - a for a, b in g), default=None)

    def to_csv_rows(self):
        return [(self.level, fraction_text(a), fraction_text(b)) for a, b in self.intervals]


def gaps(cover: IntervalCover) -> list[tuple[Fraction, Fraction]]:
    """Bounded open gaps between consecutive intervals of the cover."""
    ivs = cover.intervals
    return [(ivs[k][1], ivs[k + 1][0]) for k in range(len(ivs) - 1)]


def _rational_cover_levels(ifs: HomogeneousIFS, n: int, budget: int):
    """Yield exact covers for levels 0..n using integer numerators."""
    r = ifs.ratio
    p, q = r.numerator, r.denominator
    h0, h1 = ifs.hull
    den = 1
    for v in (h0, h1, *ifs.digits):
        den = den * v.denominator // _gcd(den, v.denominator)
    pairs = [(int(h0 * den), int(h1 * den))]
    yield 0, den, pairs
    for level in range(1, n + 1):
        if len(pairs) * ifs.size > budget:
            raise DepthBudgetExceeded(
                f"level {level} needs {len(pairs) * ifs.size} cylinders (budget {budget})")
        den *= q
        shifts = [int(d * den) for d in ifs.digits]
        images = sorted((p * lo + s, p * hi + s) for s in shifts for lo, hi in pairs)
        pairs = _merge_int(images)
        yield level, den, pairs


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _merge_int(pairs):
    out = []
    for lo, hi in pairs:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _intersect_int(a, b):
    """Intersection of two sorted, disjoint lists of closed integer intervals."""
    out, i, j = [], 0, 0
    while i < len(a) and j < len(b):
        lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _algebraic_cover_levels(ifs: HomogeneousIFS, n: int, budget: int):
    """Yield outward-rounded dyadic covers for levels 0..n.

    Every cylinder phi_I(hull) lies inside the returned cover; the excess
    at each endpoint is at most ratio**(n + 4) * width(hull).
    """
    r_lo, r_hi = A.enclose(ifs.ratio, Fraction(1, 2 ** 20))
    W_lo = A.enclose(ifs.width, Fraction(1, 2 ** 20))[0]
    target = r_lo ** (n + 4) * W_lo
    delta = (1 - r_hi) * target / 8
    hull_lo, hull_hi = A.enclose(ifs.hull[0], target / 8), A.enclose(ifs.hull[1], target / 8)
    mag = max(abs(hull_lo[0]), abs(hull_hi[1]), Fraction(1))
    r_lo, r_hi = A.enclose(ifs.ratio, delta / (4 * mag))
    digit_iv = [A.enclose(d, delta / 4) for d in ifs.digits]
    bits = max(32, (8 / delta).numerator.bit_length() - (8 / delta).denominator.bit_length() + 2)
    sbits = bits + 8
    one = 1 << bits
    RL = (r_lo.numerator << sbits) // r_lo.denominator
    RH = -((-r_hi.numerator << sbits) // r_hi.denominator)
    shifts = [(A.floor_grid(a, bits) * one, A.ceil_grid(b, bits) * one) for a, b in digit_iv]
    shifts = [(int(a), int(b)) for a, b in shifts]
    pairs = [(int(A.floor_grid(hull_lo[0], bits) * one), int(A.ceil_grid(hull_hi[1], bits) * one))]
    yield 0, one, pairs
    for level in range(1, n + 1):
        if len(pairs) * ifs.size > budget:
            raise DepthBudgetExceeded(
                f"level {level} needs {len(pairs) * ifs.size} cylinders (budget {budget})")
        images = []
        for sa, sb in shifts:
            for lo, hi in pairs:
                x = min(RL * lo, RH * lo) >> sbits
                y = -((-max(RL * hi, RH * hi)) >> sbits)
                images.append((x + sa, y + sb))
        images.sort()
        # the true cylinders lie in both covers, so clipping keeps soundness and restores nesting
        pairs = _intersect_int(_merge_int(images), pairs)
        yield level, one, pairs


def cover_levels(ifs: HomogeneousIFS, n: int, budget: int | None = None):
    """Iterate over (level, IntervalCover) for levels 0..n."""
    budget = default_depth_budget() if budget is None else budget
    gen = _rational_cover_levels if ifs.is_rational else _algebraic_cover_levels
    for level, den, pairs in gen(ifs, n, budget):
        ivs = [(Fraction(a, den), Fraction(b, den)) for a, b in pairs]
        yield level, IntervalCover(ivs, level, repr(ifs), ifs.is_rational, merged=True)


_COVER_CACHE: dict = {}


def level_cover(ifs: HomogeneousIFS, n: int, budget: int | None = None) -> IntervalCover:
    """Union of all l**n cylinder intervals, merged and sorted."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    key = (id(ifs), n)
    hit = _COVER_CACHE.get(key)
    if hit is not None and hit[0] is ifs:
        return hit[1]
    cover = None
    for _, cover in cover_levels(ifs, n, budget):
        pass
    if len(_COVER_CACHE) > 256:
        _COVER_CACHE.clear()
    _COVER_CACHE[key] = (ifs, cover)
    return cover


# -- membership --------------------------------------------------------------------

@dataclass(frozen=True)
class InCoverToDepth:
    depth: int


@dataclass(frozen=True)
class ExcludedAtDepth:
    depth: int
    gap: tuple


def _point_in_cover(cover: IntervalCover, x):
    """True/False when decided, or None while the enclosure straddles an endpoint."""
    if isinstance(x, Fraction):
        return cover.contains(x)
    width = Fraction(1, 2 ** 32)
    for _ in range(12):
        lo, hi = A.enclose(x, width)
        if cover.contains_interval(lo, hi):
            return True
        if cover.gap_for_interval(lo, hi) is not None:
            return False
        width /= 2 ** 32
    return None


def contains_point(ifs: HomogeneousIFS, x, depth: int):
    """Check x against covers of level 1..depth; exclusion is a proof."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    (x,) = A.lift_all(x) if not isinstance(x, A.FieldElement) else (x,)
    for level, cover in cover_levels(ifs, depth):
        if level == 0:
            continue
        inside = _point_in_cover(cover, x)
        if inside is False:
            lo, hi = A.enclose(x, Fraction(1, 2 ** 64))
            return ExcludedAtDepth(level, cover.gap_around(lo))
    return InCoverToDepth(depth)


# -- dimension equations ----------------------------------------------------------

@contextmanager
def _iv_precision(bits: int):
    """Temporarily set mpmath's interval precision, restoring it afterwards."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _iv_ratio(r, prec_bits):
    lo, hi = A.enclose(r, Fraction(1, 2 ** (prec_bits + 8)))
    return iv.mpf([iv.mpf(lo.numerator) / lo.denominator, iv.mpf(hi.numerator) / hi.denominator])


def _bisect_decreasing(g, tol: Fraction, upper_start=Fraction(1)):
    """Enclose the root of a decreasing interval function g with g(0) >= 0."""
    lo, hi = Fraction(0), upper_start
    while True:
        val = g(hi)
        if val.b < 0:
            break
        lo, hi = hi, hi * 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        val = g(mid)
        if val.a > 0:
            lo = mid
        elif val.b < 0:
            hi = mid
        else:
            # the interval evaluation cannot resolve further at this precision
            break
    return lo, hi


def similarity_dimension(ratios: Sequence, tol=Fraction(1, 10 ** 8)) -> tuple[Fraction, Fraction]:
    """Rational enclosure of the s with sum(r**s) = 1."""
    ratios = list(ratios)
    if not ratios:
        raise ValueError("need at least one ratio")
    if len(ratios) == 1:
        return Fraction(0), Fraction(0)
    tol = Fraction(tol)

    def g(s):
        s_iv = iv.mpf(s.numerator) / s.denominator
        return sum((r ** s_iv for r in rs), iv.mpf(0)) - 1

    with _iv_precision(128):
        rs = [_iv_ratio(r, 128) for r in ratios]
        return _bisect_decreasing(g, tol)


def solve_s_n(ratios: Sequence, n: int, tol=Fraction(1, 10 ** 8)) -> tuple[Fraction, Fraction]:
    """Enclosure of s_n with (sum b_i**s)**n - b_min**(n s) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    ratios = list(ratios)
    tol = Fraction(tol)
    smallest = min(range(len(ratios)), key=lambda i: float(ratios[i]))
    if len(ratios) ** n - 1 <= 1:
        # at most one word remains; (b^s)^... = 1 forces s = 0
        return Fraction(0), Fraction(0)

    def g(s):
        s_iv = iv.mpf(s.numerator) / s.denominator
        total = sum((r ** s_iv for r in rs), iv.mpf(0))
        return total ** n - b1 ** (n * s_iv) - 1

    with _iv_precision(128):
        rs = [_iv_ratio(r, 128) for r in ratios]
        b1 = rs[smallest]
        return _bisect_decreasing(g, tol)


# -- coding map -------------------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    """The infinite repetition of ``pattern``."""

    pattern: tuple

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("periodic pattern must be nonempty")
        object.__setattr__(self, "pattern", tuple(int(x) for x in self.pattern))


ZEROS = Periodic((0,))
ONES = Periodic((1,))


def coding_to_point(ifs: HomogeneousIFS, prefix, tail: Periodic = ZEROS):
    """Exact value of the point coded by ``prefix`` followed by ``tail`` forever.

    The point is sum_i a_{z_i} r**i; for C_alpha this is (1 - alpha) sum z_i alpha**i.
    """
    prefix = parse_word(prefix, ifs.size)
    pattern = parse_word(tail.pattern, ifs.size)
    r = ifs.ratio
    head = word_offset(ifs, prefix)
    period = word_offset(ifs, pattern)
    rp = r ** len(pattern)
    value = head + r ** len(prefix) * period / (1 - rp) if prefix else period / (1 - rp)
    return value


def point_from_bits(alpha, bits, tail: Periodic = ZEROS):
    """Point of C_alpha coded by the binary prefix ``bits`` and ``tail``."""
    return coding_to_point(CentralCantor(alpha, strict=False), bits, tail)


# -- sets of uniqueness ---------------------------------------------------------------

@dataclass(frozen=True)
class Uniqueness:
    reason: str = "1/ratio is Pisot and every digit lies in its field"


@dataclass(frozen=True)
class Multiplicity:
    reason: str


@dataclass(frozen=True)
class Unknown:
    reason: str


def _digit_in_theta_field(d, theta_alg: A.AlgebraicReal, ratio) -> bool | None:
    if isinstance(d, Fraction) or (isinstance(d, A.FieldElement) and d.is_rational):
        return True
    # d is irrational, living in the field of the IFS data
    if isinstance(ratio, Fraction):
        return False if d.field.minimality == A.VERIFIED else None
    if d.field is ratio.field:
        gen_alg = d.field.generator
        if ratio.coeffs == (Fraction(0), Fraction(1)) or (gen_alg.minimality == A.VERIFIED
                                                          and theta_alg.minimality == A.VERIFIED
                                                          and len(theta_alg.poly) == len(d.field.modulus)):
            return True
    return None


def is_set_of_uniqueness(ifs: HomogeneousIFS):
    """Salem-Zygmund classification of a homogeneous Cantor set."""
    r = ifs.ratio
    if not A.compare(r, Fraction(1, 2)) < 0:
        raise NotApplicable("the classification needs ratio < 1/2")
    if A.compare(ifs.size * r, 1) >= 0:
        raise NotApplicable("the classification needs 2 <= l < 1/ratio")
    # rescale digits into the frame 0 = a_1 < ... < a_l = 1 - ratio
    lo, hi = ifs.digits[0], ifs.digits[-1]
    digits = [(d - lo) * (1 - r) / (hi - lo) for d in ifs.digits]
    theta = 1 / r
    if isinstance(theta, Fraction):
        theta_alg = A.AlgebraicReal.rational(theta)
    else:
        theta_alg = theta.to_algebraic_real()
    verdict = A.pisot_verdict_for(theta_alg)
    membership = [_digit_in_theta_field(d, theta_alg, r) for d in digits]
    if verdict.is_pisot:
        if verdict.minimality != A.VERIFIED:
            return Unknown("Pisot test passed but minimality of the polynomial is unverified")
        if all(m is True for m in membership):
            return Uniqueness()
        if any(m is False for m in membership):
            return Multiplicity("a digit lies outside the field of 1/ratio")
        return Unknown("field membership of the digits could not be decided")
    if verdict.minimality == A.VERIFIED and verdict.certified_not_pisot:
        why = "not an algebraic integer" if not verdict.is_algebraic_integer else "a conjugate has modulus >= 1"
        return Multiplicity(f"1/ratio is not Pisot ({why})")
    return Unknown("Pisot test inconclusive with the implemented bounds")


# -- export -----------------------------------------------------------------------

def covers_to_csv(covers: Iterable[IntervalCover]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["level", "left", "right"])
    for cover in covers:
        writer.writerows(cover.to_csv_rows())
    return buf.getvalue()


def ifs_to_json(ifs: HomogeneousIFS) -> str:
    return json.dumps(ifs.to_json(), sort_keys=True)
