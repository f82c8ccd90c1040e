"""Exact real algebraic numbers, Pisot classification and arithmetic in Q(theta).

Rationals are plain :class:`fractions.Fraction` values.  Irrational reals
are :class:`AlgebraicReal` (an integer polynomial plus an isolating
rational interval) or :class:`FieldElement` (a polynomial in the generator
of a :class:`NumberField`).  The module-level helpers :func:`enclose`,
:func:`exact_sign`, :func:`compare` and :func:`to_float` accept any of the
three.
"""

from __future__ import annotations

import functools
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple, Sequence

from . import polynomials as P
from .errors import (
    DataOutsideField,
    MultipleRootsInSelector,
    NotPisot,
    RationalTheta,
    RootNotGreaterThanOne,
    RootNotIsolated,
    ZeroPolynomial,
)

Interval = tuple[Fraction, Fraction]

VERIFIED = "Verified"
UNVERIFIED = "Unverified"

GRAEFFE_STEPS = 8
_WORK_BITS = 96


# -- outward rounding ----------------------------------------------------------

def round_down(x, bits: int = _WORK_BITS) -> Fraction:
    """Largest number with ``bits`` significant bits that is <= x."""
    x = Fraction(x)
    if x == 0:
        return x
    e = abs(x.numerator).bit_length() - x.denominator.bit_length()
    shift = bits - e
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction((x.numerator // (x.denominator << -shift)) << -shift)


def round_up(x, bits: int = _WORK_BITS) -> Fraction:
    return -round_down(-Fraction(x), bits)


def floor_grid(x, bits: int) -> Fraction:
    """Round down onto the dyadic grid 2**-bits."""
    x = Fraction(x)
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def ceil_grid(x, bits: int) -> Fraction:
    return -floor_grid(-Fraction(x), bits)


def iv_add(a: Interval, b: Interval) -> Interval:
    return a[0] + b[0], a[1] + b[1]


def iv_sub(a: Interval, b: Interval) -> Interval:
    return a[0] - b[1], a[1] - b[0]


def iv_mul(a: Interval, b: Interval) -> Interval:
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(prods), max(prods)


def iv_div(a: Interval, b: Interval) -> Interval:
    if b[0] <= 0 <= b[1]:
        raise ZeroDivisionError("interval divisor contains zero")
    return iv_mul(a, (1 / b[1], 1 / b[0]))


def iv_round(a: Interval, bits: int = _WORK_BITS) -> Interval:
    return round_down(a[0], bits), round_up(a[1], bits)


def iv_abs_upper(a: Interval) -> Fraction:
    return max(abs(a[0]), abs(a[1]))


def iv_abs_lower(a: Interval) -> Fraction:
    if a[0] <= 0 <= a[1]:
        return Fraction(0)
    return min(abs(a[0]), abs(a[1]))


def _iroot_floor(n: int, k: int) -> int:
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def root_upper(x: Fraction, k: int, bits: int = 64) -> Fraction:
    """Rational upper bound for x**(1/k), x >= 0, relative error ~2**-bits."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    shift = k * bits
    n = -((-x.numerator << shift) // x.denominator)
    r = _iroot_floor(n, k)
    if r ** k < n:
        r += 1
    return Fraction(r, 1 << bits)


def root_lower(x: Fraction, k: int, bits: int = 64) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    n = (x.numerator << (k * bits)) // x.denominator
    return Fraction(_iroot_floor(n, k), 1 << bits)


# -- root isolation --------------------------------------------------------------

class RootInterval(NamedTuple):
    lo: Fraction
    hi: Fraction
    sign_lo: int
    sign_hi: int


def isolate_real_roots(p: Sequence[int]) -> list[RootInterval]:
    """Isolate every real root of ``p`` with Sturm sequences.

    Works on the square-free part.  Each returned open interval contains
    exactly one root and the square-free part changes sign across it.
    """
    p = P.trim(p)
    if not p:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    sf = P.squarefree(p)
    if len(sf) <= 1:
        return []
    seq = P.sturm_sequence(sf)
    bound = P.cauchy_bound(sf)
    out: list[RootInterval] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = P.count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RootInterval(lo, hi, P.sign_at(sf, lo), P.sign_at(sf, hi)))
            continue
        mid = _nonroot_split(sf, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda r: r.lo)
    return out


def _nonroot_split(sf, lo, hi) -> Fraction:
    for num, den in ((1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)):
        mid = lo + (hi - lo) * num / den
        if P.evaluate(sf, mid) != 0:
            return mid
    k = 11
    while True:
        mid = lo + (hi - lo) / k
        if P.evaluate(sf, mid) != 0:
            return mid
        k += 2


def minimality_of(poly: Sequence[int]) -> str:
    return VERIFIED if P.is_certainly_irreducible(poly) else UNVERIFIED


class AlgebraicReal:
    """A real number given exactly: a rational, or a root of an integer
    polynomial singled out by an isolating rational interval.

    The isolator shrinks as callers ask for tighter enclosures; it never
    moves to a different root.
    """

    __slots__ = ("value", "poly", "_sf", "_seq", "_lo", "_hi", "_sign_lo",
                 "minimality", "_lock", "_field")

    def __init__(self):
        raise TypeError("use AlgebraicReal.rational or AlgebraicReal.from_root")

    @classmethod
    def _blank(cls):
        obj = object.__new__(cls)
        obj._lock = threading.RLock()
        obj._field = None
        obj._seq = None
        return obj

    @classmethod
    def rational(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        obj = cls._blank()
        obj.value = q
        obj.poly = P.to_integer([-q, 1])
        obj._sf = obj.poly
        obj._lo = obj._hi = q
        obj._sign_lo = 0
        obj.minimality = VERIFIED
        return obj

    @classmethod
    def from_root(cls, poly: Sequence[int], lo, hi) -> "AlgebraicReal":
        poly = P.to_integer(poly)
        if not poly:
            raise ZeroPolynomial("zero polynomial has no designated root")
        if len(poly) == 1:
            raise RootNotIsolated("constant polynomial has no roots")
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise RootNotIsolated(f"empty selector ({lo}, {hi})")
        sf = P.squarefree(poly)
        if len(sf) == 2:
            root = Fraction(-sf[0], sf[1])
            if not lo <= root <= hi:
                raise RootNotIsolated(f"no root of {poly} in [{lo}, {hi}]")
            obj = cls.rational(root)
            obj.poly = poly
            return obj
        seq = P.sturm_sequence(sf)
        at_lo = P.evaluate(sf, lo) == 0
        n = (P.count_roots(seq, lo, hi) if lo < hi else 0) + at_lo
        if n != 1:
            raise RootNotIsolated(f"{n} roots of {poly} in [{lo}, {hi}], expected 1")
        obj = cls._blank()
        obj.value = None
        obj.poly = poly
        obj._sf = sf
        obj._seq = seq
        if at_lo:
            hi = lo
        elif P.evaluate(sf, hi) == 0:
            lo = hi
        obj._lo, obj._hi = lo, hi
        obj._sign_lo = P.sign_at(sf, lo)
        obj.minimality = minimality_of(poly)
        return obj

    @classmethod
    def real_roots(cls, poly: Sequence[int]) -> list["AlgebraicReal"]:
        return [cls.from_root(poly, r.lo, r.hi) for r in isolate_real_roots(poly)]

    @classmethod
    def largest_root(cls, poly: Sequence[int]) -> "AlgebraicReal":
        roots = cls.real_roots(poly)
        if not roots:
            raise RootNotIsolated(f"{list(poly)} has no real roots")
        return roots[-1]

    # -- state ----------------------------------------------------------------

    def __getstate__(self):
        return {s: getattr(self, s) for s in self.__slots__ if s not in ("_lock", "_field")}

    def __setstate__(self, state):
        for k, v in state.items():
            setattr(self, k, v)
        self._lock = threading.RLock()
        self._field = None

    @property
    def kind(self) -> str:
        return "Rational" if self.value is not None else "Algebraic"

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    @property
    def squarefree_poly(self) -> list[int]:
        return list(self._sf)

    @property
    def interval(self) -> Interval:
        with self._lock:
            return self._lo, self._hi

    def refine(self, width) -> Interval:
        """Shrink the isolator to width <= ``width`` and return it.

        Bisection stops at half the requested width, which keeps the
        result well inside any window of the requested size around the root.
        """
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        width /= 2
        with self._lock:
            lo, hi, s_lo = self._lo, self._hi, self._sign_lo
            while hi - lo > width:
                mid = (lo + hi) / 2
                s = P.sign_at(self._sf, mid)
                if s == 0:
                    lo = hi = mid
                    break
                if s == s_lo:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def enclosure(self, width) -> Interval:
        return self.refine(width)

    def __float__(self) -> float:
        if self.value is not None:
            return float(self.value)
        lo, hi = self.interval
        scale = max(abs(lo), abs(hi), Fraction(1))
        lo, hi = self.refine(scale / 2 ** 60)
        return float((lo + hi) / 2)

    def sign(self) -> int:
        return compare(self, 0)

    # -- comparison -------------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if self.value is not None:
                return P.sign(self.value - other)
            with self._lock:
                if self._lo <= other <= self._hi and P.evaluate(self._sf, other) == 0:
                    return 0
            width = Fraction(1)
            while True:
                lo, hi = self.refine(width)
                if hi < other:
                    return -1
                if lo > other:
                    return 1
                width = min(width, hi - lo) / 2
        if isinstance(other, AlgebraicReal):
            if other.value is not None:
                return self._cmp(other.value)
            if self.value is not None:
                return -other._cmp(self.value)
            g = P.gcd_poly(self._sf, other._sf)
            seq_g = P.sturm_sequence(g) if len(g) >= 2 else None
            width = max(self.interval[1] - self.interval[0], other.interval[1] - other.interval[0], Fraction(1, 2**20))
            while True:
                a = self.refine(width)
                b = other.refine(width)
                if a[1] < b[0]:
                    return -1
                if b[1] < a[0]:
                    return 1
                if seq_g is not None:
                    lo, hi = max(a[0], b[0]), min(a[1], b[1])
                    hits = (P.count_roots(seq_g, lo, hi) if lo < hi else 0) + (P.evaluate(g, lo) == 0)
                    if hits:
                        return 0
                width /= 4
        return compare(self, other)

    def __eq__(self, other):
        if not isinstance(other, (int, Fraction, AlgebraicReal, FieldElement)):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __hash__(self):
        if self.value is not None:
            return hash(self.value)
        return hash(tuple(self._sf))

    def __neg__(self):
        if self.value is not None:
            return AlgebraicReal.rational(-self.value)
        lo, hi = self.interval
        return AlgebraicReal.from_root(P.compose_linear(self.poly, -1, 0), -hi, -lo)

    def reciprocal(self) -> "AlgebraicReal":
        """1/x, via the reversed polynomial."""
        if self.value is not None:
            return AlgebraicReal.rational(1 / self.value)
        lo, hi = self.interval
        width = hi - lo
        while lo <= 0 <= hi:
            width /= 2
            lo, hi = self.refine(width)
        return AlgebraicReal.from_root(P.reverse(self.poly), 1 / hi, 1 / lo)

    def __repr__(self):
        if self.value is not None:
            return f"AlgebraicReal({self.value})"
        lo, hi = self.interval
        return f"AlgebraicReal(root of {self.poly} in [{lo}, {hi}] ~ {float(self):.12g})"


def refine(x, width) -> Interval:
    """Rational interval of width <= ``width`` containing ``x``."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x, x
    return x.enclosure(width)


# -- generic real helpers --------------------------------------------------------

def enclose(x, width=Fraction(1, 2**64)) -> Interval:
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x, x
    return x.enclosure(Fraction(width))


def is_exact_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, AlgebraicReal) and x.is_rational) \
        or (isinstance(x, FieldElement) and x.is_rational)


def as_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, AlgebraicReal) and x.is_rational:
        return x.value
    if isinstance(x, FieldElement) and x.is_rational:
        return x.rational_value
    raise TypeError(f"{x!r} is not rational")


def to_float(x) -> float:
    return float(x)


def exact_sign(x) -> int:
    if isinstance(x, (int, Fraction)):
        return P.sign(x)
    return x.sign()


def compare(x, y) -> int:
    """Exact three-way comparison of two reals of any supported type."""
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return P.sign(Fraction(x) - Fraction(y))
    if isinstance(x, FieldElement) or isinstance(y, FieldElement):
        fx = x.field if isinstance(x, FieldElement) else None
        fy = y.field if isinstance(y, FieldElement) else None
        field = fx or fy
        if (fx is None or fx is field) and (fy is None or fy is field) \
                and not isinstance(x, AlgebraicReal) and not isinstance(y, AlgebraicReal):
            return (field.coerce(x) - field.coerce(y)).sign()
        if isinstance(x, AlgebraicReal) and field.generator is x and fy is not None:
            return (field.gen - y).sign()
        if isinstance(y, AlgebraicReal) and field.generator is y and fx is not None:
            return (x - field.gen).sign()
        x = x.to_algebraic_real() if isinstance(x, FieldElement) else x
        y = y.to_algebraic_real() if isinstance(y, FieldElement) else y
    if isinstance(x, AlgebraicReal):
        return x._cmp(y if not isinstance(y, int) else Fraction(y))
    if isinstance(y, AlgebraicReal):
        return -y._cmp(Fraction(x))
    raise TypeError(f"cannot compare {type(x).__name__} with {type(y).__name__}")


cmp_key = functools.cmp_to_key(lambda x, y: compare(x, y))


def minimum(values):
    best = None
    for v in values:
        if best is None or compare(v, best) < 0:
            best = v
    return best


def maximum(values):
    best = None
    for v in values:
        if best is None or compare(v, best) > 0:
            best = v
    return best


# -- number fields -----------------------------------------------------------------

class NumberField:
    """Q(theta) for a real algebraic theta, elements as reduced polynomials.

    The modulus starts as the square-free defining polynomial of theta.  If
    it turns out to be reducible (a zero divisor shows up while inverting),
    the factor not vanishing at theta is divided out on the spot.
    """

    def __init__(self, generator: AlgebraicReal):
        if not isinstance(generator, AlgebraicReal):
            generator = AlgebraicReal.rational(generator)
        self.generator = generator
        self.modulus = P.monic(generator.squarefree_poly)
        self.minimality = generator.minimality
        self._lock = threading.RLock()

    @classmethod
    def of(cls, generator: AlgebraicReal) -> "NumberField":
        if generator._field is None:
            generator._field = cls(generator)
        return generator._field

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def reduce(self, coeffs) -> tuple[Fraction, ...]:
        c = P.trim([Fraction(x) for x in coeffs])
        if len(c) >= len(self.modulus):
            c = P.rem(c, self.modulus)
        return tuple(c)

    def __call__(self, coeffs) -> "FieldElement":
        return FieldElement(self, self.reduce(coeffs))

    @property
    def gen(self) -> "FieldElement":
        return self([0, 1])

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise ValueError("elements belong to different fields")
            return x
        if isinstance(x, AlgebraicReal):
            if x is self.generator:
                return self.gen
            if x.is_rational:
                return self([x.value])
            raise ValueError("algebraic value is not known to lie in this field")
        return self([Fraction(x)])

    def _generator_root_of(self, g) -> bool:
        lo, hi = self.generator.interval
        if lo == hi:
            return P.evaluate(g, lo) == 0
        seq = P.sturm_sequence(g)
        return P.count_roots(seq, lo, hi) > 0

    def split_off(self, g) -> None:
        """Remove from the modulus a factor ``g`` that does not vanish at theta."""
        with self._lock:
            self.modulus = P.monic(P.divmod_poly(self.modulus, g)[0])

    def is_zero(self, coeffs) -> bool:
        if not coeffs:
            return True
        if self.minimality == VERIFIED:
            return False
        g = P.gcd_poly(list(coeffs), self.modulus)
        return len(g) >= 2 and self._generator_root_of(g)

    def inverse(self, coeffs) -> tuple[Fraction, ...]:
        while True:
            a = list(self.reduce(coeffs))
            if not a:
                raise ZeroDivisionError("division by zero in number field")
            m = self.modulus
            r0, r1 = m, a
            s0, s1 = [], [Fraction(1)]
            while len(r1) > 1:
                q, r = P.divmod_poly(r0, r1)
                r0, r1 = r1, r
                s0, s1 = s1, P.sub(s0, P.mul(q, s1))
            if len(r1) == 1:
                inv = P.scale(s1, 1 / Fraction(r1[0]))
                return self.reduce(inv)
            # r1 == 0: r0 = gcd(m, a) is a nontrivial common factor
            g = P.monic(r0)
            if self._generator_root_of(g):
                raise ZeroDivisionError("division by zero in number field")
            self.split_off(g)

    def enclosure_of(self, coeffs, width) -> Interval:
        coeffs = list(coeffs)
        if len(coeffs) <= 1:
            v = coeffs[0] if coeffs else Fraction(0)
            return v, v
        width = Fraction(width)
        mags = sum(abs(c) for c in coeffs)
        d = len(coeffs)
        lo, hi = self.generator.interval
        gmag = max(abs(lo), abs(hi), Fraction(1))
        gen_width = width / (4 * mags * d * gmag ** d)
        bits = max(_WORK_BITS, gen_width.denominator.bit_length() + 16)
        while True:
            g = self.generator.refine(gen_width)
            acc = (Fraction(0), Fraction(0))
            for c in reversed(coeffs):
                acc = iv_round(iv_add(iv_mul(acc, g), (c, c)), bits)
            if acc[1] - acc[0] <= width:
                return acc
            gen_width /= 16
            bits += 8


class FieldElement:
    """An element of a real number field, stored as a reduced polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements belong to different fields")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) if other != 0 else ()
        if isinstance(other, AlgebraicReal):
            return self.field.coerce(other).coeffs
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.reduce(P.add(self.coeffs, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.reduce(P.sub(self.coeffs, o)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.reduce(P.sub(o, self.coeffs)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.reduce(P.mul(self.coeffs, o)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inverse(self.coeffs))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(self.field, self.field.inverse(o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise TypeError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def key(self) -> tuple:
        return self.field.reduce(self.coeffs)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.field.reduce(self.coeffs))

    def sign(self) -> int:
        c = self.field.reduce(self.coeffs)
        if self.is_rational:
            return P.sign(c[0]) if c else 0
        if self.field.is_zero(c):
            return 0
        width = Fraction(1, 2**16)
        while True:
            lo, hi = self.field.enclosure_of(c, width)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            width /= 2**16

    def enclosure(self, width) -> Interval:
        return self.field.enclosure_of(self.field.reduce(self.coeffs), width)

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def __eq__(self, other):
        if not isinstance(other, (int, Fraction, AlgebraicReal, FieldElement)):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __hash__(self):
        c = self.field.reduce(self.coeffs)
        if len(c) <= 1:
            return hash(c[0] if c else Fraction(0))
        return hash((id(self.field), c))

    def __repr__(self):
        terms = " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs)) or "0"
        return f"FieldElement({terms} ~ {float(self):.12g})"

    def multiplication_matrix(self) -> list[list[Fraction]]:
        d = self.field.degree
        cols = []
        for j in range(d):
            prod = list(self.field.reduce(P.mul(self.coeffs, [0] * j + [1])))
            cols.append(prod + [Fraction(0)] * (d - len(prod)))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial of multiplication by this element
        (Faddeev-LeVerrier), constant term first."""
        A = self.multiplication_matrix()
        n = len(A)
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        M = [[Fraction(0)] * n for _ in range(n)]
        for k in range(1, n + 1):
            AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            M = [[AM[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
            AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
        return coeffs

    def to_algebraic_real(self) -> AlgebraicReal:
        if self.is_rational:
            return AlgebraicReal.rational(self.rational_value)
        cp = P.to_integer(self.charpoly())
        candidates = AlgebraicReal.real_roots(cp)
        width = Fraction(1, 2**8)
        while True:
            lo, hi = self.enclosure(width)
            hits = [r for r in candidates if not (r.interval[1] < lo or r.interval[0] > hi)]
            if len(hits) == 1:
                r = hits[0]
                return AlgebraicReal.from_root(r.poly, *r.interval)
            candidates = hits
            for r in candidates:
                r.refine(width)
            width /= 16


def reduce_in_field(x: Sequence, theta: AlgebraicReal) -> list[Fraction]:
    """Canonical representative of a polynomial in theta, of degree below
    the defining polynomial."""
    if not isinstance(theta, AlgebraicReal) or theta.kind == "Rational":
        raise RationalTheta("theta is rational; every polynomial in it is just a rational")
    return list(NumberField.of(theta).reduce(x))


# -- Pisot numbers -----------------------------------------------------------------

@dataclass(frozen=True)
class PisotVerdict:
    is_algebraic_integer: bool
    is_pisot: bool
    conjugate_modulus_upper_bound: Fraction
    minimality: str
    conjugate_modulus_lower_bound: Fraction = Fraction(0)
    root: AlgebraicReal | None = None

    @property
    def certified_not_pisot(self) -> bool:
        """True when the negative verdict does not hinge on a loose bound."""
        return (not self.is_pisot) and (
            (not self.is_algebraic_integer and self.minimality == VERIFIED)
            or self.conjugate_modulus_lower_bound >= 1
            or (self.root is not None and compare(self.root, 1) <= 0))


def _select_root(p, selector) -> AlgebraicReal:
    if isinstance(selector, AlgebraicReal):
        return AlgebraicReal.from_root(p, *selector.interval)
    lo, hi = selector
    return AlgebraicReal.from_root(p, lo, hi)


def _graeffe_deflation(p: list[int], root: AlgebraicReal, steps: int):
    """Graeffe-iterate ``p`` and divide out the image of ``root``.

    Returns (N, interval coefficients of the deflated polynomial) where N
    is 2**steps, or None when the root is zero.
    """
    N = 2 ** steps
    G = list(p)
    for _ in range(steps):
        G = P.graeffe(G)
    if root.is_rational and root.value == 0:
        return None
    lo, hi = root.interval
    mag = max(abs(lo), abs(hi))
    width = mag / 2
    while True:
        lo, hi = root.refine(width)
        if not lo <= 0 <= hi:
            break
        width /= 2
    rel = Fraction(1, 2 ** (_WORK_BITS + steps + 8))
    lo, hi = root.refine(min(abs(lo), abs(hi)) * rel)
    r_iv = iv_round((lo, hi))
    base = r_iv
    for _ in range(steps):
        base = iv_round(iv_mul(base, base))
    S = base
    d = len(G) - 1
    q = []
    prev = (Fraction(0), Fraction(0))
    for j in range(d):
        c = Fraction(G[j])
        cur = iv_round(iv_div(iv_sub(prev, (c, c)), S))
        q.append(cur)
        prev = cur
    # q has degree d-1; its top coefficient is exactly the leading coefficient of G
    q[d - 1] = (Fraction(G[d]), Fraction(G[d]))
    return N, q, G


def _cauchy_positive_root(q: list[Interval]) -> Fraction:
    """Upper bound for the unique positive root of |q_D| x^D - sum |q_j| x^j."""
    D = len(q) - 1
    lead = iv_abs_lower(q[D])
    lower = [iv_abs_upper(c) for c in q[:D]]
    if all(c == 0 for c in lower):
        return Fraction(0)
    if lead == 0:
        return None

    def g(x):
        return lead * x ** D - sum(c * x ** j for j, c in enumerate(lower))

    k = max(
        ((c / lead).numerator.bit_length() - (c / lead).denominator.bit_length()) // (D - j) + 1
        for j, c in enumerate(lower) if c
    )
    while g(Fraction(2) ** k) <= 0:
        k += 1
    while g(Fraction(2) ** (k - 1)) > 0:
        k -= 1
    lo, hi = Fraction(2) ** (k - 1), Fraction(2) ** k
    for _ in range(48):
        mid = (lo + hi) / 2
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


def _conjugate_bounds(p: list[int], root: AlgebraicReal, steps: int = GRAEFFE_STEPS):
    """Certified (lower, upper) bounds for max |z| over the roots z of p other
    than ``root``; lower may be 0 when nothing useful is known."""
    d = len(p) - 1
    if d <= 1:
        return Fraction(0), Fraction(0)
    if root.is_rational and root.value == 0:
        q = P.divmod_poly(p, [0, 1])[0]
        return Fraction(0), P.cauchy_bound(q)
    try:
        N, q, G = _graeffe_deflation(p, root, steps)
        R = _cauchy_positive_root(q)
    except ZeroDivisionError:
        R = None
    if R is None:
        return Fraction(0), P.cauchy_bound(p)
    upper = root_upper(R, N) if R else Fraction(0)
    # lower bound from elementary symmetric functions of the deflated roots
    D = len(q) - 1
    lead_up = iv_abs_upper(q[D])
    best = Fraction(0)
    for j in range(1, D + 1):
        e = iv_abs_lower(q[D - j]) / (comb(D, j) * lead_up)
        if e > 0:
            best = max(best, root_lower(root_lower(e, j), N))
    # a root of the full Graeffe image beyond |root| certifies a conjugate beyond |root|
    full = [abs(Fraction(G[d - j])) / (comb(d, j) * abs(G[d])) for j in range(1, d + 1)]
    lo_r, hi_r = root.interval
    for j, e in enumerate(full, start=1):
        if e > 0:
            m = root_lower(root_lower(e, j), N)
            if m > max(abs(lo_r), abs(hi_r)):
                best = max(best, m)
    return best, upper


def conjugate_modulus_bound(p: Sequence[int], excluded) -> Fraction:
    """Certified upper bound on the moduli of all roots of ``p`` except the
    real root isolated by ``excluded``.

    Root-squares ``p`` eight times in exact integer arithmetic, divides out
    the image of the excluded root with outward-rounded interval
    arithmetic, then takes the N-th root of a Cauchy bound on what is left.
    Falls back to the Cauchy bound of ``p`` when the division degenerates.
    """
    p = P.to_integer(p)
    root = _select_root(p, excluded)
    _check_simple(p, root)
    return _conjugate_bounds(p, root)[1]


def _check_simple(p, root: AlgebraicReal):
    g = P.gcd_poly(p, P.derivative(p))
    if len(g) >= 2:
        lo, hi = root.interval
        if lo == hi:
            hit = P.evaluate(g, lo) == 0
        else:
            hit = P.count_roots(P.sturm_sequence(g), lo, hi) > 0
        if hit:
            raise MultipleRootsInSelector("selected root is a multiple root")


def is_pisot(p: Sequence[int], root_selector) -> PisotVerdict:
    """Decide whether the root of ``p`` picked by ``root_selector`` is Pisot,
    treating the other roots of ``p`` as its conjugates."""
    p = P.to_integer(p)
    if not p:
        raise ZeroPolynomial("zero polynomial")
    root = _select_root(p, root_selector)
    if compare(root, 1) <= 0:
        raise RootNotGreaterThanOne(f"selected root {float(root):.6g} is not > 1")
    _check_simple(p, root)
    minimality = minimality_of(p)
    monic = p[-1] == 1
    lower, upper = _conjugate_bounds(p, root)
    steps = GRAEFFE_STEPS
    # escalate only for undecided cases (bound straddles 1)
    while monic and lower < 1 <= upper and steps < 12:
        steps += 1
        lower, upper = _conjugate_bounds(p, root, steps)
    return PisotVerdict(
        is_algebraic_integer=monic,
        is_pisot=bool(monic and upper < 1),
        conjugate_modulus_upper_bound=upper,
        minimality=minimality,
        conjugate_modulus_lower_bound=lower,
        root=root,
    )


def pisot_verdict_for(theta) -> PisotVerdict:
    """Pisot verdict for a real number given as rational, AlgebraicReal or FieldElement."""
    if isinstance(theta, FieldElement):
        theta = theta.to_algebraic_real()
    if isinstance(theta, (int, Fraction)):
        theta = AlgebraicReal.rational(theta)
    poly = theta.poly if theta.is_rational else theta.squarefree_poly
    if theta.is_rational:
        poly = P.to_integer([-theta.value, 1])
    return is_pisot(poly, theta)


def garsia_separation(theta, alphabet: Sequence[Sequence[int]]) -> Fraction:
    """Separation constant C for sums sum_{i=1..n} t_i theta^i, t_i in alphabet.

    Every such sum is either 0 or at least C in absolute value.  Uses
    C = (1 - rho)^k / T^k with k the number of conjugates, rho a certified
    bound on their moduli and T a bound on the conjugates of the digits.
    """
    verdict = pisot_verdict_for(theta)
    if not verdict.is_pisot:
        raise NotPisot("separation needs a Pisot base")
    if verdict.minimality != VERIFIED:
        warnings.warn("minimality of theta unverified; conjugate map may be wrong", stacklevel=2)
    root = verdict.root
    k = len(root.poly if root.is_rational else root.squarefree_poly) - 2
    if root.is_rational:
        k = 0
    rho = verdict.conjugate_modulus_upper_bound
    digit_bound = Fraction(0)
    for t in alphabet:
        t = [Fraction(c) for c in P.trim(list(t))]
        if root.is_rational:
            bound = abs(P.evaluate(t, root.value)) if t else Fraction(0)
        else:
            bound = sum((abs(c) * rho ** i for i, c in enumerate(t)), Fraction(0))
        digit_bound = max(digit_bound, bound)
    if k == 0 or digit_bound == 0:
        return Fraction(1)
    return round_down((1 - rho) ** k / digit_bound ** k, 64)


# -- bringing mixed inputs into one field -----------------------------------------

def common_field(values) -> NumberField | None:
    """The number field shared by the irrational entries of ``values``.

    Rationals are ignored.  The first FieldElement fixes the field; failing
    that, the first irrational AlgebraicReal generates one.
    """
    field = None
    for v in values:
        if isinstance(v, FieldElement) and not v.is_rational:
            if field is None:
                field = v.field
            elif v.field is not field:
                raise DataOutsideField("values come from different number fields")
    if field is None:
        for v in values:
            if isinstance(v, AlgebraicReal) and not v.is_rational:
                field = NumberField.of(v)
                break
    return field


def lift(x, field: NumberField | None):
    """Return ``x`` as a Fraction when rational, else as an element of ``field``."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, AlgebraicReal):
        if x.is_rational:
            return x.value
        if field is None:
            raise DataOutsideField("irrational value given without a field")
        if x is field.generator or compare(x, field.generator) == 0:
            return field.gen
        raise DataOutsideField(f"{x!r} is not known to lie in the field")
    if isinstance(x, FieldElement):
        if x.is_rational:
            return x.rational_value
        if field is not None and x.field is not field:
            raise DataOutsideField("value belongs to a different number field")
        return x
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"unsupported real {x!r}")


def lift_all(*values):
    """Lift every argument into one common representation."""
    field = common_field(values)
    return [lift(v, field) for v in values]
