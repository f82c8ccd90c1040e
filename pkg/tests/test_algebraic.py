import itertools
import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cantorembed import algebraic as A
from cantorembed import polynomials as P
from cantorembed.errors import (
    MultipleRootsInSelector,
    NotPisot,
    RationalTheta,
    RootNotGreaterThanOne,
    RootNotIsolated,
    ZeroPolynomial,
)

from oracles import min_nonzero_sum_1_plus_sqrt2, poly_roots, sqrt2_bounds

SQRT2_PLUS_1 = [-1, -2, 1]
GOLDEN = [-1, -1, 1]


# -- root isolation ------------------------------------------------------------------

def test_isolate_x2_minus_2_gives_two_symmetric_intervals():
    roots = A.isolate_real_roots([-2, 0, 1])
    assert len(roots) == 2
    (a, b), (c, d) = (r[:2] for r in roots)
    assert a <= -1.4143 and b >= -1.4142
    assert c <= 1.4142 and d >= 1.4143
    assert b <= 0 <= c


def test_isolate_cubic_single_root_between_046_and_047():
    roots = A.isolate_real_roots([-1, 1, 2, 1])
    assert len(roots) == 1
    p = [-1, 1, 2, 1]
    assert P.evaluate(p, Fraction(46, 100)) < 0 < P.evaluate(p, Fraction(47, 100))
    x = A.AlgebraicReal.from_root(p, *roots[0][:2])
    lo, hi = x.refine(Fraction(1, 1000))
    assert Fraction(46, 100) < lo and hi < Fraction(47, 100)


def test_isolate_linear():
    roots = A.isolate_real_roots([-3, 1])
    assert len(roots) == 1
    assert roots[0].lo <= 3 <= roots[0].hi


def test_isolate_zero_polynomial_raises():
    with pytest.raises(ZeroPolynomial):
        A.isolate_real_roots([0, 0])


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6))
def test_isolation_is_sound_and_complete(coeffs):
    p = P.trim(coeffs)
    assume(len(p) >= 2)
    sf = P.squarefree(p)
    roots = A.isolate_real_roots(p)
    for r in roots:
        if r.lo < r.hi:
            assert P.sign_at(sf, r.lo) * P.sign_at(sf, r.hi) <= 0
    for (a, b, *_), (c, d, *_) in zip(roots, roots[1:]):
        assert b <= c
    # oracle: every real root found numerically lies in exactly one interval
    real = [z.real for z in poly_roots(p) if abs(z.imag) < mpmath.mpf(10) ** -30]
    distinct = sorted(set(round(float(x), 9) for x in real))
    assert len(distinct) == len(roots)
    for x in distinct:
        assert sum(1 for r in roots if float(r.lo) - 1e-9 <= x <= float(r.hi) + 1e-9) == 1


# -- refinement --------------------------------------------------------------------------

def test_refine_sqrt2():
    x = A.AlgebraicReal.from_root([-2, 0, 1], 1, 2)
    lo, hi = A.refine(x, Fraction(1, 100))
    assert Fraction(141, 100) < lo and hi < Fraction(142, 100)
    assert hi - lo <= Fraction(1, 100)


def test_refine_rational_is_degenerate():
    x = A.AlgebraicReal.rational(Fraction(3, 7))
    assert A.refine(x, Fraction(1, 10)) == (Fraction(3, 7), Fraction(3, 7))


def test_refine_cubic_root_to_1e_6():
    x = A.AlgebraicReal.from_root([-1, 1, 2, 1], 0, 1)
    lo, hi = A.refine(x, Fraction(1, 10 ** 6))
    assert hi - lo <= Fraction(1, 10 ** 6)
    assert abs(float(lo) - 0.465571) < 2e-6


@given(st.lists(st.integers(1, 60), min_size=1, max_size=6))
def test_refinement_is_nested(exponents):
    x = A.AlgebraicReal.from_root([-3, 0, 0, 1], 1, 2)
    prev = x.interval
    for e in exponents:
        cur = x.refine(Fraction(1, 2 ** e))
        assert prev[0] <= cur[0] <= cur[1] <= prev[1]
        prev = cur


def test_concurrent_refinement_keeps_the_same_root():
    x = A.AlgebraicReal.from_root([-5, 0, 1], 2, 3)

    def work(k):
        x.refine(Fraction(1, 2 ** (10 + k)))

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    lo, hi = x.interval
    assert lo * lo <= 5 <= hi * hi


def test_from_root_needs_exactly_one_root():
    with pytest.raises(RootNotIsolated):
        A.AlgebraicReal.from_root([-2, 0, 1], -2, 2)


def test_comparison_decides_equality_via_common_root():
    a = A.AlgebraicReal.from_root([-2, 0, 1], 1, 2)
    c = A.AlgebraicReal.from_root([4, 0, -4, 0, 1], 1, 2)  # (x^2 - 2)^2
    assert A.compare(a, c) == 0
    b = A.AlgebraicReal.from_root([-3, 0, 1], 1, 2)
    assert A.compare(a, b) < 0 < A.compare(b, a)


# -- Pisot classification -------------------------------------------------------------------

@pytest.mark.parametrize("n", range(2, 10))
def test_integers_are_pisot(n):
    v = A.is_pisot([-n, 1], (n, n))
    assert v.is_pisot and v.is_algebraic_integer
    assert v.conjugate_modulus_upper_bound == 0


def test_one_plus_sqrt2_is_pisot():
    v = A.is_pisot(SQRT2_PLUS_1, (2, 3))
    assert v.is_pisot
    assert v.conjugate_modulus_upper_bound < 1
    assert v.minimality == A.VERIFIED


def test_sqrt2_is_not_pisot():
    v = A.is_pisot([-2, 0, 1], (1, 2))
    assert not v.is_pisot and v.is_algebraic_integer
    assert v.certified_not_pisot


def test_ten_thirds_is_not_an_algebraic_integer():
    v = A.is_pisot([-10, 3], (3, 4))
    assert not v.is_algebraic_integer and not v.is_pisot


def test_cubic_x3_minus_2x2_minus_1_is_pisot():
    v = A.is_pisot([-1, 0, -2, 1], (2, 3))
    assert v.is_pisot


def test_pisot_errors():
    with pytest.raises(RootNotGreaterThanOne):
        A.is_pisot([-1, 2], (0, 1))
    with pytest.raises(RootNotIsolated):
        A.is_pisot([-2, 0, 1], (2, 3))


def test_conjugate_bound_examples():
    b = A.conjugate_modulus_bound(SQRT2_PLUS_1, (2, 3))
    assert Fraction(41421, 100000) < b <= Fraction(1, 2)
    assert A.conjugate_modulus_bound([-3, 1], (3, 3)) == 0
    g = A.conjugate_modulus_bound(GOLDEN, (1, 2))
    assert Fraction(618, 1000) <= g < 1


def test_conjugate_bound_rejects_double_root():
    with pytest.raises(MultipleRootsInSelector):
        A.conjugate_modulus_bound([4, -4, 1], (1, 3))  # (x - 2)^2


PISOT_CORPUS = [
    [-3, 1], [-1, -2, 1], [-1, -1, 1], [-1, 0, -2, 1], [-2, 0, 1], [-3, 0, 1],
    [-1, -1, -1, 1], [-1, -1, 0, 1], [-1, 0, -1, 1], [-1, -3, 1], [1, -3, 1],
    [-1, -1, -1, -1, 1], [-2, -1, 1], [1, -4, 1], [-1, 1, -2, 1], [-5, 1, 1],
    [-1, -1, 1, 1], [-1, 0, 0, -2, 1], [-2, -2, 1],
]


@pytest.mark.parametrize("p", PISOT_CORPUS)
def test_pisot_verdict_agrees_with_numerical_roots(p):
    roots = poly_roots(p, dps=40)
    real = [z.real for z in roots if abs(z.imag) < mpmath.mpf(10) ** -25]
    top = max(real)
    if top <= 1:
        pytest.skip("no root above 1")
    others = [z for z in roots if abs(z - top) > mpmath.mpf(10) ** -25]
    numerical = all(abs(z) < 1 for z in others) and p[-1] == 1
    lo, hi = Fraction(int(mpmath.floor(top * 1000)), 1000), Fraction(int(mpmath.ceil(top * 1000)), 1000)
    if lo == hi:
        lo -= Fraction(1, 1000)
    v = A.is_pisot(p, (lo, hi))
    assert v.is_pisot == numerical
    if v.is_pisot and others:
        assert v.conjugate_modulus_upper_bound >= max(float(abs(z)) for z in others) - 1e-12


# -- Garsia separation ---------------------------------------------------------------------

def test_garsia_integer_base():
    theta = A.AlgebraicReal.rational(3)
    C = A.garsia_separation(theta, [[-2], [0], [2]])
    assert C == 1
    best = min(abs(sum(t * 3 ** (i + 1) for i, t in enumerate(ts)))
               for ts in itertools.product((-2, 0, 2), repeat=6) if any(ts))
    assert best == 6 >= C


def test_garsia_vacuous_alphabet():
    assert A.garsia_separation(A.AlgebraicReal.rational(3), [[0]]) == 1


def test_garsia_one_plus_sqrt2_matches_formula_and_brute_force():
    theta = A.AlgebraicReal.from_root(SQRT2_PLUS_1, 2, 3)
    C = A.garsia_separation(theta, [[-1], [0], [1]])
    lo2, hi2 = sqrt2_bounds()
    # C is (1 - rho) with rho an upper bound on sqrt2 - 1, so C <= 2 - sqrt2
    assert C <= 2 - lo2
    assert C > Fraction(58, 100)
    assert min_nonzero_sum_1_plus_sqrt2(8) >= C


def test_garsia_rejects_non_pisot():
    with pytest.raises(NotPisot):
        A.garsia_separation(A.AlgebraicReal.from_root([-2, 0, 1], 1, 2), [[1]])


@given(
    st.sampled_from(["three", "silver", "tribonacci"]),
    st.lists(st.integers(-2, 2), min_size=2, max_size=3, unique=True),
)
def test_garsia_bound_is_sound_on_random_integer_alphabets(name, alphabet):
    poly = {"three": [-3, 1], "silver": SQRT2_PLUS_1, "tribonacci": [-1, -1, -1, 1]}[name]
    theta = A.AlgebraicReal.largest_root(poly)
    C = A.garsia_separation(theta, [[t] for t in alphabet])
    with mpmath.workdps(60):
        th = max(z.real for z in poly_roots(poly) if abs(z.imag) < 1e-40)
        pows = [th ** i for i in range(1, 7)]
        for ts in itertools.product(alphabet, repeat=6):
            s = sum(t * p for t, p in zip(ts, pows))
            if abs(s) > mpmath.mpf(10) ** -40:
                assert abs(s) >= mpmath.mpf(C.numerator) / C.denominator - mpmath.mpf(10) ** -40


# -- field reduction -----------------------------------------------------------------------

def test_reduce_in_field_examples():
    theta = A.AlgebraicReal.from_root(SQRT2_PLUS_1, 2, 3)
    assert A.reduce_in_field([0, 0, 1], theta) == [1, 2]
    assert A.reduce_in_field([0, 0, 0, 1], theta) == [2, 5]
    assert A.reduce_in_field([Fraction(7, 2)], theta) == [Fraction(7, 2)]


def test_reduce_rejects_rational_theta():
    with pytest.raises(RationalTheta):
        A.reduce_in_field([1, 1], A.AlgebraicReal.rational(3))


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6),
       st.lists(st.integers(-9, 9), min_size=1, max_size=6))
def test_reduce_is_a_ring_homomorphism(x, y):
    theta = A.AlgebraicReal.from_root([-1, -1, -1, 1], 1, 2)
    lhs = A.reduce_in_field(P.mul(x, y), theta)
    rhs = A.reduce_in_field(P.mul(A.reduce_in_field(x, theta), A.reduce_in_field(y, theta)), theta)
    assert P.trim(lhs) == P.trim(rhs)


def test_field_element_arithmetic_matches_floats():
    theta = A.AlgebraicReal.from_root(SQRT2_PLUS_1, 2, 3)
    K = A.NumberField.of(theta)
    t = K.gen
    x = (t ** 3 - 2 * t + Fraction(1, 3)) / (t + 1)
    expected = ((1 + 2 ** 0.5) ** 3 - 2 * (1 + 2 ** 0.5) + 1 / 3) / (2 + 2 ** 0.5)
    assert float(x) == pytest.approx(expected, rel=1e-12)
    assert (t * t - 2 * t - 1).is_zero()
    assert x.sign() == 1
