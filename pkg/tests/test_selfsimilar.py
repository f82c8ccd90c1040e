import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantorembed import algebraic as A
from cantorembed.errors import DepthBudgetExceeded, InvalidLetter, NotApplicable
from cantorembed.selfsimilar import (
    ONES,
    ZEROS,
    CentralCantor,
    ExcludedAtDepth,
    HomogeneousIFS,
    InCoverToDepth,
    Multiplicity,
    Periodic,
    Uniqueness,
    cantor_p_set,
    coding_to_point,
    contains_point,
    covers_to_csv,
    cylinder_interval,
    gaps,
    ifs_to_json,
    is_set_of_uniqueness,
    level_cover,
    similarity_dimension,
    solve_s_n,
)

from oracles import in_middle_third_cantor, ternary_digits

F = Fraction
C3 = CentralCantor(F(1, 3))


# -- cylinders and covers ------------------------------------------------------------

def test_cylinder_examples():
    assert cylinder_interval(C3, "0") == (0, F(1, 3))
    assert cylinder_interval(C3, "01") == (F(2, 9), F(1, 3))
    assert cylinder_interval(C3, "") == (0, 1)


def test_cylinder_rejects_bad_letter():
    with pytest.raises(InvalidLetter):
        cylinder_interval(C3, "02")


@given(st.lists(st.integers(0, 1), max_size=12))
def test_cylinder_width_is_ratio_power(word):
    lo, hi = cylinder_interval(C3, word)
    assert hi - lo == F(1, 3) ** len(word)


def test_level_cover_examples():
    assert level_cover(C3, 1).intervals == ((0, F(1, 3)), (F(2, 3), 1))
    two = level_cover(C3, 2).intervals
    assert [a for a, _ in two] == [0, F(2, 9), F(2, 3), F(8, 9)]
    assert all(b - a == F(1, 9) for a, b in two)
    touching = HomogeneousIFS(F(1, 2), [0, F(1, 2)])
    assert level_cover(touching, 3).intervals == ((0, 1),)


def test_depth_budget(monkeypatch):
    with pytest.raises(DepthBudgetExceeded):
        level_cover(CentralCantor(F(1, 5)), 12, budget=1000)
    monkeypatch.setenv("CANTOREMBED_DEPTH_BUDGET", "100")
    with pytest.raises(DepthBudgetExceeded):
        level_cover(CentralCantor(F(1, 7)), 9)


def test_gap_examples():
    assert gaps(level_cover(C3, 1)) == [(F(1, 3), F(2, 3))]
    lengths = [b - a for a, b in gaps(level_cover(C3, 2))]
    assert lengths == [F(1, 9), F(1, 3), F(1, 9)]
    assert gaps(level_cover(HomogeneousIFS(F(1, 2), [0, F(1, 2)]), 2)) == []


@pytest.mark.parametrize("rho", [F(1, 3), F(1, 4), F(2, 5), F(3, 10)])
@pytest.mark.parametrize("n", range(1, 9))
def test_min_gap_formula(rho, n):
    cover = level_cover(CentralCantor(rho), n)
    assert cover.min_gap() == rho ** (n - 1) * (1 - 2 * rho)


@pytest.mark.parametrize("ifs", [C3, CentralCantor(F(2, 5)), cantor_p_set(5, [0, 2, 4]),
                                 HomogeneousIFS(F(1, 4), [0, F(1, 5), F(3, 4)])])
def test_covers_are_nested(ifs):
    for n in range(0, 9):
        assert level_cover(ifs, n + 1).subset_of(level_cover(ifs, n))


def test_algebraic_cover_is_sound_and_nested():
    alpha = A.AlgebraicReal.from_root([-1, 1, 2, 1], 0, 1)
    E = CentralCantor(alpha)
    for n in range(1, 8):
        cover = level_cover(E, n)
        assert len(cover) == 2 ** n
        assert cover.subset_of(level_cover(E, n - 1))
        a = float(alpha)
        # every cylinder left end (a point of E) is covered
        for word in range(2 ** n):
            bits = [(word >> k) & 1 for k in range(n)]
            x = sum((1 - a) * b * a ** i for i, b in enumerate(bits))
            assert cover.meets(F(x) - F(1, 10 ** 12), F(x) + F(1, 10 ** 12))


def test_cover_csv_and_ifs_json():
    text = covers_to_csv([level_cover(C3, 1)])
    assert text.splitlines() == ["level,left,right", "1,0/1,1/3", "1,2/3,1/1"]
    assert json.loads(ifs_to_json(C3)) == {"ratio": "1/3", "digits": ["0/1", "2/3"], "hull": ["0/1", "1/1"]}


# -- membership ------------------------------------------------------------------------

def test_contains_point_examples():
    assert contains_point(C3, F(1, 2), 5) == ExcludedAtDepth(1, (F(1, 3), F(2, 3)))
    assert contains_point(C3, F(1, 4), 12) == InCoverToDepth(12)
    assert isinstance(contains_point(C3, F(3, 16), 12), ExcludedAtDepth)
    assert contains_point(C3, F(3, 16), 12).depth == 2
    assert ternary_digits(F(3, 16), 2) == [0, 1]


@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6))
def test_membership_agrees_with_ternary_rule(x):
    verdict = contains_point(C3, x, 10)
    assert isinstance(verdict, InCoverToDepth) == in_middle_third_cantor(x, 10)


# -- dimension equations ------------------------------------------------------------------

def test_similarity_dimension_examples():
    lo, hi = similarity_dimension([F(1, 3), F(1, 3)], tol=F(1, 10 ** 7))
    assert hi - lo <= F(1, 10 ** 6)
    assert lo <= math.log(2) / math.log(3) <= hi
    lo, hi = similarity_dimension([F(1, 2), F(1, 4)])
    golden = (1 + 5 ** 0.5) / 2
    assert abs(float(lo) - math.log(golden) / math.log(2)) < 1e-7
    assert similarity_dimension([F(1, 2)]) == (0, 0)


def test_solve_s_n_examples():
    assert solve_s_n([F(1, 3), F(1, 3)], 1) == (0, 0)
    lo, hi = solve_s_n([F(1, 3), F(1, 3)], 2)
    assert lo <= F(1, 2) <= hi
    lo, hi = solve_s_n([F(1, 3), F(1, 3)], 4)
    assert abs(float(lo) - math.log(15) / math.log(81)) < 1e-7


def test_s_n_increase_toward_s():
    s = float(similarity_dimension([F(1, 3), F(1, 3)])[0])
    values = [float(solve_s_n([F(1, 3), F(1, 3)], n)[0]) for n in range(1, 9)]
    assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))
    assert all(v <= s + 1e-9 for v in values)


# -- coding ---------------------------------------------------------------------------------

def test_coding_examples():
    assert coding_to_point(C3, (), ZEROS) == 0
    assert coding_to_point(C3, (), ONES) == 1
    assert coding_to_point(C3, (), Periodic((0, 1))) == F(1, 4)
    a = coding_to_point(C3, (), Periodic((0, 1)))
    b = coding_to_point(C3, (), Periodic((1, 0)))
    assert b == F(3, 4)
    assert b - a == (1 - F(1, 3)) / (1 + F(1, 3))


def _eventually_periodic():
    return st.tuples(st.lists(st.integers(0, 1), max_size=6),
                     st.lists(st.integers(0, 1), min_size=1, max_size=4))


def _expand(prefix, pattern, n=40):
    out = list(prefix)
    while len(out) < n:
        out.extend(pattern)
    return out[:n]


@given(_eventually_periodic(), _eventually_periodic())
def test_coding_map_is_strictly_increasing(z, w):
    x = coding_to_point(C3, z[0], Periodic(tuple(z[1])))
    y = coding_to_point(C3, w[0], Periodic(tuple(w[1])))
    ez, ew = _expand(*z), _expand(*w)
    if ez < ew:
        assert x < y
    elif ez > ew:
        assert x > y
    else:
        assert x == y


# -- sets of uniqueness -------------------------------------------------------------------

def test_uniqueness_examples():
    assert isinstance(is_set_of_uniqueness(C3), Uniqueness)
    assert isinstance(is_set_of_uniqueness(CentralCantor(F(3, 10))), Multiplicity)
    with pytest.raises(ValueError):
        CentralCantor(A.AlgebraicReal.from_root([-1, 0, 2], 0, 1))  # 1/sqrt2 > 1/2


def test_uniqueness_golden_and_silver():
    silver = A.AlgebraicReal.from_root([-1, 2, 1], 0, 1)  # sqrt2 - 1, reciprocal 1 + sqrt2
    assert isinstance(is_set_of_uniqueness(CentralCantor(silver)), Uniqueness)
    with pytest.raises(NotApplicable):
        is_set_of_uniqueness(HomogeneousIFS(F(2, 3), [0, F(1, 3)]))


def test_membership_on_thousand_random_rationals():
    rng = random.Random(20261015)
    for _ in range(1000):
        q = rng.randint(1, 10 ** 6)
        x = F(rng.randint(0, q), q)
        inside = isinstance(contains_point(C3, x, 10), InCoverToDepth)
        assert inside == in_middle_third_cantor(x, 10)


@pytest.mark.parametrize("tail", [ZEROS, ONES, Periodic((0, 1))])
def test_coding_order_on_all_words_of_length_ten(tail):
    words = [tuple((w >> (9 - i)) & 1 for i in range(10)) for w in range(2 ** 10)]
    points = [coding_to_point(C3, word, tail) for word in words]
    assert all(a < b for a, b in zip(points, points[1:]))
