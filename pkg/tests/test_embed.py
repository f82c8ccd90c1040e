from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorembed import algebraic as A
from cantorembed.embed import (
    Branches,
    ConsistentToDepth,
    EmbeddingProblem,
    ExactEmbeds,
    ExactRefuted,
    ForcedPrefix,
    HoleCertificate,
    RefutedAtDepth,
    check_hole_certificate,
    check_refutation,
    check_refuted_trace,
    check_state_closure,
    decide_embedding_exact,
    feasible_offsets,
    hole_evidence,
    lemma_ex1_family,
    refute_all_offsets_hole,
    rescale_witness,
    translate_set,
    unique_signed_expansion,
    verify_embedding,
)
from cantorembed.errors import IncommensurableRatios, NotApplicable, ScaleConditionViolated
from cantorembed.selfsimilar import CentralCantor, HomogeneousIFS, gaps, level_cover

from oracles import in_middle_third_cantor, ternary_digits

F = Fraction
C3, C4, C5, C9 = (CentralCantor(F(1, k)) for k in (3, 4, 5, 9))


def verdict(E, Fs, lam, c, n, m=None):
    return verify_embedding(EmbeddingProblem(E, Fs, lam, c), n, m).verdict


# -- finite-depth verification -----------------------------------------------------------

def test_verify_examples():
    assert isinstance(verdict(C3, C9, 1, 0, 8, 4), ConsistentToDepth)
    v = verdict(C3, C4, 1, 0, 4, 4)
    assert isinstance(v, RefutedAtDepth)
    assert ternary_digits(F(3, 16), 2) == [0, 1]  # 3/16 in C_{1/4} lies in the ternary gap (1/9, 2/9)
    g_lo, g_hi = v.separating_gap
    w_lo, w_hi = v.witness_interval
    assert g_lo < w_lo <= w_hi < g_hi
    assert (g_lo, g_hi) in [(a, b) for a, b in gaps(level_cover(C3, 4))]
    for n in range(1, 9):
        assert isinstance(verdict(C5, C5, F(1, 5), 0, n), ConsistentToDepth)


def test_refutation_replays_exactly():
    prob = EmbeddingProblem(C3, C4, 1, 0)
    cert = verify_embedding(prob, 4, 4)
    assert check_refutation(prob, cert.verdict)
    lo, hi = cert.verdict.witness_interval
    cover = level_cover(C3, cert.verdict.depth_E)
    assert not cover.meets(lo, hi)


@settings(max_examples=25)
@given(st.integers(2, 12), st.integers(0, 30), st.integers(1, 6))
def test_refutations_are_sound(k, c_num, n):
    # random offsets of C_{1/k}: any refutation must replay and leave an image point outside C_{1/3}
    Fs = CentralCantor(F(1, k)) if k > 2 else HomogeneousIFS(F(1, 3), [0, F(1, 3), F(2, 3)])
    c = F(c_num, 30)
    prob = EmbeddingProblem(C3, Fs, F(1, 2), c)
    v = verify_embedding(prob, n, n).verdict
    if isinstance(v, RefutedAtDepth):
        assert check_refutation(prob, v)


def test_refutation_contradicts_ternary_rule():
    # c = 1/3: the point 1/3 + 8/81 of 1/3 + C_{1/9} has a ternary digit 1
    assert not in_middle_third_cantor(F(1, 3) + F(8, 81), 6)
    assert isinstance(verdict(C3, C9, 1, F(1, 3), 6, 3), RefutedAtDepth)


# -- feasible offsets ---------------------------------------------------------------------

def test_feasible_examples():
    res = feasible_offsets(C3, C9, 1, 2, 1)
    assert not res.is_empty and res.final.contains(0)
    two = HomogeneousIFS(F(1, 4), [0, F(3, 4)])
    assert feasible_offsets(C3, two, 2, 3).empty_at == 0
    res = feasible_offsets(C3, C4, 1, 20)
    assert res.is_empty and res.empty_at <= 20


@pytest.mark.parametrize("E,Fs,lam", [
    (C3, C9, 1), (C3, C4, 1), (C3, C9, F(1, 3)), (CentralCantor(F(2, 5)), C5, F(1, 2)),
    (C3, C9, -1), (C4, C9, F(3, 4)),
])
def test_feasible_sets_are_antitone(E, Fs, lam):
    res = feasible_offsets(E, Fs, lam, 6)
    covers = [cov for _, _, cov in res.per_depth]
    for a, b in zip(covers, covers[1:]):
        assert b.subset_of(a)


def test_feasible_offsets_contain_true_offsets():
    # C_{1/9} embeds in C_{1/3} at c = 0 and c = 2/3 (and their refinements)
    res = feasible_offsets(C3, C9, 1, 5)
    assert res.final.contains(0)
    res = feasible_offsets(C3, C9, F(1, 3), 5)
    assert res.final.contains(F(2, 3)) and res.final.contains(0)


# -- exact decision ------------------------------------------------------------------------

def test_exact_examples():
    ok = decide_embedding_exact(EmbeddingProblem(C3, C9, 1, 0))
    assert isinstance(ok.verdict, ExactEmbeds)
    bad = decide_embedding_exact(EmbeddingProblem(C3, C9, 1, F(1, 3)))
    assert isinstance(bad.verdict, ExactRefuted)
    assert check_refuted_trace(bad.problem, bad.verdict.unreachable_state_trace)
    assert isinstance(decide_embedding_exact(EmbeddingProblem(C3, C9, F(1, 3), F(2, 3))).verdict, ExactEmbeds)


def test_exact_rejects_incommensurable():
    with pytest.raises(IncommensurableRatios):
        decide_embedding_exact(EmbeddingProblem(C3, C4, 1, 0))


def test_state_closure_replays_and_tamper_fails():
    cert = decide_embedding_exact(EmbeddingProblem(C3, C9, 1, 0))
    states = cert.verdict.states
    assert check_state_closure(cert.problem, states)
    assert not check_state_closure(cert.problem, states[1:] if len(states) > 1 else ())


EXACT_CASES = [
    (C3, C9, F(1), F(0)), (C3, C9, F(1), F(1, 3)), (C3, C9, F(1, 3), F(2, 3)),
    (C3, C3, F(1), F(0)), (C3, C3, F(1, 3), F(1, 3)), (C3, C9, F(1, 9), F(8, 9)),
    (C3, C9, F(1), F(2, 9)), (C5, CentralCantor(F(1, 25)), F(1, 5), F(4, 5)),
    (C3, C9, F(2, 3), F(0)), (C4, CentralCantor(F(1, 16)), F(1), F(3, 4)),
]


@pytest.mark.parametrize("E,Fs,lam,c", EXACT_CASES)
def test_semi_and_exact_decisions_agree(E, Fs, lam, c):
    exact = decide_embedding_exact(EmbeddingProblem(E, Fs, lam, c)).verdict
    semi = [verdict(E, Fs, lam, c, n) for n in range(1, 11)]
    if isinstance(exact, ExactEmbeds):
        assert all(isinstance(v, ConsistentToDepth) for v in semi)
    else:
        assert any(isinstance(v, RefutedAtDepth) for v in semi)


@pytest.mark.parametrize("E,Fs,lam,c", EXACT_CASES)
def test_reflection_symmetry(E, Fs, lam, c):
    width = Fs.width
    a = decide_embedding_exact(EmbeddingProblem(E, Fs, lam, c)).verdict
    b = decide_embedding_exact(EmbeddingProblem(E, Fs, -lam, c + lam * width)).verdict
    assert type(a) is type(b)
    for n in (2, 5):
        assert type(verdict(E, Fs, lam, c, n)) is type(verdict(E, Fs, -lam, c + lam * width, n))


# -- hole certificates -----------------------------------------------------------------------

def _assert_hole_valid(cert, alpha, beta, lam):
    v = cert.verdict
    assert isinstance(v, HoleCertificate)
    assert check_hole_certificate(alpha, beta, lam, v)
    ev = hole_evidence(alpha, beta, lam, v.ell, v.m, v.n)
    scale = F(lam) * v.gamma ** v.m / F(alpha) ** v.n if isinstance(v.gamma, Fraction) else None
    if scale is not None:
        assert alpha < scale < (1 - 2 * alpha) / (1 - 2 * v.gamma)
        assert lam * v.gamma ** v.m * (1 - 2 * v.gamma) < alpha ** v.n * (1 - 2 * alpha)
    assert ev["left"] and ev["right"] and ev["hole"]


def test_hole_examples():
    _assert_hole_valid(refute_all_offsets_hole(F(1, 5), F(1, 11), 1), F(1, 5), F(1, 11), 1)
    with pytest.raises(NotApplicable):
        refute_all_offsets_hole(F(1, 5), F(1, 25), 1)


def test_hole_irrational_exponent_three_halves():
    alpha = F(1, 5)
    # beta = (1/5)**(3/2) = sqrt(5)/25 is a root of 625 x**2 - 5
    beta = A.AlgebraicReal.from_root([-5, 0, 625], 0, 1)
    cert = refute_all_offsets_hole(alpha, beta, 1)
    assert check_hole_certificate(alpha, beta, 1, cert.verdict)


@settings(max_examples=15)
@given(st.sampled_from([F(1, 5), F(1, 6), F(2, 9), F(1, 7)]), st.integers(2, 40),
       st.fractions(min_value=F(1, 10), max_value=3, max_denominator=20))
def test_hole_certificates_replay(alpha, k, lam):
    beta = alpha / k * F(k, k + 1)
    try:
        cert = refute_all_offsets_hole(alpha, beta, lam)
    except NotApplicable:
        return
    assert check_hole_certificate(alpha, beta, lam, cert.verdict)


# -- rescaling ------------------------------------------------------------------------------------

def test_rescale_examples():
    assert rescale_witness(F(1, 3), F(1, 9), 0, 1, 1, 1) == (0, F(1, 3))
    assert rescale_witness(F(1, 3), F(1, 9), F(2, 3), F(1, 3), 1, 0) == (0, 1)
    with pytest.raises(ScaleConditionViolated):
        rescale_witness(F(1, 3), F(1, 9), 0, 1, 3, 0)


@pytest.mark.parametrize("a,lam", [(0, 1), (F(2, 3), F(1, 3)), (F(2, 9), F(1, 9)), (F(8, 9), F(1, 9))])
@pytest.mark.parametrize("n,k", [(1, 1), (1, 0), (2, 1), (2, 2), (0, 1)])
def test_rescale_preserves_consistency(a, lam, n, k):
    d = 6
    assert isinstance(verdict(C3, C9, lam, a, d), ConsistentToDepth)
    try:
        a2, lam2 = rescale_witness(F(1, 3), F(1, 9), a, lam, n, k)
    except ScaleConditionViolated:
        return
    assert isinstance(verdict(C3, C9, lam2, a2, d - n), ConsistentToDepth)


# -- square-root family -----------------------------------------------------------------------------

def test_ex1_family():
    fam = lemma_ex1_family(2)
    assert fam.alpha_polynomial == [-1, 1, 2, 1]
    assert abs(float(fam.alpha) - 0.465571231876768) < 1e-12
    a = float(fam.alpha)
    assert abs(float(fam.beta) - a ** 2.5) < 1e-12
    assert abs(float(fam.lam) - (1 - a) / (1 - a ** 2.5)) < 1e-12
    alphas = [float(lemma_ex1_family(k).alpha) for k in range(2, 9)]
    assert all(x > y for x, y in zip(alphas, alphas[1:]))
    assert abs(alphas[-1] - (3 - 5 ** 0.5) / 2) < 0.01
    with pytest.raises(ValueError):
        lemma_ex1_family(1)


def test_ex1_embedding_consistent():
    fam = lemma_ex1_family(2)
    E, Fs = CentralCantor(fam.alpha), CentralCantor(fam.beta)
    v = verify_embedding(EmbeddingProblem(E, Fs, fam.lam, 0), 10).verdict
    assert isinstance(v, ConsistentToDepth)


# -- signed expansions ------------------------------------------------------------------------------

def test_signed_expansion_examples():
    alpha = F(2, 5)
    r = unique_signed_expansion(alpha, (1 - alpha) / (1 + alpha), 12)
    assert r == ForcedPrefix(tuple((-1) ** i for i in range(12)))
    alpha = F(9, 20)
    r = unique_signed_expansion(alpha, (1 - alpha) / (1 + alpha), 12)
    assert isinstance(r, Branches) and r.first_branch_depth <= 12
    assert unique_signed_expansion(F(1, 3), 0, 10) == ForcedPrefix((0,) * 10)


def _brute_signed(alpha, u, depth):
    """All digit words whose value stays within the largest remaining tail."""
    out = []
    for w in product((-1, 0, 1), repeat=depth):
        s = (1 - alpha) * sum(d * alpha ** i for i, d in enumerate(w))
        if abs(u - s) <= (1 - alpha) * alpha ** depth / (1 - alpha):
            out.append(w)
    return out


@settings(max_examples=20)
@given(st.fractions(min_value=F(1, 10), max_value=F(2, 5), max_denominator=12),
       st.fractions(min_value=-1, max_value=1, max_denominator=12))
def test_signed_expansion_matches_brute_force(alpha, u):
    depth = 6
    words = _brute_signed(alpha, u, depth)
    try:
        r = unique_signed_expansion(alpha, u, depth)
    except Exception:
        assert not words
        return
    if isinstance(r, ForcedPrefix):
        assert set(words) == {r.digits}
    else:
        assert len({w[r.first_branch_depth] for w in words}) > 1


# -- translate sets ---------------------------------------------------------------------------------

def test_translate_set_examples():
    assert translate_set(3, [0, 2]) == [0]
    small = translate_set(3, [0, 1])
    assert 0 in small
    # brute force: all sums of length <= 6 in [0, 1] must appear
    for n in range(1, 7):
        for t in product((-1, 0, 1), repeat=n):
            v = sum(d * 3 ** (i + 1) for i, d in enumerate(t))
            if 0 <= v <= 1:
                assert v in small


def test_translate_set_silver():
    theta = A.AlgebraicReal.from_root([-1, -2, 1], 2, 3)
    values = translate_set(theta, [0, 1])
    assert len(values) >= 1
    floats = sorted(float(v) for v in values)
    sep = float(A.garsia_separation(theta, [[d] for d in range(-2, 3)]))
    assert all(b - a >= sep * (1 - 1e-12) for a, b in zip(floats, floats[1:]))
    # every short sum a + b sqrt2 landing in [0, 1] is listed
    listed = {round(f, 9) for f in floats}
    s2 = 2 ** 0.5
    for n in range(1, 6):
        for t in product((-1, 0, 1), repeat=n):
            v = sum(d * (1 + s2) ** (i + 1) for i, d in enumerate(t))
            if 1e-9 < v < 1 - 1e-9:
                assert round(v, 9) in listed
