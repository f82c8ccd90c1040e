"""Affine embeddings lambda*F + c inside E.

Finite-depth checks (verify_embedding, feasible_offsets) work for any
homogeneous IFSs.  decide_embedding_exact settles the question outright
when 1/ratio(E) is Pisot and ratio(F) is an integer power of ratio(E).
The remaining functions reproduce constructive arguments about central
Cantor sets: hole certificates, rescaled witnesses, the square-root
family, unique signed expansions and translate sets of Pisot digit sums.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import algebraic as A
from . import polynomials as P
from .errors import (
    BudgetExceeded,
    DataOutsideField,
    DepthBudgetExceeded,
    IncommensurableRatios,
    NoExpansionExists,
    NotApplicable,
    NotInAttractor,
    NotPisot,
    ScaleConditionViolated,
    StateBudgetExceeded,
)
from .selfsimilar import (
    CentralCantor,
    HomogeneousIFS,
    IntervalCover,
    default_depth_budget,
    level_cover,
    merge_intervals,
)

DEFAULT_STATE_BUDGET = 200_000


# -- problem and verdicts ------------------------------------------------------------

class EmbeddingProblem:
    """Is lambda*F + c contained in E?  ``c`` may be None when a verdict
    covers every offset at once."""

    def __init__(self, E: HomogeneousIFS, F: HomogeneousIFS, lam, c=Fraction(0)):
        if E.size < 2 or F.size < 2:
            raise ValueError("E and F must have at least two maps each")
        if E.field is not None and F.field is not None and E.field is not F.field:
            raise DataOutsideField("E and F use different number fields")
        base = E.field or F.field
        extra = [v for v in (lam, c) if v is not None]
        field_ = A.common_field([*([base.gen] if base else []), *extra])
        lam = A.lift(lam, field_)
        if A.exact_sign(lam) == 0:
            raise ValueError("lambda must be nonzero")
        self.E, self.F = E, F
        self.lam = lam
        self.c = None if c is None else A.lift(c, field_)
        self.field = field_

    def __repr__(self):
        c = "any" if self.c is None else f"{float(self.c):.6g}"
        return f"EmbeddingProblem(E={self.E!r}, F={self.F!r}, lambda={float(self.lam):.6g}, c={c})"


@dataclass(frozen=True)
class ConsistentToDepth:
    depth_E: int
    depth_F: int
    cylinders_checked: int
    undecided_points: int = 0

    @property
    def depth(self):
        return self.depth_E


@dataclass(frozen=True)
class RefutedAtDepth:
    depth_E: int
    depth_F: int
    witness_word: tuple
    witness_interval: tuple
    separating_gap: tuple


@dataclass(frozen=True)
class ExactEmbeds:
    state_closure_size: int
    states: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class ExactRefuted:
    unreachable_state_trace: tuple
    endpoint: object = None


@dataclass(frozen=True)
class HoleCertificate:
    ell: int
    m: int
    n: int
    gamma: object
    inequality_evidence: dict = field(repr=False, default_factory=dict)


@dataclass
class EmbeddingCertificate:
    """A verdict together with the data needed to re-check it."""

    verdict: object
    problem: EmbeddingProblem | None = None
    parameters: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return type(self.verdict).__name__

    @property
    def embeds(self) -> bool | None:
        if isinstance(self.verdict, ExactEmbeds):
            return True
        if isinstance(self.verdict, (RefutedAtDepth, ExactRefuted, HoleCertificate)):
            return False
        return None


# -- cylinder enclosures -----------------------------------------------------------------

class CylinderTree:
    """Enclosures of the endpoints of cylinder intervals.

    With rational data the enclosures are exact points.  Otherwise ratio
    and digits are enclosed to ``bits`` bits and every step rounds
    outward, so each true endpoint lies in its enclosure.
    """

    def __init__(self, ifs: HomogeneousIFS, bits: int = 96):
        self.ifs = ifs
        self.exact = ifs.is_rational
        self.bits = bits
        eps = Fraction(1, 2 ** bits)
        self.r = A.enclose(ifs.ratio, eps)
        self.digits = [A.enclose(d, eps) for d in ifs.digits]
        self.h0 = A.enclose(ifs.hull[0], eps)
        self.h1 = A.enclose(ifs.hull[1], eps)

    def root(self):
        one = (Fraction(1), Fraction(1))
        zero = (Fraction(0), Fraction(0))
        return ((), zero, one)

    def _round(self, iv):
        return iv if self.exact else A.iv_round(iv, self.bits)

    def child(self, node, letter):
        word, off, scale = node
        off = self._round(A.iv_add(off, A.iv_mul(scale, self.digits[letter])))
        scale = self._round(A.iv_mul(scale, self.r))
        return word + (letter,), off, scale

    def children(self, node):
        return [self.child(node, i) for i in range(self.ifs.size)]

    def endpoints(self, node):
        """Enclosures of the left and right endpoints of the cylinder."""
        _, off, scale = node
        lo = self._round(A.iv_add(off, A.iv_mul(scale, self.h0)))
        hi = self._round(A.iv_add(off, A.iv_mul(scale, self.h1)))
        return lo, hi

    def outer(self, node):
        lo, hi = self.endpoints(node)
        return lo[0], hi[1]

    def inner(self, node):
        lo, hi = self.endpoints(node)
        return lo[1], hi[0]

    def leaves(self, depth: int, budget: int | None = None):
        budget = default_depth_budget() if budget is None else budget
        if self.ifs.size ** depth > budget:
            raise DepthBudgetExceeded(
                f"{self.ifs.size}**{depth} cylinders exceed the budget {budget}")
        stack = [self.root()]
        while stack:
            node = stack.pop()
            if len(node[0]) == depth:
                yield node
            else:
                stack.extend(reversed(self.children(node)))

    def search(self, depth: int, lo: Fraction, hi: Fraction):
        """Outer enclosures of depth-``depth`` cylinders meeting [lo, hi]."""
        out = []
        stack = [self.root()]
        while stack:
            node = stack.pop()
            a, b = self.outer(node)
            if b < lo or a > hi:
                continue
            if len(node[0]) == depth:
                out.append((a, b))
            else:
                stack.extend(self.children(node))
        return out


def _bits_for(ifs: HomogeneousIFS, depth: int) -> int:
    r = float(ifs.ratio)
    return 64 + int(depth * max(1.0, -math.log2(r))) + 8


def _enclose_real(x, bits: int):
    return A.enclose(x, Fraction(1, 2 ** bits))


def _affine_image(lam_iv, c_iv, lo_iv, hi_iv):
    """Outer enclosure of lam*[lo, hi] + c."""
    a = A.iv_add(A.iv_mul(lam_iv, lo_iv), c_iv)
    b = A.iv_add(A.iv_mul(lam_iv, hi_iv), c_iv)
    return min(a[0], b[0]), max(a[1], b[1])


def _point_image(lam_iv, c_iv, p_iv):
    return A.iv_add(A.iv_mul(lam_iv, p_iv), c_iv)


def matched_depth(E: HomogeneousIFS, F: HomogeneousIFS, lam, n: int) -> int:
    """Smallest m with |lam| * beta**m * width(F) <= alpha**n * width(E)."""
    target = float(E.ratio) ** n * float(E.width)
    size = abs(float(lam)) * float(F.width)
    b = float(F.ratio)
    m = 0
    while size * b ** m > target * (1 + 1e-12):
        m += 1
    return m


# -- finite-depth verification -------------------------------------------------------------

def verify_embedding(prob: EmbeddingProblem, depth_E: int, depth_F: int | None = None,
                     budget: int | None = None) -> EmbeddingCertificate:
    """Compare every depth_F cylinder image of lambda*F + c with the level
    depth_E cover of E.

    A cylinder image missing the cover, or a cylinder endpoint (a point of
    F) landing in a gap, refutes the embedding.  Otherwise the result is
    ConsistentToDepth, which is only evidence.
    """
    if prob.c is None:
        raise ValueError("verify_embedding needs a concrete offset c")
    if depth_F is None:
        depth_F = matched_depth(prob.E, prob.F, prob.lam, depth_E)
    cover = level_cover(prob.E, depth_E, budget)
    bits = _bits_for(prob.F, depth_F + 24) + _bits_for(prob.E, depth_E)
    tree = CylinderTree(prob.F, bits)
    lam_iv = _enclose_real(prob.lam, bits)
    c_iv = _enclose_real(prob.c, bits)
    checked = undecided = 0
    for node in tree.leaves(depth_F, budget):
        checked += 1
        lo, hi = tree.endpoints(node)
        image = _affine_image(lam_iv, c_iv, lo, hi)
        if not cover.meets(*image):
            return _refuted(prob, depth_E, depth_F, node[0], image, cover)
        for end_iv, letter in ((lo, 0), (hi, prob.F.size - 1)):
            p = _point_image(lam_iv, c_iv, end_iv)
            if cover.contains_interval(*p):
                continue
            if cover.gap_for_interval(*p) is not None:
                return _extend_to_gap(prob, tree, node, letter, lam_iv, c_iv, cover,
                                      depth_E, depth_F)
            undecided += 1
    return EmbeddingCertificate(ConsistentToDepth(depth_E, depth_F, checked, undecided), prob,
                                {"depth_E": depth_E, "depth_F": depth_F})


def _refuted(prob, depth_E, depth_F, word, image, cover):
    gap = cover.gap_for_interval(*image)
    verdict = RefutedAtDepth(depth_E, depth_F, tuple(word), tuple(image), tuple(gap))
    return EmbeddingCertificate(verdict, prob, {"depth_E": depth_E, "depth_F": depth_F})


def _extend_to_gap(prob, tree, node, letter, lam_iv, c_iv, cover, depth_E, depth_F):
    """Shrink a cylinder toward its endpoint until its image sits in a gap."""
    for _ in range(400):
        node = tree.child(node, letter)
        lo, hi = tree.endpoints(node)
        image = _affine_image(lam_iv, c_iv, lo, hi)
        if not cover.meets(*image):
            return _refuted(prob, depth_E, depth_F, node[0], image, cover)
    raise RuntimeError("endpoint refutation did not separate; increase precision")


def check_refutation(prob: EmbeddingProblem, verdict: RefutedAtDepth) -> bool:
    """Re-derive the witness image from scratch and test it against the cover."""
    cover = level_cover(prob.E, verdict.depth_E)
    bits = _bits_for(prob.F, len(verdict.witness_word) + 24) + _bits_for(prob.E, verdict.depth_E)
    tree = CylinderTree(prob.F, bits)
    node = tree.root()
    for letter in verdict.witness_word:
        if not 0 <= letter < prob.F.size:
            return False
        node = tree.child(node, letter)
    lo, hi = tree.endpoints(node)
    image = _affine_image(_enclose_real(prob.lam, bits), _enclose_real(prob.c, bits), lo, hi)
    return not cover.meets(*image)


# -- feasible offsets --------------------------------------------------------------------------

@dataclass
class FeasibleOffsets:
    """Offsets c for which lambda*F + c passes the cover test, depth by depth.

    ``per_depth[n]`` is (n, m_n, C_n) where m_n is the F-depth used.  The
    covers shrink with n; once one is empty no offset works for lambda.
    """

    lam: object
    per_depth: list
    empty_at: int | None = None

    @property
    def final(self) -> IntervalCover:
        return self.per_depth[-1][2]

    def cover(self, n: int) -> IntervalCover:
        return self.per_depth[n][2]

    @property
    def is_empty(self) -> bool:
        return self.empty_at is not None


def is_strongly_separated(ifs: HomogeneousIFS) -> bool:
    step = ifs.ratio * ifs.width
    return all(A.compare(b - a, step) > 0 for a, b in zip(ifs.digits, ifs.digits[1:]))


def _first_level_gap(ifs: HomogeneousIFS):
    step = ifs.ratio * ifs.width
    return A.minimum(b - a - step for a, b in zip(ifs.digits, ifs.digits[1:]))


def min_gap_lower_bound(ifs: HomogeneousIFS, n: int, budget=None) -> Fraction | None:
    """Rational lower bound for the smallest gap of level_cover(ifs, n)
    (None when the cover has no gaps)."""
    if n == 0:
        return None
    if is_strongly_separated(ifs):
        g = _first_level_gap(ifs) * ifs.ratio ** (n - 1)
        if isinstance(g, Fraction):
            return g
        lo, _ = A.enclose(g, Fraction(1, 2 ** 20))
        return A.enclose(g, lo / 2 ** 20)[0]
    cover = level_cover(ifs, n, budget)
    return cover.min_gap()


def feasible_offsets(E: HomogeneousIFS, F: HomogeneousIFS, lam, depth_E: int,
                     depth_F: int | None = None, budget: int | None = None) -> FeasibleOffsets:
    """Offsets surviving the cover test at E-depths 0..depth_E.

    At depth n the F-cylinders are taken at the smallest depth m_n (at
    least ``depth_F`` when given) whose scaled width is below every gap of
    level_cover(E, n); then lambda*F + c inside the cover forces each
    scaled cylinder hull inside a single cover interval, and the feasible
    set is the intersection of erosions of the cover by those hulls.
    Each C_n is computed inside the windows of C_(n-1).
    """
    prob = EmbeddingProblem(E, F, lam, Fraction(0))
    lam = prob.lam
    shift = None
    if A.exact_sign(lam) < 0:
        shift = lam * (F.hull[0] + F.hull[1])
        F = F.reflected()
        lam = -lam
    bits = 128
    lam_iv = _enclose_real(lam, bits)
    e0 = _enclose_real(E.hull[0], bits)
    e1 = _enclose_real(E.hull[1], bits)
    f0 = _enclose_real(F.hull[0], bits)
    f1 = _enclose_real(F.hull[1], bits)
    inner_F = A.iv_mul(lam_iv, f0)[1], A.iv_mul(lam_iv, f1)[0]
    w_lo, w_hi = e0[0] - inner_F[0], e1[1] - inner_F[1]
    first = IntervalCover([(w_lo, w_hi)] if w_lo <= w_hi else [], 0, "feasible", E.is_rational and F.is_rational)
    per_depth = [(0, 0, first)]
    empty_at = None if first else 0
    lam_hi = float(lam_iv[1])
    F_width = float(F.width)
    beta = float(F.ratio)
    current = first
    for n in range(1, depth_E + 1):
        if not current:
            break
        gap = min_gap_lower_bound(E, n, budget)
        m = depth_F or 0
        if gap is not None:
            gap_f = float(gap)
            while lam_hi * F_width * beta ** m * (1 + 1e-9) >= gap_f:
                m += 1
        e_bits = _bits_for(E, n) + 16
        f_bits = _bits_for(F, m) + 16
        E_tree = CylinderTree(E, e_bits)
        F_tree = CylinderTree(F, f_bits)
        lam_iv = _enclose_real(lam, max(e_bits, f_bits))
        pieces = []
        for J in F_tree.leaves(m, budget):
            inner = F_tree.inner(J)
            hull_J = A.iv_mul(lam_iv, (inner[0], inner[0]))[1], A.iv_mul(lam_iv, (inner[1], inner[1]))[0]
            pieces.append(hull_J)
        survivors = []
        for window in current:
            allowed = [window]
            for lo_J, hi_J in pieces:
                if lo_J > hi_J:
                    continue
                cyl = E_tree.search(n, allowed[0][0] + lo_J, allowed[-1][1] + hi_J)
                eroded = []
                for a, b in merge_intervals(cyl):
                    if b - a >= hi_J - lo_J:
                        eroded.append((a - lo_J, b - hi_J))
                allowed = IntervalCover(allowed, merged=True).intersect(IntervalCover(eroded)).intervals
                if not allowed:
                    break
            survivors.extend(allowed)
        current = IntervalCover(survivors, n, "feasible", E.is_rational and F.is_rational)
        per_depth.append((n, m, current))
        if not current and empty_at is None:
            empty_at = n
    if shift is not None:
        s_lo, s_hi = _enclose_real(shift, bits)
        per_depth = [(n, m, IntervalCover([(a - s_hi, b - s_lo) for a, b in cov], n, cov.source, cov.exact))
                     for n, m, cov in per_depth]
    return FeasibleOffsets(prob.lam, per_depth, empty_at)


# -- exact decision -------------------------------------------------------------------------------

def _key(x):
    if isinstance(x, Fraction):
        return x
    if x.is_rational:
        return x.rational_value
    return ("K", x.field.reduce(x.coeffs))


def _find_power(alpha, beta) -> int:
    la, lb = math.log(float(alpha)), math.log(float(beta))
    guess = lb / la
    for r in sorted({math.floor(guess), math.ceil(guess), round(guess)}):
        if r >= 1 and A.compare(alpha ** r, beta) == 0:
            return r
    raise IncommensurableRatios(f"ratio(F) is not a positive integer power of ratio(E) (log ratio ~ {guess:.6g})")


class _ExactEngine:
    """Successor rule for states (e, t) meaning (lam*alpha**e) F + t inside E."""

    def __init__(self, prob: EmbeddingProblem):
        E, F = prob.E, prob.F
        if prob.c is None:
            raise ValueError("exact decision needs a concrete offset c")
        if not is_strongly_separated(E):
            raise NotApplicable("exact decision needs the first-level cylinders of E to be disjoint")
        self.alpha = E.ratio
        theta = 1 / self.alpha
        theta_alg = theta if isinstance(theta, Fraction) else theta.to_algebraic_real()
        verdict = A.pisot_verdict_for(theta_alg)
        if not verdict.is_pisot:
            raise NotPisot("1/ratio(E) is not a Pisot number")
        if verdict.minimality != A.VERIFIED:
            raise NotPisot("1/ratio(E) passed the Pisot test but minimality is unverified")
        if prob.field is not None:
            if isinstance(self.alpha, Fraction):
                raise DataOutsideField("E has a rational ratio but the data are irrational")
            if len(verdict.root.squarefree_poly) != len(prob.field.modulus):
                raise DataOutsideField("the data field is larger than the field of 1/ratio(E)")
        self.r = _find_power(self.alpha, F.ratio)
        self.prob = prob
        self.lam = prob.lam
        self.hF = F.hull
        self.F_digits = F.digits
        self.E_digits = E.digits
        self.cyl = [(a + self.alpha * E.hull[0], a + self.alpha * E.hull[1]) for a in E.digits]
        self._scales = {0: self.lam}

    def scale(self, e: int):
        if e not in self._scales:
            self._scales[e] = self.lam * (self.alpha ** e if e >= 0 else (1 / self.alpha) ** (-e))
        return self._scales[e]

    def locate(self, p):
        for i, (lo, hi) in enumerate(self.cyl):
            if A.compare(p, lo) >= 0 and A.compare(p, hi) <= 0:
                return i
        return None

    def step(self, state):
        """('refuted', endpoint) or ('next', [states])."""
        e, t = state
        s = self.scale(e)
        p = t + s * self.hF[0]
        q = t + s * self.hF[1]
        i = self.locate(p)
        if i is None:
            return "refuted", p
        j = self.locate(q)
        if j is None:
            return "refuted", q
        if i == j:
            return "next", [(e - 1, (t - self.E_digits[i]) / self.alpha)]
        return "next", [(e + self.r, t + s * b) for b in self.F_digits]


def decide_embedding_exact(prob: EmbeddingProblem, state_budget: int = DEFAULT_STATE_BUDGET) -> EmbeddingCertificate:
    """Decide lambda*F + c inside E by exploring the finite state space.

    A state (e, t) asks whether (lambda*alpha**e) F + t lies in E.  If the
    F-piece hull sits inside one first-level cylinder of E the state maps
    back through that cylinder; if its ends lie in different cylinders F
    is subdivided; an end outside every cylinder refutes.  Pisot
    separation keeps the reachable offsets finite.
    """
    engine = _ExactEngine(prob)
    root = (0, A.lift(prob.c, prob.field))
    parents = {(0, _key(root[1])): None}
    states = {(0, _key(root[1])): root}
    queue = deque([root])
    while queue:
        state = queue.popleft()
        outcome, data = engine.step(state)
        if outcome == "refuted":
            trace = [state]
            k = (state[0], _key(state[1]))
            while parents.get(k) is not None:
                prev = parents[k]
                trace.append(prev)
                k = (prev[0], _key(prev[1]))
            trace.reverse()
            verdict = ExactRefuted(tuple(trace), data)
            return EmbeddingCertificate(verdict, prob, {})
        for nxt in data:
            k = (nxt[0], _key(nxt[1]))
            if k not in states:
                states[k] = nxt
                parents[k] = state
                queue.append(nxt)
                if len(states) > state_budget:
                    raise StateBudgetExceeded(
                        f"more than {state_budget} states reached", states_reached=len(states))
    ordered = tuple(sorted(states.values(), key=lambda s: (s[0], float(s[1]))))
    return EmbeddingCertificate(ExactEmbeds(len(ordered), ordered), prob, {})


def check_state_closure(prob: EmbeddingProblem, states: Sequence) -> bool:
    """True iff ``states`` contains the root and is closed under the
    successor rule without any refutation (a proof of embedding)."""
    engine = _ExactEngine(prob)
    keys = {(e, _key(t)) for e, t in states}
    if (0, _key(A.lift(prob.c, prob.field))) not in keys:
        return False
    for state in states:
        outcome, data = engine.step(state)
        if outcome == "refuted":
            return False
        if any((e, _key(t)) not in keys for e, t in data):
            return False
    return True


def check_refuted_trace(prob: EmbeddingProblem, trace: Sequence) -> bool:
    """True iff ``trace`` is a valid path from the root ending in a refutation."""
    engine = _ExactEngine(prob)
    if not trace or (trace[0][0], _key(trace[0][1])) != (0, _key(A.lift(prob.c, prob.field))):
        return False
    for cur, nxt in zip(trace, trace[1:]):
        outcome, data = engine.step(cur)
        if outcome != "next" or (nxt[0], _key(nxt[1])) not in {(e, _key(t)) for e, t in data}:
            return False
    return engine.step(trace[-1])[0] == "refuted"


# -- hole certificates ----------------------------------------------------------------------------

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def _is_integer_power(alpha, gamma) -> bool:
    guess = math.log(float(gamma)) / math.log(float(alpha))
    for k in {math.floor(guess), math.ceil(guess), round(guess)}:
        if k >= 1 and A.compare(alpha ** k, gamma) == 0:
            return True
    return False


def hole_evidence(alpha, beta, lam, ell: int, m: int, n: int) -> dict:
    """Exact quantities behind a hole certificate and whether each inequality holds."""
    alpha, beta, lam = A.lift_all(alpha, beta, lam)
    lam = -lam if A.exact_sign(lam) < 0 else lam
    gamma = beta ** ell
    scale = lam * gamma ** m / alpha ** n
    upper = (1 - 2 * alpha) / (1 - 2 * gamma)
    hole_F = lam * gamma ** m * (1 - 2 * gamma)
    hole_E = alpha ** n * (1 - 2 * alpha)
    return {
        "gamma": gamma,
        "scale": scale,
        "upper": upper,
        "hole_F": hole_F,
        "hole_E": hole_E,
        "prime_condition": A.compare(alpha, upper * upper) < 0 and not _is_integer_power(alpha, gamma),
        "left": A.compare(alpha, scale) < 0,
        "right": A.compare(scale, upper) < 0,
        "hole": A.compare(hole_F, hole_E) < 0,
    }


def check_hole_certificate(alpha, beta, lam, cert: HoleCertificate) -> bool:
    if cert.ell not in SMALL_PRIMES and not all(cert.ell % p for p in range(2, int(cert.ell ** 0.5) + 1)):
        return False
    ev = hole_evidence(alpha, beta, lam, cert.ell, cert.m, cert.n)
    return bool(ev["prime_condition"] and ev["left"] and ev["right"] and ev["hole"])


def refute_all_offsets_hole(alpha, beta, lam, max_exponent: int = 200) -> EmbeddingCertificate:
    """Certificate that no translate of lam*C_beta fits inside C_alpha.

    Needs 0 < beta < alpha < 1/4 and log(beta)/log(alpha) not a positive
    integer.  Finds a prime l with gamma = beta**l, log(gamma)/log(alpha)
    not an integer and alpha < ((1-2 alpha)/(1-2 gamma))**2, then (m, n)
    with alpha < lam gamma**m / alpha**n < (1-2 alpha)/(1-2 gamma).  The
    piece lam gamma**m C_gamma is then too wide for one cylinder of level
    n+1 but its largest gap is too short to bridge two of them.
    """
    alpha, beta, lam = A.lift_all(alpha, beta, lam)
    if not (A.compare(alpha, 0) > 0 and A.compare(alpha, Fraction(1, 4)) < 0):
        raise NotApplicable("needs 0 < alpha < 1/4")
    if not (A.compare(beta, 0) > 0 and A.compare(beta, alpha) < 0):
        raise NotApplicable("needs 0 < beta < alpha")
    if _is_integer_power(alpha, beta):
        raise NotApplicable("log(beta)/log(alpha) is a positive integer; C_beta embeds in C_alpha")
    lam_abs = -lam if A.exact_sign(lam) < 0 else lam
    la = math.log(float(alpha))
    lf = math.log(float(lam_abs))
    for ell in SMALL_PRIMES:
        gamma = beta ** ell
        upper = (1 - 2 * alpha) / (1 - 2 * gamma)
        if not A.compare(alpha, upper * upper) < 0 or _is_integer_power(alpha, gamma):
            continue
        lg = ell * math.log(float(beta))
        lu = math.log(float(upper))
        for m in range(max_exponent + 1):
            for n in range(max_exponent + 1):
                x = lf + m * lg - n * la
                if not (la - 1e-9 < x < lu + 1e-9):
                    continue
                ev = hole_evidence(alpha, beta, lam, ell, m, n)
                if ev["left"] and ev["right"] and ev["hole"]:
                    cert = HoleCertificate(ell, m, n, ev["gamma"], ev)
                    E, F = CentralCantor(alpha), CentralCantor(beta)
                    prob = EmbeddingProblem(E, F, lam, None)
                    return EmbeddingCertificate(cert, prob, {"alpha": alpha, "beta": beta, "lambda": lam})
    raise NotApplicable("no hole certificate found within the search budget")


# -- rescaling witnesses ----------------------------------------------------------------------------

def coding_digits(alpha, a, n: int):
    """First n binary coding digits of a in C_alpha (alpha < 1/2) and the
    shifted point pi(sigma**n z)."""
    (alpha, a) = A.lift_all(alpha, a)
    if not A.compare(alpha, Fraction(1, 2)) < 0:
        raise ValueError("coding is unique only for alpha < 1/2")
    digits = []
    for _ in range(n):
        if A.compare(a, 0) >= 0 and A.compare(a, alpha) <= 0:
            digits.append(0)
            a = a / alpha
        elif A.compare(a, 1 - alpha) >= 0 and A.compare(a, 1) <= 0:
            digits.append(1)
            a = (a - (1 - alpha)) / alpha
        else:
            raise NotInAttractor("point lies in a gap of C_alpha")
    return tuple(digits), a


def rescale_witness(alpha, beta, a, lam, n: int, k: int):
    """From a + lam C_beta in C_alpha produce pi(sigma**n z) + lam' C_beta
    in C_alpha with lam' = lam beta**k / alpha**n.

    Accepted when lam' < (1 - 2 alpha)/alpha, or, failing that, when the
    hull [a, a + lam beta**k] already lies in the level-n cylinder of a.
    """
    alpha, beta, a, lam = A.lift_all(alpha, beta, a, lam)
    new_lam = lam * beta ** k / alpha ** n
    bound = (1 - 2 * alpha) / alpha
    digits, shifted = coding_digits(alpha, a, n)
    if A.compare(new_lam, bound) >= 0:
        E = CentralCantor(alpha)
        from .selfsimilar import cylinder_interval
        lo, hi = cylinder_interval(E, digits)
        top = a + lam * beta ** k
        if not (A.compare(a, lo) >= 0 and A.compare(top, hi) <= 0):
            raise ScaleConditionViolated(
                "lam*beta**k/alpha**n is not below (1-2alpha)/alpha and the piece leaves the cylinder")
    return shifted, new_lam


# -- square-root family -----------------------------------------------------------------------------

@dataclass
class ExOneFamily:
    k: int
    alpha: A.AlgebraicReal
    beta: object
    lam: object
    alpha_polynomial: list

    def polynomial_of(self, x) -> list[int]:
        return x.to_algebraic_real().poly

    @property
    def beta_polynomial(self):
        return self.polynomial_of(self.beta)

    @property
    def lambda_polynomial(self):
        return self.polynomial_of(self.lam)


def lemma_ex1_polynomial(k: int) -> list[int]:
    """x (1 + x + ... + x**(k-1))**2 - 1: sqrt(x) = x + ... + x**k squared and divided by x."""
    geom = [1] * k
    return P.to_integer(P.sub(P.mul([0, 1], P.mul(geom, geom)), [1]))


def lemma_ex1_family(k: int) -> ExOneFamily:
    """alpha_k, beta_k = alpha_k**(k+1/2) and lambda_k = (1-alpha_k)/(1-beta_k).

    beta_k is kept in Q(alpha_k) through sqrt(alpha) = alpha + ... + alpha**k.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    poly = lemma_ex1_polynomial(k)
    alpha = A.AlgebraicReal.from_root(poly, 0, 1)
    K = A.NumberField.of(alpha)
    a = K.gen
    root_alpha = K([0] + [1] * k)
    beta = a ** k * root_alpha
    lam = (1 - a) / (1 - beta)
    return ExOneFamily(k, alpha, beta, lam, poly)


# -- signed expansions ------------------------------------------------------------------------------

@dataclass(frozen=True)
class ForcedPrefix:
    digits: tuple


@dataclass(frozen=True)
class Branches:
    first_branch_depth: int
    digits: tuple
    prefix: tuple = ()


def unique_signed_expansion(alpha, u, depth: int, max_survivors: int = 1_000_000):
    """Digits w in {-1, 0, 1} with (1 - alpha) sum w_i alpha**i = u, to ``depth`` places.

    A prefix survives while the remaining target is within the largest
    possible tail alpha**n/(1 - alpha).  ForcedPrefix means all survivors
    agree on the first ``depth`` digits; Branches reports where they part.
    """
    alpha, u = A.lift_all(alpha, u)
    if not (A.compare(alpha, 0) > 0 and A.compare(alpha, Fraction(1, 2)) < 0):
        raise ValueError("alpha must lie in (0, 1/2)")
    target = u / (1 - alpha)
    survivors = [((), target)]
    power = Fraction(1)
    for n in range(depth):
        tail = power * alpha / (1 - alpha)
        nxt = []
        for prefix, rest in survivors:
            for w in (-1, 0, 1):
                remaining = rest - w * power
                if A.compare(abs(remaining) if isinstance(remaining, Fraction) else _abs(remaining), tail) <= 0:
                    nxt.append((prefix + (w,), remaining))
        if not nxt:
            raise NoExpansionExists(f"no signed expansion survives past digit {n}")
        if len(nxt) > max_survivors:
            raise BudgetExceeded("too many surviving prefixes")
        survivors = nxt
        power = power * alpha
    words = [p for p, _ in survivors]
    common = 0
    while common < depth and len({w[common] for w in words}) == 1:
        common += 1
    if common == depth:
        return ForcedPrefix(words[0])
    return Branches(common, tuple(sorted({w[common] for w in words})), words[0][:common])


def _abs(x):
    return -x if A.exact_sign(x) < 0 else x


# -- translate sets -------------------------------------------------------------------------------------

def translate_set(theta, digits: Sequence, budget: int = 100_000) -> list:
    """Lambda intersected with [0, 1], Lambda = {sum_{i=1..n} t_i theta**i : t_i in D - D}.

    Builds the sums by the Horner step x -> theta (t + x) from 0.  Once
    |x| exceeds theta*max|t|/(theta - 1) the orbit only grows, so such
    values are dropped; Pisot separation makes what remains finite.
    """
    if isinstance(theta, A.AlgebraicReal) and not theta.is_rational:
        K = A.NumberField.of(theta)
        th = K.gen
    else:
        K = None
        th = A.lift(theta, None)
    verdict = A.pisot_verdict_for(theta)
    if not verdict.is_pisot:
        raise NotPisot("translate sets are finite only for Pisot theta")
    if A.compare(th, 2) <= 0:
        warnings.warn("theta <= 2: outside the hypothesis of the finiteness theorem", stacklevel=2)
    values = []
    for d in digits:
        if isinstance(d, (list, tuple)):
            d = K(d) if K is not None else P.evaluate([Fraction(x) for x in d], th)
        values.append(A.lift(d, K))
    diffs = {}
    for x in values:
        for y in values:
            t = x - y
            diffs[_key(t)] = t
    diffs = list(diffs.values())
    max_t = A.maximum(_abs(t) for t in diffs)
    radius = A.maximum([th * max_t / (th - 1), Fraction(1)])
    radius_f = A.enclose(radius, Fraction(1, 2 ** 20))[1]
    zero = Fraction(0)
    seen = {_key(zero): zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for t in diffs:
            y = th * (t + x)
            k = _key(y)
            if k in seen:
                continue
            lo, hi = A.enclose(y, Fraction(1, 2 ** 20))
            if lo > radius_f or hi < -radius_f:
                continue
            if A.compare(_abs(y), radius) > 0:
                continue
            seen[k] = y
            queue.append(y)
            if len(seen) > budget:
                raise BudgetExceeded(f"translate set exceeded {budget} elements")
    inside = [v for v in seen.values() if A.compare(v, 0) >= 0 and A.compare(v, 1) <= 0]
    return sorted(inside, key=A.cmp_key)
