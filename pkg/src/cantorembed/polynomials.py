"""Dense univariate polynomials over Z and Q.

Coefficient lists are stored constant term first, with trailing zeros
stripped; the zero polynomial is ``[]``.  Everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, comb
from typing import Sequence

Number = int | Fraction


def trim(p: Sequence[Number]) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Number]) -> int:
    return len(trim(p)) - 1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def scale(p, c):
    return trim([c * x for x in p])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def power(p, n: int):
    result = [1]
    base = list(p)
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def divmod_poly(a, b):
    """Quotient and remainder over Q."""
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = trim(a)
    return trim(q), a


def rem(a, b):
    return divmod_poly(a, b)[1]


def monic(p):
    p = trim(p)
    lead = Fraction(p[-1])
    return [Fraction(x) / lead for x in p]


def gcd_poly(a, b):
    """Monic gcd over Q (``[]`` only when both inputs vanish)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a) if a else []


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_at(p, x) -> int:
    return sign(evaluate(p, x))


def content(p) -> int:
    g = 0
    for c in p:
        g = gcd(g, int(c))
    return g


def to_integer(p) -> list[int]:
    """Primitive integer polynomial with positive leading coefficient,
    proportional to ``p`` (which may carry rational coefficients)."""
    p = trim([Fraction(c) for c in p])
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def squarefree(p) -> list[int]:
    p = trim(p)
    if len(p) <= 2:
        return to_integer(p)
    g = gcd_poly(p, derivative(p))
    if len(g) <= 1:
        return to_integer(p)
    return to_integer(divmod_poly(p, g)[0])


def reverse(p) -> list:
    """Reciprocal polynomial x^d p(1/x)."""
    return trim(list(reversed(trim(p))))


def compose_linear(p, a, b):
    """p(a*x + b)."""
    out: list = []
    for c in reversed(trim(p)):
        out = add(mul(out, [b, a]), [c])
    return out


def sturm_sequence(p) -> list[list[Fraction]]:
    p = trim(p)
    seq = [[Fraction(c) for c in p]]
    if len(p) <= 1:
        return seq
    seq.append([Fraction(c) for c in derivative(p)])
    while True:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        # positive rescaling keeps sign pattern and bounds coefficient growth
        lead = abs(r[-1])
        seq.append([-c / lead for c in r])
    return seq


def sign_variations(seq, x) -> int:
    changes, last = 0, 0
    for q in seq:
        s = sign_at(q, x)
        if s == 0:
            continue
        if last and s != last:
            changes += 1
        last = s
    return changes


def count_roots(seq, a, b) -> int:
    """Distinct real roots of the (square-free) head of ``seq`` in (a, b]."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def cauchy_bound(p) -> Fraction:
    """A rational strictly exceeding the modulus of every complex root."""
    p = trim(p)
    lead = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in p[:-1]), default=Fraction(0))


def binomial_shift_bound(p) -> list[Fraction]:
    """Normalised elementary symmetric magnitudes |e_j| / C(d, j) for j = 1..d."""
    p = trim(p)
    d = len(p) - 1
    lead = Fraction(p[-1])
    return [abs(Fraction(p[d - j]) / lead) / comb(d, j) for j in range(1, d + 1)]


def graeffe(p: Sequence[int]) -> list[int]:
    """One root-squaring step: roots r_i of ``p`` become r_i**2."""
    p = trim(p)
    d = len(p) - 1
    neg = [c if i % 2 == 0 else -c for i, c in enumerate(p)]
    prod = mul(p, neg)
    out = [prod[i] for i in range(0, len(prod), 2)]
    if d % 2:
        out = [-c for c in out]
    return out


# -- arithmetic modulo a prime -------------------------------------------------

def _mod_trim(p, m):
    return trim([c % m for c in p])


def _mod_divmod(a, b, m):
    a = _mod_trim(a, m)
    b = _mod_trim(b, m)
    inv = pow(b[-1], -1, m)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv % m
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - c * y) % m
        a = trim(a)
    return trim(q), a


def _mod_gcd(a, b, m):
    a, b = _mod_trim(a, m), _mod_trim(b, m)
    while b:
        a, b = b, _mod_divmod(a, b, m)[1]
    return a


def _mod_mulmod(a, b, f, m):
    return _mod_divmod(mul(a, b), f, m)[1]


def _mod_powmod(base, e, f, m):
    result = [1]
    while e:
        if e & 1:
            result = _mod_mulmod(result, base, f, m)
        base = _mod_mulmod(base, base, f, m)
        e >>= 1
    return result


def irreducible_mod(p: Sequence[int], prime: int) -> bool:
    """Ben-Or test for irreducibility of ``p`` over F_prime.

    Returns False when the leading coefficient vanishes mod ``prime``
    (degree drops, so the reduction says nothing about ``p``).
    """
    p = trim(p)
    if p[-1] % prime == 0:
        return False
    d = len(p) - 1
    if d <= 1:
        return True
    x_power = [0, 1]
    for _ in range(d // 2):
        x_power = _mod_powmod(x_power, prime, p, prime)
        g = _mod_gcd(p, sub(x_power, [0, 1]), prime)
        if len(g) > 1:
            return False
    return True


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Sequence[int]) -> list[Fraction]:
    """All rational roots of an integer polynomial (rational root theorem)."""
    p = trim(p)
    roots = []
    if not p:
        raise ValueError("zero polynomial")
    if p[0] == 0:
        roots.append(Fraction(0))
        k = 0
        while p[k] == 0:
            k += 1
        p = p[k:]
    if len(p) <= 1:
        return roots
    for num in _divisors(p[0]):
        for den in _divisors(p[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and evaluate(p, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


MINIMALITY_PRIMES = (2, 3, 5, 7, 11)


def is_certainly_irreducible(p: Sequence[int]) -> bool:
    """Sufficient irreducibility test over Q.

    Degree one always passes.  Otherwise there must be no rational root,
    and either the degree is at most three or the polynomial stays
    irreducible modulo one of a handful of small primes.
    """
    p = to_integer(p)
    d = len(p) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if rational_roots(p):
        return False
    if d <= 3:
        return True
    return any(irreducible_mod(p, q) for q in MINIMALITY_PRIMES)
