"""Fourier transforms of uniform self-similar measures.

For the IFS {r x + a_j} with equal weights the transform is the infinite
product

    mu_hat(xi) = prod_{i >= 0} m(xi r**i),   m(x) = mean_j exp(-i x a_j),

which for C_rho has modulus prod |cos(xi (1 - rho) rho**i / 2)|.  This
module works in double precision; every value comes with an error bound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import algebraic as A
from .embed import feasible_offsets
from .errors import NotConstructible, ScaleOutOfRange
from .selfsimilar import CentralCantor, HomogeneousIFS

ROUNDING = 4e-16


@dataclass(frozen=True)
class PiMultiple:
    """The frequency k * pi with k rational, kept exact."""

    k: Fraction

    def __float__(self):
        return float(self.k) * math.pi

    def __mul__(self, other):
        return PiMultiple(self.k * Fraction(other))

    __rmul__ = __mul__


class CantorMeasure:
    """Equal-weight self-similar measure on the attractor of ``ifs``."""

    def __init__(self, ifs: HomogeneousIFS):
        self.ifs = ifs
        self.ratio = float(ifs.ratio)
        self.digits = np.array([float(d) for d in ifs.digits])
        self.weights = np.full(ifs.size, 1.0 / ifs.size)
        mean = float(np.mean(self.digits))
        self.spread = float(np.max(np.abs(self.digits - mean)))
        self.mean_digit = mean

    @classmethod
    def central(cls, rho) -> "CantorMeasure":
        return cls(CentralCantor(rho))

    def terms_needed(self, xi: float, tail_tol: float) -> int:
        """Smallest N whose tail factors multiply to within tail_tol of 1."""
        if xi == 0:
            return 0
        r = self.ratio
        N = 0
        while self.tail_bound(xi, N) > tail_tol:
            N += 1
        return N

    def tail_bound(self, xi: float, N: int) -> float:
        """1 - prod_{i >= N} |m(xi r**i)| is at most this."""
        r = self.ratio
        return (xi * self.spread) ** 2 * r ** (2 * N) / (2 * (1 - r * r))


def _exact_phases(measure: CantorMeasure, xi: PiMultiple, N: int):
    """Factor arguments x_i * (a_j - mean) reduced exactly modulo 2 pi."""
    ifs = measure.ifs
    if not ifs.is_rational:
        return None
    digits = list(ifs.digits)
    mean = sum(digits, Fraction(0)) / len(digits)
    out = []
    scale = xi.k
    for _ in range(N):
        row = []
        for a in digits:
            q = (scale * (a - mean)) % 2
            row.append(float(q) * math.pi)
        out.append(row)
        scale *= ifs.ratio
    return out


def _head_modulus(measure: CantorMeasure, xi, N: int) -> float:
    phases = _exact_phases(measure, xi, N) if isinstance(xi, PiMultiple) else None
    if phases is None:
        x = float(xi)
        scales = x * measure.ratio ** np.arange(N)
        args = np.outer(scales, measure.digits - measure.mean_digit)
    else:
        args = np.array(phases)
    factors = np.abs(np.mean(np.exp(-1j * args), axis=1))
    return float(np.prod(factors))


def mu_hat_modulus(measure: CantorMeasure, xi, tail_tol: float = 1e-12) -> tuple[float, float]:
    """|mu_hat(xi)| and a bound on the error of the returned value.

    ``xi`` is a float or a :class:`PiMultiple` (whose factor arguments are
    then reduced modulo 2 pi exactly when the IFS is rational).
    """
    x = abs(float(xi))
    if x == 0:
        return 1.0, 0.0
    if isinstance(xi, PiMultiple) and xi.k < 0:
        xi = PiMultiple(-xi.k)
    N = measure.terms_needed(x, tail_tol)
    head = _head_modulus(measure, xi, N)
    eps = measure.tail_bound(x, N)
    return head, head * eps + N * ROUNDING


def mu_hat(measure: CantorMeasure, xi: np.ndarray, tail_tol: float = 1e-12) -> np.ndarray:
    """Complex transform on an array of frequencies (vectorised)."""
    xi = np.asarray(xi, dtype=float)
    xmax = float(np.max(np.abs(xi))) if xi.size else 0.0
    N = measure.terms_needed(xmax, tail_tol) if xmax else 0
    total = np.ones_like(xi, dtype=complex)
    scale = xi.copy()
    for _ in range(N):
        total *= np.mean(np.exp(-1j * np.multiply.outer(scale, measure.digits)), axis=-1)
        scale = scale * measure.ratio
    # tail factors are close to pure phases exp(-i x mean)
    total *= np.exp(-1j * scale * measure.mean_digit / (1 - measure.ratio))
    return total


def mu_hat_modulus_array(measure: CantorMeasure, xi: np.ndarray, tail_tol: float = 1e-12) -> np.ndarray:
    xi = np.abs(np.asarray(xi, dtype=float))
    xmax = float(np.max(xi)) if xi.size else 0.0
    N = measure.terms_needed(xmax, tail_tol) if xmax else 0
    total = np.ones_like(xi)
    centred = measure.digits - measure.mean_digit
    scale = xi.copy()
    for _ in range(N):
        total *= np.abs(np.mean(np.exp(-1j * np.multiply.outer(scale, centred)), axis=-1))
        scale = scale * measure.ratio
    return total


# -- probes ---------------------------------------------------------------------------

@dataclass
class ProbeSeries:
    rows: list = field(default_factory=list)

    def moduli(self) -> list[float]:
        return [m for _, m, _ in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["xi", "modulus", "error_bound"])
        for xi, mod, err in self.rows:
            writer.writerow([repr(float(xi)), repr(mod), repr(err)])
        return buf.getvalue()

    def to_svg(self, path) -> None:
        """Plot modulus against log10 frequency (needs matplotlib)."""
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs = [math.log10(float(xi)) if float(xi) > 0 else 0.0 for xi, _, _ in self.rows]
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(xs, self.moduli(), marker="o")
        ax.set_xlabel("log10 frequency")
        ax.set_ylabel("|mu_hat|")
        ax.set_ylim(0, 1.05)
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)


def probe_sequence(measure: CantorMeasure, xi0, base, count: int,
                   tail_tol: float = 1e-12, budget: int = 10_000) -> ProbeSeries:
    """|mu_hat| along xi_n = xi0 * base**n for n = 0..count-1."""
    if count > budget:
        raise ValueError(f"count {count} exceeds the probe budget {budget}")
    if float(base) <= 1:
        raise ValueError("base must exceed 1")
    exact = isinstance(xi0, PiMultiple) and isinstance(base, (int, Fraction))
    series = ProbeSeries()
    for n in range(count):
        xi = PiMultiple(xi0.k * Fraction(base) ** n) if exact else float(xi0) * float(base) ** n
        value, err = mu_hat_modulus(measure, xi, tail_tol)
        series.rows.append((float(xi), value, err))
    return series


def wiener_average(measure: CantorMeasure, T: float, samples: int) -> float:
    """Midpoint-rule value of (1/T) * integral_{-T}^{T} |mu_hat(x)|**2 dx."""
    if T <= 0 or samples < 100:
        raise ValueError("need T > 0 and at least 100 samples")
    h = T / samples
    x = (np.arange(samples) + 0.5) * h
    values = mu_hat_modulus_array(measure, x) ** 2
    return float(2.0 * h * np.sum(values) / T)


# -- the offset function and eta ------------------------------------------------------------

@dataclass(frozen=True)
class EmptyFeasible:
    depth: int


def offset_function(alpha, beta, u, depth: int):
    """Largest feasible offset d with u C_beta + d passing the depth test.

    This over-estimates sup{d : u C_beta + d in C_alpha} and decreases
    with depth; EmptyFeasible when no offset survives.
    """
    alpha, beta, u = A.lift_all(alpha, beta, u)
    b = (1 - 2 * alpha) / alpha
    if not (A.compare(u, 0) > 0 and A.compare(u, b) <= 0):
        raise ScaleOutOfRange("u must lie in (0, (1 - 2 alpha)/alpha]")
    result = feasible_offsets(CentralCantor(alpha), CentralCantor(beta), u, depth)
    if result.is_empty:
        return EmptyFeasible(result.empty_at)
    return result.final.intervals[-1][1]


@dataclass
class EtaEstimate:
    n: int
    value: complex
    bound: float
    feasible_points: int
    grid_points: int

    @property
    def modulus(self) -> float:
        return abs(self.value)


class EtaConstruction:
    """Grid data for eta = average over u of the law of u x + f(u), x ~ mu.

    The average runs over the grid points u in (0, b] where a feasible
    offset survives; with an empty set there is nothing to average.
    """

    def __init__(self, alpha, beta, grid: int = 1000, depth: int = 6):
        alpha, beta = A.lift_all(alpha, beta)
        self.alpha, self.beta = alpha, beta
        self.b = (1 - 2 * alpha) / alpha
        self.grid = grid
        self.depth = depth
        us, fs = [], []
        for k in range(grid):
            u = self.b * Fraction(2 * k + 1, 2 * grid)
            f = offset_function(alpha, beta, u, depth)
            if not isinstance(f, EmptyFeasible):
                us.append(float(u))
                fs.append(float(f))
        self.u = np.array(us)
        self.f = np.array(fs)
        self.measure = CantorMeasure.central(beta)

    @property
    def feasible_fraction(self) -> float:
        return len(self.u) / self.grid

    def eta_hat(self, n: int) -> EtaEstimate:
        if len(self.u) == 0:
            raise NotConstructible("no scale u admits a feasible offset at this depth")
        if n == 0:
            return EtaEstimate(0, 1.0 + 0j, 1.0, len(self.u), self.grid)
        transform = mu_hat(self.measure, self.u * n)
        value = complex(np.mean(transform * np.exp(-1j * self.f * n)))
        bound = float(np.mean(np.abs(transform)))
        return EtaEstimate(n, value, bound, len(self.u), self.grid)


def eta_hat(alpha, beta, n: int, grid: int = 1000, depth: int = 6) -> EtaEstimate:
    return EtaConstruction(alpha, beta, grid, depth).eta_hat(n)
