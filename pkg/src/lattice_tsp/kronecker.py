"""Kronecker point sets and their tour-length bounds via Jacobi-Perron convergents."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .exactint import (
    GeneratorSet, IntVec2, basis_from_generators, gauss_reduce, shortest_vector_oracle,
)
from .jacobiperron import Convergent, PreciseReal, jacobi_perron

DEFAULT_DELTA = 0.5
ORACLE_LIMIT = 10**7


@dataclass(frozen=True)
class KroneckerSet:
    alpha: PreciseReal
    beta: PreciseReal
    N: int
    points: np.ndarray  # (N, 2) floats in [0, 1)


def _frac_multiples(x: PreciseReal, n: np.ndarray) -> np.ndarray:
    if x.source[0] == "rational":
        p, q = x.source[1], x.source[2]
        return np.array([(int(k) * p % q) / q for k in n], dtype=float)
    # n * x mod 1 on the scaled integer, rounded to double only at the end
    S = 1 << x.precision
    v = x.value
    out = np.array([(int(k) * v % S) / S for k in n], dtype=float)
    out[out >= 1.0] = 0.0  # within rounding of 1, which is 0 mod 1
    return out


def kronecker_points(alpha: PreciseReal, beta: PreciseReal, N: int) -> KroneckerSet:
    """``(n alpha mod 1, n beta mod 1)`` for ``0 <= n < N``."""
    if N < 1:
        raise ValueError("N must be positive")
    if alpha.precision != beta.precision:
        beta = beta.at(alpha.precision)
    n = np.arange(N)
    pts = np.stack([_frac_multiples(alpha, n), _frac_multiples(beta, n)], axis=1)
    return KroneckerSet(alpha, beta, N, pts)


def convergent_lattice_basis(conv: Convergent):
    """Reduced basis of the lattice spanned by ``(p, r), (q, 0), (0, q)``.

    ``p`` or ``r`` may be zero for the first convergents.
    """
    g = GeneratorSet.modular(conv.q, conv.p, conv.r)
    return gauss_reduce(*basis_from_generators(g))


@dataclass(frozen=True)
class KroneckerBounds:
    lower: float
    upper: float
    lam: float
    delta: float
    N: int
    lambda_sq: int

    @property
    def f(self) -> float:
        return self.lam / math.sqrt(self.N)

    @property
    def vacuous(self) -> bool:
        """``N^delta <= 5``: the lower bound carries no information."""
        return self.N**self.delta <= 5


def theorem2_bounds(conv: Convergent, delta: float = DEFAULT_DELTA) -> KroneckerBounds:
    """``f (1 - 5/N^d) <= L(K)/sqrt N <= f (1 + 3/N^d) + 2 sqrt2 / sqrt N`` with ``N = q``."""
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    lsq = convergent_lattice_basis(conv).lambda_sq
    N = conv.q
    lam = math.sqrt(lsq)
    f = lam / math.sqrt(N)
    nd = N**delta
    lower = f * (1 - 5 / nd)
    upper = f * (1 + 3 / nd) + 2 * math.sqrt(2) / math.sqrt(N)
    return KroneckerBounds(lower, upper, lam, delta, N, lsq)


@dataclass(frozen=True)
class DriftReport:
    samples: int
    max_deviation: float
    unwrapped: int  # pairs where the identity held without any integer shift


def drift_identity_check(K: KroneckerSet, conv: Convergent, sample: int = 100, seed: int = 0) -> DriftReport:
    """Check ``K[n1] - K[n0] = (L[n1] - L[n0])/q + (n1 - n0) d`` modulo integer vectors.

    ``L[n] = (n p mod q, n r mod q)`` and ``d = (alpha - p/q, beta - r/q)``.
    ``max_deviation`` is the distance of the residual from the nearest
    integer vector; it measures rounding only.
    """
    q, p, r = conv.q, conv.p, conv.r
    if K.N != q:
        raise ValueError(f"Kronecker set has {K.N} points, convergent has q = {q}")
    a, b = float(K.alpha), float(K.beta)
    if abs(a * q - p) >= 1 or abs(b * q - r) >= 1:
        raise ValueError("convergent does not approximate (alpha, beta)")
    # d in extended precision, then rounded: it is tiny and cancellation-prone
    S = 1 << K.alpha.precision
    d = np.array([
        (K.alpha.value * q - p * S) / (q * S),
        (K.beta.value * q - r * S) / (q * S),
    ])
    rng = np.random.default_rng(seed)
    n0 = rng.integers(0, q, size=sample)
    n1 = rng.integers(0, q, size=sample)
    worst, clean = 0.0, 0
    for i, j in zip(n0.tolist(), n1.tolist()):
        lat = np.array([(j * p % q) - (i * p % q), (j * r % q) - (i * r % q)]) / q
        resid = (K.points[j] - K.points[i]) - lat - (j - i) * d
        shift = np.round(resid)
        worst = max(worst, float(np.abs(resid - shift).max()))
        clean += int(not shift.any())
    return DriftReport(sample, worst, clean)


REFERENCE_F = {
    3: 1.0055, 4: 0.6182, 5: 0.9433, 6: 0.9544, 7: 0.7122, 8: 1.0002, 9: 0.5703,
    10: 0.8961, 11: 0.6323, 12: 0.2099, 13: 0.3151, 14: 0.2224, 15: 0.5902, 16: 0.8371,
}


@dataclass(frozen=True)
class ConstantRow:
    i: int
    q: int
    p: int
    r: int
    lambda_sq: int
    f: float
    shortest: IntVec2
    oracle_checked: bool
    bounds: KroneckerBounds

    @property
    def reference_f(self) -> float | None:
        return REFERENCE_F.get(self.i)

    @property
    def discrepancy(self) -> bool:
        ref = self.reference_f
        return ref is not None and abs(ref - self.f) > 1e-3


def sequence_of_constants(
    alpha: PreciseReal,
    beta: PreciseReal,
    i_max: int,
    delta: float = DEFAULT_DELTA,
    oracle_limit: int = ORACLE_LIMIT,
) -> list[ConstantRow]:
    """``f(q_i, p_i, r_i)`` for ``i = 1..i_max``.

    The brute-force oracle re-derives lambda^2 for ``q <= oracle_limit`` and
    any mismatch raises.
    """
    rows = []
    for c in jacobi_perron(alpha, beta, i_max):
        if not (0 < c.p < c.q and 0 < c.r < c.q):
            continue
        basis = convergent_lattice_basis(c)
        checked = c.q <= oracle_limit
        if checked:
            o = shortest_vector_oracle(c.q, c.p, c.r)
            if o.norm_sq != basis.lambda_sq:
                raise AssertionError(f"oracle mismatch at i={c.index}: {o.norm_sq} != {basis.lambda_sq}")
        rows.append(ConstantRow(
            c.index, c.q, c.p, c.r, basis.lambda_sq, math.sqrt(basis.lambda_sq / c.q),
            basis.x1, checked, theorem2_bounds(c, delta),
        ))
    return rows


def write_constants_csv(path_or_file, rows: list[ConstantRow]) -> None:
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "q_i", "lambda_sq", "f", "lower", "upper", "delta_used"])
        for row in rows:
            b = row.bounds
            w.writerow([row.i, row.q, row.lambda_sq, f"{row.f:.6f}", f"{b.lower:.6f}",
                        f"{b.upper:.6f}", b.delta])
    finally:
        if own:
            fh.close()
