"""Modular lattices ``L_{N,a,b} = {(n*a mod N, n*b mod N) : 0 <= n < N}``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exactint import (
    DegenerateLatticeError,
    GeneratorSet,
    IntVec2,
    ReducedBasis,
    _check_modular,
    basis_from_generators,
    gauss_reduce,
    shortest_vector_oracle,
    shortest_vectors,
)


@dataclass(frozen=True)
class ModularLattice:
    N: int
    a: int
    b: int

    def __post_init__(self):
        _check_modular(self.N, self.a, self.b)

    @property
    def generators(self) -> GeneratorSet:
        return GeneratorSet.modular(self.N, self.a, self.b)

    @cached_property
    def basis(self) -> ReducedBasis:
        return gauss_reduce(*basis_from_generators(self.generators))

    @property
    def shortest_vector(self) -> IntVec2:
        return self.basis.x1

    @property
    def lambda_sq(self) -> int:
        return self.basis.lambda_sq

    @property
    def lam(self) -> float:
        return math.sqrt(self.lambda_sq)

    def points(self) -> list[IntVec2]:
        N, a, b = self.N, self.a, self.b
        return [IntVec2(n * a % N, n * b % N) for n in range(N)]

    def point_array(self) -> np.ndarray:
        """``(N, 2)`` int64 array of the points in index order."""
        n = np.arange(self.N, dtype=np.int64)
        return np.stack([(n * self.a) % self.N, (n * self.b) % self.N], axis=1)

    def contains_shortest_vector(self) -> bool:
        """Whether some shortest vector of the ambient lattice is itself a point.

        A lattice vector is a point exactly when both coordinates lie in
        ``[0, N)``.
        """
        N = self.N
        return any(0 <= v.x < N and 0 <= v.y < N for v in shortest_vectors(self.basis))


def lambda_sq(L: ModularLattice, oracle: bool = False) -> int:
    if oracle:
        return shortest_vector_oracle(L.N, L.a, L.b).norm_sq
    return L.lambda_sq


def lam(L: ModularLattice) -> float:
    return L.lam


def f_constant(L: ModularLattice) -> float:
    """``lambda / sqrt(N)``."""
    return math.sqrt(L.lambda_sq / L.N)


def f_squared(L: ModularLattice) -> Fraction:
    """Exact ``f^2 = lambda^2 / N``."""
    return Fraction(L.lambda_sq, L.N)


@dataclass(frozen=True)
class Triangle:
    N: int
    b: int
    x: int
    y: int
    A: IntVec2 = field(init=False)
    B: IntVec2 = field(init=False)
    C: IntVec2 = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "A", IntVec2(0, 0))
        object.__setattr__(self, "B", IntVec2(1, self.b))
        object.__setattr__(self, "C", IntVec2(self.x + 1, self.b - self.y))

    @property
    def AB(self) -> IntVec2:
        return self.B - self.A

    @property
    def AC(self) -> IntVec2:
        return self.C - self.A

    @property
    def BC(self) -> IntVec2:
        return self.C - self.B

    def ab_is_shortest(self) -> bool:
        n = self.AB.norm_sq
        return n <= self.AC.norm_sq and n <= self.BC.norm_sq


def triangle(N: int, b: int) -> Triangle:
    if not 1 < b < N:
        raise ValueError(f"need 1 < b < N, got N={N}, b={b}")
    if math.gcd(N, b) != 1:
        raise ValueError(f"gcd(N, b) = {math.gcd(N, b)} != 1")
    x, y = divmod(N, b)
    return Triangle(N, b, x, y)


def construct_floor_family(N: int) -> ModularLattice:
    """``L_{N,1,b}`` with ``b = floor(sqrt N) - 1``; ``(1, b)`` is a shortest vector."""
    if N < 9:
        raise ValueError("floor family needs N >= 9")
    return ModularLattice(N, 1, math.isqrt(N) - 1)


@dataclass(frozen=True)
class CeilFamily:
    lattice: ModularLattice
    x: int
    y: int
    supercritical: bool  # N > 87 and frac(sqrt N) in (3/4, 1)
    condition_holds: bool  # 2b < y^2

    @property
    def ab_shortest(self) -> bool:
        """``x = b - 1`` and ``2b < y^2``: then ``(1, b)`` is the shortest triangle edge."""
        return self.x == self.lattice.b - 1 and self.condition_holds


def sqrt_frac_above(N: int, num: int, den: int) -> bool:
    """Exact test of ``frac(sqrt N) > num/den`` for 0 <= num/den < 1."""
    s = math.isqrt(N)
    # sqrt(N) > s + num/den  <=>  den^2 N > (den s + num)^2
    return den * den * N > (den * s + num) ** 2


def construct_ceil_family(N: int) -> CeilFamily:
    s = math.isqrt(N)
    if s * s == N:
        raise ValueError("fractional part zero: N is a perfect square")
    b = s + 1
    x, y = divmod(N, b)
    supercritical = N > 87 and sqrt_frac_above(N, 3, 4)
    return CeilFamily(
        lattice=ModularLattice(N, 1, b),
        x=x,
        y=y,
        supercritical=supercritical,
        condition_holds=2 * b < y * y,
    )


def g_polynomial(N: int, z: float) -> float:
    r"""``(N - (sqrt N + z)(sqrt N + z - 1))^2 - 2 (sqrt N + z)``.

    The inner term is expanded as ``sqrt N (1 - 2z) + z - z^2`` to avoid
    cancelling two numbers of size N.
    """
    s = math.sqrt(N)
    inner = s * (1.0 - 2.0 * z) + z - z * z
    return inner * inner - 2.0 * (s + z)


def rho_root(N: int) -> float:
    """Root of ``g(N, .)`` in ``(0, 1/2)`` by bisection.

    Runs until the bracket stops shrinking in double precision (well below
    1e-12), since the slope of g grows like N^(3/4).
    """
    if N <= 7:
        raise ValueError("rho(N) needs N > 7")
    lo, hi = 0.0, 0.5
    if not (g_polynomial(N, lo) > 0 and g_polynomial(N, hi) < 0):
        raise ValueError(f"sign condition violated for N={N}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g_polynomial(N, mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(g_polynomial(N, lo)) <= abs(g_polynomial(N, hi)) else hi


@dataclass(frozen=True)
class LineDecomposition:
    direction: IntVec2
    lines: list  # list of lists of point indices n, consecutive ones differ by direction
    torus_lines: int

    @property
    def k(self) -> int:
        return len(self.lines)


def _index_of(L: ModularLattice) -> dict:
    return {(n * L.a % L.N, n * L.b % L.N): n for n in range(L.N)}


def line_decomposition(L: ModularLattice) -> LineDecomposition:
    """Split the points into maximal runs ``p, p+v, p+2v, ...`` inside the square.

    ``v`` is the canonical shortest vector. A run ends where the next step
    leaves ``[0, N-1]^2``; ``torus_lines`` counts the closed orbits of ``v``
    when both coordinates wrap mod N instead.
    """
    N = L.N
    v = L.shortest_vector
    index = _index_of(L)
    lines = []
    for (px, py), n in sorted(index.items()):
        if 0 <= px - v.x < N and 0 <= py - v.y < N:
            continue
        run = []
        qx, qy = px, py
        while 0 <= qx < N and 0 <= qy < N:
            run.append(index[(qx, qy)])
            qx += v.x
            qy += v.y
        lines.append(run)
    order = N // math.gcd(math.gcd(N, v.x % N), v.y % N)
    return LineDecomposition(v, lines, N // order)


def segment_count(points: np.ndarray, v: IntVec2, N: int) -> int:
    """Number of runs in :func:`line_decomposition` from a point array alone."""
    px = points[:, 0] - v.x
    py = points[:, 1] - v.y
    outside = (px < 0) | (px >= N) | (py < 0) | (py >= N)
    return int(outside.sum())


def distinct_lattices(N: int):
    """Yield ``(d1, c, d2, a, b)`` once for every distinct modular lattice of modulus N.

    Each lattice containing ``N Z^2`` with cyclic quotient has a Hermite
    basis ``(d1, c), (0, d2)`` with ``d1 d2 = N``, ``0 <= c < d2`` and
    ``gcd(d1, c, d2) = 1``. ``(a, b)`` is one generator of order N. The two
    axis lattices (all generators have a zero coordinate) are skipped.
    """
    for d1 in range(1, N + 1):
        if N % d1:
            continue
        d2 = N // d1
        g12 = math.gcd(d1, d2)
        for c in range(d2):
            if math.gcd(g12, c) != 1:
                continue
            j = 0
            while math.gcd(d1, c + j * d2) != 1:
                j += 1
            a, b = d1 % N, (c + j * d2) % N
            if a == 0 or b == 0:
                continue
            yield d1, c, d2, a, b


def smallest_generator(N: int, a: int, b: int) -> tuple[int, int]:
    """Lexicographically smallest ``(a', b')`` with ``1 <= a', b' < N`` giving the same lattice."""
    u = np.array([u for u in range(1, N) if math.gcd(u, N) == 1], dtype=np.int64)
    aa = (u * a) % N
    bb = (u * b) % N
    keep = (aa > 0) & (bb > 0)
    aa, bb = aa[keep], bb[keep]
    i = np.lexsort((bb, aa))[0]
    return int(aa[i]), int(bb[i])


__all__ = [
    "CeilFamily",
    "DegenerateLatticeError",
    "LineDecomposition",
    "ModularLattice",
    "Triangle",
    "construct_ceil_family",
    "construct_floor_family",
    "distinct_lattices",
    "f_constant",
    "f_squared",
    "g_polynomial",
    "lam",
    "lambda_sq",
    "line_decomposition",
    "rho_root",
    "segment_count",
    "smallest_generator",
    "triangle",
]
