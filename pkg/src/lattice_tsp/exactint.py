"""Exact integer arithmetic for rank-2 sublattices of Z^2.

Everything here works on Python integers, so there is no overflow and every
comparison of lengths is made on the exact squared norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateLatticeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class IntVec2:
    x: int
    y: int

    @property
    def norm_sq(self) -> int:
        return self.x * self.x + self.y * self.y

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def dot(self, other: IntVec2) -> int:
        return self.x * other.x + self.y * other.y

    def cross(self, other: IntVec2) -> int:
        return self.x * other.y - self.y * other.x

    def __add__(self, other: IntVec2) -> IntVec2:
        return IntVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: IntVec2) -> IntVec2:
        return IntVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> IntVec2:
        return IntVec2(-self.x, -self.y)

    def __mul__(self, k: int) -> IntVec2:
        return IntVec2(k * self.x, k * self.y)

    __rmul__ = __mul__

    def canonical(self) -> IntVec2:
        """Sign-normalize so that x > 0, or x == 0 and y > 0."""
        if self.x < 0 or (self.x == 0 and self.y < 0):
            return -self
        return self

    def as_tuple(self) -> tuple[int, int]:
        return (self.x, self.y)


def det(u: IntVec2, v: IntVec2) -> int:
    return u.cross(v)


@dataclass(frozen=True)
class GeneratorSet:
    g1: IntVec2
    g2: IntVec2
    g3: IntVec2

    @classmethod
    def modular(cls, N: int, a: int, b: int) -> GeneratorSet:
        return cls(IntVec2(a, b), IntVec2(N, 0), IntVec2(0, N))

    def __iter__(self):
        return iter((self.g1, self.g2, self.g3))


@dataclass(frozen=True)
class ReducedBasis:
    x1: IntVec2
    x2: IntVec2

    @property
    def lambda_sq(self) -> int:
        return self.x1.norm_sq

    @property
    def det(self) -> int:
        return self.x1.cross(self.x2)

    def is_reduced(self) -> bool:
        n1 = self.x1.norm_sq
        return (
            n1 <= self.x2.norm_sq
            and 2 * abs(self.x1.dot(self.x2)) <= n1
            and self.det != 0
        )


def basis_from_generators(g: GeneratorSet) -> tuple[IntVec2, IntVec2]:
    """Hermite basis ``((d1, c), (0, d2))`` of the group spanned by three vectors.

    Euclidean row elimination on the first coordinate leaves one row with
    ``x = d1`` and the rest on the y-axis; their gcd gives ``d2``. The
    off-diagonal ``c`` is reduced into ``[0, d2)``.
    """
    rows = [[v.x, v.y] for v in g]
    pivot = None
    while True:
        live = [r for r in rows if r[0] != 0]
        if not live:
            break
        pivot = min(live, key=lambda r: abs(r[0]))
        for r in rows:
            if r is not pivot and r[0] != 0:
                q = r[0] // pivot[0]
                r[0] -= q * pivot[0]
                r[1] -= q * pivot[1]
        if all(r[0] == 0 for r in rows if r is not pivot):
            break
    if pivot is None or pivot[0] == 0:
        raise DegenerateLatticeError("degenerate generator set")
    d2 = 0
    for r in rows:
        if r is not pivot:
            d2 = math.gcd(d2, r[1])
    if d2 == 0:
        raise DegenerateLatticeError("degenerate generator set")
    d1, c = pivot
    if d1 < 0:
        d1, c = -d1, -c
    return IntVec2(d1, c % d2), IntVec2(0, d2)


def in_lattice(v: IntVec2, b1: IntVec2, b2: IntVec2) -> bool:
    """Whether ``v`` is an integer combination of ``b1`` and ``b2`` (Cramer)."""
    d = b1.cross(b2)
    if d == 0:
        raise DegenerateLatticeError("zero determinant")
    s = v.cross(b2)
    t = b1.cross(v)
    return s % d == 0 and t % d == 0


def gauss_reduce(b1: IntVec2, b2: IntVec2) -> ReducedBasis:
    if b1.cross(b2) == 0:
        raise DegenerateLatticeError("zero determinant")
    x1, y1, x2, y2 = _reduce_raw(b1.x, b1.y, b2.x, b2.y)
    return _canonical_basis(IntVec2(x1, y1), IntVec2(x2, y2))


def _reduce_raw(ux: int, uy: int, vx: int, vy: int) -> tuple[int, int, int, int]:
    nu = ux * ux + uy * uy
    nv = vx * vx + vy * vy
    if nu > nv:
        ux, uy, vx, vy, nu, nv = vx, vy, ux, uy, nv, nu
    while True:
        # nearest integer to <u,v>/|u|^2, ties rounded down
        m = (2 * (ux * vx + uy * vy) + nu) // (2 * nu)
        if m:
            vx -= m * ux
            vy -= m * uy
            nv = vx * vx + vy * vy
        if nv >= nu:
            return ux, uy, vx, vy
        ux, uy, vx, vy, nu, nv = vx, vy, ux, uy, nv, nu


def reduced_lambda_sq(ux: int, uy: int, vx: int, vy: int) -> int:
    """Squared length of the shortest vector, without building objects."""
    x1, y1, _, _ = _reduce_raw(ux, uy, vx, vy)
    return x1 * x1 + y1 * y1


def _canonical_basis(x1: IntVec2, x2: IntVec2) -> ReducedBasis:
    # Among equally short candidates pick the lexicographically smallest
    # sign-normalized one; same for the second vector.
    cands = {w.canonical() for w in (x1, x2, x1 + x2, x1 - x2)}
    n1 = x1.norm_sq
    first = min(w for w in cands if w.norm_sq == n1)
    rest = [w for w in cands if w.cross(first) != 0]
    n2 = min(w.norm_sq for w in rest)
    second = min(w for w in rest if w.norm_sq == n2)
    return ReducedBasis(first, second)


def shortest_vectors(basis: ReducedBasis) -> list[IntVec2]:
    """All lattice vectors of minimal length (both signs), sorted."""
    x1, x2 = basis.x1, basis.x2
    n1 = x1.norm_sq
    out = set()
    for w in (x1, x2, x1 + x2, x1 - x2):
        if w.norm_sq == n1:
            out.add(w)
            out.add(-w)
    return sorted(out)


def modular_basis(N: int, a: int, b: int) -> ReducedBasis:
    _check_modular(N, a, b)
    return gauss_reduce(*basis_from_generators(GeneratorSet.modular(N, a, b)))


def _check_modular(N: int, a: int, b: int) -> None:
    if N < 2 or not (0 < a < N and 0 < b < N):
        raise DegenerateLatticeError(f"need 0 < a, b < N, got N={N}, a={a}, b={b}")
    if math.gcd(math.gcd(N, a), b) != 1:
        raise DegenerateLatticeError("degenerate modular lattice")


def shortest_vector_oracle(N: int, a: int, b: int) -> IntVec2:
    """Brute-force shortest vector of the lattice spanned by (a,b), (N,0), (0,N).

    Every multiple ``n*(a,b)`` is mapped to its centered representatives in
    ``[-N/2, N/2]^2`` (two choices for a coordinate equal to N/2); the
    multiples that vanish mod N are never shorter. Linear in N and
    independent of any basis reduction.
    """
    _check_modular(N, a, b)
    if N < 2**31:
        n = np.arange(1, N, dtype=np.int64)
        x = (n * a) % N
        y = (n * b) % N
        x = np.where(2 * x > N, x - N, x)
        y = np.where(2 * y > N, y - N, y)
        xs = np.concatenate([x, np.where(2 * x == N, -x, x)])
        ys = np.concatenate([np.where(2 * y == N, -y, y), y])
        # sign-normalize, then sort by (norm_sq, x, y)
        flip = (xs < 0) | ((xs == 0) & (ys < 0))
        xs = np.where(flip, -xs, xs)
        ys = np.where(flip, -ys, ys)
        nsq = xs * xs + ys * ys
        # centered multiples have norm_sq <= N^2/2, so (N, 0) never wins
        idx = np.flatnonzero(nsq == nsq.min())
        return min(IntVec2(int(xs[i]), int(ys[i])) for i in idx)
    return _oracle_python(N, a, b)


def _oracle_python(N: int, a: int, b: int) -> IntVec2:
    # same scan without int64, for moduli past the numpy range
    best = IntVec2(N, 0)
    for n in range(1, N):
        x = n * a % N
        y = n * b % N
        if 2 * x > N:
            x -= N
        if 2 * y > N:
            y -= N
        for w in (IntVec2(x, y), IntVec2(-x if 2 * x == N else x, y), IntVec2(x, -y if 2 * y == N else y)):
            v = w.canonical()
            if (v.norm_sq, v.x, v.y) < (best.norm_sq, best.x, best.y):
                best = v
    return best
