"""Closed tours through lattice points, exact small-instance solvers and tour-length bounds."""

from __future__ import annotations

import csv
import itertools
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np

from .modlattice import ModularLattice, line_decomposition, triangle

SQRT2 = math.sqrt(2.0)
KARLOFF_SLOPE = 1.39159
KARLOFF_OFFSET = 11.0
EXACT_LIMIT = 18
BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class Tour:
    order: tuple  # permutation of point indices; the last point returns to the first
    length: float


@dataclass(frozen=True)
class TourBounds:
    lower: float
    upper: float
    lam: float
    k: int
    f: float
    scale: str = "unit_square"

    def raw(self, N: int) -> TourBounds:
        """Same bounds for the unscaled tour length in ``[0, N-1]^2``."""
        if self.scale == "raw":
            return self
        s = N * math.sqrt(N)
        return TourBounds(self.lower * s, self.upper * s, self.lam, self.k, self.f, "raw")


def _as_array(points) -> np.ndarray:
    arr = np.asarray([(p.x, p.y) if hasattr(p, "x") else tuple(p) for p in points], dtype=float)
    return arr.reshape(-1, 2)


def tour_length(points, order) -> float:
    pts = _as_array(points)
    if len(order) < 2:
        return 0.0
    seq = pts[list(order)]
    diff = seq - np.roll(seq, -1, axis=0)
    return float(np.sqrt((diff * diff).sum(axis=1)).sum())


def _serpentine_orders(lines):
    """Candidate visiting orders for lines already sorted by offset.

    Plain boustrophedon over the sorted lines, and an out-and-back variant
    (even positions outward, odd positions on the way back) whose closing
    edge is short. Each comes with both starting directions.
    """
    k = len(lines)
    out_back = list(range(0, k, 2)) + list(range(k - 1 - (k % 2 == 1), 0, -2))
    for seq in (list(range(k)), out_back):
        for flip in (0, 1):
            order = []
            for i, li in enumerate(seq):
                line = lines[li]
                order.extend(line if (i + flip) % 2 == 0 else reversed(line))
            yield tuple(order)


def serpentine_tour(L: ModularLattice) -> Tour:
    """Walk every line along the shortest vector, alternating direction.

    Lines are sorted by their offset ``v x p`` perpendicular to the shortest
    vector ``v`` and joined end to end; the last line is joined straight back
    to the start. The shortest of the candidate connection orders is kept.
    """
    dec = line_decomposition(L)
    v = dec.direction
    N, a, b = L.N, L.a, L.b

    def offset(line):
        n = line[0]
        return v.x * (n * b % N) - v.y * (n * a % N)

    lines = sorted(dec.lines, key=offset)
    pts = L.point_array()
    best = None
    for order in _serpentine_orders(lines):
        t = Tour(order, tour_length(pts, order))
        if best is None or t.length < best.length:
            best = t
    return best


def theorem1_bounds(L: ModularLattice) -> TourBounds:
    """``f <= L/(N sqrt N) <= f + 2 sqrt2 / sqrt N`` with ``f = lambda/sqrt N``."""
    lam = L.lam
    rootN = math.sqrt(L.N)
    f = lam / rootN
    k = line_decomposition(L).k if L.N <= 100_000 else -1
    return TourBounds(f, f + 2 * SQRT2 / rootN, lam, k, f)


def triangle_bounds(N: int, b: int) -> TourBounds:
    """Refined bounds for ``L_{N,1,b}`` when ``(1, b)`` is the shortest edge of ABC."""
    t = triangle(N, b)
    if not t.ab_is_shortest():
        raise ValueError("triangle hypothesis violated: AB is not the shortest edge of ABC")
    ab, ac, bc = t.AB.norm, t.AC.norm, t.BC.norm
    scale = N * math.sqrt(N)
    f = ab / math.sqrt(N)
    lower = f + b * (min(ac, bc) - ab) / scale
    upper = f + b * (max(ac, bc) - ab) / scale + SQRT2 / math.sqrt(N)
    return TourBounds(lower, upper, ab, b, f)


def _distance_matrix(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def exact_tour(points) -> Tour:
    """Optimal closed tour by Held-Karp dynamic programming over subsets.

    Point 0 is fixed as the start. States are processed one subset size at a
    time so each layer is a handful of vectorized numpy operations.
    """
    pts = _as_array(points)
    n = len(pts)
    if n > EXACT_LIMIT:
        raise ValueError(f"exact oracle limit: {n} points > {EXACT_LIMIT}")
    if n <= 3:
        order = tuple(range(n))
        return Tour(order, tour_length(pts, order))
    D = _distance_matrix(pts)
    m = n - 1  # cities 1..n-1 are bits 0..m-1
    full = 1 << m
    dp = np.full((full, m), np.inf)
    parent = np.full((full, m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = D[0, j + 1]
    masks = np.arange(full, dtype=np.int64)
    popcount = np.zeros(full, dtype=np.int64)
    for j in range(m):
        popcount += (masks >> j) & 1
    Dc = D[1:, 1:]
    for size in range(2, m + 1):
        layer = masks[popcount == size]
        for j in range(m):
            cur = layer[(layer >> j) & 1 == 1]
            prev = cur ^ (1 << j)
            cand = dp[prev] + Dc[:, j]
            best = np.argmin(cand, axis=1)
            dp[cur, j] = cand[np.arange(len(cur)), best]
            parent[cur, j] = best
    last = dp[full - 1] + D[1:, 0]
    j = int(np.argmin(last))
    length = float(last[j])
    order = []
    mask = full - 1
    while j >= 0:
        order.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj if mask else -1
    order.append(0)
    order.reverse()
    return Tour(tuple(order), length)


def brute_force_tour(points) -> Tour:
    """Optimal closed tour by trying every permutation with point 0 first."""
    pts = _as_array(points)
    n = len(pts)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"exact oracle limit: {n} points > {BRUTE_FORCE_LIMIT}")
    D = _distance_matrix(pts)
    best, best_order = math.inf, tuple(range(n))
    for perm in itertools.permutations(range(1, n)):
        order = (0,) + perm
        length = sum(D[order[i], order[i - 1]] for i in range(n))
        if length < best - 1e-12:
            best, best_order = length, order
    return Tour(best_order, tour_length(pts, best_order))


def two_opt_improve(tour: Tour, points, max_moves: int | None = None) -> Tour:
    """First-improvement 2-opt; the length never increases.

    Stops at a local optimum or after ``10 N^2`` applied moves.
    """
    pts = _as_array(points)
    n = len(pts)
    order = np.array(tour.order, dtype=np.int64)
    if n < 4:
        return Tour(tuple(int(i) for i in order), tour_length(pts, order))
    if max_moves is None:
        max_moves = 10 * n * n
    D = _distance_matrix(pts)
    moves = 0
    improved = True
    while improved and moves < max_moves:
        improved = False
        for i in range(n - 1):
            a, b = order[i], order[i + 1]
            js = np.arange(i + 2, n if i > 0 else n - 1)
            if len(js) == 0:
                continue
            c = order[js]
            d = order[(js + 1) % n]
            delta = D[a, c] + D[b, d] - D[a, b] - D[c, d]
            k = int(np.argmin(delta))
            if delta[k] < -1e-10:
                j = int(js[k])
                order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1].copy()
                moves += 1
                improved = True
                if moves >= max_moves:
                    break
    order = tuple(int(i) for i in order)
    new_len = tour_length(pts, order)
    if new_len > tour.length:
        return tour
    return Tour(order, new_len)


@dataclass(frozen=True)
class KarloffComparison:
    paper_upper: float
    karloff: float
    improves: bool


def karloff_comparison(L: ModularLattice) -> KarloffComparison:
    """Upper bound ``lambda + 2 sqrt2`` on the unit-square tour length versus ``1.39159 sqrt N + 11``."""
    upper = L.lam + 2 * SQRT2
    karloff = KARLOFF_SLOPE * math.sqrt(L.N) + KARLOFF_OFFSET
    return KarloffComparison(upper, karloff, upper < karloff)


def write_tour_csv(path, tour: Tour, points) -> None:
    pts = _as_array(points)
    with open(path, "w", newline="") as fh:
        fh.write(f"# closed tour: last row connects back to the first; length={tour.length!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "point_index", "x", "y"])
        for step, i in enumerate(tour.order):
            x, y = pts[i]
            w.writerow([step, i, _num(x), _num(y)])


def _num(v: float):
    return int(v) if float(v).is_integer() else repr(float(v))


def tour_svg(tour: Tour, points, size: int = 600, margin: int = 10) -> ET.Element:
    """Standalone SVG: the point cloud plus the closed tour as a polyline."""
    pts = _as_array(points)
    lo = pts.min(axis=0)
    span = max(float((pts.max(axis=0) - lo).max()), 1.0)
    s = (size - 2 * margin) / span

    def xy(p):
        # SVG y grows downward
        return margin + (p[0] - lo[0]) * s, size - margin - (p[1] - lo[1]) * s

    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(size),
        height=str(size),
        viewBox=f"0 0 {size} {size}",
    )
    seq = [xy(pts[i]) for i in tour.order]
    if seq:
        seq.append(seq[0])
    ET.SubElement(
        root,
        "polyline",
        points=" ".join(f"{x:.3f},{y:.3f}" for x, y in seq),
        fill="none",
        stroke="black",
        attrib={"stroke-width": "1"},
    )
    g = ET.SubElement(root, "g", fill="red")
    for p in pts:
        x, y = xy(p)
        ET.SubElement(g, "circle", cx=f"{x:.3f}", cy=f"{y:.3f}", r="2")
    return root


def write_tour_svg(path, tour: Tour, points) -> None:
    ET.ElementTree(tour_svg(tour, points)).write(path, encoding="unicode", xml_declaration=False)
