"""Exhaustive ``f_max(N)`` scan over all modular lattices of modulus N."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exactint import IntVec2, _reduce_raw, modular_basis
from .modlattice import distinct_lattices, smallest_generator

SCAN_HEADER = "# lattice-tsp scan v1"
SCAN_COLUMNS = "N,best_a,best_b,lambda_sq,f_max"


@dataclass(frozen=True)
class ScanRecord:
    N: int
    best_a: int
    best_b: int
    f_max: float
    lambda_sq: int

    def csv_row(self) -> str:
        return f"{self.N},{self.best_a},{self.best_b},{self.lambda_sq},{self.f_max:.10f}"

    @classmethod
    def parse(cls, line: str) -> ScanRecord:
        N, a, b, lsq, f = line.strip().split(",")
        return cls(int(N), int(a), int(b), float(f), int(lsq))


@dataclass
class ScanResult:
    record: ScanRecord
    distinct: int
    raw: int
    maximizers: list = field(default_factory=list)  # every (a, b) attaining f_max
    violations: list = field(default_factory=list)


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _fast_lattices(N: int):
    # a = 1 only; (1, b) already is the Hermite basis row (1, b), (0, N)
    for b in range(1, N):
        yield 1, b, N, 1, b


def scan_n(N: int, invariants: bool = False, all_maximizers: bool = False,
           fast: bool = False) -> ScanResult:
    """``f_max(N)`` over every ``1 <= a, b <= N-1`` with ``gcd(N, a, b) = 1``.

    Pairs that generate the same lattice are visited once (see
    :func:`distinct_lattices`). With ``invariants`` each lattice is also
    checked for ``2 <= lambda^2 <= 2.25 N`` and ``k <= 2 lambda``.
    ``fast`` only looks at ``a = 1``, which can miss the true maximum.
    """
    best = -1
    winners = []
    distinct = 0
    violations = []
    n = np.arange(N, dtype=np.int64) if invariants else None
    for d1, c, d2, a, b in (_fast_lattices(N) if fast else distinct_lattices(N)):
        distinct += 1
        x1, y1, _, _ = _reduce_raw(d1, c, 0, d2)
        lsq = x1 * x1 + y1 * y1
        if lsq > best:
            best, winners = lsq, [(a, b)]
        elif lsq == best:
            winners.append((a, b))
        if invariants:
            v = IntVec2(x1, y1).canonical()
            px, py = (n * a) % N - v.x, (n * b) % N - v.y
            k = int(((px < 0) | (px >= N) | (py < 0) | (py >= N)).sum())
            if not (2 <= lsq and 4 * lsq <= 9 * N):
                violations.append(("lambda_range", N, a, b, lsq))
            if k * k > 4 * lsq:
                violations.append(("k_le_2lambda", N, a, b, k, lsq))
    gens = sorted(smallest_generator(N, a, b) for a, b in winners)
    ba, bb = gens[0]
    if all_maximizers:
        maximizers = sorted(
            (int(u * a % N), int(u * b % N))
            for a, b in winners
            for u in range(1, N)
            if math.gcd(u, N) == 1
        )
    else:
        maximizers = gens
    rec = ScanRecord(N, ba, bb, math.sqrt(best / N), best)
    raw = distinct if fast else distinct * euler_phi(N)
    return ScanResult(rec, distinct, raw, maximizers, violations)


def brute_force_scan_n(N: int) -> ScanRecord:
    """Reference scan over every raw pair; quadratic in N, for testing only."""
    best = None
    for a in range(1, N):
        for b in range(1, N):
            if math.gcd(math.gcd(N, a), b) != 1:
                continue
            lsq = modular_basis(N, a, b).lambda_sq
            if best is None or lsq > best[0]:
                best = (lsq, a, b)
    lsq, a, b = best
    return ScanRecord(N, a, b, math.sqrt(lsq / N), lsq)


def worker_count(requested: int | None = None) -> int:
    if requested:
        return requested
    env = os.environ.get("LATTICE_TSP_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _scan_chunk(args):
    ns, fast = args
    return [scan_n(N, fast=fast) for N in ns]


def iter_scan(start: int, stop: int, workers: int = 1, chunk: int = 8, fast: bool = False):
    """Yield :class:`ScanResult` for ``start <= N <= stop`` in increasing N.

    Workers get disjoint chunks of N; ``map`` hands results back in order so
    the output does not depend on the worker count.
    """
    ns = list(range(start, stop + 1))
    if workers <= 1:
        for N in ns:
            yield scan_n(N, fast=fast)
        return
    chunks = [(ns[i : i + chunk], fast) for i in range(0, len(ns), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for results in pool.map(_scan_chunk, chunks):
            yield from results


def read_scan(path) -> list[ScanRecord]:
    """Complete rows of a scan file; a torn last line is ignored."""
    with open(path) as fh:
        text = fh.read()
    lines = text.split("\n")
    if not lines or lines[0] != SCAN_HEADER:
        raise ValueError(f"{path}: not a scan v1 file")
    complete = lines[:-1]  # the piece after the final newline is partial or empty
    records = []
    for line in complete[1:]:
        if line == SCAN_COLUMNS or not line:
            continue
        records.append(ScanRecord.parse(line))
    for want, rec in enumerate(records, start=2):
        if rec.N != want:
            raise ValueError(f"{path}: rows not contiguous at N={rec.N}")
    return records


def run_scan(path, max_n: int, workers: int = 1, resume: bool = False, progress=None,
             fast: bool = False):
    """Write ``N, best_a, best_b, lambda_sq, f_max`` for ``2 <= N <= max_n``.

    With ``resume`` an existing file is cut back to its last complete row
    and continued from there. Returns ``(raw_pairs, distinct_lattices)``
    counted over the rows computed in this call.
    """
    if max_n < 2:
        raise ValueError("max-n must be >= 2")
    done = read_scan(path) if resume and os.path.exists(path) else []
    start = done[-1].N + 1 if done else 2
    if done:
        with open(path, "r+", newline="") as fh:
            text = fh.read()
            fh.seek(0)
            fh.truncate(len(text[: text.rfind("\n") + 1].encode()))
        fh = open(path, "a", newline="")
    else:
        fh = open(path, "w", newline="")
        fh.write(SCAN_HEADER + "\n" + SCAN_COLUMNS + "\n")
    raw = distinct = 0
    with fh:
        for res in iter_scan(start, max_n, workers, fast=fast):
            fh.write(res.record.csv_row() + "\n")
            fh.flush()
            raw += res.raw
            distinct += res.distinct
            if progress:
                progress(res)
    return raw, distinct
