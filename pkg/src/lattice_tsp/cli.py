"""``lattice-tsp`` command line.

Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 precision cap.
"""

from __future__ import annotations

import argparse
import csv
import math
import random
import sys
import time

from .exactint import shortest_vector_oracle
from .jacobiperron import (
    START_PRECISION,
    PrecisionCapError,
    convergence_report,
    cube_root_frac,
    jacobi_perron,
    write_convergents_csv,
)
from .kronecker import DEFAULT_DELTA, sequence_of_constants, theorem2_bounds, write_constants_csv
from .modlattice import ModularLattice
from .scan import run_scan, worker_count
from .tsp import (
    EXACT_LIMIT,
    exact_tour,
    karloff_comparison,
    serpentine_tour,
    theorem1_bounds,
    triangle_bounds,
    two_opt_improve,
    write_tour_csv,
    write_tour_svg,
)

EXIT_INVALID = 2
EXIT_IO = 3
EXIT_PRECISION = 4


def _fmt_vec(v) -> str:
    return f"({v.x}, {v.y})"


def cmd_svec(args) -> int:
    L = ModularLattice(args.N, args.a, args.b)
    v = L.shortest_vector
    print(f"N = {L.N}")
    print(f"shortest_vector = {_fmt_vec(v)}")
    print(f"lambda_sq = {L.lambda_sq}")
    print(f"lambda = {L.lam:.10f}")
    print(f"f = {math.sqrt(L.lambda_sq / L.N):.10f}")
    print(f"contains_shortest_vector = {str(L.contains_shortest_vector()).lower()}")
    if args.oracle:
        o = shortest_vector_oracle(L.N, L.a, L.b)
        ok = o.norm_sq == L.lambda_sq
        print(f"oracle_lambda_sq = {o.norm_sq} ({'agrees' if ok else 'MISMATCH'})")
        if not ok:
            return 1
    return 0


def cmd_bounds(args) -> int:
    if args.triangle:
        if args.a != 1:
            raise ValueError("--triangle needs a = 1")
        t0 = time.perf_counter()
        tb = triangle_bounds(args.N, args.b)
        dt = time.perf_counter() - t0
        L = ModularLattice(args.N, 1, args.b)
        print("bounds = triangle (unit square, per sqrt N)")
    else:
        L = ModularLattice(args.N, args.a, args.b)
        t0 = time.perf_counter()
        tb = theorem1_bounds(L)
        dt = time.perf_counter() - t0
        print("bounds = line cover (unit square, per sqrt N)")
    print(f"N = {L.N}")
    print(f"lambda_sq = {L.lambda_sq}")
    print(f"f = {tb.f:.10f}")
    print(f"lower = {tb.lower:.10f}")
    print(f"upper = {tb.upper:.10f}")
    print(f"k = {tb.k}")
    raw = tb.raw(L.N)
    print(f"raw_tour_length_in = [{raw.lower:.6f}, {raw.upper:.6f}]")
    if not args.triangle:
        kc = karloff_comparison(L)
        print(f"unit_square_upper = {kc.paper_upper:.6f}  karloff = {kc.karloff:.6f}  improves = {str(kc.improves).lower()}")
    print(f"elapsed_ms = {dt * 1e3:.3f}")
    return 0


def cmd_scan(args) -> int:
    workers = worker_count(args.workers)
    t0 = time.perf_counter()
    raw, distinct = run_scan(args.out, args.max_n, workers=workers, resume=args.resume, fast=args.fast)
    dt = time.perf_counter() - t0
    mode = "a=1 only (approximate)" if args.fast else "all pairs"
    print(f"scan N <= {args.max_n} ({mode}): raw_pairs={raw} distinct_lattices={distinct} "
          f"workers={workers} elapsed={dt:.1f}s -> {args.out}")
    return 0


def _cube_root_pair(k: int):
    return cube_root_frac(k, 1, START_PRECISION), cube_root_frac(k, 2, START_PRECISION)


def cmd_table1(args) -> int:
    alpha, beta = _cube_root_pair(args.k)
    rows = sequence_of_constants(alpha, beta, args.iters, delta=args.delta)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["i", "q_i", "p_i", "r_i", "lambda_sq", "f", "f_reference", "discrepancy"])
        for r in rows:
            ref = r.reference_f if args.k == 91 else None
            w.writerow([r.i, r.q, r.p, r.r, r.lambda_sq, f"{r.f:.6f}",
                        "" if ref is None else f"{ref:.4f}",
                        "yes" if (ref is not None and r.discrepancy) else "no"])
    finally:
        if args.out:
            out.close()
    if args.convergents_out:
        convs = jacobi_perron(alpha, beta, args.iters)
        write_convergents_csv(args.convergents_out, convs, convergence_report(alpha, beta, convs))
    return 0


def cmd_tour(args) -> int:
    L = ModularLattice(args.N, args.a, args.b)
    pts = L.point_array()
    tour = serpentine_tour(L)
    label = "serpentine"
    if args.exact:
        if L.N > EXACT_LIMIT:
            raise ValueError(f"--exact supports N <= {EXACT_LIMIT}")
        tour = exact_tour(pts)
        label = "exact"
    elif args.two_opt:
        tour = two_opt_improve(tour, pts)
        label = "serpentine+2opt"
    out = args.out or f"tour_{L.N}_{L.a}_{L.b}.{args.emit}"
    if args.emit == "svg":
        write_tour_svg(out, tour, pts)
    else:
        write_tour_csv(out, tour, pts)
    tb = theorem1_bounds(L).raw(L.N)
    print(f"{label} tour: N = {L.N} lambda_sq = {L.lambda_sq} length = {tour.length:.6f} "
          f"bracket = [{tb.lower:.6f}, {tb.upper:.6f}] -> {out}")
    return 0


def cmd_kron(args) -> int:
    if args.i < 1:
        raise ValueError("--i must be >= 1")
    alpha, beta = _cube_root_pair(args.k)
    conv = jacobi_perron(alpha, beta, args.i)[-1]
    kb = theorem2_bounds(conv, args.delta)
    print(f"i = {conv.index}  (q, p, r) = ({conv.q}, {conv.p}, {conv.r})")
    print(f"N = {kb.N}")
    print(f"lambda_sq = {kb.lambda_sq}")
    print(f"f = {kb.f:.10f}")
    print(f"lower = {kb.lower:.10f}")
    print(f"upper = {kb.upper:.10f}")
    print(f"delta = {kb.delta}")
    if kb.vacuous:
        print(f"vacuous = true (q^delta = {kb.N ** kb.delta:.4g} <= 5)")
    if args.sequence_out:
        write_constants_csv(args.sequence_out, sequence_of_constants(alpha, beta, args.i, args.delta))
    return 0


def cmd_oracle_check(args) -> int:
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.count):
        while True:
            N = rng.randint(2, args.max_n)
            a, b = rng.randint(1, N - 1), rng.randint(1, N - 1)
            if math.gcd(math.gcd(N, a), b) == 1:
                break
        L = ModularLattice(N, a, b)
        o = shortest_vector_oracle(N, a, b)
        if o.norm_sq != L.lambda_sq:
            bad += 1
            print(f"mismatch N={N} a={a} b={b}: gauss {L.lambda_sq} oracle {o.norm_sq}")
    print(f"oracle-check: {args.count} lattices, N <= {args.max_n}, seed {args.seed}: {bad} mismatches")
    return 0 if bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lattice-tsp", description="Modular lattice and Kronecker TSP tools")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("svec", help="shortest vector, lambda and f of L_{N,a,b}")
    s.add_argument("N", type=int)
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    s.set_defaults(func=cmd_svec)

    s = sub.add_parser("bounds", help="tour-length bounds in the unit square")
    s.add_argument("N", type=int)
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("--triangle", action="store_true", help="refined bounds for a = 1")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("scan", help="f_max(N) for 2 <= N <= max-n as CSV")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--resume", action="store_true")
    s.add_argument("--workers", type=int, default=None, help="default: LATTICE_TSP_WORKERS or cpu count")
    s.add_argument("--fast", action="store_true", help="only a = 1 (approximation)")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("table1", help="constants of the cube-root Kronecker convergents")
    s.add_argument("--iters", type=int, default=16)
    s.add_argument("--k", type=int, default=91)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    s.add_argument("--out")
    s.add_argument("--convergents-out", help="also write q, p, r and approximation errors")
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("tour", help="emit a tour through L_{N,a,b}")
    s.add_argument("N", type=int)
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("--emit", choices=["svg", "csv"], required=True)
    s.add_argument("--exact", action="store_true", help=f"Held-Karp optimum, N <= {EXACT_LIMIT}")
    s.add_argument("--two-opt", action="store_true", help="polish the serpentine tour with 2-opt")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tour)

    s = sub.add_parser("kron", help="tour bounds for a cube-root Kronecker set")
    s.add_argument("--k", type=int, default=91)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    s.add_argument("--sequence-out", help="CSV of the constants for convergents 1..i")
    s.set_defaults(func=cmd_kron)

    s = sub.add_parser("oracle-check", help="Gauss reduction against brute force on random lattices")
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--max-n", type=int, default=5000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PrecisionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
