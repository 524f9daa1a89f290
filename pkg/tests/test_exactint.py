import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_tsp.exactint import (
    DegenerateLatticeError,
    GeneratorSet,
    IntVec2,
    basis_from_generators,
    gauss_reduce,
    in_lattice,
    modular_basis,
    shortest_vector_oracle,
    shortest_vectors,
)


def modular_triples(max_n=3000):
    return st.integers(2, max_n).flatmap(
        lambda N: st.tuples(st.just(N), st.integers(1, N - 1), st.integers(1, N - 1))
    ).filter(lambda t: math.gcd(math.gcd(t[0], t[1]), t[2]) == 1)


def test_canonical_sign():
    assert IntVec2(-4, 3).canonical() == IntVec2(4, -3)
    assert IntVec2(0, -2).canonical() == IntVec2(0, 2)
    assert IntVec2(3, -1).canonical() == IntVec2(3, -1)


def test_hermite_basis_example():
    b1, b2 = basis_from_generators(GeneratorSet.modular(23, 1, 5))
    assert (b1, b2) == (IntVec2(1, 5), IntVec2(0, 23))
    b1, b2 = basis_from_generators(GeneratorSet.modular(12, 2, 3))
    assert b1.x * b2.y == 12 // 1 and b1.cross(b2) == 12


def test_zero_determinant_raises():
    with pytest.raises(DegenerateLatticeError):
        gauss_reduce(IntVec2(1, 2), IntVec2(2, 4))
    with pytest.raises(DegenerateLatticeError):
        basis_from_generators(GeneratorSet(IntVec2(1, 1), IntVec2(2, 2), IntVec2(0, 0)))


def test_degenerate_modular():
    with pytest.raises(ValueError, match="degenerate"):
        modular_basis(4, 2, 2)
    with pytest.raises(ValueError):
        modular_basis(5, 0, 1)


@pytest.mark.parametrize(
    "N,a,b,v,lsq",
    [(23, 1, 3, (1, 3), 10), (23, 1, 5, (4, -3), 25), (209, 1, 56, (4, 15), 241),
     (479, 1, 20, (1, 20), 401), (484, 241, 112, (13, -4), 185), (972, 484, 225, (28, 9), 865)],
)
def test_known_shortest_vectors(N, a, b, v, lsq):
    basis = modular_basis(N, a, b)
    assert basis.x1 == IntVec2(*v)
    assert basis.lambda_sq == lsq
    assert shortest_vector_oracle(N, a, b) == IntVec2(*v)


def test_ties_pick_smallest_canonical():
    # L_{3,1,1} has the unique (up to sign) shortest vector (1,1)
    basis = modular_basis(3, 1, 1)
    assert basis.x1 == IntVec2(1, 1)
    # L_{7,1,2} and L_{7,1,3}: equal-length minimal vectors, both signs listed
    for b in (2, 3):
        basis = modular_basis(7, 1, b)
        vs = shortest_vectors(basis)
        assert all(w.norm_sq == basis.lambda_sq for w in vs)
        assert basis.x1 == min(w for w in vs if w.canonical() == w)


@settings(max_examples=300, deadline=None)
@given(modular_triples())
def test_gauss_matches_oracle(t):
    N, a, b = t
    basis = modular_basis(N, a, b)
    assert basis.is_reduced()
    assert abs(basis.det) == N
    assert shortest_vector_oracle(N, a, b) == basis.x1
    hnf = basis_from_generators(GeneratorSet.modular(N, a, b))
    for g in GeneratorSet.modular(N, a, b):
        assert in_lattice(g, *hnf) and in_lattice(g, basis.x1, basis.x2)
    assert 2 <= basis.lambda_sq and 4 * basis.lambda_sq <= 9 * N


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**30, 10**30), st.integers(-10**30, 10**30),
       st.integers(-10**30, 10**30), st.integers(-10**30, 10**30))
def test_reduction_big_integers(ux, uy, vx, vy):
    u, v = IntVec2(ux, uy), IntVec2(vx, vy)
    if u.cross(v) == 0:
        return
    r = gauss_reduce(u, v)
    assert abs(r.x1.cross(r.x2)) == abs(u.cross(v))
    assert r.x1.norm_sq <= r.x2.norm_sq
    assert 2 * abs(r.x1.dot(r.x2)) <= r.x1.norm_sq
    assert in_lattice(r.x1, u, v) and in_lattice(r.x2, u, v)


def test_python_oracle_path_agrees():
    from lattice_tsp.exactint import _oracle_python

    for N in range(2, 60):
        for a in range(1, N):
            for b in {1, N - 1, max(1, N // 2), min(2, N - 1)}:
                if math.gcd(math.gcd(N, a), b) != 1:
                    continue
                assert _oracle_python(N, a, b) == shortest_vector_oracle(N, a, b)
