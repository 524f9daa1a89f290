import math

import numpy as np
import pytest

from lattice_tsp.jacobiperron import Convergent, cube_root_frac, jacobi_perron, rational
from lattice_tsp.kronecker import (
    REFERENCE_F,
    convergent_lattice_basis,
    drift_identity_check,
    kronecker_points,
    sequence_of_constants,
    theorem2_bounds,
    write_constants_csv,
)


@pytest.fixture(scope="module")
def cube91():
    return cube_root_frac(91, 1, 192), cube_root_frac(91, 2, 192)


@pytest.fixture(scope="module")
def rows(cube91):
    return {r.i: r for r in sequence_of_constants(*cube91, 16)}


def test_kronecker_points(cube91):
    K = kronecker_points(*cube91, 484)
    assert K.points.shape == (484, 2)
    assert (K.points >= 0).all() and (K.points < 1).all()
    n = 123
    assert K.points[n, 0] == pytest.approx((n * (91 ** (1 / 3))) % 1, abs=1e-12)


def test_theorem2_bounds_i4(cube91):
    c = jacobi_perron(*cube91, 4)[-1]
    kb = theorem2_bounds(c, 0.5)
    assert kb.lambda_sq == 185
    assert kb.lower == pytest.approx(0.4777, abs=1e-4)
    assert kb.upper == pytest.approx(0.8311, abs=1e-4)
    assert not kb.vacuous


def test_vacuous_flag_and_delta_range(cube91):
    c = jacobi_perron(*cube91, 1)[-1]
    assert theorem2_bounds(c).vacuous
    with pytest.raises(ValueError):
        theorem2_bounds(c, 0.75)
    with pytest.raises(ValueError):
        theorem2_bounds(c, 0.0)


def test_bounds_ordered_when_informative(rows):
    for r in rows.values():
        if not r.bounds.vacuous:
            assert r.bounds.lower < r.bounds.upper


def test_table_values(rows):
    for i in range(4, 17):
        assert rows[i].f == pytest.approx(REFERENCE_F[i], abs=1e-3), i
        assert not rows[i].discrepancy


def test_row3_flagged(rows):
    r = rows[3]
    assert r.q == 241 and r.lambda_sq == 269
    assert r.shortest.as_tuple() == (13, -10)
    assert r.discrepancy
    assert r.reference_f == 1.0055


def test_oracle_used_where_cheap(rows):
    assert rows[8].oracle_checked
    assert not rows[16].oracle_checked


@pytest.mark.parametrize("i", [3, 4, 5])
def test_drift_identity(cube91, i):
    c = jacobi_perron(*cube91, i)[-1]
    K = kronecker_points(*cube91, c.q)
    rep = drift_identity_check(K, c, sample=100, seed=i)
    assert rep.samples == 100
    assert rep.max_deviation <= 1e-10


def test_drift_rejects_mismatch(cube91):
    K = kronecker_points(*cube91, 241)
    with pytest.raises(ValueError):
        drift_identity_check(K, Convergent(4, 484, 241, 112))
    with pytest.raises(ValueError):
        drift_identity_check(K, Convergent(3, 241, 7, 56))


def test_lattice_basis_with_zero_coordinate():
    b = convergent_lattice_basis(Convergent(1, 2, 1, 0))
    assert b.lambda_sq == 1


def test_constants_csv(tmp_path, rows):
    p = tmp_path / "k.csv"
    write_constants_csv(p, [rows[i] for i in (3, 4, 5)])
    lines = p.read_text().splitlines()
    assert lines[0] == "i,q_i,lambda_sq,f,lower,upper,delta_used"
    assert lines[2].startswith("4,484,185,0.618249,")


def test_rational_kronecker_is_periodic():
    a, b = rational(3, 7), rational(2, 7)
    K = kronecker_points(a, b, 14)
    assert np.allclose(K.points[:7], K.points[7:])
    assert math.isclose(K.points[1, 0], 3 / 7)
