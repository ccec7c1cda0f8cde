"""Relation-lattice basis geometry and exact ball counting."""

from fractions import Fraction
from math import gamma, pi, sqrt

import pytest

from lacunary import (
    BallQuery,
    InvalidParametersError,
    ResourceLimitError,
    basis_to_json,
    build_basis,
    enumerate_ball,
    mesh_max_length,
    volume_count_bound,
)
from lacunary.cyclotomic import _cyclotomic_coeffs, _poly_mod
from lacunary.numtheory import omega, totient


def dense_kills_cyclotomic(vector, n):
    rem = _poly_mod(list(vector), list(_cyclotomic_coeffs(n)))
    return all(c == 0 for c in rem)


def brute_count(basis, center, radius, anchor):
    """Direct box enumeration for rank <= 3, exact rational comparisons."""
    r = basis.rank
    assert r <= 3
    span = int(radius / min(sqrt(g[i]) for i, g in enumerate(basis.gram))) + 2
    pts = 0
    rad2 = Fraction(radius) ** 2
    ranges = [range(-span, span + 1)] * r
    import itertools

    for t in itertools.product(*ranges):
        coords = list(anchor)
        for ti, v in zip(t, basis.vectors):
            if ti:
                for l, x in enumerate(v):
                    coords[l] += ti * x
        d2 = sum((Fraction(c) - Fraction(z)) ** 2 for c, z in zip(coords, center))
        if d2 <= rad2:
            pts += 1
    return pts


# --- construction ----------------------------------------------------------------


def test_basis_n4():
    b = build_basis(4)
    assert b.rank == 2
    assert b.vectors == ((1, 0, 1, 0), (0, 1, 0, 1))
    assert b.gram == ((2, 0), (0, 2))
    assert b.gram_det == 4


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_basis_prime_is_all_ones(p):
    b = build_basis(p)
    assert b.rank == 1
    assert b.vectors == ((1,) * p,)
    assert b.gram_det == p


def test_basis_n12():
    b = build_basis(12)
    assert b.rank == 8
    assert b.gram_det > 0
    for v in b.vectors:
        assert dense_kills_cyclotomic(v, 12)


def test_basis_validation():
    with pytest.raises(InvalidParametersError):
        build_basis(1)


def test_basis_invariants_moderate_range():
    # the acceptance suite runs the full [2, 300]
    for n in range(2, 61):
        b = build_basis(n)
        assert b.rank == n - totient(n)
        assert isinstance(b.gram_det, int) and b.gram_det > 0
        assert all(x == 1 for v in b.vectors for x in v if x)  # 0/1 vectors
        for i in range(b.rank):
            for j in range(b.rank):
                assert b.gram[i][j] >= 0
        for v in b.vectors:
            assert dense_kills_cyclotomic(v, n)


def test_gram_det_regression_fixtures():
    # frozen exact determinants pin the construction against silent drift
    expected = {6: 12, 12: 144, 30: 518400, 36: 2985984, 100: 10737418240000000000}
    for n, det in expected.items():
        assert build_basis(n).gram_det == det


# --- mesh length -------------------------------------------------------------------


def test_mesh_examples():
    assert mesh_max_length(build_basis(4)) == pytest.approx(2.0)
    assert mesh_max_length(build_basis(9)) == pytest.approx(3.0)
    assert mesh_max_length(build_basis(6)) <= 2 * sqrt(6)


def test_mesh_bound_and_prime_power_equality():
    for n in range(2, 61):
        ml = mesh_max_length(build_basis(n))
        assert ml <= omega(n) * sqrt(n) + 1e-9
        if omega(n) == 1:
            assert ml == pytest.approx(sqrt(n))


# --- ball counting -----------------------------------------------------------------


def test_radius_zero_counts_anchor():
    b = build_basis(4)
    q = BallQuery(center=(0, 0, 0, 0), radius=0, n=4)
    assert enumerate_ball(b, q, (0, 0, 0, 0)) == 1


@pytest.mark.parametrize("p,r", [(5, 7), (3, 10), (7, 20)])
def test_rank_one_closed_form(p, r):
    b = build_basis(p)
    q = BallQuery(center=(0,) * p, radius=r, n=p)
    assert enumerate_ball(b, q, (0,) * p) == 2 * int(r / sqrt(p)) + 1


def test_boundary_points_are_included():
    # radius exactly sqrt(p): the two neighbors sit on the sphere
    b = build_basis(5)
    q = BallQuery(center=(0,) * 5, radius=sqrt(5), n=5)
    assert enumerate_ball(b, q, (0,) * 5) == 3


def test_count_matches_brute_force_off_center():
    b = build_basis(4)
    center = (Fraction(5, 4), Fraction(5, 4), Fraction(5, 4), Fraction(5, 4))
    for anchor in [(0, 0, 0, 0), (1, 0, 1, 0), (2, 1, 0, 0)]:
        for radius in (0, 1, 3, 6):
            q = BallQuery(center=center, radius=radius, n=4)
            assert enumerate_ball(b, q, anchor) == brute_count(b, center, radius, anchor)


def test_count_matches_brute_force_rank3():
    b = build_basis(9)
    center = (Fraction(1, 3),) * 9
    q = BallQuery(center=center, radius=5, n=9)
    assert enumerate_ball(b, q, (0,) * 9) == brute_count(b, center, 5, (0,) * 9)


def test_enumeration_guard():
    b = build_basis(12)
    q = BallQuery(center=(0,) * 12, radius=20, n=12)
    with pytest.raises(ResourceLimitError):
        enumerate_ball(b, q, (0,) * 12)


def test_enumeration_validation():
    b = build_basis(4)
    with pytest.raises(InvalidParametersError):
        BallQuery(center=(0, 0, 0, 0), radius=-1, n=4)
    with pytest.raises(InvalidParametersError):
        enumerate_ball(b, BallQuery(center=(0,) * 6, radius=1, n=6), (0,) * 4)


# --- volume bound ------------------------------------------------------------------


def test_volume_bound_rank_one_formula():
    for p, r in [(5, 7), (3, 4), (11, 20)]:
        b = build_basis(p)
        assert volume_count_bound(b, r) == pytest.approx(2 * (r + sqrt(p)) / sqrt(p))


def test_volume_bound_radius_zero_at_least_one():
    for n in (4, 6, 9, 12):
        assert volume_count_bound(build_basis(n), 0) >= 1


def test_volume_bound_dominates_counts_small_grid():
    # the acceptance suite runs the full n x radius grid
    for n in (4, 6, 9):
        b = build_basis(n)
        for r in (5, 10):
            q = BallQuery(center=(0,) * n, radius=r, n=n)
            assert enumerate_ball(b, q, (0,) * n) <= volume_count_bound(b, r)


def test_volume_bound_formula_agreement():
    b = build_basis(6)
    r = 10.0
    expected = (
        (r + mesh_max_length(b)) ** b.rank
        * pi ** (b.rank / 2)
        / gamma(b.rank / 2 + 1)
        / sqrt(b.gram_det)
    )
    assert volume_count_bound(b, r) == pytest.approx(expected, rel=1e-12)


# --- export -------------------------------------------------------------------------


def test_basis_json_record():
    rec = basis_to_json(build_basis(4))
    assert rec["n"] == 4 and rec["rank"] == 2
    assert rec["vectors"] == [[1, 0, 1, 0], [0, 1, 0, 1]]
    assert rec["gram_det"] == 4
    assert rec["mesh_len"] == pytest.approx(2.0)
