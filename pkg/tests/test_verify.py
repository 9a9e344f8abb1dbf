"""Tests for tangent Hessians, Jacobi eigenvalues, and certification."""

import pytest
from hypothesis import given, strategies as st

from spherecodes import (
    BigReal,
    CoincidentPoints,
    NonSymmetric,
    NotCritical,
    Point3,
    PointSet,
    Rng,
    SizeMismatch,
    eigenvalues_sym,
    elem,
    energy,
    hessian,
    jiggle,
    normalize,
    random_point,
    tangent_basis,
    verify_minimum,
)
from spherecodes.potentials import LOG, R1

from conftest import (
    antipodal_pair,
    as_float,
    big,
    big_gap,
    cube,
    equatorial_square,
    octahedron,
    tetrahedron,
)


# ------------------------------------------------------------ tangent frames


def test_tangent_basis_is_orthonormal_and_tangent():
    P = octahedron()
    basis = tangent_basis(P)
    assert basis.n == 6
    for pt, (t1, t2) in zip(P.points, basis.frames):
        assert as_float(abs(t1.dot(pt))) < 1e-38
        assert as_float(abs(t2.dot(pt))) < 1e-38
        assert as_float(abs(t1.dot(t2))) < 1e-38
        assert abs(as_float(t1.norm()) - 1) < 1e-38
        assert abs(as_float(t2.norm()) - 1) < 1e-38
    assert basis[0] == basis.frames[0]


# ----------------------------------------------------------------- hessian


def test_hessian_shape_and_symmetry():
    P = tetrahedron()
    H = hessian(P, R1)
    assert len(H) == 8 and all(len(row) == 8 for row in H)
    for i in range(8):
        for j in range(8):
            assert big_gap(H[i][j], H[j][i]) == 0


def chart_energy(P, i, basis, u1, u2, pot):
    """Energy with point i moved to normalize(x_i + u1 t1 + u2 t2)."""
    t1, t2 = basis[i]
    moved = list(P.points)
    moved[i] = normalize(moved[i] + t1.scaled(u1) + t2.scaled(u2))
    return energy(PointSet(moved), pot).value


def test_hessian_matches_finite_differences():
    rng = Rng(21)
    P = PointSet([random_point(rng) for _ in range(4)])
    h = BigReal.exp10(-10, 40)
    zero = BigReal.zero(40)
    for pot in (R1, LOG):
        H = hessian(P, pot)
        basis = tangent_basis(P)
        e0 = energy(P, pot).value
        for i in range(4):
            for a in range(2):
                u = (h, zero) if a == 0 else (zero, h)
                d = (-h, zero) if a == 0 else (zero, -h)
                up = chart_energy(P, i, basis, *u, pot)
                down = chart_energy(P, i, basis, *d, pot)
                fd = (up - 2 * e0 + down) / (h * h)
                assert big_gap(H[2 * i + a][2 * i + a], fd) < big("1e-15")
        t1, t2 = basis[0]
        corners = []
        for s1 in (h, -h):
            for s2 in (h, -h):
                corners.append(chart_energy(P, 0, basis, s1, s2, pot))
        fd = (corners[0] - corners[1] - corners[2] + corners[3]) / (4 * h * h)
        assert big_gap(H[0][1], fd) < big("1e-15")

        def two_point(s1, s2):
            moved = list(P.points)
            moved[0] = normalize(moved[0] + t1.scaled(s1))
            moved[2] = normalize(moved[2] + basis[2][1].scaled(s2))
            return energy(PointSet(moved), pot).value

        fd = (two_point(h, h) - two_point(h, -h)
              - two_point(-h, h) + two_point(-h, -h)) / (4 * h * h)
        assert big_gap(H[0][5], fd) < big("1e-15")


def test_hessian_rejects_coincident_points():
    z = big(0)
    pt = Point3(z, z, big(1))
    P = PointSet([pt, Point3(big(1), z, z), pt])
    with pytest.raises(CoincidentPoints, match="points 0 and 2"):
        hessian(P, R1)


# ------------------------------------------------------- jacobi eigenvalues


def test_eigenvalues_of_small_fixtures():
    assert eigenvalues_sym([], 30) == []
    only = eigenvalues_sym([[big(7, 30)]], 30)
    assert as_float(only[0]) == 7.0
    pair = eigenvalues_sym([[2, 1], [1, 2]], 30)
    assert abs(as_float(pair[0]) - 1) < 1e-25
    assert abs(as_float(pair[1]) - 3) < 1e-25
    swap = eigenvalues_sym([[0, 1], [1, 0]], 30)
    assert abs(as_float(swap[0]) + 1) < 1e-25
    assert abs(as_float(swap[1]) - 1) < 1e-25


def test_eigenvalues_of_diagonal_matrix_sort_ascending():
    eig = eigenvalues_sym([[3, 0, 0], [0, -1, 0], [0, 0, 2]], 25)
    assert [as_float(v) for v in eig] == [-1.0, 2.0, 3.0]


def test_eigenvalues_reject_bad_matrices():
    with pytest.raises(SizeMismatch, match="rows"):
        eigenvalues_sym([[1, 2], [3]], 20)
    with pytest.raises(NonSymmetric, match="differ"):
        eigenvalues_sym([[0, 1], [2, 0]], 20)


@given(st.lists(st.integers(-9, 9), min_size=10, max_size=10))
def test_eigenvalue_invariants(entries):
    m = 4
    M = [[0] * m for _ in range(m)]
    k = 0
    for i in range(m):
        for j in range(i, m):
            M[i][j] = M[j][i] = entries[k]
            k += 1
    eig = eigenvalues_sym(M, 40)
    trace = sum(M[i][i] for i in range(m))
    frob2 = sum(M[i][j] ** 2 for i in range(m) for j in range(m))
    assert abs(as_float(sum(eig, big(0)) - trace)) < 1e-25
    assert abs(as_float(sum((v * v for v in eig), big(0)) - frob2)) < 1e-24


# ------------------------------------------------------------ certification


def test_octahedron_is_a_minimum_with_closed_form_spectrum():
    rep = verify_minimum(octahedron(), R1)
    assert rep.verdict == "minimum"
    assert rep.zero_count == 3
    assert len(rep.eigenvalues) == 12
    root2 = elem("sqrt", big(2))
    closed = ([big(0)] * 3 + [(1 + root2) / 4] * 3
              + [(1 + 5 * root2) / 4] * 3 + [3 * root2 / 2] * 3)
    for got, want in zip(rep.eigenvalues, closed):
        assert big_gap(got, want) < big("1e-28")


def test_tetrahedron_is_a_minimum():
    rep = verify_minimum(tetrahedron(), R1)
    assert rep.verdict == "minimum"
    assert rep.zero_count == 3
    spectrum = [as_float(v) for v in rep.eigenvalues]
    assert abs(spectrum[3] - 0.6889189901577688) < 1e-14
    assert abs(spectrum[5] - 1.0716517624676403) < 1e-14


def test_antipodal_pair_has_two_zero_modes():
    rep = verify_minimum(antipodal_pair(), R1)
    assert rep.verdict == "minimum"
    assert rep.zero_count == 2
    assert [as_float(v) for v in rep.eigenvalues] == [0.0, 0.0, 0.25, 0.25]


def test_single_point_is_degenerate_by_convention():
    P = PointSet([Point3(big(0), big(0), big(1))])
    rep = verify_minimum(P, R1)
    assert rep.verdict == "degenerate"
    assert len(rep.eigenvalues) == 2


def test_equatorial_square_is_a_saddle():
    rep = verify_minimum(equatorial_square(), R1)
    assert rep.verdict == "saddle"
    assert abs(as_float(rep.eigenvalues[0]) + 0.4571067811865475) < 1e-14


def test_cube_is_a_saddle():
    rep = verify_minimum(cube(), R1)
    assert rep.verdict == "saddle"
    assert abs(as_float(rep.eigenvalues[0]) + 0.3601191155188891) < 1e-13
    assert abs(as_float(rep.eigenvalues[1]) + 0.3601191155188891) < 1e-13


def test_non_critical_sets_are_rejected():
    P = jiggle(octahedron(), "0.01", Rng(31))
    with pytest.raises(NotCritical, match="residual"):
        verify_minimum(P, R1)


def test_zero_tol_override():
    rep = verify_minimum(octahedron(), R1, zero_tol="1e-30")
    assert rep.verdict == "minimum"
    assert rep.zero_count == 3
    wide = verify_minimum(octahedron(), R1, zero_tol="0.7")
    assert wide.zero_count == 6


def test_report_repr_mentions_verdict():
    rep = verify_minimum(antipodal_pair(), R1)
    assert "minimum" in repr(rep)
