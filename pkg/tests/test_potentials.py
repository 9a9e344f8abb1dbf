"""Tests for pair kernels, total energies, forces, and residuals."""

import pytest
from hypothesis import given, strategies as st

from spherecodes import (
    BigReal,
    CoincidentPoints,
    DomainError,
    Point3,
    PointSet,
    Potential,
    Rng,
    elem,
    energy,
    force,
    forces,
    pair_distance,
    pair_potential,
    random_point,
    residual,
    tangential_component,
)
from spherecodes.potentials import LOG, R1, R2

from conftest import (
    antipodal_pair,
    as_float,
    big,
    big_gap,
    icosahedron,
    octahedron,
    tetrahedron,
)

POTS = [LOG, R1, R2, Potential.riesz(3)]


def random_set(seed, n, digits=40):
    rng = Rng(seed)
    return PointSet([random_point(rng, digits) for _ in range(n)])


# ---------------------------------------------------------------- tokens


def test_token_round_trip():
    for token in ["log", "r1", "r2", "rs:3", "rs:7", "rs:12"]:
        pot = Potential.from_token(token)
        assert pot.token == token
        assert str(pot) == token


def test_token_canonicalizes_small_exponents():
    assert Potential.from_token("rs:1") == R1
    assert Potential.from_token("rs:1").token == "r1"
    assert Potential.from_token("rs:2").token == "r2"


def test_token_strips_and_lowercases():
    assert Potential.from_token(" R1 ") == R1
    assert Potential.from_token("LOG") == LOG


def test_bad_tokens_rejected():
    for token in ["", "r3", "coulomb", "rs:", "rs:x", "rs:0", "rs:-1", "log:2"]:
        with pytest.raises(ValueError):
            Potential.from_token(token)


def test_constructor_validation():
    with pytest.raises(ValueError):
        Potential("log", 1)
    with pytest.raises(ValueError):
        Potential("riesz", 0)
    with pytest.raises(ValueError):
        Potential("gauss")
    assert LOG == Potential.log()
    assert R1 == Potential.riesz(1)
    assert R2 == Potential.riesz(2)


# ---------------------------------------------------------- pair kernels


def test_pair_values_at_unit_distance():
    one = big(1)
    assert pair_potential(one, LOG).is_zero()
    assert big_gap(pair_potential(one, R1), one) == 0
    assert big_gap(pair_potential(one, R2), one) == 0


def test_pair_values_at_antipodes():
    two = big(2)
    assert big_gap(pair_potential(two, LOG), -elem("log", two)) == 0
    assert big_gap(pair_potential(two, R1), big("0.5")) == 0
    assert big_gap(pair_potential(two, R2), big("0.25")) == 0
    assert big_gap(pair_potential(two, Potential.riesz(3)), big("0.125")) == 0


def test_pair_value_dyadic_inverse_square():
    d = elem("sqrt", big(2))
    assert big_gap(pair_potential(d, R2), big("0.5")) < big("1e-39")


def test_pair_potential_needs_positive_distance():
    for bad in [big(0), big(-1)]:
        for pot in POTS:
            with pytest.raises(DomainError, match="positive distance"):
                pair_potential(bad, pot)


# -------------------------------------------------------- closed energies


def test_antipodal_energies():
    P = antipodal_pair()
    assert big_gap(energy(P, LOG).value, -elem("log", big(2))) < big("1e-38")
    assert big_gap(energy(P, R1).value, big("0.5")) == 0
    assert big_gap(energy(P, R2).value, big("0.25")) == 0


def test_tetrahedron_energies():
    P = tetrahedron()
    want_r1 = 3 * elem("sqrt", big(6)) / 2
    want_log = elem("log", big(27) / 512)
    assert big_gap(energy(P, R1).value, want_r1) < big("1e-37")
    assert big_gap(energy(P, R2).value, big("2.25")) < big("1e-37")
    assert big_gap(energy(P, LOG).value, want_log) < big("1e-37")


def test_octahedron_energies():
    P = octahedron()
    want_r1 = big("1.5") + 6 * elem("sqrt", big(2))
    want_log = -elem("log", big(512))
    assert big_gap(energy(P, R1).value, want_r1) < big("1e-37")
    assert big_gap(energy(P, R2).value, big("6.75")) < big("1e-37")
    assert big_gap(energy(P, LOG).value, want_log) < big("1e-37")


def test_icosahedron_inverse_square_energy_is_integer():
    P = icosahedron()
    assert big_gap(energy(P, R2).value, big(39)) < big("1e-36")


def test_energy_value_fields():
    P = octahedron()
    ev = energy(P, R1)
    assert ev.n == 6
    assert ev.potential == R1
    assert "r1" in repr(ev) and "n=6" in repr(ev)


@given(st.integers(0, 10**6), st.integers(2, 6), st.integers(0, 3))
def test_energy_matches_pair_sum(seed, n, ipot):
    pot = POTS[ipot]
    P = random_set(seed, n)
    total = BigReal.zero(40)
    for i in range(n):
        for j in range(i + 1, n):
            total = total + pair_potential(
                pair_distance(P.points[i], P.points[j]), pot
            )
    assert big_gap(energy(P, pot).value, total) < big("1e-34")


def test_coincident_points_rejected():
    p = big(0)
    top = Point3(p, p, big(1))
    east = Point3(big(1), p, p)
    P = PointSet([top, east, top])
    for fn in (lambda: energy(P, R1), lambda: forces(P, R1)):
        with pytest.raises(CoincidentPoints, match="points 0 and 2 coincide"):
            fn()
    with pytest.raises(CoincidentPoints, match="points 0 and 2 coincide"):
        force(P, 0, R1)


# ----------------------------------------------------------------- forces


def ambient_energy(pts, pot, digits):
    total = BigReal.zero(digits)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            total = total + pair_potential(pair_distance(pts[i], pts[j]), pot)
    return total


def numeric_force(pts, i, pot, digits):
    """Central-difference ambient force, built from raw coordinates."""
    h = BigReal.exp10(-13, digits)
    out = []
    for axis in range(3):
        def shifted(delta):
            moved = list(pts)
            c = list((pts[i].x, pts[i].y, pts[i].z))
            c[axis] = c[axis] + delta
            moved[i] = Point3(*c)
            return moved

        up = ambient_energy(shifted(h), pot, digits)
        down = ambient_energy(shifted(-h), pot, digits)
        out.append(-(up - down) / (2 * h))
    return out


def test_forces_match_finite_differences():
    P = random_set(7, 5)
    pts = list(P.points)
    for pot in POTS:
        F = forces(P, pot)
        for i in (0, 3):
            fd = numeric_force(pts, i, pot, 40)
            for got, want in zip((F[i].x, F[i].y, F[i].z), fd):
                assert big_gap(got, want) < big("1e-20")


def test_single_point_force_matches_batch():
    P = random_set(11, 6)
    for pot in (LOG, R2):
        F = forces(P, pot)
        for i in range(6):
            single = force(P, i, pot)
            assert big_gap(single.x, F[i].x) < big("1e-38")
            assert big_gap(single.y, F[i].y) < big("1e-38")
            assert big_gap(single.z, F[i].z) < big("1e-38")


def test_forces_sum_to_zero():
    P = random_set(3, 7)
    F = forces(P, R1)
    total = Point3(big(0), big(0), big(0))
    for f in F:
        total = total + f
    assert as_float(total.norm()) < 1e-35


def test_repulsive_force_points_outward():
    P = antipodal_pair()
    F = forces(P, R1)
    assert F[0].z.sign() == 1
    assert F[1].z.sign() == -1


# -------------------------------------------------- tangential projection


def test_tangential_component_is_orthogonal():
    rng = Rng(5)
    for _ in range(10):
        x = random_point(rng)
        F = Point3(rng.next_uniform(40), rng.next_uniform(40), rng.next_uniform(40))
        T = tangential_component(x, F)
        assert as_float(abs(T.dot(x))) < 1e-35
        back = T + x.scaled(F.dot(x))
        assert as_float((back - F).norm()) < 1e-35


def test_tangential_component_kills_radial_vectors():
    x = Point3(big(0), big(0), big(1))
    T = tangential_component(x, x.scaled(big(5)))
    assert as_float(T.norm()) < 1e-38


# --------------------------------------------------------------- residual


def test_residual_zero_at_symmetric_critical_points():
    for P in (octahedron(), icosahedron()):
        for pot in (LOG, R1, R2):
            assert as_float(residual(P, pot)) < 1e-36


def test_residual_positive_away_from_critical_points():
    P = random_set(9, 5)
    assert residual(P, R1).sign() == 1


def test_residual_single_point_is_zero():
    P = PointSet([Point3(big(0), big(0), big(1))])
    r = residual(P, R1)
    assert r.is_zero()
