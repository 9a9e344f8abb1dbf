"""Shared builders and comparison helpers for the suite."""

from __future__ import annotations

from hypothesis import HealthCheck, settings

from spherecodes import BigReal, Point3, PointSet, elem, normalize

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def big(value, digits: int = 40) -> BigReal:
    return BigReal(value, digits)


def as_float(value) -> float:
    return value.to_float() if isinstance(value, BigReal) else float(value)


def assert_close(got, want, tol, label: str = "") -> None:
    """|got - want| < tol, reported in floats for readability."""
    gap = abs(as_float(got) - as_float(want))
    assert gap < as_float(tol), (
        f"{label or 'value'}: |{as_float(got)!r} - {as_float(want)!r}| "
        f"= {gap:.3g}, tolerance {as_float(tol):.3g}")


def big_gap(x: BigReal, y) -> BigReal:
    """|x - y| at x's precision, for tolerances floats cannot express."""
    if not isinstance(y, BigReal):
        y = BigReal(y, x.precision)
    return abs(x - y)


def octahedron(digits: int = 40) -> PointSet:
    one = BigReal(1, digits)
    zero = BigReal(0, digits)
    return PointSet([
        Point3(one, zero, zero), Point3(-one, zero, zero),
        Point3(zero, one, zero), Point3(zero, -one, zero),
        Point3(zero, zero, one), Point3(zero, zero, -one),
    ])


def tetrahedron(digits: int = 40) -> PointSet:
    """Alternating cube corners, scaled onto the sphere."""
    c = 1 / elem("sqrt", BigReal(3, digits))
    return PointSet([
        Point3(c, c, c), Point3(c, -c, -c),
        Point3(-c, c, -c), Point3(-c, -c, c),
    ])


def cube(digits: int = 40) -> PointSet:
    c = 1 / elem("sqrt", BigReal(3, digits))
    return PointSet([Point3(sx * c, sy * c, sz * c)
                     for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)])


def icosahedron(digits: int = 40) -> PointSet:
    """Cyclic permutations of (0, ±1, ±g)/|(0, 1, g)| with g the golden
    ratio."""
    one = BigReal(1, digits)
    zero = BigReal(0, digits)
    g = (1 + elem("sqrt", BigReal(5, digits))) / 2
    pts = []
    for sa in (1, -1):
        for sb in (1, -1):
            a, b = sa * one, sb * g
            pts.append(normalize(Point3(zero, a, b)))
            pts.append(normalize(Point3(a, b, zero)))
            pts.append(normalize(Point3(b, zero, a)))
    return PointSet(pts)


def antipodal_pair(digits: int = 40) -> PointSet:
    one = BigReal(1, digits)
    zero = BigReal(0, digits)
    return PointSet([Point3(zero, zero, one), Point3(zero, zero, -one)])


def equatorial_square(digits: int = 40) -> PointSet:
    one = BigReal(1, digits)
    zero = BigReal(0, digits)
    return PointSet([
        Point3(one, zero, zero), Point3(zero, one, zero),
        Point3(-one, zero, zero), Point3(zero, -one, zero),
    ])
