"""Structural pattern detection: coplanar families, regular polygons,
and a combined symmetry report.

Candidate planes come from all point triples and are kept when at
least four (for plane families) or three (for polygon search) points
lie on them.  Points sit on the unit sphere, so a coplanar family is
automatically cocircular about the plane's foot point, and polygon
detection reduces to equal spacing of angles around that circle.
Detection runs in float arithmetic: the default tolerance of 1e-12
sits far above float noise and far below the feature separation of
the configurations of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoStructure
from .numerics import BigReal
from .geometry import (
    GramSignature,
    Point3,
    PointSet,
    gram_matrix,
    gram_signature,
    point_from_floats,
)

DEFAULT_TOL = 1e-12

# normals from well-separated unit points agree far tighter than this
_DIRECTION_TOL = 1e-9


@dataclass(frozen=True)
class SymmetryReport:
    """Histograms of detected structure: [size, count] rows for planes,
    [k, count] rows for polygons, and the Gram equal-value signature."""

    planes: tuple  # of (family size, number of families)
    polygons: tuple  # of (k, number of regular k-gons)
    gram_groups: GramSignature

    def __repr__(self):
        return (f"SymmetryReport(planes={[list(g) for g in self.planes]}, "
                f"polygons={[list(g) for g in self.polygons]}, "
                f"gram={self.gram_groups.as_lists()})")


def _tol_as_float(tol) -> float:
    if tol is None:
        return DEFAULT_TOL
    value = float(tol)
    if not value > 0:
        raise ValueError("tolerance must be positive")
    return value


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _scale(a, c):
    return (a[0] * c, a[1] * c, a[2] * c)


def _lex_positive(v):
    # flip the sign so the first clearly nonzero component is positive
    for c in v:
        if abs(c) > _DIRECTION_TOL:
            return v if c > 0 else _scale(v, -1.0)
    return v


def _plane_families(pts, tol, least):
    """Maximal families of at least `least` points on a common plane.

    Returns (normal, offset, members) triples with the normal made
    lexicographically positive, deduplicated by member set and sorted
    by member indices.
    """
    n = len(pts)
    found = {}
    for i in range(n):
        for j in range(i + 1, n):
            edge_ij = _sub(pts[j], pts[i])
            for k in range(j + 1, n):
                normal = _cross(edge_ij, _sub(pts[k], pts[i]))
                length = math.sqrt(_dot(normal, normal))
                if length < 1e-9:
                    continue
                normal = _lex_positive(_scale(normal, 1.0 / length))
                offset = _dot(normal, pts[i])
                members = tuple(m for m in range(n)
                                if abs(_dot(normal, pts[m]) - offset) <= tol)
                if len(members) >= least and members not in found:
                    found[members] = (normal, offset)
    return [(normal, offset, members)
            for members, (normal, offset) in sorted(found.items())]


def coplanar_families(P: PointSet, tol=None) -> list:
    """All maximal families of four or more coplanar points.

    Returns (normal, offset, member indices) triples; the normal is a
    unit Point3 and members lie within tol of the plane x.normal =
    offset.
    """
    tolf = _tol_as_float(tol)
    pts = [pt.to_floats() for pt in P.points]
    return [(point_from_floats(normal, 17), BigReal(f"{offset:.17g}", 17), members)
            for normal, offset, members in _plane_families(pts, tolf, 4)]


def _circle_frame(normal):
    comps = [abs(normal[0]), abs(normal[1]), abs(normal[2])]
    k = comps.index(min(comps))
    axis = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)][k]
    u = _sub(axis, _scale(normal, _dot(axis, normal)))
    u = _scale(u, 1.0 / math.sqrt(_dot(u, u)))
    return u, _cross(normal, u)


def _nearest_angle(angles, t, ang_tol):
    best = None
    gap = ang_tol
    for idx, a in enumerate(angles):
        d = abs(math.remainder(a - t, math.tau))
        if d <= gap:
            best = idx
            gap = d
    return best


def _regular_subsets(angles, ang_tol):
    """Index subsets of `angles` that are equally spaced around the
    full circle, as (k, index tuple) pairs."""
    cnt = len(angles)
    out = set()
    for k in range(3, cnt + 1):
        spacing = math.tau / k
        for start in range(cnt):
            chosen = [start]
            for step in range(1, k):
                hit = _nearest_angle(angles, angles[start] + spacing * step, ang_tol)
                if hit is None:
                    break
                chosen.append(hit)
            if len(chosen) == k and len(set(chosen)) == k:
                out.add((k, tuple(sorted(chosen))))
    return sorted(out)


def regular_polygons(P: PointSet, tol=None) -> list:
    """All regular k-gons (k >= 3) embedded in the configuration.

    A polygon is a coplanar subset whose angular positions around the
    plane's circle of intersection with the sphere are equally spaced
    within tol.  Returns (k, member indices, unit normal Point3)
    triples.
    """
    tolf = _tol_as_float(tol)
    pts = [pt.to_floats() for pt in P.points]
    found = {}
    for normal, offset, members in _plane_families(pts, tolf, 3):
        radius2 = 1.0 - offset * offset
        if radius2 <= tolf:
            continue
        radius = math.sqrt(radius2)
        center = _scale(normal, offset)
        u, v = _circle_frame(normal)
        angles = []
        for m in members:
            arm = _sub(pts[m], center)
            angles.append(math.atan2(_dot(arm, v), _dot(arm, u)))
        for k, chosen in _regular_subsets(angles, tolf / radius):
            poly = tuple(sorted(members[c] for c in chosen))
            if poly not in found:
                found[poly] = (k, normal)
    return sorted((k, poly, point_from_floats(normal, 17))
                  for poly, (k, normal) in found.items())


def _histogram(sizes) -> tuple:
    hist = {}
    for s in sizes:
        hist[s] = hist.get(s, 0) + 1
    return tuple(sorted(hist.items()))


def symmetry_report(P: PointSet, tol=None) -> SymmetryReport:
    """Plane and polygon histograms plus the Gram signature, all at one
    tolerance."""
    tolf = _tol_as_float(tol)
    planes = _histogram(len(members) for _, _, members in coplanar_families(P, tolf))
    polygons = _histogram(k for k, _, _ in regular_polygons(P, tolf))
    gram_tol = BigReal(f"{tolf:.17g}", 17)
    gram = gram_signature(gram_matrix(P), gram_tol)
    return SymmetryReport(planes, polygons, gram)


def _group_directions(planes, tolf):
    """Cluster (normal, offset, order) triples by direction.

    Returns (order, plane count, direction) triples where order is the
    largest polygon order seen in the group and plane count the number
    of distinct parallel planes.
    """
    groups = []
    for normal, offset, order in planes:
        for g in groups:
            delta = _sub(g[0], normal)
            if _dot(delta, delta) <= _DIRECTION_TOL ** 2:
                if all(abs(offset - o) > tolf for o in g[1]):
                    g[1].append(offset)
                if order > g[2]:
                    g[2] = order
                break
        else:
            groups.append([normal, [offset], order])
    return [(g[2], len(g[1]), g[0]) for g in groups]


def suggest_axis(P: PointSet, tol=None) -> Point3:
    """Axis of the strongest detected rotational structure.

    Polygon planes are grouped by direction; the winning direction
    carries the largest polygon order, then the most parallel planes,
    then the lexicographically smallest normal.  Without any polygon
    the same ranking runs over plane families alone.  NoStructure is
    raised when neither detector finds anything.
    """
    tolf = _tol_as_float(tol)
    pts = [pt.to_floats() for pt in P.points]
    candidates = []
    for normal, offset, members in _plane_families(pts, tolf, 3):
        radius2 = 1.0 - offset * offset
        if radius2 <= tolf:
            continue
        radius = math.sqrt(radius2)
        center = _scale(normal, offset)
        u, v = _circle_frame(normal)
        angles = []
        for m in members:
            arm = _sub(pts[m], center)
            angles.append(math.atan2(_dot(arm, v), _dot(arm, u)))
        regular = _regular_subsets(angles, tolf / radius)
        if regular:
            candidates.append((normal, offset, max(k for k, _ in regular)))
    if not candidates:
        candidates = [(normal, offset, 0)
                      for normal, offset, _ in _plane_families(pts, tolf, 4)]
    if not candidates:
        raise NoStructure(f"no coplanar families or regular polygons "
                          f"at tolerance {tolf:g}")
    ranked = sorted(_group_directions(candidates, tolf),
                    key=lambda item: (-item[0], -item[1], item[2]))
    return point_from_floats(ranked[0][2], 17)
