"""Unit-sphere point sets, distances, Gram matrices, isometry signatures.

Points are triples of BigReal.  A PointSet checks the on-sphere
invariant at construction; coincidence checks are left to the energy
routines, which are the places where coincidence actually hurts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OffSphere, SizeMismatch, ZeroVector
from .numerics import BigReal, Rng, elem, with_precision


@dataclass(frozen=True, eq=False)
class Point3:
    x: BigReal
    y: BigReal
    z: BigReal

    @property
    def precision(self) -> int:
        return min(self.x.precision, self.y.precision, self.z.precision)

    def dot(self, other: "Point3") -> BigReal:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Point3") -> "Point3":
        return Point3(self.y * other.z - self.z * other.y,
                      self.z * other.x - self.x * other.z,
                      self.x * other.y - self.y * other.x)

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, c) -> "Point3":
        return Point3(self.x * c, self.y * c, self.z * c)

    def norm2(self) -> BigReal:
        return self.dot(self)

    def norm(self) -> BigReal:
        return elem("sqrt", self.norm2())

    def to_floats(self) -> tuple[float, float, float]:
        return (self.x.to_float(), self.y.to_float(), self.z.to_float())

    def __repr__(self):
        fx, fy, fz = self.to_floats()
        return f"Point3({fx:.6g}, {fy:.6g}, {fz:.6g} @ {self.precision})"


def point_from_floats(v, digits: int) -> Point3:
    return Point3(BigReal(v[0], digits), BigReal(v[1], digits), BigReal(v[2], digits))


def normalize(v: Point3) -> Point3:
    """Scale v onto the unit sphere; direction is preserved."""
    p = v.precision
    n2 = v.norm2()
    # reject |v| <= 10^(-p/2), i.e. |v|^2 <= 10^(-p)
    if not n2 > BigReal.exp10(-p, p):
        raise ZeroVector("cannot normalize a vector of near-zero length")
    inv = 1 / elem("sqrt", n2)
    return Point3(v.x * inv, v.y * inv, v.z * inv)


def pair_distance(p: Point3, q: Point3) -> BigReal:
    return (p - q).norm()


class PointSet:
    """An ordered list of points on the unit sphere."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = tuple(points)
        if not pts:
            raise SizeMismatch("a point set needs at least one point")
        for i, pt in enumerate(pts):
            p = pt.precision
            err = abs(pt.norm2() - 1)
            if not err < BigReal.exp10(2 - p, p):
                raise OffSphere(f"point {i} has |x|^2 - 1 = {err.to_float():.3g}", index=i)
        self.points = pts

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def precision(self) -> int:
        return min(pt.precision for pt in self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i) -> Point3:
        return self.points[i]

    def __len__(self) -> int:
        return len(self.points)

    def with_precision(self, digits: int) -> "PointSet":
        return PointSet(Point3(with_precision(pt.x, digits),
                               with_precision(pt.y, digits),
                               with_precision(pt.z, digits))
                        for pt in self.points)

    def __repr__(self):
        return f"PointSet(n={self.n} @ {self.precision})"


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: tuple  # n x n tuple of tuples of BigReal

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class GramSignature:
    """Histogram of equal-value classes among the n^2 Gram entries:
    [class_size, number_of_classes_of_that_size], ascending by size."""

    groups: tuple  # of (class_size, multiplicity)

    def as_lists(self) -> list:
        return [list(g) for g in self.groups]

    def __repr__(self):
        return f"GramSignature({self.as_lists()})"


def gram_matrix(P: PointSet) -> GramMatrix:
    n = P.n
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            d = P[i].dot(P[j])
            rows[i][j] = d
            rows[j][i] = d
    return GramMatrix(tuple(tuple(r) for r in rows))


def default_signature_tol(precision: int) -> BigReal:
    # far above refinement noise, far below geometric feature separation
    return BigReal.exp10(-(precision // 2), precision)


def _cluster_sizes(values, tol):
    """Sizes of equal-within-tol classes of an iterable of BigReal."""
    ordered = sorted(values)
    sizes = []
    count = 0
    prev = None
    for v in ordered:
        if prev is not None and v - prev > tol:
            sizes.append(count)
            count = 0
        count += 1
        prev = v
    if count:
        sizes.append(count)
    return sizes


def gram_signature(G: GramMatrix, tol: BigReal) -> GramSignature:
    sizes = _cluster_sizes([e for row in G.entries for e in row], tol)
    hist = {}
    for s in sizes:
        hist[s] = hist.get(s, 0) + 1
    return GramSignature(tuple(sorted(hist.items())))


def _row_profiles(G: GramMatrix):
    return [sorted(row) for row in G.entries]


def _profiles_compatible(a, b, tol) -> bool:
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def _find_row_pairing(profiles_p, profiles_q, tol):
    """Perfect matching between rows with compatible sorted profiles,
    via simple augmenting paths."""
    n = len(profiles_p)
    compat = [[j for j in range(n) if _profiles_compatible(profiles_p[i], profiles_q[j], tol)]
              for i in range(n)]
    match_q = [None] * n

    def augment(i, seen):
        for j in compat[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_q[j] is None or augment(match_q[j], seen):
                match_q[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, set()):
            return None
    pairing = [None] * n
    for j, i in enumerate(match_q):
        pairing[i] = j
    return pairing


def _gram_permutation_exists(GP, GQ, tol, candidates) -> bool:
    """Backtracking search for a permutation such that the full Gram
    matrices agree entrywise within tol."""
    n = GP.n
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    assign = {}
    used = set()

    def extend(k):
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if j in used:
                continue
            if all(abs(GP.entries[i][i2] - GQ.entries[j][j2]) <= tol
                   for i2, j2 in assign.items()):
                assign[i] = j
                used.add(j)
                if extend(k + 1):
                    return True
                del assign[i]
                used.discard(j)
        return False

    return extend(0)


_EXHAUSTIVE_ISOMETRY_LIMIT = 12


def isometric(P: PointSet, Q: PointSet, tol: BigReal) -> bool:
    """Gram-based congruence test.

    Entry multisets and sorted row profiles must agree within tol and
    admit a consistent row pairing; for n <= 12 the pairing is confirmed
    against the full Gram matrices, so a True verdict there is an actual
    congruence.  For larger n this is a strong necessary condition
    (a signature match).
    """
    if P.n != Q.n:
        raise SizeMismatch(f"point sets of size {P.n} and {Q.n}")
    GP, GQ = gram_matrix(P), gram_matrix(Q)
    flat_p = sorted(e for row in GP.entries for e in row)
    flat_q = sorted(e for row in GQ.entries for e in row)
    if not all(abs(a - b) <= tol for a, b in zip(flat_p, flat_q)):
        return False
    prof_p, prof_q = _row_profiles(GP), _row_profiles(GQ)
    candidates = [[j for j in range(Q.n) if _profiles_compatible(prof_p[i], prof_q[j], tol)]
                  for i in range(P.n)]
    if any(not c for c in candidates):
        return False
    if _find_row_pairing(prof_p, prof_q, tol) is None:
        return False
    if P.n <= _EXHAUSTIVE_ISOMETRY_LIMIT:
        return _gram_permutation_exists(GP, GQ, tol, candidates)
    return True


def orthonormal_frame(x: Point3) -> tuple[Point3, Point3]:
    """Deterministic tangent frame at a unit vector x.

    Seeds Gram-Schmidt with the coordinate axis having the smallest
    |component| along x, then completes with t2 = x cross t1.
    """
    p = x.precision
    one = BigReal(1, p)
    zero = BigReal.zero(p)
    comps = [abs(x.x), abs(x.y), abs(x.z)]
    k = comps.index(min(comps))
    axis = [Point3(one, zero, zero), Point3(zero, one, zero), Point3(zero, zero, one)][k]
    t1 = normalize(axis - x.scaled(axis.dot(x)))
    t2 = x.cross(t1)
    return t1, t2


def rotate_to_axis(P: PointSet, normal: Point3) -> PointSet:
    """Rotate P so that `normal` lands on (0, 0, 1)."""
    t1, t2 = orthonormal_frame(normal)
    return PointSet(Point3(t1.dot(pt), t2.dot(pt), normal.dot(pt)) for pt in P)


def random_point(rng: Rng, digits: int = 40) -> Point3:
    """Approximately uniform point on the sphere: three symmetric draws,
    rejected outside the unit ball or near the origin, then normalized."""
    lo = BigReal(1, digits) / 100
    while True:
        v = Point3(rng.next_uniform(digits), rng.next_uniform(digits), rng.next_uniform(digits))
        n2 = v.norm2()
        if lo <= n2 <= 1:
            return normalize(v)
