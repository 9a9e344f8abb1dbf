"""Tangent-space Hessians and minimum certification.

The energy restricted to the sphere is expanded to second order through
the chart x(u) = normalize(x + u1 t1 + u2 t2) over a deterministic
orthonormal frame (t1, t2) at every point, giving a 2n-by-2n symmetric
matrix.  Eigenvalues come from cyclic Jacobi rotations.  A critical
configuration certifies as a minimum when the spectrum is nonnegative
up to a tolerance and the count of near-zero eigenvalues matches what
global rotations force: three for a generic set, two when every point
lies on a single axis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoincidentPoints, NonSymmetric, NoProgress, NotCritical, SizeMismatch
from .numerics import BigReal, elem
from .geometry import PointSet, orthonormal_frame
from .potentials import Potential, _coincidence_floor, _force_coeff_from_d2, residual

MINIMUM = "minimum"
SADDLE = "saddle"
DEGENERATE = "degenerate"

_JACOBI_SWEEP_LIMIT = 100


@dataclass(frozen=True, eq=False)
class TangentBasis:
    """One orthonormal tangent pair (t1, t2) per point."""

    frames: tuple  # of (Point3, Point3)

    @property
    def n(self) -> int:
        return len(self.frames)

    def __getitem__(self, i):
        return self.frames[i]


@dataclass(frozen=True, eq=False)
class HessianReport:
    eigenvalues: tuple  # BigReal, sorted ascending
    zero_count: int
    verdict: str  # "minimum", "saddle", or "degenerate"

    def __repr__(self):
        if not self.eigenvalues:
            return f"HessianReport({self.verdict}, empty spectrum)"
        return (f"HessianReport({self.verdict}, zeros={self.zero_count}, "
                f"range=[{self.eigenvalues[0].to_float():.3g}, "
                f"{self.eigenvalues[-1].to_float():.3g}])")


def tangent_basis(P: PointSet) -> TangentBasis:
    """Deterministic orthonormal tangent frame at every point."""
    return TangentBasis(tuple(orthonormal_frame(pt) for pt in P.points))


def hessian(P: PointSet, pot: Potential) -> list:
    """Second derivative matrix of the energy in tangent coordinates.

    Row and column 2i+a differentiate along frame vector a of point i.
    Each pair contributes rank-one and isotropic terms from the kernel
    derivatives, and the chart x(u) = normalize(x + u1 t1 + u2 t2) adds
    a diagonal correction equal to the radial gradient component.
    """
    p = P.precision
    floor = _coincidence_floor(p)
    zero = BigReal.zero(p)
    pts = P.points
    n = len(pts)
    frames = tangent_basis(P).frames
    half = BigReal(1, p) / 2
    q = 2 if pot.kind == "log" else pot.s + 2
    H = [[zero for _ in range(2 * n)] for _ in range(2 * n)]
    for i in range(n):
        for j in range(i + 1, n):
            delta = pts[i] - pts[j]
            d2 = delta.norm2()
            if not d2 > floor:
                raise CoincidentPoints(f"points {i} and {j} coincide")
            coeff = _force_coeff_from_d2(d2, pot)
            rank1 = coeff * q / d2
            radial = coeff * d2 * half
            ti = frames[i]
            tj = frames[j]
            rti = (delta.dot(ti[0]), delta.dot(ti[1]))
            rtj = (delta.dot(tj[0]), delta.dot(tj[1]))
            for a in range(2):
                for b in range(2):
                    cross = coeff * ti[a].dot(tj[b]) - rank1 * rti[a] * rtj[b]
                    H[2 * i + a][2 * j + b] = cross
                    H[2 * j + b][2 * i + a] = cross
                    diag_i = rank1 * rti[a] * rti[b]
                    diag_j = rank1 * rtj[a] * rtj[b]
                    if a == b:
                        diag_i = diag_i - coeff + radial
                        diag_j = diag_j - coeff + radial
                    H[2 * i + a][2 * i + b] = H[2 * i + a][2 * i + b] + diag_i
                    H[2 * j + a][2 * j + b] = H[2 * j + a][2 * j + b] + diag_j
    return H


def _offdiag_norm(a, m: int, p: int) -> BigReal:
    total = BigReal.zero(p)
    for i in range(m):
        for j in range(i + 1, m):
            total = total + a[i][j] * a[i][j]
    return elem("sqrt", total * 2)


def eigenvalues_sym(M, p: int) -> list:
    """Eigenvalues of a symmetric matrix, sorted ascending.

    Cyclic Jacobi rotations at precision p run until the off-diagonal
    Frobenius norm drops below 10^(10-p).  Input rows may hold BigReal
    or plain integers; asymmetry beyond 10^(5-p) times the largest
    entry is rejected.
    """
    m = len(M)
    for row in M:
        if len(row) != m:
            raise SizeMismatch(f"matrix has {m} rows but a row of length {len(row)}")
    if m == 0:
        return []
    a = [[BigReal(M[i][j], p) for j in range(m)] for i in range(m)]
    if m == 1:
        return [a[0][0]]
    one = BigReal(1, p)
    biggest = one
    for row in a:
        for entry in row:
            if abs(entry) > biggest:
                biggest = abs(entry)
    sym_tol = BigReal.exp10(5 - p, p) * biggest
    half = one / 2
    for i in range(m):
        for j in range(i + 1, m):
            if abs(a[i][j] - a[j][i]) > sym_tol:
                raise NonSymmetric(f"entries ({i},{j}) and ({j},{i}) differ "
                                   f"by more than {sym_tol.to_float():.3g}")
            v = (a[i][j] + a[j][i]) * half
            a[i][j] = v
            a[j][i] = v
    zero = BigReal.zero(p)
    target = BigReal.exp10(10 - p, p)
    rotate_floor = target / m
    for _ in range(_JACOBI_SWEEP_LIMIT):
        if not _offdiag_norm(a, m, p) > target:
            return sorted(a[k][k] for k in range(m))
        for i in range(m - 1):
            for j in range(i + 1, m):
                apq = a[i][j]
                if not abs(apq) > rotate_floor:
                    continue
                theta = (a[j][j] - a[i][i]) / (apq * 2)
                t = 1 / (abs(theta) + elem("sqrt", theta * theta + 1))
                if theta < 0:
                    t = -t
                c = 1 / elem("sqrt", t * t + 1)
                s = t * c
                a[i][i] = a[i][i] - t * apq
                a[j][j] = a[j][j] + t * apq
                a[i][j] = zero
                a[j][i] = zero
                for k in range(m):
                    if k == i or k == j:
                        continue
                    aki = a[k][i]
                    akj = a[k][j]
                    a[k][i] = c * aki - s * akj
                    a[i][k] = a[k][i]
                    a[k][j] = s * aki + c * akj
                    a[j][k] = a[k][j]
    raise NoProgress("jacobi sweeps did not reach the off-diagonal target")


def _collinear(P: PointSet) -> bool:
    # every point on the line through the first point and the origin
    p = P.precision
    tol = BigReal.exp10(2 - p, p)
    one = BigReal(1, p)
    first = P[0]
    return all(abs(abs(pt.dot(first)) - one) < tol for pt in P.points)


def _expected_zero_modes(P: PointSet) -> int:
    # global rotations force 3 zero eigenvalues for a generic set and 2
    # when all points share one axis (rotation about it acts trivially)
    return 2 if _collinear(P) else 3


def verify_minimum(P: PointSet, pot: Potential, zero_tol=None) -> HessianReport:
    """Certify a critical configuration by its tangent Hessian spectrum.

    The tangential force residual must already be below zero_tol,
    which defaults to 10^(-p/2); otherwise NotCritical is raised.  The
    verdict is "minimum" when every eigenvalue clears -zero_tol and the
    near-zero count equals the rotational expectation, "saddle" when a
    clearly negative eigenvalue exists, and "degenerate" otherwise
    (sets of fewer than two points are degenerate by convention).
    """
    p = P.precision
    if zero_tol is None:
        zero_tol = BigReal.exp10(-(p // 2), p)
    else:
        zero_tol = BigReal(zero_tol, p)
    if P.n > 1:
        res = residual(P, pot)
        if not res < zero_tol:
            raise NotCritical(f"tangential residual {res.to_float():.3g} "
                              f"is not below {zero_tol.to_float():.3g}")
    eig = tuple(eigenvalues_sym(hessian(P, pot), p))
    zeros = sum(1 for v in eig if abs(v) < zero_tol)
    if P.n <= 1:
        return HessianReport(eig, zeros, DEGENERATE)
    if any(v < -zero_tol for v in eig):
        verdict = SADDLE
    elif zeros == _expected_zero_modes(P):
        verdict = MINIMUM
    else:
        verdict = DEGENERATE
    return HessianReport(eig, zeros, verdict)
