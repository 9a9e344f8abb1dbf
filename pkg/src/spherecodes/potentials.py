"""Pair potentials, total energies, forces, and tangential gradients.

Three kernels: the logarithmic potential -log d and the inverse-power
family d^-s for integer s >= 1 (s=1 Coulomb, s=2 inverse square).
Energies sum over unordered pairs i < j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoincidentPoints, DomainError
from .numerics import BigReal, elem
from .geometry import Point3, PointSet


@dataclass(frozen=True)
class Potential:
    kind: str  # "log" or "riesz"
    s: int = 0

    def __post_init__(self):
        if self.kind == "log":
            if self.s != 0:
                raise ValueError("the logarithmic potential takes no exponent")
        elif self.kind == "riesz":
            if self.s < 1:
                raise ValueError("riesz exponent must be a positive integer")
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")

    @classmethod
    def log(cls) -> "Potential":
        return cls("log")

    @classmethod
    def riesz(cls, s: int) -> "Potential":
        return cls("riesz", int(s))

    @classmethod
    def from_token(cls, token: str) -> "Potential":
        token = token.strip().lower()
        if token == "log":
            return cls.log()
        if token == "r1":
            return cls.riesz(1)
        if token == "r2":
            return cls.riesz(2)
        if token.startswith("rs:"):
            try:
                return cls.riesz(int(token[3:]))
            except ValueError as exc:
                raise ValueError(f"bad potential token {token!r}") from exc
        raise ValueError(f"bad potential token {token!r}")

    @property
    def token(self) -> str:
        if self.kind == "log":
            return "log"
        if self.s in (1, 2):
            return f"r{self.s}"
        return f"rs:{self.s}"

    def __str__(self):
        return self.token


LOG = Potential.log()
R1 = Potential.riesz(1)
R2 = Potential.riesz(2)


@dataclass(frozen=True, eq=False)
class EnergyValue:
    value: BigReal
    potential: Potential
    n: int

    def __repr__(self):
        return f"EnergyValue({self.value.to_float():.12g}, {self.potential}, n={self.n})"


def pair_potential(d: BigReal, pot: Potential) -> BigReal:
    """Kernel value at separation d > 0."""
    if not d > 0:
        raise DomainError("pair potential needs a positive distance")
    if pot.kind == "log":
        return -elem("log", d)
    return d ** (-pot.s)


def _kernel_from_d2(d2: BigReal, pot: Potential) -> BigReal:
    # evaluate the kernel from the squared distance, avoiding the square
    # root for the log and even-s cases
    if pot.kind == "log":
        return elem("log", d2) / (-2)
    s = pot.s
    if s % 2 == 0:
        return d2 ** (-(s // 2))
    return elem("sqrt", d2) ** (-s)


def _force_coeff_from_d2(d2: BigReal, pot: Potential) -> BigReal:
    # the pair force on x_i is coeff * (x_i - x_j); log: 1/d^2,
    # riesz-s: s/d^(s+2)
    if pot.kind == "log":
        return 1 / d2
    s = pot.s
    if s % 2 == 0:
        return s * d2 ** (-(s + 2) // 2)
    return s * (elem("sqrt", d2) ** (-(s + 2)))


def _coincidence_floor(precision: int) -> BigReal:
    # pairs closer than 10^(-p/2) are treated as coincident
    return BigReal.exp10(-precision, precision)


def energy(P: PointSet, pot: Potential) -> EnergyValue:
    """Total energy over unordered pairs, summed in a fixed order."""
    p = P.precision
    floor = _coincidence_floor(p)
    total = BigReal.zero(p)
    pts = P.points
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            d2 = (pts[i] - pts[j]).norm2()
            if not d2 > floor:
                raise CoincidentPoints(f"points {i} and {j} coincide")
            total = total + _kernel_from_d2(d2, pot)
    return EnergyValue(total, pot, n)


def forces(P: PointSet, pot: Potential) -> list[Point3]:
    """Ambient force vectors -dE/dx_i for every point, one shared pass
    over the pairs."""
    p = P.precision
    floor = _coincidence_floor(p)
    zero = BigReal.zero(p)
    pts = P.points
    n = len(pts)
    out = [Point3(zero, zero, zero) for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            delta = pts[i] - pts[j]
            d2 = delta.norm2()
            if not d2 > floor:
                raise CoincidentPoints(f"points {i} and {j} coincide")
            contrib = delta.scaled(_force_coeff_from_d2(d2, pot))
            out[i] = out[i] + contrib
            out[j] = out[j] - contrib
    return out


def force(P: PointSet, i: int, pot: Potential) -> Point3:
    """Ambient force on point i."""
    p = P.precision
    floor = _coincidence_floor(p)
    zero = BigReal.zero(p)
    pts = P.points
    xi = pts[i]
    acc = Point3(zero, zero, zero)
    for j in range(len(pts)):
        if j == i:
            continue
        delta = xi - pts[j]
        d2 = delta.norm2()
        if not d2 > floor:
            raise CoincidentPoints(f"points {i} and {j} coincide")
        acc = acc + delta.scaled(_force_coeff_from_d2(d2, pot))
    return acc


def tangential_component(x: Point3, F: Point3) -> Point3:
    """Project F onto the tangent plane at x: T = F - (F.x) x."""
    return F - x.scaled(F.dot(x))


def residual(P: PointSet, pot: Potential) -> BigReal:
    """max_i |tangential force at point i|; zero for a single point."""
    p = P.precision
    if P.n == 1:
        return BigReal.zero(p)
    best = None
    for pt, F in zip(P.points, forces(P, pot)):
        t = tangential_component(pt, F).norm()
        if best is None or t > best:
            best = t
    return best
