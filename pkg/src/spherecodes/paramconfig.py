"""Symbolic configurations and their Newton refinement.

A ConfigSpec is a list of generators (poles, regular polygon rings at a
height, rotated rings with a prescribed first-vertex x, free points)
whose coordinates are expressions in a handful of scalar parameters.
The energy of the generated set, its gradient and its Jacobian with
respect to those parameters are all evaluated by running the same
expression tree over second-order forward-mode jets, and Newton's
method on the gradient then refines a rough seed to any requested
precision with a doubling ladder.

Ring phases are measured in turns (0.25 = a quarter turn), which keeps
the customary 45/90/36-degree offsets exactly representable as decimal
constants at every precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CoincidentPoints,
    Diverged,
    DomainViolation,
    SingularJacobian,
    SizeMismatch,
)
from . import numerics
from .numerics import BigReal, with_precision
from .geometry import Point3, PointSet
from .potentials import Potential, energy


# -- parameter references and generators --------------------------------------

@dataclass(frozen=True)
class Const:
    """A decimal constant, kept as text so it can be re-evaluated
    exactly at any working precision."""

    text: str

    def __init__(self, value):
        if isinstance(value, BigReal):
            text = value.to_decimal()
        elif isinstance(value, int):
            text = str(value)
        elif isinstance(value, str):
            text = value.strip()
        else:
            raise TypeError("Const takes a decimal string, an int, or a BigReal")
        object.__setattr__(self, "text", text)

    def value(self, digits: int) -> BigReal:
        return BigReal(self.text, digits)


@dataclass(frozen=True)
class Var:
    index: int
    negate: bool = False


ZERO = Const("0")


@dataclass(frozen=True)
class Pole:
    z_sign: int  # +1 or -1


@dataclass(frozen=True)
class Ring:
    """Regular k-gon at height z, rotated by `phase` turns."""

    k: int
    z: object  # ParamRef
    phase: object = ZERO

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("a ring needs at least 2 vertices")


@dataclass(frozen=True)
class OffsetRing:
    """Regular k-gon at height z whose first vertex has the prescribed
    x and y = +sqrt(1 - z^2 - x^2); the rest follow by in-plane
    rotation."""

    k: int
    z: object
    x_offset: object

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("a ring needs at least 2 vertices")


@dataclass(frozen=True)
class FreePoint:
    """A single point (x, +/-sqrt(1 - z^2 - x^2), z)."""

    z: object
    x: object
    y_sign: int = 1


def _generator_size(gen) -> int:
    if isinstance(gen, (Ring, OffsetRing)):
        return gen.k
    return 1


def _generator_refs(gen):
    if isinstance(gen, Pole):
        return ()
    if isinstance(gen, Ring):
        return (gen.z, gen.phase)
    if isinstance(gen, OffsetRing):
        return (gen.z, gen.x_offset)
    if isinstance(gen, FreePoint):
        return (gen.z, gen.x)
    raise TypeError(f"unknown generator {gen!r}")


@dataclass(frozen=True)
class ConfigSpec:
    generators: tuple
    arity: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        seen = set()
        for gen in self.generators:
            for ref in _generator_refs(gen):
                if isinstance(ref, Var):
                    if not 0 <= ref.index < self.arity:
                        raise ValueError(f"variable index {ref.index} outside arity {self.arity}")
                    seen.add(ref.index)
                elif not isinstance(ref, Const):
                    raise TypeError(f"bad parameter reference {ref!r}")
        missing = set(range(self.arity)) - seen
        if missing:
            raise ValueError(f"variables {sorted(missing)} are never referenced")

    @property
    def point_count(self) -> int:
        return sum(_generator_size(g) for g in self.generators)


@dataclass(frozen=True)
class ParamVector:
    names: tuple
    values: tuple  # of BigReal

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.names) != len(self.values):
            raise SizeMismatch("parameter names and values differ in length")

    @property
    def arity(self) -> int:
        return len(self.values)

    @property
    def precision(self) -> int:
        if not self.values:
            return numerics.MIN_DIGITS
        return min(v.precision for v in self.values)

    def with_precision(self, digits: int) -> "ParamVector":
        return ParamVector(self.names, tuple(with_precision(v, digits) for v in self.values))


# -- second-order forward-mode jets -------------------------------------------
#
# A jet carries (value, gradient, Hessian) with respect to the spec's
# free parameters.  grad/hess are None when that order isn't tracked,
# so plain configuration building pays nothing for the machinery.

class _Jet:
    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad=None, hess=None):
        self.val = val
        self.grad = grad
        self.hess = hess

    def __add__(self, other):
        if not isinstance(other, _Jet):
            return _Jet(self.val + other, self.grad, self.hess)
        g = h = None
        if self.grad is not None:
            g = [a + b for a, b in zip(self.grad, other.grad)]
            if self.hess is not None:
                h = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.hess, other.hess)]
        return _Jet(self.val + other.val, g, h)

    def __sub__(self, other):
        if not isinstance(other, _Jet):
            return _Jet(self.val - other, self.grad, self.hess)
        g = h = None
        if self.grad is not None:
            g = [a - b for a, b in zip(self.grad, other.grad)]
            if self.hess is not None:
                h = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.hess, other.hess)]
        return _Jet(self.val - other.val, g, h)

    def __neg__(self):
        g = h = None
        if self.grad is not None:
            g = [-a for a in self.grad]
            if self.hess is not None:
                h = [[-a for a in row] for row in self.hess]
        return _Jet(-self.val, g, h)

    def __mul__(self, other):
        if not isinstance(other, _Jet):
            return self.scaled(other)
        g = h = None
        if self.grad is not None:
            fa, fb = self.val, other.val
            ga, gb = self.grad, other.grad
            g = [fa * gb[u] + fb * ga[u] for u in range(len(ga))]
            if self.hess is not None:
                m = len(ga)
                h = [[fa * other.hess[u][v] + fb * self.hess[u][v]
                      + ga[u] * gb[v] + ga[v] * gb[u]
                      for v in range(m)] for u in range(m)]
        return _Jet(self.val * other.val, g, h)

    def scaled(self, c):
        g = h = None
        if self.grad is not None:
            g = [a * c for a in self.grad]
            if self.hess is not None:
                h = [[a * c for a in row] for row in self.hess]
        return _Jet(self.val * c, g, h)

    def chain(self, f0: BigReal, f1: BigReal, f2: BigReal | None):
        """Compose with a scalar function given phi(val), phi'(val) and,
        when second order is tracked, phi''(val)."""
        g = h = None
        if self.grad is not None:
            g = [f1 * a for a in self.grad]
            if self.hess is not None:
                ga = self.grad
                m = len(ga)
                h = [[f2 * (ga[u] * ga[v]) + f1 * self.hess[u][v]
                      for v in range(m)] for u in range(m)]
        return _Jet(f0, g, h)


class _JetSpace:
    """Factory for jets of a fixed arity, order, and working precision."""

    def __init__(self, arity: int, order: int, digits: int):
        self.arity = arity
        self.order = order
        self.digits = digits
        self._zero = BigReal.zero(digits)
        self._one = BigReal(1, digits)

    def const(self, value: BigReal) -> _Jet:
        g = h = None
        if self.order >= 1:
            g = [self._zero] * self.arity
            if self.order >= 2:
                h = [[self._zero] * self.arity for _ in range(self.arity)]
        return _Jet(value, g, h)

    def var(self, index: int, value: BigReal, negate: bool) -> _Jet:
        jet = self.const(-value if negate else value)
        if self.order >= 1:
            grad = list(jet.grad)
            grad[index] = -self._one if negate else self._one
            jet.grad = grad
        return jet

    def ref(self, ref, values) -> _Jet:
        if isinstance(ref, Const):
            return self.const(ref.value(self.digits))
        return self.var(ref.index, values[ref.index], ref.negate)

    def sqrt(self, jet: _Jet, context: str) -> _Jet:
        """Square root of a generator radicand; negative radicands (and,
        when derivatives are tracked, boundary zeros) are domain
        violations of the configuration."""
        sign = jet.val.sign()
        if sign < 0:
            raise DomainViolation(f"{context}: radicand is negative "
                                  f"({jet.val.to_float():.6g})")
        if sign == 0:
            if self.order >= 1:
                raise DomainViolation(f"{context}: radicand vanishes, the "
                                      "configuration sits on its domain boundary")
            return self.const(BigReal.zero(self.digits))
        root = numerics.sqrt(jet.val)
        f1 = f2 = None
        if self.order >= 1:
            f1 = 1 / (root * 2)
            if self.order >= 2:
                f2 = -f1 / (jet.val * 2)
        return jet.chain(root, f1, f2)

    def powi(self, jet: _Jet, k: int) -> _Jet:
        f0 = jet.val ** k
        f1 = f2 = None
        if self.order >= 1:
            f1 = (jet.val ** (k - 1)) * k
            if self.order >= 2:
                f2 = (jet.val ** (k - 2)) * (k * (k - 1))
        return jet.chain(f0, f1, f2)

    def log(self, jet: _Jet) -> _Jet:
        f0 = numerics.log(jet.val)
        f1 = f2 = None
        if self.order >= 1:
            f1 = 1 / jet.val
            if self.order >= 2:
                f2 = -(f1 * f1)
        return jet.chain(f0, f1, f2)

    def cos_sin_turns(self, jet: _Jet) -> tuple[_Jet, _Jet]:
        """cos and sin of (2 pi * jet), with jet measured in turns."""
        two_pi = numerics.pi(self.digits) * 2
        angle = jet.val * two_pi
        c, s = numerics.cos(angle), numerics.sin(angle)
        if self.order == 0:
            return self.const(c), self.const(s)
        cj = jet.chain(c, -s * two_pi,
                       -c * two_pi * two_pi if self.order >= 2 else None)
        sj = jet.chain(s, c * two_pi,
                       -s * two_pi * two_pi if self.order >= 2 else None)
        return cj, sj


def _cos_sin_const_turns(turns: BigReal, digits: int) -> tuple[BigReal, BigReal]:
    """cos/sin of a constant angle in turns, exact at quarter turns."""
    quarters = turns * 4
    k = int(quarters.to_float())
    if quarters == k:
        one = BigReal(1, digits)
        zero = BigReal.zero(digits)
        table = [(one, zero), (zero, one), (-one, zero), (zero, -one)]
        return table[k % 4]
    angle = turns * (numerics.pi(digits) * 2)
    return numerics.cos(angle), numerics.sin(angle)


def _generator_jets(spec: ConfigSpec, values, space: _JetSpace):
    """Coordinate jets (x, y, z) of every generated point, in order."""
    digits = space.digits
    one = space.const(BigReal(1, digits))
    zero_jet = space.const(BigReal.zero(digits))
    coords = []
    for pos, gen in enumerate(spec.generators):
        where = f"generator {pos} ({type(gen).__name__})"
        if isinstance(gen, Pole):
            z = space.const(BigReal(gen.z_sign, digits))
            coords.append((zero_jet, zero_jet, z))
        elif isinstance(gen, Ring):
            z = space.ref(gen.z, values)
            radius = space.sqrt(one - z * z, where)
            if isinstance(gen.phase, Const):
                base_c, base_s = None, None
                phase_val = gen.phase.value(digits)
            else:
                base_c, base_s = space.cos_sin_turns(space.ref(gen.phase, values))
            for j in range(gen.k):
                frac = BigReal(j, digits) / gen.k
                if base_c is None:
                    c, s = _cos_sin_const_turns(phase_val + frac, digits)
                    coords.append((radius.scaled(c), radius.scaled(s), z))
                else:
                    cf, sf = _cos_sin_const_turns(frac, digits)
                    # angle addition keeps the parameter-dependent part
                    # in a single cos/sin pair per ring
                    cj = base_c.scaled(cf) - base_s.scaled(sf)
                    sj = base_s.scaled(cf) + base_c.scaled(sf)
                    coords.append((radius * cj, radius * sj, z))
        elif isinstance(gen, OffsetRing):
            z = space.ref(gen.z, values)
            x0 = space.ref(gen.x_offset, values)
            y0 = space.sqrt(one - z * z - x0 * x0, where)
            for j in range(gen.k):
                c, s = _cos_sin_const_turns(BigReal(j, digits) / gen.k, digits)
                coords.append((x0.scaled(c) - y0.scaled(s),
                               x0.scaled(s) + y0.scaled(c), z))
        elif isinstance(gen, FreePoint):
            z = space.ref(gen.z, values)
            x = space.ref(gen.x, values)
            y = space.sqrt(one - z * z - x * x, where)
            if gen.y_sign < 0:
                y = -y
            coords.append((x, y, z))
        else:
            raise TypeError(f"unknown generator {gen!r}")
    return coords


def _check_params(spec: ConfigSpec, params: ParamVector):
    if params.arity != spec.arity:
        raise SizeMismatch(f"spec arity {spec.arity} but {params.arity} parameter values")


def build_points(spec: ConfigSpec, params: ParamVector,
                 digits: int | None = None) -> PointSet:
    """Instantiate the configuration at the given parameter values.

    The radicals and ring angles are evaluated at the parameter
    precision, or at `digits` when given (useful for specs with no free
    parameters, whose ParamVector carries no precision of its own).
    """
    _check_params(spec, params)
    work = params.precision if digits is None else max(int(digits), numerics.MIN_DIGITS)
    values = tuple(with_precision(v, work) for v in params.values)
    space = _JetSpace(spec.arity, 0, work)
    coords = _generator_jets(spec, values, space)
    return PointSet(Point3(x.val, y.val, z.val) for x, y, z in coords)


def param_energy(spec: ConfigSpec, params: ParamVector, pot: Potential) -> BigReal:
    return energy(build_points(spec, params), pot).value


def _energy_jet(spec: ConfigSpec, params: ParamVector, pot: Potential, order: int) -> _Jet:
    _check_params(spec, params)
    digits = params.precision
    space = _JetSpace(spec.arity, order, digits)
    coords = _generator_jets(spec, params.values, space)
    floor = BigReal.exp10(-digits, digits)
    total = space.const(BigReal.zero(digits))
    n = len(coords)
    for i in range(n):
        xi, yi, zi = coords[i]
        for j in range(i + 1, n):
            dx = xi - coords[j][0]
            dy = yi - coords[j][1]
            dz = zi - coords[j][2]
            d2 = dx * dx + dy * dy + dz * dz
            if not d2.val > floor:
                raise CoincidentPoints(f"generated points {i} and {j} coincide")
            if pot.kind == "log":
                total = total - space.log(d2).scaled(BigReal("0.5", digits))
            elif pot.s % 2 == 0:
                total = total + space.powi(d2, -(pot.s // 2))
            else:
                total = total + space.powi(space.sqrt(d2, "pair distance"), -pot.s)
    return total


def param_gradient(spec: ConfigSpec, params: ParamVector, pot: Potential) -> list:
    """dE/d(parameter) as a list of BigReal, empty for arity 0."""
    if spec.arity == 0:
        _check_params(spec, params)
        return []
    return list(_energy_jet(spec, params, pot, 1).grad)


def param_jacobian(spec: ConfigSpec, params: ParamVector, pot: Potential) -> list:
    """Symmetric matrix of second derivatives of the energy."""
    if spec.arity == 0:
        _check_params(spec, params)
        return []
    return [list(row) for row in _energy_jet(spec, params, pot, 2).hess]


def _solve_linear(J, rhs, digits: int):
    """Gaussian elimination with partial pivoting; pivots below
    10^(-digits/2) relative to the largest initial entry are treated as
    a singular system."""
    m = len(rhs)
    A = [list(row) + [rhs[i]] for i, row in enumerate(J)]
    scale = max((abs(A[i][j]) for i in range(m) for j in range(m)),
                default=BigReal.zero(digits))
    pivot_floor = scale * BigReal.exp10(-(digits // 2), digits)
    for col in range(m):
        pivot_row = max(range(col, m), key=lambda r: abs(A[r][col]))
        if not abs(A[pivot_row][col]) > pivot_floor:
            raise SingularJacobian(f"pivot {abs(A[pivot_row][col]).to_float():.3g} "
                                   f"in column {col} is below the trust threshold")
        A[col], A[pivot_row] = A[pivot_row], A[col]
        inv = 1 / A[col][col]
        for r in range(col + 1, m):
            f = A[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, m + 1):
                A[r][c] = A[r][c] - f * A[col][c]
    x = [None] * m
    for r in range(m - 1, -1, -1):
        acc = A[r][m]
        for c in range(r + 1, m):
            acc = acc - A[r][c] * x[c]
        x[r] = acc / A[r][r]
    return x


_MAX_NEWTON_STEPS = 100


def newton_refine(spec: ConfigSpec, params0: ParamVector, pot: Potential,
                  target_digits: int) -> ParamVector:
    """Refine params0 until |dE/dparams| < 10^(5 - target_digits).

    The working precision ladder doubles an internal estimate of the
    correct digits each step (working digits = 2*estimate + 10, capped
    at target + 10), so the total cost is dominated by the last step.
    Raises Diverged if the gradient norm grows on two consecutive
    steps and SingularJacobian if the linear solves break down.
    """
    target_digits = max(int(target_digits), numerics.MIN_DIGITS)
    _check_params(spec, params0)
    if spec.arity == 0:
        return params0.with_precision(target_digits)

    goal = BigReal.exp10(5 - target_digits, target_digits + 10)
    est = 4
    params = params0
    prev_norm = None
    growths = 0
    for _ in range(_MAX_NEWTON_STEPS):
        w = min(2 * est + 10, target_digits + 10)
        w = max(w, numerics.MIN_DIGITS)
        params = params.with_precision(w)
        e_jet = _energy_jet(spec, params, pot, 2)
        V = e_jet.grad
        vnorm = max(abs(v) for v in V)
        if w >= target_digits + 10 and vnorm < goal:
            return params.with_precision(target_digits)
        if prev_norm is not None:
            if vnorm < prev_norm:
                growths = 0
            else:
                growths += 1
                if growths >= 2:
                    raise Diverged(f"gradient norm grew to {vnorm.to_float():.3g} "
                                   "on two consecutive steps")
        prev_norm = vnorm
        h = _solve_linear(e_jet.hess, [-v for v in V], w)
        params = ParamVector(params.names,
                             tuple(v + hv for v, hv in zip(params.values, h)))
        est = min(2 * est, target_digits + 10)
    raise Diverged(f"no convergence within {_MAX_NEWTON_STEPS} Newton steps")


def builtin_spec(n: int, pot: Potential, digits: int = 40):
    """Built-in structure and seed parameters for (n, potential).

    Defined in the registry module; re-exported here because this is
    where refinement consumes it.
    """
    from .registry import builtin_spec as _impl
    return _impl(n, pot, digits)
