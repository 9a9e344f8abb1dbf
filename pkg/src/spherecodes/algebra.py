"""Recovery of integer minimal polynomials from high-precision reals.

A candidate for a real x is found per degree d by LLL-reducing the
standard integer-relation lattice over the powers 1, x, ..., x^d,
scaled to keep all but ten guard digits of the input.  A candidate is
accepted once its root residual and coefficient height both clear
precision-relative thresholds (the point where coefficients snap into
place); the sweep over ascending degrees returns the first accepted
candidate, or the best rejected one when none qualifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext

from .errors import DependentBasis, InsufficientPrecision, SizeMismatch
from .numerics import BigReal

MAX_DEGREE = 48
_GUARD_DIGITS = 10


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with coefficients ascending by degree, kept in
    canonical form: positive leading coefficient and content 1."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs or self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if self.coeffs[-1] < 0:
            raise ValueError("canonical form needs a positive leading coefficient")
        content = 0
        for c in self.coeffs:
            content = math.gcd(content, abs(c))
        if content != 1:
            raise ValueError("canonical form needs content 1")

    @classmethod
    def canonical(cls, coeffs) -> "IntPolynomial":
        """Strip leading zeros, divide out the content, and make the
        leading coefficient positive."""
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial has no canonical form")
        content = 0
        for c in cs:
            content = math.gcd(content, abs(c))
        if cs[-1] < 0:
            content = -content
        return cls(tuple(c // content for c in cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def __str__(self):
        parts = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                xs = "x" if power == 1 else f"x^{power}"
                body = xs if mag == 1 else f"{mag}{xs}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    poly: IntPolynomial
    degree: int
    height: int  # max |coefficient|
    residual: BigReal  # |poly(x)| at the input precision
    accepted: bool

    def __repr__(self):
        flag = "accepted" if self.accepted else "rejected"
        return (f"RecoveryResult({self.poly}, degree={self.degree}, "
                f"height={self.height}, "
                f"residual={self.residual.to_float():.3g}, {flag})")


def lattice_reduce(basis) -> list:
    """LLL-reduce integer row vectors at Lovasz parameter 99/100."""
    rows = [[int(v) for v in row] for row in basis]
    if not rows:
        raise DependentBasis("empty basis")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise SizeMismatch("basis rows differ in length")
    # sympy is imported here to keep module import light
    from sympy import QQ, ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.exceptions import DMRankError
    matrix = DomainMatrix([[ZZ(v) for v in row] for row in rows],
                          (len(rows), width), ZZ)
    try:
        reduced = matrix.lll(delta=QQ(99, 100))
    except DMRankError:
        raise DependentBasis("basis rows are linearly dependent") from None
    return [[int(v) for v in row] for row in reduced.to_list()]


def verify_root(poly: IntPolynomial, x: BigReal) -> BigReal:
    """poly(x) by Horner evaluation at the precision of x."""
    acc = BigReal.zero(x.precision)
    for c in reversed(poly.coeffs):
        acc = acc * x + c
    return acc


def _scaled_int(value: BigReal, digits: int, shift: int) -> int:
    # nearest integer to value * 10^shift, computed from the full
    # decimal expansion so no integer digit is lost
    with localcontext() as ctx:
        ctx.prec = digits + abs(shift) + 20
        d = Decimal(value.to_decimal(digits)).scaleb(shift)
        return int(d.to_integral_value(rounding=ROUND_HALF_EVEN))


def minimal_polynomial(x: BigReal, max_degree: int,
                       even_only: bool = False) -> RecoveryResult:
    """Search for an integer polynomial with root x.

    Degrees 1..max_degree are tried in turn (2, 4, ... with even_only,
    which halves the lattice and needs max_degree >= 2).  A candidate
    is accepted when its height-weighted residual, residual * height *
    (degree+1), falls below 10^(-p/2) and its height stays below
    10^(p/4), for p input digits; the first accepted degree wins.  A
    genuine relation under the height cap scores near 10^(-p) *
    height^2 < 10^(-p/2), while the balanced noise vectors a reduced
    lattice returns for a non-root score no better than about
    10^(-(p-10)(1-2/rank)), which stays above the bar.  Reliability
    needs p comfortably above the digit count of the true relation,
    roughly 10 plus twice the degree times the coefficient digits.
    """
    p = x.precision
    if p < 30:
        raise InsufficientPrecision(f"need at least 30 digits, got {p}")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if max_degree > MAX_DEGREE:
        raise ValueError(f"max_degree is capped at {MAX_DEGREE}")
    if even_only and max_degree < 2:
        raise ValueError("even_only needs max_degree >= 2")
    degrees = range(2, max_degree + 1, 2) if even_only else range(1, max_degree + 1)
    top = max(degrees)
    shift = p - _GUARD_DIGITS
    # extra working digits keep every integer digit of the scaled
    # powers reliable when |x| > 1
    mag = abs(x.to_float())
    extra = 10 + (math.ceil(top * math.log10(mag)) if mag > 1 else 0)
    work = p + extra
    xw = BigReal(x, work)
    pw = [BigReal(1, work)]
    for _ in range(top):
        pw.append(pw[-1] * xw)
    height_cap = 10 ** (p // 4)
    score_cap = BigReal.exp10(-(p // 2), p)
    best = None
    best_score = None
    for d in degrees:
        powers = list(range(0, d + 1, 2)) if even_only else list(range(d + 1))
        m = len(powers)
        rows = []
        for idx, power in enumerate(powers):
            row = [0] * m + [_scaled_int(pw[power], work, shift)]
            row[idx] = 1
            rows.append(row)
        reduced = lattice_reduce(rows)
        lead = next(row for row in reduced if any(row[:m]))
        coeffs = [0] * (d + 1)
        for idx, power in enumerate(powers):
            coeffs[power] = lead[idx]
        poly = IntPolynomial.canonical(coeffs)
        residual = abs(verify_root(poly, x))
        score = residual * (poly.height * (poly.degree + 1))
        accepted = score < score_cap and poly.height < height_cap
        candidate = RecoveryResult(poly, poly.degree, poly.height, residual, accepted)
        if accepted:
            return candidate
        if best is None or score < best_score:
            best = candidate
            best_score = score
    return best
