"""Arbitrary-precision reals and deterministic randomness.

Every real quantity in this package is a :class:`BigReal`: an immutable
wrapper around mpmath's raw mpf layer that carries an explicit working
precision counted in decimal digits.  Arithmetic rounds to the smaller
of the two operand precisions, so a low-precision value cannot silently
pose as a high-precision one.

The digits-to-bits map is chosen so that printing a value with two guard
digits (``precision + 2``) and re-parsing it at the same precision is an
exact round trip, not merely a close one.
"""

from __future__ import annotations

import random

from mpmath import libmp
from mpmath.libmp import (
    from_int,
    from_str,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_cos,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_pi,
    mpf_pos,
    mpf_pow_int,
    mpf_sin,
    mpf_sqrt,
    mpf_sub,
    to_float,
    to_str,
)

from .errors import DomainError

MIN_DIGITS = 16

# Default working precisions: 40 digits for the inverse-power kernels,
# 80 for the logarithmic one (whose optima are customarily archived at
# close to 80 digits).
DEFAULT_RIESZ_DIGITS = 40
DEFAULT_LOG_DIGITS = 80

_LOG2_10 = 3.3219280948873626
_RND = libmp.round_nearest
_MASK64 = (1 << 64) - 1


def _bits(digits: int) -> int:
    # floor((d+1)*log2(10)) keeps 2^bits strictly below 10^(d+1), which
    # is what makes the d+2-digit decimal round trip provably exact.
    return int((digits + 1) * _LOG2_10)


def _check_digits(digits: int) -> int:
    digits = int(digits)
    if digits < MIN_DIGITS:
        raise DomainError(f"precision must be at least {MIN_DIGITS} digits, got {digits}")
    return digits


class BigReal:
    """A real number at a fixed decimal working precision.

    Instances are immutable.  Mixed arithmetic accepts plain Python ints
    (treated as exact); floats must be converted explicitly because
    their decimal intent is ambiguous.
    """

    __slots__ = ("raw", "precision")

    def __init__(self, value, precision=None):
        if isinstance(value, BigReal):
            precision = value.precision if precision is None else _check_digits(precision)
            raw = mpf_pos(value.raw, _bits(precision), _RND)
        elif precision is None:
            raise TypeError("precision is required when constructing from "
                            + type(value).__name__)
        else:
            precision = _check_digits(precision)
            if isinstance(value, int):
                raw = from_int(value, _bits(precision), _RND)
            elif isinstance(value, float):
                raw = libmp.from_float(value, _bits(precision), _RND)
            elif isinstance(value, str):
                try:
                    raw = from_str(value.strip(), _bits(precision), _RND)
                except ValueError as exc:
                    raise DomainError(f"bad decimal literal {value!r}") from exc
            else:
                raise TypeError(f"cannot make a BigReal from {type(value).__name__}")
        self.raw = raw
        self.precision = precision

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _wrap(raw, precision):
        out = BigReal.__new__(BigReal)
        out.raw = raw
        out.precision = precision
        return out

    @classmethod
    def zero(cls, precision):
        return cls._wrap(fzero, _check_digits(precision))

    @classmethod
    def exp10(cls, power: int, precision: int):
        """10**power at the given precision (exact for power >= 0)."""
        precision = _check_digits(precision)
        return cls._wrap(mpf_pow_int(from_int(10), power, _bits(precision), _RND), precision)

    # -- arithmetic ----------------------------------------------------------

    def _operand(self, other):
        if isinstance(other, BigReal):
            return other.raw, min(self.precision, other.precision)
        if isinstance(other, int):
            return from_int(other), self.precision
        return None, 0

    def __add__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        return BigReal._wrap(mpf_add(self.raw, raw, _bits(p), _RND), p)

    __radd__ = __add__

    def __sub__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        return BigReal._wrap(mpf_sub(self.raw, raw, _bits(p), _RND), p)

    def __rsub__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        return BigReal._wrap(mpf_sub(raw, self.raw, _bits(p), _RND), p)

    def __mul__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        return BigReal._wrap(mpf_mul(self.raw, raw, _bits(p), _RND), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        if raw == fzero:
            raise DomainError("division by zero")
        return BigReal._wrap(mpf_div(self.raw, raw, _bits(p), _RND), p)

    def __rtruediv__(self, other):
        raw, p = self._operand(other)
        if raw is None:
            return NotImplemented
        if self.raw == fzero:
            raise DomainError("division by zero")
        return BigReal._wrap(mpf_div(raw, self.raw, _bits(p), _RND), p)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0 and self.raw == fzero:
            raise DomainError("zero cannot be raised to a negative power")
        return BigReal._wrap(mpf_pow_int(self.raw, exponent, _bits(self.precision), _RND),
                             self.precision)

    def __neg__(self):
        return BigReal._wrap(mpf_neg(self.raw), self.precision)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigReal._wrap(mpf_abs(self.raw), self.precision)

    # -- comparisons (numeric, precision-blind) -------------------------------

    def _cmp(self, other):
        if isinstance(other, BigReal):
            return mpf_cmp(self.raw, other.raw)
        if isinstance(other, int):
            return mpf_cmp(self.raw, from_int(other))
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        # raw tuples are canonical, so value equality matches tuple equality
        return hash(self.raw)

    def is_zero(self) -> bool:
        return self.raw == fzero

    def sign(self) -> int:
        return mpf_cmp(self.raw, fzero)

    # -- conversions -----------------------------------------------------------

    def to_decimal(self, digits: int | None = None) -> str:
        """Decimal text with exactly ``digits`` significant digits
        (default: this value's precision)."""
        if digits is None:
            digits = self.precision
        if self.raw == fzero:
            return "0.0"
        return to_str(self.raw, int(digits), strip_zeros=False)

    def to_float(self) -> float:
        return to_float(self.raw)

    def __float__(self):
        return to_float(self.raw)

    def __repr__(self):
        return f"BigReal({self.to_decimal(min(self.precision, 12))!r} @ {self.precision})"


def with_precision(x: BigReal, digits: int) -> BigReal:
    """Round x to the requested precision; extending pads deterministically."""
    return BigReal(x, _check_digits(digits))


def elem(kind: str, x: BigReal) -> BigReal:
    """Elementary functions: sqrt, log, exp, abs.

    sqrt and log raise DomainError outside their domains; in particular
    log(0) is rejected rather than returned as -inf.
    """
    b = _bits(x.precision)
    if kind == "sqrt":
        if x.sign() < 0:
            raise DomainError("sqrt of a negative value")
        return BigReal._wrap(mpf_sqrt(x.raw, b, _RND), x.precision)
    if kind == "log":
        if x.sign() <= 0:
            raise DomainError("log of a non-positive value")
        return BigReal._wrap(mpf_log(x.raw, b, _RND), x.precision)
    if kind == "exp":
        return BigReal._wrap(mpf_exp(x.raw, b, _RND), x.precision)
    if kind == "abs":
        return abs(x)
    raise ValueError(f"unknown elementary function {kind!r}")


def sqrt(x: BigReal) -> BigReal:
    return elem("sqrt", x)


def log(x: BigReal) -> BigReal:
    return elem("log", x)


def exp(x: BigReal) -> BigReal:
    return elem("exp", x)


def pi(digits: int) -> BigReal:
    digits = _check_digits(digits)
    return BigReal._wrap(mpf_pi(_bits(digits), _RND), digits)


def cos(x: BigReal) -> BigReal:
    return BigReal._wrap(mpf_cos(x.raw, _bits(x.precision), _RND), x.precision)


def sin(x: BigReal) -> BigReal:
    return BigReal._wrap(mpf_sin(x.raw, _bits(x.precision), _RND), x.precision)


class Rng:
    """Deterministic uniform source over [-1, 1].

    A (seed, stream) pair is folded into one integer key for the stdlib
    Mersenne Twister.  Only ``Random.random()`` is consumed, which CPython
    guarantees to reproduce across versions and platforms for a given
    integer seed, so sequences are portable.  Each concurrent consumer
    should own its own stream.
    """

    algorithm = "mt19937-random"

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        self._gen = random.Random((self.seed << 64) | self.stream)

    def next_uniform(self, digits: int = 17) -> BigReal:
        # 2u - 1 is exact in binary for any double u in [0, 1), so the
        # draw widens to any working precision without rounding.
        u = 2.0 * self._gen.random() - 1.0
        return BigReal(u, digits)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def next_uniform(rng: Rng, digits: int = 17) -> BigReal:
    return rng.next_uniform(digits)
