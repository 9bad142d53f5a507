"""Exact rational intervals, extended reals and validated root isolation.

Every real quantity in the package travels as an :class:`Interval` with
:class:`fractions.Fraction` endpoints, or as ``INF``.  Transcendental
functions (``exp``, ``log``) are delegated to MPFR through gmpy2 with
directed rounding, so the returned intervals are guaranteed enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence, Union

import gmpy2

from .errors import DomainError, PrecisionError, RootIsolationError

INF = math.inf

DEFAULT_WIDTH = Fraction(1, 10**9)

Rational = Union[int, Fraction]


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings, ``"p/q"`` and finite floats.

    Floats go through ``repr`` so that ``2.5`` becomes exactly ``5/2``
    rather than the binary expansion of the double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"not a finite number: {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (gmpy2.mpq, gmpy2.mpz)):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def to_ext(x):
    """Coerce user input to an extended real: ``Fraction``, ``Interval`` or ``INF``."""
    if isinstance(x, Interval):
        return x
    if x is None:
        return None
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity", "oo"):
        return INF
    if isinstance(x, float) and x == math.inf:
        return INF
    return to_fraction(x)


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo = to_fraction(self.lo)
        hi = to_fraction(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        x = to_fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if is_inf(x):
            raise DomainError("cannot put +inf into a finite interval")
        return cls.point(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = to_fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other: "Interval") -> bool:
        other = Interval.coerce(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        other = Interval.coerce(other)
        if not self.overlaps(other):
            raise DomainError("intervals do not overlap")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        other = Interval.coerce(other)
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    # Certified comparisons: True only when every pair of representatives agrees.
    def certainly_lt(self, other) -> bool:
        if is_inf(other):
            return True
        return self.hi < Interval.coerce(other).lo

    def certainly_le(self, other) -> bool:
        if is_inf(other):
            return True
        return self.hi <= Interval.coerce(other).lo

    def certainly_gt(self, other) -> bool:
        if is_inf(other):
            return False
        return self.lo > Interval.coerce(other).hi

    def certainly_ge(self, other) -> bool:
        if is_inf(other):
            return False
        return self.lo >= Interval.coerce(other).hi

    def sign(self):
        """+1 / -1 when certain, 0 for the exact zero point, None if undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        return None

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __add__(self, other) -> "Interval":
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other) -> "Interval":
        other = Interval.coerce(other)
        if self.is_point and other.is_point:
            return Interval.point(self.lo * other.lo)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise DomainError(f"division by an interval containing zero: {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        return self * Interval.coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Interval":
        return Interval.coerce(other) * self.reciprocal()

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers are supported")
        if k == 0:
            return Interval.point(1)
        if k % 2 == 1 or self.lo >= 0:
            lo, hi = self.lo**k, self.hi**k
            return Interval(min(lo, hi), max(lo, hi))
        if self.hi <= 0:
            return Interval(self.hi**k, self.lo**k)
        return Interval(Fraction(0), max(self.lo**k, self.hi**k))

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"

    def __str__(self) -> str:
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def interval_arith(a: Interval, b: Interval, op: str) -> Interval:
    """Outward-rounded binary operation; ``op`` is one of ``+ - * /``."""
    a, b = Interval.coerce(a), Interval.coerce(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise DomainError(f"unknown operator {op!r}")


def _bits_for_width(width: Fraction) -> int:
    width = to_fraction(width)
    if width <= 0:
        raise DomainError("width must be positive")
    # 2**-k <= width / 2
    k = 1
    while Fraction(1, 2**k) > width / 2:
        k += 1
    return k


def _sqrt_floor(x: Fraction, k: int) -> Fraction:
    scaled = (x.numerator << (2 * k)) // x.denominator
    return Fraction(isqrt(scaled), 1 << k)


def _sqrt_ceil(x: Fraction, k: int) -> Fraction:
    num = x.numerator << (2 * k)
    scaled = -((-num) // x.denominator)
    r = isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, 1 << k)


def sqrt_enclosure(a, width=DEFAULT_WIDTH) -> Interval:
    """Enclosure of ``sqrt(x)`` over all ``x`` in ``a``.

    Endpoints are rounded outward on a dyadic grid of spacing at most
    ``width / 2``, so the result is at most ``width`` wider than the exact
    image of ``a``.
    """
    a = Interval.coerce(a)
    if a.lo < 0:
        raise DomainError(f"square root of negative enclosure {a}")
    k = _bits_for_width(width)
    return Interval(_sqrt_floor(a.lo, k), _sqrt_ceil(a.hi, k))


def _mpfr_to_fraction(x) -> Fraction:
    if gmpy2.is_infinite(x) or gmpy2.is_nan(x):
        raise PrecisionError(f"MPFR result out of range: {x}")
    p, q = x.as_integer_ratio()
    return Fraction(int(p), int(q))


def _directed(fn, x: Fraction, bits: int, up: bool) -> Fraction:
    mode = gmpy2.RoundUp if up else gmpy2.RoundDown
    with gmpy2.context(precision=bits, round=mode, emax=2**40, emin=-2**40):
        return _mpfr_to_fraction(fn(gmpy2.mpq(x.numerator, x.denominator)))


def exp_enclosure(a, bits: int = 160) -> Interval:
    a = Interval.coerce(a)
    return Interval(_directed(gmpy2.exp, a.lo, bits, False),
                    _directed(gmpy2.exp, a.hi, bits, True))


def log_enclosure(a, bits: int = 160) -> Interval:
    a = Interval.coerce(a)
    if a.lo <= 0:
        raise DomainError(f"log of non-positive enclosure {a}")
    return Interval(_directed(gmpy2.log, a.lo, bits, False),
                    _directed(gmpy2.log, a.hi, bits, True))


def pow_enclosure(base, exponent, bits: int = 160) -> Interval:
    """``base ** exponent`` for a positive base and real exponent."""
    base = Interval.coerce(base)
    exponent = Interval.coerce(exponent)
    return exp_enclosure(exponent * log_enclosure(base, bits), bits)


def horner(coeffs: Sequence, x):
    """Evaluate a polynomial given highest-degree-first coefficients.

    Works for Fractions and Intervals alike.
    """
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def isolate_root(f: Callable[[Interval], Interval], bracket: Interval,
                 width=DEFAULT_WIDTH, max_steps: int = 10_000) -> Interval:
    """Bisection with certified sign tests.

    ``f`` maps an :class:`Interval` to an enclosure of its image.  The
    endpoints of ``bracket`` must have certified, strictly opposite signs.
    When the sign at the midpoint cannot be decided, nearby split points
    are tried; if none decides, :class:`PrecisionError` is raised.
    """
    bracket = Interval.coerce(bracket)
    width = to_fraction(width)
    lo, hi = bracket.lo, bracket.hi
    s_lo = f(Interval.point(lo)).sign()
    s_hi = f(Interval.point(hi)).sign()
    if s_lo is None or s_hi is None:
        raise PrecisionError("sign at bracket endpoint is undecidable")
    if s_lo == 0:
        return Interval.point(lo)
    if s_hi == 0:
        return Interval.point(hi)
    if s_lo == s_hi:
        raise RootIsolationError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_steps):
        if hi - lo <= width:
            return Interval(lo, hi)
        for t in (Fraction(1, 2), Fraction(7, 16), Fraction(9, 16),
                  Fraction(5, 16), Fraction(11, 16), Fraction(3, 16), Fraction(13, 16)):
            p = lo + (hi - lo) * t
            s = f(Interval.point(p)).sign()
            if s is not None:
                break
        else:
            raise PrecisionError(f"sign undecidable inside [{lo}, {hi}]")
        if s == 0:
            return Interval.point(p)
        if s == s_lo:
            lo = p
        else:
            hi = p
    raise PrecisionError("bisection step budget exhausted")


ROLES = ("w", "w_hat", "lambda", "lambda_hat", "w_star", "w_hat_star")


@dataclass(frozen=True)
class ExponentValue:
    """An exponent of one role at index ``n`` (and successive minimum ``j``)."""

    role: str
    n: int
    value: object
    j: int = 1

    def __post_init__(self):
        if self.role not in ROLES:
            raise DomainError(f"unknown role {self.role!r}")
        if self.n < 1:
            raise DomainError("index n must be positive")
        if not 1 <= self.j <= self.n + 1:
            raise DomainError("successive-minimum index must lie in [1, n+1]")
        value = to_ext(self.value)
        object.__setattr__(self, "value", value)
        if is_inf(value):
            return
        lower = upper_of(value)
        if self.role in ("w", "w_hat") and self.j == 1 and lower < self.n:
            raise DomainError(f"{self.role}_{self.n} = {value} is below the Dirichlet floor {self.n}")
        if self.role in ("lambda", "lambda_hat") and self.j == 1 and lower < Fraction(1, self.n):
            raise DomainError(f"{self.role}_{self.n} = {value} is below the Dirichlet floor 1/{self.n}")


def lower_of(x):
    """Lower endpoint of an extended real (``INF`` stays ``INF``)."""
    if is_inf(x):
        return INF
    return x.lo if isinstance(x, Interval) else to_fraction(x)


def upper_of(x):
    if is_inf(x):
        return INF
    return x.hi if isinstance(x, Interval) else to_fraction(x)


def fmt_rational(x: Fraction) -> str:
    """``p/q`` followed by a 12-digit decimal, the package's print format."""
    x = to_fraction(x)
    text = str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return f"{text} ({float(x):.12g})"


def decimal_str(x, digits: int = 12) -> str:
    """Fixed 12-significant-digit decimal; empty string for ``None``."""
    if x is None:
        return ""
    if is_inf(x):
        return "inf"
    if isinstance(x, Interval):
        x = x.mid
    return f"{float(x):.{digits}g}"
