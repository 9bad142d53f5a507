"""Oracles for concrete real constants.

An oracle answers ``enclose(eps)`` with an :class:`Interval` of width at
most ``eps`` that contains one fixed real number.  Refinements are cached
internally; the cache is guarded by a lock so oracles can be shared by
worker threads.
"""

from __future__ import annotations

import json
import math
import random
import threading
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import DomainError, RootIsolationError
from .numeric import Interval, to_fraction


class NumberOracle:
    """Base class.  Subclasses implement :meth:`_enclose`."""

    kind = "abstract"

    def __init__(self, name: str = ""):
        self.name = name
        self.hints: list[int] = []
        self._lock = threading.Lock()

    @property
    def descriptor(self) -> dict:
        return {"kind": self.kind}

    @property
    def is_rational(self) -> bool:
        return False

    def enclose(self, eps) -> Interval:
        eps = to_fraction(eps)
        if eps <= 0:
            raise DomainError("requested width must be positive")
        with self._lock:
            enc = self._enclose(eps)
        assert enc.width <= eps
        return enc

    def _enclose(self, eps: Fraction) -> Interval:
        raise NotImplementedError

    def powers(self, n: int, eps) -> list[Interval]:
        """Enclosures of ``zeta**1 .. zeta**n``, each of width at most ``eps``."""
        eps = to_fraction(eps)
        base = self.enclose(Fraction(1))
        bound = max(abs(base.lo), abs(base.hi)) + 1
        # d(z^i) <= i * bound^(i-1) * dz
        scale = n * bound ** max(n - 1, 0)
        step = eps / scale
        while True:
            z = self.enclose(step)
            out = [z ** i for i in range(1, n + 1)]
            if all(p.width <= eps for p in out):
                return out
            step /= 4

    def zero_test(self, coeffs: Sequence[int]) -> Optional[bool]:
        """Exact test of ``P(zeta) == 0`` when the oracle knows enough algebra.

        Returns None when the question cannot be settled exactly.
        """
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or self.descriptor})"


# ---------------------------------------------------------------- algebraic


def _poly_trim(p: list) -> list:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _poly_rem(a: list, b: list) -> list:
    """Remainder of highest-first Fraction polynomials."""
    a = [Fraction(c) for c in _poly_trim(list(a))]
    b = [Fraction(c) for c in _poly_trim(list(b))]
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    while len(a) >= len(b) and a != [0]:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = _poly_trim(a[1:]) if len(a) > 1 else [Fraction(0)]
    return a


def _derivative(p: list) -> list:
    d = len(p) - 1
    return [c * (d - i) for i, c in enumerate(p[:-1])] or [0]


def sturm_sequence(p: Sequence[int]) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in _poly_trim(list(p))]]
    seq.append([Fraction(c) for c in _poly_trim(_derivative(seq[0]))])
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = _poly_rem(seq[-2], seq[-1])
        if r == [0]:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in ``(lo, hi]`` by Sturm's theorem."""
    seq = sturm_sequence(p)
    at = lambda x: [_eval(q, x) for q in seq]
    return _sign_changes(at(lo)) - _sign_changes(at(hi))


def _eval(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


class AlgebraicOracle(NumberOracle):
    kind = "algebraic"

    def __init__(self, coeffs: Sequence[int], bracket, name: str = ""):
        super().__init__(name)
        coeffs = [int(c) for c in coeffs]
        if len(_poly_trim(coeffs)) < 2:
            raise DomainError("polynomial must have degree at least 1")
        self.coeffs = _poly_trim(coeffs)
        bracket = Interval.coerce(bracket) if not isinstance(bracket, (list, tuple)) \
            else Interval(to_fraction(bracket[0]), to_fraction(bracket[1]))
        lo, hi = bracket.lo, bracket.hi
        self.bracket = bracket
        s_lo = _eval(self.coeffs, lo)
        s_hi = _eval(self.coeffs, hi)
        if s_lo == 0 or s_hi == 0 or (s_lo > 0) == (s_hi > 0):
            raise RootIsolationError(f"no certified sign change on [{lo}, {hi}]")
        n_roots = count_real_roots(self.coeffs, lo, hi)
        if n_roots != 1:
            raise RootIsolationError(f"bracket [{lo}, {hi}] contains {n_roots} roots, expected 1")
        self._sign_lo = 1 if s_lo > 0 else -1
        self._bracket = bracket

    @property
    def descriptor(self) -> dict:
        return {"kind": self.kind, "coeffs": self.coeffs,
                "bracket": [str(self.bracket.lo), str(self.bracket.hi)]}

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1 or self._bracket.is_point

    def _enclose(self, eps):
        lo, hi = self._bracket.lo, self._bracket.hi
        while hi - lo > eps:
            mid = (lo + hi) / 2
            s = _eval(self.coeffs, mid)
            if s == 0:
                lo = hi = mid
            elif (s > 0) == (self._sign_lo > 0):
                lo = mid
            else:
                hi = mid
        self._bracket = Interval(lo, hi)
        return self._bracket

    def zero_test(self, coeffs):
        p = _poly_trim([Fraction(c) for c in coeffs])
        if p == [0]:
            return True
        return _poly_rem(p, self.coeffs) == [0]


class RationalOracle(NumberOracle):
    """A rational constant.  Kept for plumbing tests; exponent searches reject it."""

    kind = "rational"

    def __init__(self, value, name: str = ""):
        super().__init__(name)
        self.value = to_fraction(value)

    @property
    def descriptor(self):
        return {"kind": self.kind, "value": str(self.value)}

    @property
    def is_rational(self) -> bool:
        return True

    def _enclose(self, eps):
        return Interval.point(self.value)

    def zero_test(self, coeffs):
        return _eval([Fraction(c) for c in coeffs], self.value) == 0


# ---------------------------------------------------------------- Liouville


class LiouvilleOracle(NumberOracle):
    """``sum_{k>=1} b**(-k!)``."""

    kind = "liouville"

    def __init__(self, b: int, name: str = "", hint_limit: int = 10**30):
        super().__init__(name)
        if b < 2:
            raise DomainError("base must be at least 2")
        self.b = b
        k, hints = 1, []
        while b ** math.factorial(k) <= hint_limit:
            hints.append(b ** math.factorial(k))
            k += 1
        self.hints = hints

    @property
    def descriptor(self):
        return {"kind": self.kind, "base": self.b}

    def terms_needed(self, eps: Fraction) -> int:
        K = 1
        while Fraction(2, self.b ** math.factorial(K + 1)) > eps:
            K += 1
        return K

    def _enclose(self, eps):
        K = self.terms_needed(eps)
        s = sum(Fraction(1, self.b ** math.factorial(k)) for k in range(1, K + 1))
        # the tail is positive and below 2 * b^-(K+1)!; trim the upper side to honour eps
        tail = Fraction(2, self.b ** math.factorial(K + 1))
        return Interval(s, s + min(tail, eps))


# ---------------------------------------------------------------- digit streams


def to_base(k: int, b: int) -> list[int]:
    if k == 0:
        return [0]
    digits = []
    while k:
        k, r = divmod(k, b)
        digits.append(r)
    return digits[::-1]


class DigitOracle(NumberOracle):
    """A number in ``[0, 1)`` given by an unending base-``b`` digit stream."""

    kind = "digits"

    def __init__(self, b: int, name: str = ""):
        super().__init__(name)
        if b < 2:
            raise DomainError("base must be at least 2")
        self.b = b
        self._digits: list[int] = []
        self._value = 0  # integer formed by the cached digits

    def _more_digits(self) -> list[int]:
        raise NotImplementedError

    def digits(self, count: int) -> list[int]:
        with self._lock:
            self._fill(count)
            return self._digits[:count]

    def _fill(self, count: int):
        while len(self._digits) < count:
            new = self._more_digits()
            for d in new:
                self._value = self._value * self.b + d
            self._digits.extend(new)

    def _enclose(self, eps):
        D = 1
        while Fraction(1, self.b ** D) > eps:
            D += 1
        self._fill(D)
        extra = len(self._digits) - D
        head = self._value // self.b ** extra
        lo = Fraction(head, self.b ** D)
        return Interval(lo, lo + Fraction(1, self.b ** D))


class ChampernowneOracle(DigitOracle):
    """``0.(P(1))_b (P(2))_b ...`` starting after the last non-positive value of ``P``."""

    kind = "champernowne"

    def __init__(self, b: int, poly: Sequence[int], name: str = ""):
        super().__init__(b, name)
        poly = _poly_trim([int(c) for c in poly])
        if len(poly) < 2 or poly[0] <= 0:
            raise DomainError("P must be non-constant with positive leading coefficient")
        self.poly = poly
        # Cauchy bound: every real root is below 1 + max|a_i/a_0|
        bound = 1 + max(abs(Fraction(c, poly[0])) for c in poly[1:])
        k = max(1, math.floor(bound) + 1)
        while k > 1 and _eval(poly, k - 1) > 0:
            k -= 1
        self.start = k
        self._next = k

    @property
    def descriptor(self):
        return {"kind": self.kind, "base": self.b, "poly": self.poly}

    def _more_digits(self):
        v = _eval(self.poly, self._next)
        self._next += 1
        return to_base(v, self.b)


class RandomDigitOracle(DigitOracle):
    """Seeded pseudo-random digits: a stand-in for a Lebesgue-generic number."""

    kind = "digit_random"

    def __init__(self, seed: int, b: int = 10, name: str = ""):
        super().__init__(b, name)
        self.seed = seed
        self._rng = random.Random(seed)

    @property
    def descriptor(self):
        return {"kind": self.kind, "seed": self.seed, "base": self.b}

    def _more_digits(self):
        return [self._rng.randrange(self.b) for _ in range(64)]


# ---------------------------------------------------------------- continued fractions


class ContinuedFractionOracle(NumberOracle):
    """A number given by a rule ``k -> a_k`` for its partial quotients."""

    kind = "cf_defined"

    def __init__(self, rule: Callable[[int], int], name: str = "", spec: Optional[dict] = None):
        super().__init__(name)
        self.rule = rule
        self.spec = spec or {}
        self._p = [1, rule(0)]  # p_{-1}, p_0
        self._q = [0, 1]
        self.minpoly: Optional[list[int]] = None

    @property
    def descriptor(self):
        return {"kind": self.kind, **self.spec}

    def _extend(self):
        k = len(self._p) - 1
        a = self.rule(k)
        if a < 1:
            raise DomainError(f"partial quotient a_{k} = {a} is not positive")
        self._p.append(a * self._p[-1] + self._p[-2])
        self._q.append(a * self._q[-1] + self._q[-2])

    def _enclose(self, eps):
        while len(self._p) < 3:
            self._extend()
        while Fraction(1, self._q[-1] * self._q[-2]) > eps:
            self._extend()
        a = Fraction(self._p[-2], self._q[-2])
        b = Fraction(self._p[-1], self._q[-1])
        return Interval(min(a, b), max(a, b))

    def zero_test(self, coeffs):
        if self.minpoly is None:
            return None
        p = _poly_trim([Fraction(c) for c in coeffs])
        return p == [0] or _poly_rem(p, self.minpoly) == [0]


def _convergents(quotients: Sequence[int]) -> tuple[int, int, int, int]:
    """``(p_k, p_{k-1}, q_k, q_{k-1})`` after the given partial quotients."""
    p, p1, q, q1 = 1, 0, 0, 1
    for a in quotients:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return p, p1, q, q1


def periodic_minpoly(head: Sequence[int], period: Sequence[int]) -> list[int]:
    """Integer quadratic (highest first) vanishing at ``[head; period, period, ...]``."""
    # the periodic tail eta satisfies eta = (P eta + P1)/(Q eta + Q1)
    P, P1, Q, Q1 = _convergents(period)
    a, b, c = Q, Q1 - P, -P1
    # zeta = (h eta + h1)/(g eta + g1), so eta = (g1 zeta - h1)/(h - g zeta)
    h, h1, g, g1 = _convergents(head)
    u = (g1, -h1)  # numerator  u0 zeta + u1
    v = (-g, h)    # denominator v0 zeta + v1

    def mul(x, y):
        return [x[0] * y[0], x[0] * y[1] + x[1] * y[0], x[1] * y[1]]

    terms = [mul(u, u), mul(u, v), mul(v, v)]
    poly = [a * terms[0][i] + b * terms[1][i] + c * terms[2][i] for i in range(3)]
    g0 = math.gcd(*poly)
    poly = [x // g0 for x in poly]
    return [-x for x in poly] if poly[0] < 0 else poly


def periodic_rule(head: Sequence[int], period: Sequence[int]) -> Callable[[int], int]:
    head, period = list(head), list(period)

    def rule(k: int) -> int:
        return head[k] if k < len(head) else period[(k - len(head)) % len(period)]
    return rule


def fibonacci_word_rule(a: int, b: int) -> Callable[[int], int]:
    """Partial quotients following the Fibonacci word (a b a a b a b a ...).

    Only a structural stub: exponent predictions for such numbers are not
    checked at desk scale.
    """
    def rule(k: int) -> int:
        if k == 0:
            return 0
        # k-th letter of the Fibonacci word via the golden-ratio floor formula
        phi = (1 + 5 ** 0.5) / 2
        return b if math.floor((k + 1) / phi) - math.floor(k / phi) == 0 else a
    return rule


# ---------------------------------------------------------------- constructors


def make_algebraic(coeffs, bracket, name: str = "") -> AlgebraicOracle:
    return AlgebraicOracle(coeffs, bracket, name)


def make_liouville(b: int, name: str = "") -> LiouvilleOracle:
    return LiouvilleOracle(b, name)


def make_champernowne(b: int, poly_coeffs, name: str = "") -> ChampernowneOracle:
    return ChampernowneOracle(b, poly_coeffs, name)


def make_digit_random(seed: int, b: int = 10, name: str = "") -> RandomDigitOracle:
    return RandomDigitOracle(seed, b, name)


def make_cf(head, period, name: str = "") -> ContinuedFractionOracle:
    z = ContinuedFractionOracle(periodic_rule(head, period), name,
                                {"head": list(head), "period": list(period)})
    z.minpoly = periodic_minpoly(head, period)
    return z


def make_rational(value, name: str = "") -> RationalOracle:
    return RationalOracle(value, name)


MANIFEST = {
    "sqrt2": {"kind": "algebraic", "coeffs": [1, 0, -2], "bracket": ["1", "2"]},
    "sqrt3": {"kind": "algebraic", "coeffs": [1, 0, -3], "bracket": ["1", "2"]},
    "cbrt2": {"kind": "algebraic", "coeffs": [1, 0, 0, -2], "bracket": ["1", "2"]},
    "cbrt3": {"kind": "algebraic", "coeffs": [1, 0, 0, -3], "bracket": ["1", "2"]},
    "quartic2": {"kind": "algebraic", "coeffs": [1, 0, 0, 0, -2], "bracket": ["1", "2"]},
    "phi": {"kind": "cf_defined", "head": [1], "period": [1]},
    "sqrt2_cf": {"kind": "cf_defined", "head": [1], "period": [2]},
    "sturmian12": {"kind": "cf_sturmian", "a": 1, "b": 2},
    "liouville10": {"kind": "liouville", "base": 10},
    "liouville2": {"kind": "liouville", "base": 2},
    "champernowne10": {"kind": "champernowne", "base": 10, "poly": [1, 0]},
    "champernowne2": {"kind": "champernowne", "base": 2, "poly": [1, 0]},
    "champernowne10_sq": {"kind": "champernowne", "base": 10, "poly": [1, 0, 0]},
    "random42": {"kind": "digit_random", "seed": 42, "base": 10},
    "random7": {"kind": "digit_random", "seed": 7, "base": 10},
    "third": {"kind": "rational", "value": "1/3"},
}


def from_descriptor(desc: dict, name: str = "") -> NumberOracle:
    kind = desc.get("kind")
    if kind == "algebraic":
        return make_algebraic(desc["coeffs"], tuple(desc["bracket"]), name)
    if kind == "liouville":
        return make_liouville(int(desc["base"]), name)
    if kind == "champernowne":
        return make_champernowne(int(desc["base"]), desc["poly"], name)
    if kind == "digit_random":
        return make_digit_random(int(desc["seed"]), int(desc.get("base", 10)), name)
    if kind == "cf_defined":
        return make_cf(desc["head"], desc["period"], name)
    if kind == "cf_sturmian":
        return ContinuedFractionOracle(fibonacci_word_rule(int(desc["a"]), int(desc["b"])),
                                       name, dict(desc))
    if kind == "rational":
        return make_rational(desc["value"], name)
    raise DomainError(f"unknown oracle kind {kind!r}")


def get(name: str) -> NumberOracle:
    try:
        desc = MANIFEST[name]
    except KeyError:
        raise DomainError(f"unknown catalog entry {name!r}; try one of {sorted(MANIFEST)}") from None
    return from_descriptor(desc, name)


def manifest_json() -> str:
    return json.dumps(MANIFEST, indent=2, sort_keys=True)
