"""Closed-form relations between Diophantine approximation exponents.

Every function returns :class:`BoundResult` objects instead of raising when
a hypothesis fails, so that callers can combine the applicable bounds.
Extended reals follow the convention ``1/inf = 0`` and ``1/0 = inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, InconsistentDataError, RootIsolationError
from .numeric import (DEFAULT_WIDTH, INF, Interval, exp_enclosure, horner,
                      is_inf, isolate_root, log_enclosure, pow_enclosure,
                      sqrt_enclosure, to_ext, to_fraction)

FLOOR_NOTE = "floor-substituted"


@dataclass(frozen=True)
class BoundResult:
    value: object
    kind: str
    applicable: bool
    citation: str
    target: str = ""
    notes: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "equality"):
            raise DomainError(f"bad bound kind {self.kind!r}")
        if not self.citation:
            raise DomainError("citation must be non-empty")

    @property
    def enclosure(self) -> Optional[Interval]:
        if self.value is None or is_inf(self.value):
            return None
        return Interval.coerce(self.value)

    @property
    def is_infinite(self) -> bool:
        return is_inf(self.value)

    def to_dict(self) -> dict:
        v = self.value
        if v is None:
            val = None
        elif is_inf(v):
            val = "inf"
        elif isinstance(v, Interval):
            val = [str(v.lo), str(v.hi)]
        else:
            val = str(v)
        return {"target": self.target, "kind": self.kind, "applicable": self.applicable,
                "value": val, "citation": self.citation, "notes": list(self.notes)}


def _na(kind, citation, target, *notes) -> BoundResult:
    return BoundResult(None, kind, False, citation, target, tuple(notes))


# ---------------------------------------------------------------- extended reals


def recip(x):
    """``1/x`` with ``1/inf = 0`` and ``1/0 = inf``."""
    if is_inf(x):
        return Fraction(0)
    if isinstance(x, Interval):
        if x.lo == 0 == x.hi:
            return INF
        return x.reciprocal()
    x = to_fraction(x)
    return INF if x == 0 else 1 / x


def ext_lo(x):
    if is_inf(x):
        return INF
    return x.lo if isinstance(x, Interval) else x


def ext_hi(x):
    if is_inf(x):
        return INF
    return x.hi if isinstance(x, Interval) else x


def ext_min(*xs):
    xs = [x for x in xs if x is not None]
    if all(is_inf(x) for x in xs):
        return INF
    finite = [x for x in xs if not is_inf(x)]
    if all(not isinstance(x, Interval) for x in finite):
        return min(finite)
    return Interval(min(ext_lo(x) for x in finite), min(ext_hi(x) for x in finite))


def ext_max(*xs):
    xs = [x for x in xs if x is not None]
    if any(is_inf(x) for x in xs):
        return INF
    if all(not isinstance(x, Interval) for x in xs):
        return max(xs)
    return Interval(max(ext_lo(x) for x in xs), max(ext_hi(x) for x in xs))


def ext_le(a, b) -> bool:
    """Certified ``a <= b``."""
    if is_inf(b):
        return True
    if is_inf(a):
        return False
    return ext_hi(a) <= ext_lo(b)


def ext_lt(a, b) -> bool:
    if is_inf(b):
        return not is_inf(a)
    if is_inf(a):
        return False
    return ext_hi(a) < ext_lo(b)


def _lift(f, x):
    """Apply a function monotone on the relevant range to a point or interval."""
    if isinstance(x, Interval):
        a, b = f(x.lo), f(x.hi)
        return Interval(min(a, b), max(a, b))
    return f(x)


def _ceil(x) -> int:
    return math.ceil(ext_hi(x))


def _floor(x) -> int:
    return math.floor(ext_lo(x))


# ---------------------------------------------------------------- transference


def khintchine_corridor(n: int, w) -> tuple[BoundResult, BoundResult]:
    """Bounds on ``lambda_n`` from ``w_n``: ``[w/((n-1)w+n), (w-n+1)/n]``."""
    w = to_ext(w)
    if n < 1:
        raise DomainError("n must be positive")
    if not is_inf(w) and ext_lo(w) < n:
        raise DomainError(f"w_{n} = {w} is below the floor {n}")
    cite, tgt = "khintchine transference", f"lambda_{n}"
    if is_inf(w):
        lower = INF if n == 1 else Fraction(1, n - 1)
        return (BoundResult(lower, "lower", True, cite, tgt),
                BoundResult(INF, "upper", True, cite, tgt))
    lower = _lift(lambda v: v / ((n - 1) * v + n), w)
    upper = _lift(lambda v: (v - n + 1) / n, w)
    return (BoundResult(lower, "lower", True, cite, tgt),
            BoundResult(upper, "upper", True, cite, tgt))


def lambda_multiple_lower(k: int, n: int, lambda_k) -> BoundResult:
    """``lambda_{nk} >= (lambda_k - n + 1)/n``, never below the floor ``1/(nk)``."""
    lam = to_ext(lambda_k)
    if k < 1 or n < 1:
        raise DomainError("indices must be positive")
    if not is_inf(lam) and ext_lo(lam) < Fraction(1, k):
        raise DomainError(f"lambda_{k} = {lam} is below the floor 1/{k}")
    cite, tgt = "multiple-index lower bound", f"lambda_{n * k}"
    if is_inf(lam):
        return BoundResult(INF, "lower", True, cite, tgt)
    floor = Fraction(1, n * k)
    raw = _lift(lambda v: (v - n + 1) / n, lam)
    if ext_hi(raw) <= floor:
        return BoundResult(floor, "lower", True, cite, tgt, ("clamped to Dirichlet floor",))
    return BoundResult(ext_max(raw, floor), "lower", True, cite, tgt)


def lambda_large_equality(n: int, lambda_1) -> BoundResult:
    """``lambda_n = (lambda_1 - n + 1)/n`` provided ``lambda_n > 1``."""
    lam = to_ext(lambda_1)
    cite, tgt = "large-value equality", f"lambda_{n}"
    if is_inf(lam):
        return BoundResult(INF, "equality", True, cite, tgt)
    value = _lift(lambda v: (v - n + 1) / n, lam)
    if not ext_lt(Fraction(1), value):
        return BoundResult(value, "equality", False, cite, tgt,
                           ("value does not exceed 1, hypothesis lambda_n > 1 fails",))
    return BoundResult(value, "equality", True, cite, tgt)


def transfer_upper_lambda(variant: str, n: int, N: int, w_n, w_hat_n=None,
                          w_hat_tail=None, w_aux=None) -> BoundResult:
    """Upper bounds on ``lambda_N`` from polynomial exponents.

    ``general``: ``max{1/w_hat_n, 1/(w_hat_{N-n+1} - w_n)}`` for ``N >= ceil(w_n)+n-1``.
    ``short``: as above with ``w_n`` replaced by ``w_aux = w_{N-2n}``, for
    ``w_n < 2n+1`` and ``floor(w_n)+n <= N <= 3n``.
    ``reciprocal``: ``1/n`` for ``N >= ceil(w_n)+2n-1``.
    Unknown uniform exponents are replaced by their floors.
    """
    w = to_ext(w_n)
    tgt = f"lambda_{N}"
    cite = {"general": "transfer general", "short": "transfer short",
            "reciprocal": "transfer reciprocal"}.get(variant)
    if cite is None:
        raise DomainError(f"unknown transfer variant {variant!r}")
    if n < 1 or N < 1:
        raise DomainError("indices must be positive")
    if is_inf(w):
        return _na("upper", cite, tgt, "requires finite w_n")
    if ext_lo(w) < n:
        raise DomainError(f"w_{n} = {w} is below the floor {n}")

    if variant == "reciprocal":
        if N < _ceil(w) + 2 * n - 1:
            return _na("upper", cite, tgt, f"requires N >= {_ceil(w) + 2 * n - 1}")
        return BoundResult(Fraction(1, n), "upper", True, cite, tgt)

    notes = []
    wh = to_ext(w_hat_n)
    if wh is None:
        wh = Fraction(n)
        notes.append(FLOOR_NOTE)
    tail_index = N - n + 1
    tail = to_ext(w_hat_tail)
    if tail is None:
        tail = Fraction(tail_index)
        if FLOOR_NOTE not in notes:
            notes.append(FLOOR_NOTE)

    if variant == "general":
        if N < _ceil(w) + n - 1:
            return _na("upper", cite, tgt, f"requires N >= {_ceil(w) + n - 1}")
        subtrahend = w
    else:
        if not ext_lt(w, 2 * n + 1):
            return _na("upper", cite, tgt, "requires w_n < 2n+1")
        if not (_floor(w) + n <= N <= 3 * n):
            return _na("upper", cite, tgt, f"requires {_floor(w) + n} <= N <= {3 * n}")
        aux_index = N - 2 * n
        if aux_index == 0:
            subtrahend = Fraction(0)
        else:
            subtrahend = to_ext(w_aux)
            if subtrahend is None:
                return _na("upper", cite, tgt, f"w_{aux_index} unknown; no floor substitution possible")
            if is_inf(subtrahend):
                return _na("upper", cite, tgt, f"w_{aux_index} is infinite")

    if is_inf(tail):
        gap = INF
    else:
        gap = tail - subtrahend
    if not is_inf(gap) and ext_hi(gap) < 0:
        return _na("upper", cite, tgt, "negative denominator", *notes)
    if not is_inf(gap) and ext_lo(gap) < 0:
        return _na("upper", cite, tgt, "denominator sign undecided", *notes)
    value = ext_max(recip(wh), recip(gap))
    if is_inf(value):
        notes.append("vacuous")
    return BoundResult(value, "upper", True, cite, tgt, tuple(notes))


# ---------------------------------------------------------------- spectra


def spectrum_sequence(kind: str, m: int, w, length: int) -> list:
    """Exponent sequences ``(lambda_n)`` realised by explicit constructions.

    ``algebraic_like``: ``w, 1/2, ..., 1/(m-1), 1/(m-1), ...`` for ``1 <= w <= 2``.
    ``u2``: ``(w+1-n)/n`` while ``n <= (w+1)/2``, then ``1``.
    """
    w = to_fraction(w)
    if length < 1:
        raise DomainError("length must be positive")
    if kind == "algebraic_like":
        if m < 2:
            raise DomainError("m must be at least 2")
        if not 1 <= w <= 2:
            raise DomainError("w must lie in [1, 2]")
        return [w if i == 1 else Fraction(1, min(i, m - 1)) for i in range(1, length + 1)]
    if kind == "u2":
        if w < 1:
            raise DomainError("w must be at least 1")
        return [(w + 1 - i) / i if 2 * i <= w + 1 else Fraction(1) for i in range(1, length + 1)]
    raise DomainError(f"unknown spectrum kind {kind!r}")


# ---------------------------------------------------------------- aggregates


@dataclass(frozen=True)
class AggregateQuantities:
    """Limit quantities of a number; ``None`` marks an unknown entry.

    ``w_bar``/``w_under`` are limsup/liminf of ``w_n/n``, ``lambda_bar``/
    ``lambda_under`` of ``n * lambda_n``, and the hat variants are the uniform
    analogues.  ``estimate`` is set when the values come from a finite prefix.
    """

    w_bar: object = None
    w_under: object = None
    lambda_bar: object = None
    lambda_under: object = None
    tau: object = None
    sigma: object = None
    theta: object = None
    w_hat_bar: object = None
    w_hat_under: object = None
    estimate: bool = False
    tail_window: Optional[int] = None
    flags: tuple = ()

    def __post_init__(self):
        for name in ("w_bar", "w_under", "lambda_bar", "lambda_under", "tau", "sigma",
                     "theta", "w_hat_bar", "w_hat_under"):
            object.__setattr__(self, name, to_ext(getattr(self, name)))
        pairs = (("w_under", "w_bar"), ("lambda_under", "lambda_bar"),
                 ("w_hat_under", "w_hat_bar"))
        for lo, hi in pairs:
            a, b = getattr(self, lo), getattr(self, hi)
            if a is not None and b is not None and ext_lt(b, a):
                raise InconsistentDataError(f"{lo} = {a} exceeds {hi} = {b}")
        if self.tau is not None and ext_lt(self.tau, 1):
            raise InconsistentDataError("tau must be at least 1")
        if self.theta is not None and (ext_lt(self.theta, 0) or ext_lt(1, self.theta)):
            raise InconsistentDataError("theta must lie in [0, 1]")

    def to_dict(self) -> dict:
        out = {}
        for k in ("w_bar", "w_under", "lambda_bar", "lambda_under", "tau", "sigma", "theta",
                  "w_hat_bar", "w_hat_under"):
            v = getattr(self, k)
            out[k] = None if v is None else ("inf" if is_inf(v) else
                                             [str(v.lo), str(v.hi)] if isinstance(v, Interval) else str(v))
        out["estimate"] = self.estimate
        out["tail_window"] = self.tail_window
        out["flags"] = list(self.flags)
        return out


def _quad_ratio(x):
    """``(x+1)^2/(4x)``; increasing for ``x >= 1``."""
    if is_inf(x):
        return INF
    return _lift(lambda v: (v + 1) ** 2 / (4 * v), x)


def _plus(x, c):
    return INF if is_inf(x) else x + c


def _scaled_recip(c, x):
    r = recip(x)
    return INF if is_inf(r) else c * r


AGGREGATE_TARGETS = ("lambda_bar", "lambda_under", "w_hat_star_under", "w_hat_star_bar",
                     "lambda_hat_bar", "lambda_hat_under", "w_hat_bar", "w_hat_under")


def aggregate_bounds(q: AggregateQuantities, target: str) -> tuple[BoundResult, BoundResult]:
    if target not in AGGREGATE_TARGETS:
        raise DomainError(f"unknown aggregate target {target!r}")

    def need(*names):
        return all(getattr(q, nm) is not None for nm in names)

    wb, wu, hb, hu = q.w_bar, q.w_under, q.w_hat_bar, q.w_hat_under
    if target in ("lambda_bar", "lambda_under"):
        x = wb if target == "lambda_bar" else wu
        cite = "aggregate lambda versus w"
        if x is None:
            return _na("lower", cite, target), _na("upper", cite, target)
        return (BoundResult(_quad_ratio(x), "lower", True, cite, target),
                BoundResult(_plus(x, 2), "upper", True, cite, target))
    if target in ("w_hat_star_under", "w_hat_star_bar"):
        cite = "aggregate uniform algebraic approximation"
        if not need("w_bar", "w_under"):
            return _na("lower", cite, target), _na("upper", cite, target)
        near, far = (wb, wu) if target == "w_hat_star_under" else (wu, wb)
        lower = recip(_plus(near, 2))
        upper = ext_min(far, _scaled_recip(4, near))
        return (BoundResult(lower, "lower", True, cite, target),
                BoundResult(upper, "upper", True, cite, target))
    if target in ("lambda_hat_bar", "lambda_hat_under"):
        cite = "aggregate uniform lambda versus uniform w"
        x, y = (hb, hu) if target == "lambda_hat_bar" else (hu, hb)
        lower = BoundResult(_quad_ratio(x), "lower", True, cite, target) if x is not None \
            else _na("lower", cite, target)
        upper = BoundResult(_plus(recip(y), 1), "upper", True, cite, target) if y is not None \
            else _na("upper", cite, target)
        return lower, upper
    cite = "aggregate uniform w"
    if not need("w_bar", "w_under"):
        return BoundResult(Fraction(1), "lower", True, cite, target), _na("upper", cite, target)
    same, other = (wb, wu) if target == "w_hat_bar" else (wu, wb)
    upper = ext_min(Fraction(2), same, _plus(_scaled_recip(4, other), 1))
    return (BoundResult(Fraction(1), "lower", True, cite, target, ("Dirichlet floor",)),
            BoundResult(upper, "upper", True, cite, target))


def sigma_tau_theta_identity(tau) -> tuple:
    """``sigma = -1/tau`` and ``theta = 1/tau``."""
    tau = to_ext(tau)
    if ext_lt(tau, 1):
        raise DomainError("tau must lie in [1, inf]")
    r = recip(tau)
    return -r, r


# ---------------------------------------------------------------- uniform lambda_{2n}


def _conditional_poly(n: int) -> list[int]:
    """``n^(2n) x^(2n+1) - (n+1) x + 1``, highest degree first."""
    coeffs = [0] * (2 * n + 2)
    coeffs[0] = n ** (2 * n)
    coeffs[-2] = -(n + 1)
    coeffs[-1] = 1
    return coeffs


def deflated_conditional_poly(n: int) -> list[Fraction]:
    """The conditional polynomial divided by its spurious root factor ``(n x - 1)``."""
    p = [Fraction(c) for c in _conditional_poly(n)]
    r = Fraction(1, n)
    out, acc = [], Fraction(0)
    for c in p:
        acc = acc * r + c
        out.append(acc)
    if out[-1] != 0:
        raise ArithmeticError("1/n is not a root of the conditional polynomial")
    return [c / n for c in out[:-1]]


def lambda2n_upper(n: int, mode: str = "unconditional", lambda_2n=None,
                   width=DEFAULT_WIDTH) -> BoundResult:
    """Upper bounds on the uniform exponent of index ``2n``.

    ``unconditional``: ``sqrt((n+1/(2n))^2 - 1/n) - n + 1/(2n)``.
    ``schmidt_summerer``: the same family parametrised by ``lambda_2n``.
    ``conditional``: the root in ``(1/(n+1), 1/n)`` of
    ``n^(2n) x^(2n+1) - (n+1) x + 1``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    width = to_fraction(width)
    tgt = f"lambda_hat_{2 * n}"
    if mode == "unconditional":
        h = Fraction(1, 2 * n)
        radicand = (n + h) ** 2 - Fraction(1, n)
        value = sqrt_enclosure(radicand, width) - n + h
        return BoundResult(value, "upper", True, "uniform lambda 2n unconditional", tgt)
    if mode == "schmidt_summerer":
        if lambda_2n is None:
            raise DomainError("schmidt_summerer mode needs lambda_2n")
        lam = to_ext(lambda_2n)
        if is_inf(lam):
            return _na("upper", "uniform lambda 2n parametrised", tgt, "lambda_2n infinite")
        a = (2 * n - 2 + (2 * n - 1) * Interval.coerce(lam)) / 2
        value = sqrt_enclosure(a * a + (2 * n - 1) * Interval.coerce(lam), width) - a
        return BoundResult(value, "upper", True, "uniform lambda 2n parametrised", tgt)
    if mode == "conditional":
        g = deflated_conditional_poly(n)
        bracket = Interval(Fraction(1, n + 1), Fraction(1, n))
        try:
            value = isolate_root(lambda x: horner(g, x), bracket, width)
        except RootIsolationError as exc:
            raise RootIsolationError(f"conditional polynomial not bracketed for n={n}") from exc
        return BoundResult(value, "upper", True, "uniform lambda 2n conditional", tgt)
    raise DomainError(f"unknown mode {mode!r}")


def roy_constant(width=DEFAULT_WIDTH) -> Interval:
    """``(2 + sqrt 5 - sqrt(7 + 2 sqrt 5))/2``."""
    width = to_fraction(width)
    s5 = sqrt_enclosure(5, width / 8)
    inner = sqrt_enclosure(7 + 2 * s5, width / 4)
    return (2 + s5 - inner) / 2


# ---------------------------------------------------------------- the alpha series


def alpha_series_term(k: int) -> Fraction:
    """Coefficient of ``x^k`` in ``-1 + sum_{k>=1} (-2)^(k+1)/(k+1)! x^k``."""
    if k == 0:
        return Fraction(-1)
    return Fraction((-2) ** (k + 1), math.factorial(k + 1))


def alpha_series_enclosure(x, K: int) -> Interval:
    """Truncate after ``x^K`` and add the alternating tail bound.

    Valid for ``0 <= x <= 1`` where the terms decrease in modulus.
    """
    x = Interval.coerce(x)
    if x.lo < 0 or x.hi > 1:
        raise DomainError("series bound is certified only on [0, 1]")
    coeffs = [alpha_series_term(k) for k in range(K, -1, -1)]
    partial = horner(coeffs, x)
    tail = Fraction(2 ** (K + 2), math.factorial(K + 2)) * x.hi ** (K + 1)
    return partial + Interval(-tail, tail)


def alpha_series_root(width=Fraction(1, 10**9)) -> Interval:
    """Positive root of the series, isolated on ``[1/2, 1]``."""
    width = to_fraction(width)
    K = 4
    while Fraction(2 ** (K + 2), math.factorial(K + 2)) > width / 64:
        K += 1
    return isolate_root(lambda x: alpha_series_enclosure(x, K),
                        Interval(Fraction(1, 2), Fraction(1)), width)


def alpha_closed_form_root(width=Fraction(1, 10**9), bits: int = 128) -> Interval:
    """Independent route: bisection on ``exp(-2x) - 1 + x``."""
    return isolate_root(lambda x: exp_enclosure(-2 * x, bits) - 1 + x,
                        Interval(Fraction(1, 2), Fraction(1)), width)


# ---------------------------------------------------------------- next exponents


NEXT_VARIANTS = ("star_tail", "hat_tail", "star_from_w", "star_next", "hat_next",
                 "star_next_u1", "hat_next_u1", "uniform_lambda")


def _next_rational(w, n, u):
    num = w ** 3 - u * w ** 2 + (n * u + n - 1) * w - n * n
    return num / ((w - n) * (w - n - u + 1))


def _next_rational_u1(w, n):
    return (w ** 3 - w) / (w - n) ** 2 - 1


def next_exponent_upper(variant: str, n: int, u: int = 1, w_hat=None, *, j: int = 0,
                        m: Optional[int] = None, w_m=None, w_hat_n=None,
                        side_condition: bool = False) -> BoundResult:
    """Upper bounds for larger-index exponents under ``w_hat_n > n``-type hypotheses.

    ``w_hat`` is the uniform exponent driving the bound (the algebraic
    approximation exponent for ``star_*`` variants).  ``side_condition`` is the
    caller's assertion of the extra hypothesis needed by ``hat_*`` variants
    (automatic for ``hat_next_u1`` with ``n = 2``).
    """
    if variant not in NEXT_VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    cite = f"next exponent {variant.replace('_', ' ')}"
    if variant == "uniform_lambda":
        if m is None or m < 1 or n < 1:
            raise DomainError("uniform_lambda needs m, n >= 1")
        notes = []
        wm = to_ext(w_m)
        if wm is None:
            wm = Fraction(m)
            notes.append(FLOOR_NOTE)
        wh = to_ext(w_hat_n if w_hat_n is not None else w_hat)
        if wh is None:
            wh = Fraction(n)
            if FLOOR_NOTE not in notes:
                notes.append(FLOOR_NOTE)
        value = ext_max(recip(wm), recip(wh))
        return BoundResult(value, "upper", True, cite, f"lambda_hat_{m + n - 1}", tuple(notes))

    if variant == "star_from_w":
        if m is None or m < 1 or n < 1:
            raise DomainError("star_from_w needs m, n >= 1")
        wm = to_ext(w_m)
        tgt = f"w_hat_star_{n}"
        if wm is None:
            return _na("upper", cite, tgt, "w_m required")
        if is_inf(wm):
            return BoundResult(Fraction(m), "upper", True, cite, tgt)
        if not ext_lt(m + n - 1, wm):
            return _na("upper", cite, tgt, f"requires w_{m} > {m + n - 1}")
        return BoundResult(_lift(lambda v: m * v / (v - n + 1), wm), "upper", True, cite, tgt)

    w = to_ext(w_hat)
    if w is None:
        raise DomainError("w_hat is required")
    notes = []
    if variant.startswith("hat_"):
        if variant == "hat_next_u1" and n == 2:
            notes.append("side condition automatic for n=2")
        elif not side_condition:
            return _na("upper", cite, "", "side condition not asserted")
    if variant in ("star_tail", "hat_tail"):
        if u < 1 or not 0 <= j <= u - 1:
            raise DomainError("need u >= 1 and 0 <= j <= u-1")
        tgt = f"w_{n + j}"
        if is_inf(w):
            return _na("upper", cite, tgt, "uniform exponent infinite")
        if not ext_lt(n + u - 1, w):
            return _na("upper", cite, tgt, f"requires uniform exponent > {n + u - 1}")
        value = _lift(lambda v: (n - 1) * v / (v - (n + j)), w)
        return BoundResult(value, "upper", True, cite, tgt, tuple(notes))
    if n < 2:
        return _na("upper", cite, "", "requires n >= 2")
    if variant in ("star_next", "hat_next"):
        if u < 1:
            raise DomainError("u must be positive")
        tgt = f"w_{n + u}"
        if is_inf(w) or not ext_lt(n + u - 1, w):
            return _na("upper", cite, tgt, f"requires uniform exponent in ({n + u - 1}, inf)")
        value = _interval_rational(lambda v: _next_rational(v, n, u), w)
        return BoundResult(value, "upper", True, cite, tgt, tuple(notes))
    tgt = f"w_{n + 1}"
    if is_inf(w) or not ext_lt(n, w):
        return _na("upper", cite, tgt, f"requires uniform exponent in ({n}, inf)")
    value = _interval_rational(lambda v: _next_rational_u1(v, n), w)
    return BoundResult(value, "upper", True, cite, tgt, tuple(notes))


def _interval_rational(f, x):
    if isinstance(x, Interval):
        return f(x)
    return f(to_fraction(x))


def _w3_numerator(x):
    return x ** 3 - x ** 2 + 3 * x - 4


W_HAT_2_MAX_RADICAND = 5  # the admissible range ends at (3 + sqrt 5)/2


def w3_bound(w_hat_2) -> BoundResult:
    """``w_3 <= (x^3 - x^2 + 3x - 4)/(x - 2)^2`` for ``x = w_hat_2 > 2``."""
    w = to_ext(w_hat_2)
    cite, tgt = "w3 from uniform w2", "w_3"
    if w is None or is_inf(w):
        return _na("upper", cite, tgt, "finite uniform exponent required")
    if not ext_lt(2, w):
        return _na("upper", cite, tgt, "requires w_hat_2 > 2")
    # (3+sqrt5)/2 < x  <=>  2x - 3 > sqrt 5  <=>  (2x-3)^2 > 5
    if ext_lo(2 * w - 3) > 0 and ext_lo((2 * w - 3) ** 2) > 5:
        return _na("upper", cite, tgt, "w_hat_2 exceeds (3+sqrt5)/2")
    value = _interval_rational(lambda v: _w3_numerator(v) / (v - 2) ** 2, w)
    return BoundResult(value, "upper", True, cite, tgt)


def w3_constant(width=DEFAULT_WIDTH) -> tuple[Interval, Interval]:
    """Supremum of the numerator over the admissible range, by two routes.

    The numerator is increasing (derivative ``3x^2-2x+3 > 0``), so the
    supremum sits at ``(3+sqrt 5)/2``.  Returns the interval evaluation there
    and the closed form ``6 + 4 sqrt 5``.
    """
    width = to_fraction(width)
    x = (3 + sqrt_enclosure(5, width / 64)) / 2
    direct = _w3_numerator(x)
    closed = 6 + 4 * sqrt_enclosure(5, width / 4)
    return direct, closed


# ---------------------------------------------------------------- decay envelopes


def decay_envelope(kind: str, c, n: int, eps, index: int, bits: int = 128) -> BoundResult:
    """Growth or decay bounds carrying a user-supplied (ineffective) constant ``c``.

    ``subspace``: ``w*_m <= exp(c (log 3m)^n (loglog 3m)^n)`` for ``m >= n+1``.
    ``champernowne``: ``w*_m <= (2m)^(c loglog 3m)``.
    ``lambda_decay``: ``lambda_N <= exp(-c (log N)^((1-eps)/n))``.
    ``lambda_decay_champernowne``: ``lambda_N <= exp(-c (log N)^(1-eps))``.
    """
    c = to_fraction(c)
    eps = to_fraction(eps)
    if c <= 0:
        raise DomainError("c must be positive")
    if index < 1:
        raise DomainError("index must be positive")
    cite = f"decay {kind.replace('_', ' ')}"
    if kind in ("subspace", "champernowne"):
        tgt = f"w_star_{index}"
        if kind == "subspace" and index < n + 1:
            return _na("upper", cite, tgt, f"requires m >= {n + 1}")
        log3m = log_enclosure(3 * index, bits)
        loglog = log_enclosure(log3m, bits)
        if kind == "subspace":
            value = exp_enclosure(c * log3m ** n * loglog ** n, bits)
        else:
            value = pow_enclosure(2 * index, c * loglog, bits)
        return BoundResult(value, "upper", True, cite, tgt)
    if kind in ("lambda_decay", "lambda_decay_champernowne"):
        if not 0 < eps < 1:
            raise DomainError("eps must lie in (0, 1)")
        if n < 1:
            raise DomainError("n must be positive")
        tgt = f"lambda_{index}"
        if index == 1:
            return BoundResult(Fraction(1), "upper", True, cite, tgt)
        power = (1 - eps) / n if kind == "lambda_decay" else 1 - eps
        logN = log_enclosure(index, bits)
        value = exp_enclosure(-c * pow_enclosure(logN, power, bits), bits)
        return BoundResult(value, "upper", True, cite, tgt)
    raise DomainError(f"unknown decay kind {kind!r}")


# ---------------------------------------------------------------- algebraic approximation


def star_conversions(direction: str, n: int, *, w=None, w_hat=None, w_star=None,
                     w_hat_star=None, lam=None, lam_hat=None) -> list[BoundResult]:
    """Relations between polynomial exponents and algebraic-approximation exponents."""
    if n < 1:
        raise DomainError("n must be positive")
    out: list[BoundResult] = []
    w, w_hat, w_star, w_hat_star, lam, lam_hat = map(to_ext, (w, w_hat, w_star, w_hat_star, lam, lam_hat))
    if direction == "star_w":
        cite = "algebraic versus polynomial"
        if w_star is not None:
            out.append(BoundResult(w_star, "lower", True, cite, f"w_{n}"))
            out.append(BoundResult(_plus(w_star, n - 1), "upper", True, cite, f"w_{n}"))
        if w is not None:
            lower = INF if is_inf(w) else ext_max(w - (n - 1), Fraction(1))
            out.append(BoundResult(lower, "lower", True, cite, f"w_star_{n}"))
            out.append(BoundResult(w, "upper", True, cite, f"w_star_{n}"))
    elif direction == "star_w_hat":
        cite = "uniform algebraic versus polynomial"
        if w_hat_star is not None:
            out.append(BoundResult(w_hat_star, "lower", True, cite, f"w_hat_{n}"))
            out.append(BoundResult(ext_min(Fraction(2 * n - 1), _plus(w_hat_star, n - 1)),
                                   "upper", True, cite, f"w_hat_{n}"))
        if w_hat is not None:
            out.append(BoundResult(ext_max(_plus(w_hat, -(n - 1)), Fraction(0)), "lower", True,
                                   cite, f"w_hat_star_{n}"))
            out.append(BoundResult(w_hat, "upper", True, cite, f"w_hat_star_{n}"))
    elif direction == "reciprocal_lambda":
        cite = "reciprocal lambda"
        if lam is not None:
            out.append(BoundResult(recip(lam), "lower", True, cite, f"w_hat_star_{n}"))
        if lam_hat is not None:
            out.append(BoundResult(recip(lam_hat), "lower", True, cite, f"w_star_{n}"))
    elif direction == "bugeaud_laurent":
        cite = "algebraic from polynomial ratio"
        for src, tgt in ((w, f"w_hat_star_{n}"), (w_hat, f"w_star_{n}")):
            if src is None:
                continue
            if is_inf(src):
                out.append(BoundResult(Fraction(1), "lower", True, cite, tgt))
                continue
            den = src - n + 1
            if ext_lo(den) <= 0:
                out.append(_na("lower", cite, tgt, "non-positive denominator"))
                continue
            out.append(BoundResult(_lift(lambda v: v / (v - n + 1), src), "lower", True, cite, tgt))
    elif direction == "wirsing":
        cite = "wirsing"
        if w is not None:
            value = INF if is_inf(w) else _lift(lambda v: (v + 1) / 2, w)
            out.append(BoundResult(value, "lower", True, cite, f"w_star_{n}"))
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return out


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class MahlerClass:
    kind: str  # "S", "T", "U"
    m: Optional[int] = None

    @property
    def label(self) -> str:
        if self.kind == "U":
            return "Liouville" if self.m == 1 else f"U{self.m}"
        return self.kind

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, text: str) -> "MahlerClass":
        t = text.strip()
        if t in ("S", "T"):
            return cls(t)
        if t.lower() in ("liouville", "u1"):
            return cls("U", 1)
        if t[:1] in "Uu" and t[1:].isdigit() and int(t[1:]) >= 1:
            return cls("U", int(t[1:]))
        raise DomainError(f"unknown Mahler class {text!r}")


@dataclass
class ClassifyData:
    lim_lambda: object = None
    limsup_n_lambda: object = None
    lim_w_hat_star: object = None
    liminf_w_hat_star_over_n: object = None
    first_infinite_w: Optional[int] = None  # smallest m with w_m = inf
    all_w_finite: Optional[bool] = None


class _Candidates:
    """Subset of {S, T, U_1, U_2, ...}; ``any_u`` stands for every U_m."""

    def __init__(self, st=("S", "T"), us=(), any_u=True):
        self.st = set(st)
        self.us = set(us)
        self.any_u = any_u

    def meet(self, other: "_Candidates") -> "_Candidates":
        st = self.st & other.st
        if self.any_u and other.any_u:
            return _Candidates(st, (), True)
        if self.any_u:
            return _Candidates(st, other.us, False)
        if other.any_u:
            return _Candidates(st, self.us, False)
        return _Candidates(st, self.us & other.us, False)

    def empty(self) -> bool:
        return not self.st and not self.us and not self.any_u

    def single(self) -> Optional[MahlerClass]:
        if self.any_u:
            return None
        items = [MahlerClass(k) for k in self.st] + [MahlerClass("U", m) for m in self.us]
        return items[0] if len(items) == 1 else None

    def describe(self) -> str:
        parts = sorted(self.st) + [str(MahlerClass("U", m)) for m in sorted(self.us)]
        if self.any_u:
            parts.append("U_m")
        return ", ".join(parts) or "none"


def classify(data: ClassifyData) -> MahlerClass:
    """Mahler class from limit data of the exponent sequences."""
    cands = _Candidates()
    lam = to_ext(data.lim_lambda)
    if lam is not None:
        if is_inf(lam):
            c = _Candidates((), (1,), False)
        elif lam == 0:
            c = _Candidates(("S", "T"), (), False)
        else:
            lam = to_fraction(ext_lo(lam))
            inv = 1 / lam
            if inv.denominator != 1:
                raise InconsistentDataError(
                    f"lim lambda_n = {lam} is not in the set {{0, inf, 1, 1/2, 1/3, ...}}")
            c = _Candidates((), (int(inv) + 1,), False)
        cands = cands.meet(c)
    nl = to_ext(data.limsup_n_lambda)
    if nl is not None:
        cands = cands.meet(_Candidates(("T",), (), True) if is_inf(nl) else _Candidates(("S",), (), False))
    ws = to_ext(data.lim_w_hat_star)
    if ws is not None:
        if is_inf(ws):
            cands = cands.meet(_Candidates(("S", "T"), (), False))
        else:
            v = to_fraction(ext_lo(ws))
            lo_m = max(1, math.ceil(v))
            ms = {m for m in (lo_m, lo_m + 1) if m - 1 <= v <= m}
            cands = cands.meet(_Candidates((), ms, False))
    ratio = to_ext(data.liminf_w_hat_star_over_n)
    if ratio is not None:
        if is_inf(ratio) or ratio > 0:
            cands = cands.meet(_Candidates(("S",), (), False))
        else:
            cands = cands.meet(_Candidates(("T",), (), True))
    if data.first_infinite_w is not None:
        cands = cands.meet(_Candidates((), (data.first_infinite_w,), False))
    elif data.all_w_finite:
        cands = cands.meet(_Candidates(("S", "T"), (), False))
    if cands.empty():
        raise InconsistentDataError("limit data are mutually inconsistent")
    result = cands.single()
    if result is None:
        raise DomainError(f"data do not determine the class; candidates: {cands.describe()}")
    return result
