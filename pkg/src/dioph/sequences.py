"""Finite prefixes of exponent sequences: validation, generation, aggregates.

A prefix lists the values for ``n = 1..K`` of a single role (``w`` or
``lambda``).  The validator checks every proven relation between the
two sequences that involves only indices up to ``K``; violations are
reported only when enclosures are disjoint in the offending direction.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (AggregateQuantities, ClassifyData, MahlerClass, classify,
                      ext_hi, ext_lo, ext_lt, recip)
from .errors import DomainError
from .numeric import INF, Interval, is_inf, to_ext

PROVENANCES = ("user", "generated", "measured")

C_W_FLOOR = "w floor"
C_W_MONO = "w monotone"
C_L_FLOOR = "lambda floor"
C_L_MONO = "lambda monotone"
C_KHIN = "khintchine transference"
C_MULT = "multiple-index lower bound"
C_RECIP = "transfer reciprocal"
C_GEN = "transfer general"
C_SM = "successive-minima lower bound"


@dataclass
class ExponentPrefix:
    role: str
    values: list
    provenance: str = "user"

    def __post_init__(self):
        if self.role not in ("w", "w_hat", "lambda", "lambda_hat"):
            raise DomainError(f"unsupported prefix role {self.role!r}")
        if self.provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {self.provenance!r}")
        self.values = [to_ext(v) for v in self.values]
        if any(v is None for v in self.values):
            raise DomainError("prefix values must all be present")

    def __len__(self) -> int:
        return len(self.values)

    def at(self, n: int):
        """Value at index ``n`` (1-based)."""
        return self.values[n - 1]

    def admissibility_flags(self) -> dict:
        rep = validate_prefix(self if self.role.startswith("w") else None,
                              self if self.role.startswith("lambda") else None)
        return {"floors": not any(v.citation.endswith("floor") for v in rep.violations),
                "monotone": not any(v.citation.endswith("monotone") for v in rep.violations)}

    def to_dict(self) -> dict:
        return {"role": self.role, "values": [_value_str(v) for v in self.values],
                "provenance": self.provenance}

    @classmethod
    def from_dict(cls, d: dict) -> "ExponentPrefix":
        return cls(d["role"], [_parse_value(v) for v in d["values"]], d.get("provenance", "user"))


def _value_str(v):
    if is_inf(v):
        return "inf"
    if isinstance(v, Interval):
        return [str(v.lo), str(v.hi)]
    return str(v)


def _parse_value(v):
    if isinstance(v, list):
        return Interval(Fraction(v[0]), Fraction(v[1]))
    return to_ext(v)


@dataclass(frozen=True)
class Violation:
    citation: str
    indices: tuple
    lhs: object
    rhs: object

    def __str__(self) -> str:
        return f"{self.citation} at {self.indices}: {_value_str(self.lhs)} vs {_value_str(self.rhs)}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def citations(self) -> set:
        return {v.citation for v in self.violations}

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "violations": [{"citation": v.citation, "indices": list(v.indices),
                                "lhs": _value_str(v.lhs), "rhs": _value_str(v.rhs)}
                               for v in self.violations]}


# ---------------------------------------------------------------- bound formulas


def khintchine_bounds(n: int, w):
    if is_inf(w):
        return (INF if n == 1 else Fraction(1, n - 1)), INF
    lo = _mono(lambda v: v / ((n - 1) * v + n), w)
    hi = _mono(lambda v: (v - n + 1) / n, w)
    return lo, hi


def successive_minima_bound(n: int, m: int, w):
    """Lower bound for ``lambda_{m+n}`` from ``w_n`` (``m, n >= 1``)."""
    if is_inf(w):
        return INF if n == 1 else Fraction(1, n - 1)
    return _mono(lambda v: (v - m) / (m + n + (n - 1) * v), w)


def general_transfer_bound(n: int, N: int, w):
    """Upper bound on ``lambda_N`` from finite ``w_n`` with floor substitution,
    or ``None`` when not applicable."""
    if is_inf(w) or N < math.ceil(ext_hi(w)) + n - 1:
        return None
    gap = (N - n + 1) - w
    return _max2(Fraction(1, n), recip(gap) if ext_lo(gap) >= 0 else None)


def reciprocal_transfer_bound(n: int, N: int, w):
    if is_inf(w) or N < math.ceil(ext_hi(w)) + 2 * n - 1:
        return None
    return Fraction(1, n)


def _mono(f, x):
    if isinstance(x, Interval):
        a, b = f(x.lo), f(x.hi)
        return Interval(min(a, b), max(a, b))
    return f(x)


def _max2(a, b):
    if b is None:
        return a
    if is_inf(a) or is_inf(b):
        return INF
    if isinstance(a, Interval) or isinstance(b, Interval):
        return Interval(max(ext_lo(a), ext_lo(b)), max(ext_hi(a), ext_hi(b)))
    return max(a, b)


def _below(x, bound) -> bool:
    """Certified ``x < bound``."""
    return ext_lt(x, bound)


# ---------------------------------------------------------------- validation


def validate_prefix(w_prefix: Optional[ExponentPrefix] = None,
                    lambda_prefix: Optional[ExponentPrefix] = None) -> ValidationReport:
    rep = ValidationReport()
    add = rep.violations.append
    w = w_prefix.values if w_prefix is not None else None
    lam = lambda_prefix.values if lambda_prefix is not None else None

    if w is not None:
        for n, v in enumerate(w, start=1):
            if _below(v, n):
                add(Violation(C_W_FLOOR, (n,), v, Fraction(n)))
            if n > 1 and _below(v, w[n - 2]):
                add(Violation(C_W_MONO, (n - 1, n), w[n - 2], v))
    if lam is not None:
        K = len(lam)
        for n, v in enumerate(lam, start=1):
            if _below(v, Fraction(1, n)):
                add(Violation(C_L_FLOOR, (n,), v, Fraction(1, n)))
            if n > 1 and _below(lam[n - 2], v):
                add(Violation(C_L_MONO, (n - 1, n), lam[n - 2], v))
        for k in range(1, K + 1):
            lk = lam[k - 1]
            for q in range(2, K // k + 1):
                if is_inf(lk):
                    bound = INF
                else:
                    bound = _mono(lambda v: (v - q + 1) / q, lk)
                if _below(lam[q * k - 1], bound):
                    add(Violation(C_MULT, (k, q * k), lam[q * k - 1], bound))
    if w is not None and lam is not None:
        K = min(len(w), len(lam))
        for n in range(1, K + 1):
            lo, hi = khintchine_bounds(n, w[n - 1])
            v = lam[n - 1]
            if _below(v, lo):
                add(Violation(C_KHIN, (n,), v, lo))
            if _below(hi, v):
                add(Violation(C_KHIN, (n,), v, hi))
        for n in range(1, K + 1):
            wn = w[n - 1]
            for N in range(1, K + 1):
                v = lam[N - 1]
                if N > n:
                    b = successive_minima_bound(n, N - n, wn)
                    if _below(v, b):
                        add(Violation(C_SM, (n, N), v, b))
                b = reciprocal_transfer_bound(n, N, wn)
                if b is not None and _below(b, v):
                    add(Violation(C_RECIP, (n, N), v, b))
                b = general_transfer_bound(n, N, wn)
                if b is not None and _below(b, v):
                    add(Violation(C_GEN, (n, N), v, b))
    return rep


# ---------------------------------------------------------------- aggregates


def _tail(values, window):
    K = len(values)
    return list(range(K - window + 1, K + 1))


def aggregates_from_prefix(w_prefix: Optional[ExponentPrefix], lambda_prefix: Optional[ExponentPrefix],
                           tail_window: int) -> AggregateQuantities:
    """Finite-prefix estimators of the limit quantities; always marked ``estimate``."""
    K = len(w_prefix or lambda_prefix or [])
    if tail_window < 2 or K < tail_window:
        raise DomainError("need K >= tail_window >= 2")
    flags = []
    w_bar = w_under = tau = None
    lam_bar = lam_under = None
    if w_prefix is not None:
        idx = _tail(w_prefix.values, tail_window)
        ratios = [INF if is_inf(w_prefix.at(n)) else ext_lo(w_prefix.at(n)) / n for n in idx]
        w_bar = INF if any(is_inf(r) for r in ratios) else max(ratios)
        w_under = INF if all(is_inf(r) for r in ratios) else min(r for r in ratios if not is_inf(r))
        if _diverging(ratios):
            flags.append("w_n/n non-convergent prefix")
        logs = []
        for n in idx:
            if n < 2:
                continue
            v = w_prefix.at(n)
            logs.append(INF if is_inf(v) else math.log(ext_lo(v)) / math.log(n))
        if logs:
            t = max(logs)
            tau = INF if is_inf(t) else max(Fraction(1), Fraction(repr(round(t, 9))))
    if lambda_prefix is not None:
        idx = _tail(lambda_prefix.values, tail_window)
        prods = [INF if is_inf(lambda_prefix.at(n)) else n * ext_lo(lambda_prefix.at(n)) for n in idx]
        lam_bar = INF if any(is_inf(p) for p in prods) else max(prods)
        lam_under = INF if all(is_inf(p) for p in prods) else min(p for p in prods if not is_inf(p))
        if _diverging(prods):
            flags.append("n*lambda_n non-convergent prefix")
    sigma = theta = None
    if tau is not None:
        theta = recip(tau)
        sigma = -theta
    return AggregateQuantities(w_bar=w_bar, w_under=w_under, lambda_bar=lam_bar,
                               lambda_under=lam_under, tau=tau, sigma=sigma, theta=theta,
                               estimate=True, tail_window=tail_window, flags=tuple(flags))


def _diverging(seq) -> bool:
    finite = [x for x in seq if not is_inf(x)]
    if len(finite) < 2 or len(finite) != len(seq):
        return False
    inc = all(b > a for a, b in zip(finite, finite[1:]))
    return inc and finite[-1] > Fraction(5, 4) * finite[0]


TAU_T_THRESHOLD = 1.25


def growth_order(w_prefix: ExponentPrefix) -> Optional[float]:
    """Least-squares slope of ``log w_n`` against ``log n`` over the second half.

    Unlike the tail maximum of ``log w_n / log n`` this is not inflated by a
    large constant factor, so it separates ``w_n ~ c n`` from ``w_n ~ n^tau``.
    """
    K = len(w_prefix)
    pts = [(math.log(n), math.log(ext_lo(w_prefix.at(n))))
           for n in range(max(2, K // 2), K + 1) if not is_inf(w_prefix.at(n))]
    if len(pts) < 3:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    return sum((x - mx) * (y - my) for x, y in pts) / sum((x - mx) ** 2 for x, _ in pts)


def classify_prefix(w_prefix: ExponentPrefix, lambda_prefix: ExponentPrefix,
                    tail_window: int = 10) -> MahlerClass:
    """Heuristic class of a finite prefix pair, cross-checked by :func:`classify`.

    The U-type is read off from the first infinite ``w_n`` and a constant
    ``lambda`` tail; S versus T uses the growth order of ``w_n``.
    """
    lam_tail = [lambda_prefix.at(n) for n in _tail(lambda_prefix.values, tail_window)]
    w_vals = w_prefix.values
    first_inf = next((n for n, v in enumerate(w_vals, start=1) if is_inf(v)), None)
    if all(is_inf(v) for v in lam_tail):
        return classify(ClassifyData(lim_lambda=INF, first_infinite_w=first_inf))
    if first_inf is not None:
        lim = lam_tail[-1] if all(v == lam_tail[-1] for v in lam_tail) else None
        return classify(ClassifyData(lim_lambda=lim, first_infinite_w=first_inf))
    agg = aggregates_from_prefix(w_prefix, lambda_prefix, tail_window)
    order = growth_order(w_prefix)
    growing = order is not None and order >= TAU_T_THRESHOLD
    return classify(ClassifyData(lim_lambda=Fraction(0),
                                 limsup_n_lambda=INF if growing else agg.lambda_bar,
                                 all_w_finite=True))


# ---------------------------------------------------------------- generator


def _rat(x: float, den: int = 100) -> Fraction:
    return Fraction(round(x * den), den)


def _generate_w(rng: random.Random, K: int, target: MahlerClass) -> list:
    w = []
    if target.kind == "U" and target.m == 1:
        return [INF] * K
    if target.kind == "S":
        c = rng.uniform(1.2, 3.0)
        for n in range(1, K + 1):
            v = max(Fraction(n), _rat(c * n + rng.random()))
            w.append(max(v, w[-1]) if w else v)
    elif target.kind == "T":
        tau = rng.uniform(1.5, 2.5)
        for n in range(1, K + 1):
            v = max(Fraction(n), _rat(n ** tau * (1 + 0.2 * rng.random())))
            w.append(max(v, w[-1]) if w else v)
    else:
        m = target.m
        for n in range(1, K + 1):
            if n >= m:
                w.append(INF)
            else:
                v = max(Fraction(n), _rat(n + rng.random() * 0.9))
                w.append(max(v, w[-1]) if w else v)
    return w


def _w_only_bounds(w: list):
    """Per-index lower and upper bounds on ``lambda_N`` that depend on ``w`` only."""
    K = len(w)
    lower = [Fraction(1, N) for N in range(1, K + 1)]
    upper = [INF] * K
    for N in range(1, K + 1):
        lo, hi = khintchine_bounds(N, w[N - 1])
        lower[N - 1] = _max2(lower[N - 1], lo)
        upper[N - 1] = _min2(upper[N - 1], hi)
    for n in range(1, K + 1):
        for N in range(1, K + 1):
            if N > n:
                lower[N - 1] = _max2(lower[N - 1], successive_minima_bound(n, N - n, w[n - 1]))
            for b in (reciprocal_transfer_bound(n, N, w[n - 1]), general_transfer_bound(n, N, w[n - 1])):
                if b is not None:
                    upper[N - 1] = _min2(upper[N - 1], b)
    # non-increasing lambda: lower bounds propagate backwards, upper bounds forwards
    for N in range(K - 1, 0, -1):
        lower[N - 1] = _max2(lower[N - 1], lower[N])
    for N in range(2, K + 1):
        upper[N - 1] = _min2(upper[N - 1], upper[N - 2])
    return lower, upper


def _min2(a, b):
    if is_inf(a):
        return b
    if is_inf(b):
        return a
    return min(a, b)


def _pick(rng: random.Random, lo, hi, bias: tuple) -> object:
    if is_inf(lo):
        return INF
    if lo == hi:
        return lo
    if is_inf(hi):
        hi = lo + 2
    x = lo + (hi - lo) * Fraction(rng.uniform(*bias)).limit_denominator(10**4)
    y = Fraction(math.ceil(x * 10**4), 10**4)
    return y if lo <= y <= hi else x


def generate_admissible(seed: int, K: int, class_target) -> tuple[ExponentPrefix, ExponentPrefix]:
    """Deterministic pseudo-random admissible ``(w, lambda)`` prefix pair of length ``K``."""
    if K < 1:
        raise DomainError("K must be positive")
    target = MahlerClass.parse(class_target) if isinstance(class_target, str) else class_target
    bias = {"S": (0.0, 0.2), "T": (0.6, 0.95)}.get(target.kind, (0.0, 0.5))
    for attempt in range(200):
        rng = random.Random(f"{seed}:{K}:{target.label}:{attempt}")
        w = _generate_w(rng, K, target)
        lower, upper = _w_only_bounds(w)
        if any(ext_lt(upper[i], lower[i]) for i in range(K)):
            continue
        lam: list = []
        ok = True
        for N in range(1, K + 1):
            lo = lower[N - 1]
            hi = upper[N - 1]
            if lam:
                hi = _min2(hi, lam[-1])
            for k in range(1, N):
                q = -(-N // k)
                lk = lam[k - 1]
                lo = _max2(lo, INF if is_inf(lk) else (lk - q + 1) / q)
            # keep later multiple-index constraints satisfiable
            for q in range(2, K // N + 1):
                cap = upper[q * N - 1]
                if not is_inf(cap):
                    hi = _min2(hi, q * cap + q - 1)
            if ext_lt(hi, lo):
                ok = False
                break
            lam.append(_pick(rng, lo, hi, bias))
        if ok:
            return (ExponentPrefix("w", w, "generated"), ExponentPrefix("lambda", lam, "generated"))
    raise RuntimeError(f"could not generate an admissible prefix for {target} (seed {seed})")


# ---------------------------------------------------------------- mutations


MUTATIONS = {
    "w_below_floor": C_W_FLOOR,
    "w_decreasing": C_W_MONO,
    "lambda_below_floor": C_L_FLOOR,
    "lambda_increasing": C_L_MONO,
    "above_khintchine": C_KHIN,
    "below_khintchine": C_KHIN,
    "multiple_index": C_MULT,
    "reciprocal_transfer": C_RECIP,
    "general_transfer": C_GEN,
    "successive_minima": C_SM,
}


def mutate(w: ExponentPrefix, lam: ExponentPrefix, kind: str, rng: random.Random):
    """Break one relation by changing a single value.  Returns ``None`` when the
    pair offers no place to apply this mutation."""
    wv, lv = list(w.values), list(lam.values)
    K = len(wv)
    finite = lambda x: not is_inf(x)
    choices = []
    if kind == "w_below_floor":
        choices = [(n, "w", Fraction(2 * n - 1, 2)) for n in range(1, K + 1)]
    elif kind == "w_decreasing":
        choices = [(n, "w", (n + wv[n - 2]) / 2) for n in range(2, K + 1)
                   if finite(wv[n - 2]) and wv[n - 2] > n]
    elif kind == "lambda_below_floor":
        choices = [(n, "l", Fraction(1, 2 * n)) for n in range(1, K + 1)]
    elif kind == "lambda_increasing":
        choices = [(n, "l", lv[n - 2] + 1) for n in range(2, K + 1) if finite(lv[n - 2])]
    elif kind == "above_khintchine":
        choices = [(n, "l", khintchine_bounds(n, wv[n - 1])[1] + 1) for n in range(1, K + 1)
                   if finite(wv[n - 1])]
    elif kind == "below_khintchine":
        for n in range(2, K + 1):
            lo = khintchine_bounds(n, wv[n - 1])[0]
            if lo > Fraction(1, n):
                choices.append((n, "l", (lo + Fraction(1, n)) / 2))
    elif kind == "multiple_index":
        for k in range(1, K + 1):
            for q in range(2, K // k + 1):
                lk = lv[k - 1]
                if finite(lk):
                    b = (lk - q + 1) / q
                    if b > Fraction(1, q * k):
                        choices.append((q * k, "l", (b + Fraction(1, q * k)) / 2))
    elif kind == "reciprocal_transfer":
        for n in range(1, K + 1):
            if finite(wv[n - 1]):
                N = math.ceil(wv[n - 1]) + 2 * n - 1
                if N <= K:
                    choices.append((N, "l", Fraction(1, n) + Fraction(1, 100)))
    elif kind == "general_transfer":
        for n in range(1, K + 1):
            for N in range(1, K + 1):
                b = general_transfer_bound(n, N, wv[n - 1])
                if b is not None and finite(b):
                    choices.append((N, "l", b + Fraction(1, 100)))
    elif kind == "successive_minima":
        for n in range(1, K + 1):
            for N in range(n + 1, K + 1):
                b = successive_minima_bound(n, N - n, wv[n - 1])
                if finite(b) and b > Fraction(1, N):
                    choices.append((N, "l", (b + Fraction(1, N)) / 2))
    else:
        raise DomainError(f"unknown mutation {kind!r}")
    if not choices:
        return None
    n, which, value = rng.choice(choices)
    if which == "w":
        wv[n - 1] = value
    else:
        lv[n - 1] = value
    return ExponentPrefix("w", wv, "user"), ExponentPrefix("lambda", lv, "user")


# ---------------------------------------------------------------- JSON


def dump_prefixes(prefixes: Sequence[ExponentPrefix]) -> str:
    return json.dumps({"prefixes": [p.to_dict() for p in prefixes]}, indent=2)


def load_prefixes(text: str) -> dict:
    """Parse prefix JSON; returns ``{"w": ExponentPrefix, "lambda": ExponentPrefix}`` (subset)."""
    data = json.loads(text)
    if isinstance(data, dict) and "prefixes" in data:
        items = data["prefixes"]
    elif isinstance(data, dict):
        items = [data]
    else:
        items = data
    out = {}
    for item in items:
        p = ExponentPrefix.from_dict(item)
        out[p.role] = p
    return out
