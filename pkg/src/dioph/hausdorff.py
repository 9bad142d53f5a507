"""Bounds on ``h_N(lam) = dim{zeta : lambda_N(zeta) >= lam}``.

All individual bounds are rational functions of ``lam``, so envelope
values are exact Fractions.  Some upper bounds are only known for the
strict-inequality dimension ``g_N(lam)``; they are tagged ``g`` and enter the
``h`` envelope only as limits from the left (``h_N(lam) <= g_N(lam')`` for every
``lam' < lam``).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .algebra import BoundResult
from .errors import DomainError
from .numeric import (DEFAULT_WIDTH, INF, Interval, decimal_str, is_inf, isolate_root,
                      sqrt_enclosure, to_ext, to_fraction)

LOWER_SOURCES = ("trivial_lower", "multiple", "beresnevich", "partition", "fixed_lambda", "bdv", "jarnik")
UPPER_SOURCES = ("trivial", "jarnik", "bdv", "reduction", "split", "even_half")
G_ONLY = frozenset({"reduction", "split", "even_half"})


def bern_dimension(n: int, w):
    """Dimension of ``{zeta : w_n(zeta) >= w}``: ``(n+1)/(w+1)``."""
    w = to_ext(w)
    if n < 1:
        raise DomainError("n must be positive")
    if is_inf(w):
        return Fraction(0)
    if w < n:
        raise DomainError(f"w = {w} is below the floor {n}")
    return Fraction(n + 1) / (w + 1)


def _lam(lam) -> Fraction:
    lam = to_fraction(lam)
    if lam <= 0:
        raise DomainError("lambda must be positive")
    return lam


def _b(value, kind, source, target, ok=True, *notes):
    return BoundResult(value if ok else None, kind, ok, source, target, tuple(notes))


# ---------------------------------------------------------------- partition


def partition(N: int) -> list[tuple[Fraction, object]]:
    """Intervals ``I_1 .. I_N`` (as ``[lo, hi)`` pairs, ``hi = INF`` for ``I_1``)."""
    if N < 2:
        raise DomainError("N must be at least 2")

    def lower_end(n):
        if n == 1:
            return Fraction(N + 2, 3 * N)
        return Fraction(N + 2, N + 2 * N * n + n - n * n)

    out = [(lower_end(1), INF)]
    for n in range(2, N + 1):
        out.append((lower_end(n), lower_end(n - 1)))
    return out


def partition_index(N: int, lam) -> int:
    lam = _lam(lam)
    if lam < Fraction(1, N):
        raise DomainError("lambda below 1/N lies outside the partition")
    for n, (lo, hi) in enumerate(partition(N), start=1):
        if lo <= lam and (is_inf(hi) or lam < hi):
            return n
    raise AssertionError("partition does not cover lambda")


def partition_expression(N: int, n: int, lam) -> Fraction:
    """``(1+n)(1+lam-n lam)/((1+lam)(N+1-n))``."""
    lam = _lam(lam)
    return Fraction(1 + n) * (1 + lam - n * lam) / ((1 + lam) * (N + 1 - n))


# ---------------------------------------------------------------- individual bounds


def multiple_lower(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    ok = lam >= Fraction(1, N)
    return _b(Fraction(2) / ((1 + lam) * N), "lower", "multiple", "h", ok)


def beresnevich_curve(N: int, lam) -> Fraction:
    """``(N+1)/(1+lam) - (N-1)``, evaluated anywhere (the extended curve)."""
    lam = _lam(lam)
    return Fraction(N + 1) / (1 + lam) - (N - 1)


def beresnevich_lower(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    ok = Fraction(1, N) <= lam < Fraction(3, 2 * N - 1)
    return _b(beresnevich_curve(N, lam), "lower", "beresnevich", "h", ok)


def partition_lower(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    if N < 2 or lam < Fraction(1, N):
        return _b(None, "lower", "partition", "h", False)
    n = partition_index(N, lam)
    return _b(partition_expression(N, n, lam), "lower", "partition", "h", True, f"n={n}")


def fixed_lambda_lower(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    if lam > 1 or N < math.floor(1 / lam):
        return _b(None, "lower", "fixed_lambda", "h", False)
    K = math.floor((1 + lam) / (2 * lam))
    if N + 1 - K <= 0:
        return _b(None, "lower", "fixed_lambda", "h", False)
    value = Fraction(1 + K) * (1 + lam - K * lam) / ((N + 1 - K) * (1 + lam))
    return _b(value, "lower", "fixed_lambda", "h", True, f"K={K}")


def bdv_value(lam) -> Fraction:
    lam = _lam(lam)
    return (2 - lam) / (1 + lam)


def bdv_lower(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    ok = N == 2 and Fraction(1, 2) <= lam <= 1
    return _b(bdv_value(lam), "lower", "bdv", "h", ok)


def bdv_upper(N: int, lam) -> BoundResult:
    lam = _lam(lam)
    ok = N >= 2 and Fraction(1, 2) <= lam <= 1
    return _b(bdv_value(lam), "upper", "bdv", "h", ok)


def jarnik(N: int, lam, kind: str) -> BoundResult:
    lam = _lam(lam)
    return _b(Fraction(2) / ((1 + lam) * N), kind, "jarnik", "h", lam > 1)


def reduction_upper(N: int, lam, left_limit: bool = False) -> BoundResult:
    """``g_N(lam) <= (k+1)/(N-2k+2)`` with ``k = ceil(1/lam)``, ``N >= 3k-1``.

    With ``left_limit`` the bound is taken at ``lam' -> lam-``, where
    ``ceil(1/lam') = floor(1/lam) + 1``; this is the form valid for ``h_N(lam)``.
    """
    lam = _lam(lam)
    if lam > 1:
        return _b(None, "upper", "reduction", "g", False)
    k = math.floor(1 / lam) + 1 if left_limit else math.ceil(1 / lam)
    if N < 3 * k - 1:
        return _b(None, "upper", "reduction", "g", False, f"requires N >= {3 * k - 1}")
    return _b(Fraction(k + 1, N - 2 * k + 2), "upper", "reduction", "g", True, f"k={k}")


def split_gamma(N: int, n: int) -> Fraction:
    return Fraction(N * N + 2 * n * n - 3 * N * n + 2 * N - 4 * n, (n + 1) * (N - 2 * n))


def split_threshold(N: int, n: int) -> Optional[Fraction]:
    gamma = split_gamma(N, n)
    den = (1 - gamma) * N + (2 * gamma - 1) * n
    return None if den <= 0 else 1 / den


def split_candidates(N: int) -> list[tuple[int, Fraction, Fraction]]:
    """``(n, threshold, bound)`` for every ``n`` with ``2 < N/n < 3``."""
    out = []
    for n in range(1, N):
        if 2 * n < N < 3 * n:
            t = split_threshold(N, n)
            if t is not None:
                out.append((n, t, Fraction(n + 1, N - n + 1)))
    return out


def split_upper(N: int, lam, strict: bool = False) -> BoundResult:
    """Best ``(n+1)/(N-n+1)`` over admissible ``n`` whose threshold is reached.

    ``strict`` requires ``lam`` to exceed the threshold, the form valid for ``h``.
    Ties go to the smaller bound, then the smaller ``n``.
    """
    lam = _lam(lam)
    best = None
    for n, t, bound in split_candidates(N):
        if lam > t or (lam == t and not strict):
            if best is None or (bound, n) < (best[2], best[0]):
                best = (n, t, bound)
    if best is None:
        return _b(None, "upper", "split", "g", False)
    return _b(best[2], "upper", "split", "g", True, f"n={best[0]}", f"threshold={best[1]}")


def even_half_upper(N: int, lam, strict: bool = False) -> BoundResult:
    """``g_N(2/N) <= (N+2)/(N+4)`` for even ``N``, hence for every larger ``lam``."""
    lam = _lam(lam)
    t = Fraction(2, N)
    ok = N % 2 == 0 and (lam > t or (lam == t and not strict))
    return _b(Fraction(N + 2, N + 4), "upper", "even_half", "g", ok)


def lower_bounds(N: int, lam) -> list[BoundResult]:
    lam = _lam(lam)
    if N < 1:
        raise DomainError("N must be positive")
    # exact results first, so they are reported when values tie
    return [
        jarnik(N, lam, "lower"),
        bdv_lower(N, lam),
        _b(Fraction(1), "lower", "trivial_lower", "h", lam <= Fraction(1, N)),
        multiple_lower(N, lam),
        beresnevich_lower(N, lam),
        partition_lower(N, lam),
        fixed_lambda_lower(N, lam),
    ]


def upper_bounds(N: int, lam, semantics: str = "g") -> list[BoundResult]:
    """All upper bounds.  ``semantics="g"`` evaluates g-only bounds at ``lam``;
    ``"h"`` uses their left limits."""
    lam = _lam(lam)
    h = semantics == "h"
    return [
        _b(Fraction(1), "upper", "trivial", "h", True),
        jarnik(N, lam, "upper"),
        bdv_upper(N, lam),
        reduction_upper(N, lam, left_limit=h),
        split_upper(N, lam, strict=h),
        even_half_upper(N, lam, strict=h),
    ]


def _best(bounds: Iterable[BoundResult], pick) -> Optional[BoundResult]:
    live = [b for b in bounds if b.applicable]
    if not live:
        return None
    return pick(live, key=lambda b: b.value)


# ---------------------------------------------------------------- envelopes


@dataclass(frozen=True)
class EnvelopePoint:
    N: int
    lam: Fraction
    lower: BoundResult
    upper: BoundResult
    lowers: tuple = ()
    uppers: tuple = ()
    extended_beresnevich: Optional[Fraction] = None

    @property
    def consistent(self) -> bool:
        return 0 <= self.lower.value <= self.upper.value <= 1


def envelope_point(N: int, lam) -> EnvelopePoint:
    lam = _lam(lam)
    lows = tuple(lower_bounds(N, lam))
    ups_g = tuple(upper_bounds(N, lam, "g"))
    ups_h = upper_bounds(N, lam, "h")
    lower = _best(lows, max) or _b(Fraction(0), "lower", "trivial_lower", "h", True)
    upper = _best(ups_h, min)
    return EnvelopePoint(N, lam, lower, upper, lows, ups_g, beresnevich_curve(N, lam))


def figure_data(N: int, grid: Iterable) -> list[EnvelopePoint]:
    pts = [envelope_point(N, lam) for lam in grid]
    return sorted(pts, key=lambda p: p.lam)


def uniform_grid(lo, hi, points: int) -> list[Fraction]:
    lo, hi = to_fraction(lo), to_fraction(hi)
    if points < 2 or lo <= 0 or hi <= lo:
        raise DomainError("invalid grid range")
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def csv_columns() -> list[str]:
    return (["N", "lambda"] + [f"lower_{s}" for s in LOWER_SOURCES] +
            ["beresnevich_extended"] + [f"upper_{s}" for s in UPPER_SOURCES] +
            ["lower_envelope", "upper_envelope"])


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_csv(points: list[EnvelopePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_columns())
    for p in points:
        low = {b.citation: b for b in p.lowers}
        up = {b.citation: b for b in p.uppers}
        row = [p.N, _frac_str(p.lam)]
        row += [decimal_str(low[s].value) if low[s].applicable else "" for s in LOWER_SOURCES]
        row.append(decimal_str(p.extended_beresnevich))
        row += [decimal_str(up[s].value) if up[s].applicable else "" for s in UPPER_SOURCES]
        row += [decimal_str(p.lower.value), decimal_str(p.upper.value)]
        writer.writerow(row)
    return buf.getvalue()


def envelope_violations(N: int, grid: Iterable) -> list[tuple[int, Fraction, Fraction, Fraction]]:
    return [(p.N, p.lam, p.lower.value, p.upper.value)
            for p in figure_data(N, grid) if not p.consistent]


def beresnevich_partition_crossing(N: int, bracket=(Fraction(3, 20), Fraction(19, 100)),
                                   width=DEFAULT_WIDTH) -> Interval:
    """Where the extended lower curve drops below the partition bound."""
    def f(x: Interval) -> Interval:
        lam = x.lo  # isolate_root evaluates at points only
        return Interval.point(beresnevich_curve(N, lam) - partition_lower(N, lam).value)
    return isolate_root(f, Interval(*map(to_fraction, bracket)), width)


# ---------------------------------------------------------------- asymptotics


def asymptotic_ratio_bounds(lt, width=DEFAULT_WIDTH) -> tuple[BoundResult, BoundResult, BoundResult]:
    """Leading terms for ``h_N(lt/N)`` as ``N -> inf`` (``O(1/N)`` corrections omitted)."""
    lt = to_fraction(lt)
    width = to_fraction(width)
    if lt < 1:
        raise DomainError("ratio parameter must be at least 1")
    notes = ("asymptotic", "O(1/N) correction unquantified")
    root = sqrt_enclosure(lt * lt - lt, width / 8)
    lower = BoundResult((2 * lt - 1 + 2 * root).reciprocal(), "lower", True, "ratio_lower",
                        "h", notes)
    if lt >= 3:
        rec = BoundResult(1 / (lt - 2), "upper", True, "ratio_upper_reciprocal", "h", notes)
    else:
        rec = BoundResult(None, "upper", False, "ratio_upper_reciprocal", "h", ("requires ratio >= 3",))
    if lt >= 2:
        r2 = sqrt_enclosure(4 * lt * lt - 8 * lt + 1, width / 8)
        spl = BoundResult(2 * lt / (2 * lt - 1 + r2), "upper", True, "ratio_upper_split", "h", notes)
    else:
        spl = BoundResult(None, "upper", False, "ratio_upper_split", "h", ("requires ratio >= 2",))
    return lower, rec, spl


def ratio_upper_crossing(width=DEFAULT_WIDTH) -> Interval:
    """Ratio beyond which the reciprocal upper bound beats the split one."""
    def f(x: Interval) -> Interval:
        _, rec, spl = asymptotic_ratio_bounds(x.lo, width / 16)
        return Interval.coerce(rec.value) - spl.value
    return isolate_root(f, Interval(Fraction(3), Fraction(4)), width)
