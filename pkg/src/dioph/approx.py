"""Exhaustive best-approximation searches for concrete numbers.

Searches run in two passes.  A vectorised float pass scores every
candidate and keeps those within a rigorous rounding margin of the float
minimum; the survivors are then ranked with exact interval arithmetic,
refining the oracle until the winner is certified.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .catalog import NumberOracle
from .errors import BudgetError, DomainError, PrecisionError, RationalInputError
from .numeric import Interval, log_enclosure

BUDGET = 10**9
BLOCK = 1 << 18
LAMBDA_CEILING = 4
MAX_BITS = 1 << 15
HEURISTIC = "finite-X heuristic"


def thread_count(threads: Optional[int] = None) -> int:
    if threads is None:
        threads = int(os.environ.get("DIOPH_THREADS", "1") or 1)
    return max(1, int(threads))


@dataclass
class BestApproxRecord:
    X: int
    side: str  # "simultaneous" or "polynomial"
    witness: tuple
    error: Interval
    sample_exponent: Optional[Interval]

    def witness_str(self) -> str:
        if self.side == "simultaneous":
            x, ys = self.witness
            return f"x={x};y=" + ",".join(str(y) for y in ys)
        return "P=" + ",".join(str(c) for c in self.witness)

    def to_dict(self) -> dict:
        se = self.sample_exponent
        return {"X": self.X, "side": self.side, "witness": self.witness_str(),
                "error": [sci_str(self.error.lo), sci_str(self.error.hi)],
                "sample_exponent": None if se is None else [sci_str(se.lo), sci_str(se.hi)]}


def sci_str(x, digits: int = 12) -> str:
    """Scientific notation computed exactly, so it survives values far below the float range."""
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = len(str(x.numerator)) - len(str(x.denominator))
    if x < Fraction(10) ** e:
        e -= 1
    m = round(x / Fraction(10) ** e * 10 ** (digits - 1))
    if m >= 10**digits:
        m //= 10
        e += 1
    d = str(m)
    return f"{sign}{d[0]}.{d[1:]}e{e:+03d}"


def sample_exponent(error: Interval, X: int) -> Optional[Interval]:
    """Enclosure of ``-log(error) / log(X)``; ``None`` for ``X = 1``."""
    if X < 2 or error.lo <= 0:
        return None
    le = log_enclosure(error)
    lx = log_enclosure(Fraction(X))
    num = Interval(-le.hi, -le.lo)
    return num / lx


# ---------------------------------------------------------------- float pass


def _float_powers(oracle: NumberOracle, n: int) -> np.ndarray:
    return np.array([float(p.mid) for p in oracle.powers(n, Fraction(1, 2**60))])


def _sim_margin(z: np.ndarray, X: int) -> float:
    # |computed - true| <= x (|z_i| 2^-51 + 2^-59) per coordinate; two-sided comparison doubles it
    return 2 * X * (float(np.max(np.abs(z))) * 2.0**-51 + 2.0**-59)


def _sim_block(z: np.ndarray, lo: int, hi: int, margin: float):
    xs = np.arange(lo, hi + 1, dtype=np.float64)
    err = np.zeros_like(xs)
    for zi in z:
        t = xs * zi
        np.maximum(err, np.abs(t - np.rint(t)), out=err)
    m = float(err.min())
    idx = np.nonzero(err <= m + margin)[0]
    return m, [(lo + int(i), float(err[i])) for i in idx]


def _blocks(points: Sequence[int], block: int = BLOCK) -> list[tuple[int, int]]:
    """Split ``[1, max(points)]`` into ranges that end on every point."""
    out, start = [], 1
    for p in sorted(set(points)):
        while start <= p:
            end = min(p, start + block - 1)
            out.append((start, end))
            start = end + 1
    return out


def _scan_simultaneous(oracle: NumberOracle, n: int, schedule: Sequence[int], threads: Optional[int]):
    """Per schedule point: (float minimum, candidate x list) over ``1 <= x <= X``."""
    Xmax = max(schedule)
    if Xmax * n > BUDGET:
        raise BudgetError(f"{Xmax} x {n} evaluations exceed the budget {BUDGET}")
    z = _float_powers(oracle, n)
    margin = _sim_margin(z, Xmax)
    blocks = _blocks(schedule)
    workers = thread_count(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda b: _sim_block(z, b[0], b[1], margin), blocks))
    else:
        results = [_sim_block(z, lo, hi, margin) for lo, hi in blocks]
    snapshots = {}
    best, cands = math.inf, []
    wanted = set(schedule)
    for (lo, hi), (m, c) in zip(blocks, results):
        if m < best:
            best = m
        cands = [t for t in cands + c if t[1] <= best + margin]
        if hi in wanted:
            snapshots[hi] = [x for x, _ in cands]
    return snapshots


# ---------------------------------------------------------------- exact ranking


def _sim_forms(oracle, n, x, eps):
    """Per coordinate: (error enclosure, integer form coefficients highest-first)."""
    Z = oracle.powers(n, eps)
    out = []
    for i, zi in enumerate(Z, start=1):
        t = zi * x
        y = math.floor(t.mid + Fraction(1, 2))
        e = abs(t - y)
        form = [x] + [0] * (i - 1) + [-y]
        out.append((e, form, y))
    return out


def _max_enclosure(encs: list[Interval]) -> Interval:
    return Interval(max(e.lo for e in encs), max(e.hi for e in encs))


def _forms_equal(oracle, fa, fb) -> bool:
    L = max(len(fa), len(fb))
    a = [0] * (L - len(fa)) + list(fa)
    b = [0] * (L - len(fb)) + list(fb)
    for s in (1, -1):
        if oracle.zero_test([u - s * v for u, v in zip(a, b)]):
            return True
    return False


def _rank(oracle, keys, evaluate, X, tie_key):
    """Certified minimiser among candidate ``keys``.

    ``evaluate(key, eps)`` returns ``(enclosure, forms)`` where ``forms`` lists
    integer forms whose absolute value may realise the enclosure.  Exact ties
    are settled with ``oracle.zero_test`` and then ``tie_key``.
    """
    bits = max(64, math.ceil((LAMBDA_CEILING + 2) * math.log2(max(X, 2))))
    while True:
        eps = Fraction(1, 2**bits)
        vals = {k: evaluate(k, eps) for k in keys}
        best_hi = min(v[0].hi for v in vals.values())
        alive = [k for k in keys if vals[k][0].lo <= best_hi]
        ref = min(alive, key=tie_key)
        enc = vals[ref][0]
        tied = len(alive) == 1 or all(
            any(_forms_equal(oracle, fa, fb) for fa in vals[ref][1] for fb in vals[k][1])
            for k in alive if k != ref)
        if tied and enc.lo > 0 and enc.width < enc.lo / 100:
            return ref, enc
        if bits >= MAX_BITS:
            break
        keys = alive
        bits *= 2
    if tied:
        return ref, enc
    raise PrecisionError(f"cannot separate {len(alive)} candidates within {MAX_BITS} bits")


def _sim_evaluate(oracle, n):
    def evaluate(x, eps):
        rows = _sim_forms(oracle, n, x, eps)
        enc = _max_enclosure([r[0] for r in rows])
        forms = [r[1] for r in rows if r[0].hi >= enc.lo]
        return enc, forms
    return evaluate


def _sim_record(oracle, n, X, cands) -> BestApproxRecord:
    x, enc = _rank(oracle, cands, _sim_evaluate(oracle, n), X, tie_key=lambda x: x)
    ys = tuple(r[2] for r in _sim_forms(oracle, n, x, Fraction(1, 2**80)))
    return BestApproxRecord(X, "simultaneous", (x, ys), enc, sample_exponent(enc, X))


def _check_rational(oracle: NumberOracle, n: int, X: int) -> None:
    if oracle.is_rational:
        q = oracle.enclose(Fraction(1, 2**64))
        if q.is_point and q.lo.denominator ** n <= X:
            raise RationalInputError("rational input: an exact zero error occurs within the search range")


def best_simultaneous(oracle: NumberOracle, n: int, X: int, threads: Optional[int] = None) -> BestApproxRecord:
    """Minimum over ``1 <= x <= X`` of ``max_i |zeta^i x - y_i|`` (ties: smallest ``x``)."""
    if n < 1 or X < 1:
        raise DomainError("need n >= 1 and X >= 1")
    _check_rational(oracle, n, X)
    snap = _scan_simultaneous(oracle, n, [X], threads)
    return _sim_record(oracle, n, X, snap[X])


# ---------------------------------------------------------------- estimates


def geometric_schedule(xmax: int, ratio: float = 1.5, points: int = 8, hints: Sequence[int] = ()) -> list[int]:
    """``points`` bounds growing by ``ratio`` and ending at ``xmax``, plus any hints in range."""
    if points < 1 or ratio <= 1:
        raise DomainError("need points >= 1 and ratio > 1")
    pts = [max(2, int(round(xmax / ratio ** k))) for k in range(points)]
    lo = min(pts)
    pts.extend(h for h in hints if lo <= h <= xmax)
    return sorted(set(pts))


@dataclass
class LambdaEstimate:
    n: int
    limsup_estimate: Interval
    uniform_estimate: Interval
    records: list = field(default_factory=list)
    label: str = HEURISTIC

    def to_dict(self) -> dict:
        return {"n": self.n, "label": self.label,
                "limsup_estimate": [sci_str(self.limsup_estimate.lo), sci_str(self.limsup_estimate.hi)],
                "uniform_estimate": [sci_str(self.uniform_estimate.lo), sci_str(self.uniform_estimate.hi)],
                "records": [r.to_dict() for r in self.records]}


def lambda_estimate(oracle: NumberOracle, n: int, schedule: Sequence[int],
                    threads: Optional[int] = None) -> LambdaEstimate:
    """Heuristic ``lambda_n`` and uniform-exponent estimates from a schedule of bounds.

    Both estimates use the tail half of the schedule: the limsup estimate is
    the largest sample there and the uniform estimate the smallest.  Small
    bounds are dropped because their samples carry an additive bias of order
    ``1/log X``.
    """
    schedule = sorted(set(int(x) for x in schedule))
    if len(schedule) < 8:
        raise DomainError("schedule needs at least 8 points")
    if schedule[0] < 2:
        raise DomainError("schedule points must be at least 2")
    _check_rational(oracle, n, schedule[-1])
    snaps = _scan_simultaneous(oracle, n, schedule, threads)
    records = [_sim_record(oracle, n, X, snaps[X]) for X in schedule]
    tail = records[len(records) // 2:]
    hi = max(tail, key=lambda r: r.sample_exponent.hi).sample_exponent
    lo = min(tail, key=lambda r: r.sample_exponent.lo).sample_exponent
    return LambdaEstimate(n, hi, lo, records)


# ---------------------------------------------------------------- continued fractions


@dataclass
class CFResult:
    quotients: list
    convergents: list  # (p_k, q_k)
    samples: list  # log q_{k+1} / log q_k, a lower-bound sample for lambda_1
    exhausted: bool = False
    terminated: bool = False

    def to_dict(self) -> dict:
        return {"quotients": [str(a) for a in self.quotients],
                "convergents": [[str(p), str(q)] for p, q in self.convergents],
                "samples": [round(s, 12) for s in self.samples],
                "exhausted": self.exhausted, "terminated": self.terminated}


def _cf_of_interval(lo: Fraction, hi: Fraction, terms: int):
    out = []
    while len(out) < terms:
        a = math.floor(lo)
        if math.floor(hi) != a:
            return out, False
        out.append(a)
        if lo == hi == a:
            return out, True
        if lo == a:
            return out, False
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return out, False


def continued_fraction(oracle: NumberOracle, terms: int, max_digits: int = 20000) -> CFResult:
    """Certified partial quotients; returns the certified prefix when precision runs out."""
    if terms < 1:
        raise DomainError("terms must be positive")
    digits = 50
    while True:
        enc = oracle.enclose(Fraction(1, 10**digits))
        quotients, terminated = _cf_of_interval(enc.lo, enc.hi, terms)
        if len(quotients) >= terms or terminated or digits >= max_digits:
            break
        digits = min(2 * digits, max_digits)
    p0, q0, p1, q1 = 1, 0, 0, 1
    conv = []
    for a in quotients:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        conv.append((p0, q0))
    samples = [math.log(conv[k + 1][1]) / math.log(conv[k][1])
               for k in range(len(conv) - 1) if conv[k][1] >= 2]
    return CFResult(quotients, conv, samples,
                    exhausted=len(quotients) < terms and not terminated, terminated=terminated)


# ---------------------------------------------------------------- polynomials


def _poly_budget(n: int, X: int) -> None:
    if n > 3:
        raise BudgetError("polynomial search is limited to degree 3")
    if (2 * X + 1) ** (n + 1) > BUDGET:
        raise BudgetError(f"(2X+1)^(n+1) = {(2 * X + 1) ** (n + 1)} exceeds the budget {BUDGET}")


def _poly_block(oracle, z, n, X, lead, margin):
    """Float scores of every polynomial with leading coefficient ``lead``."""
    rng = np.arange(-X, X + 1, dtype=np.float64)
    grids = np.meshgrid(*([rng] * n), indexing="ij") if n else []
    val = np.full(grids[0].shape if n else (), lead * z[n], dtype=np.float64)
    for i, g in enumerate(grids):
        val = val + g * z[n - 1 - i]
    val = np.abs(np.atleast_1d(val)).ravel()
    coeffs = lambda k: (lead,) + tuple(int(c) for c in np.unravel_index(k, (2 * X + 1,) * n)) \
        if n else (lead,)
    shift = lambda t: (t[0],) + tuple(c - X for c in t[1:])
    if lead == 0:
        # keep one of P, -P (first nonzero coefficient positive); drops P = 0 too
        sign = np.zeros(val.shape, dtype=np.int64)
        for g in grids:
            sign = np.where(sign == 0, np.sign(g.ravel()).astype(np.int64), sign)
        val = np.where(sign > 0, val, np.inf)
    for k in np.nonzero(val <= margin / 2)[0]:
        c = shift(coeffs(int(k)))
        hit = oracle.zero_test(c)
        if hit:
            if oracle.is_rational:
                raise RationalInputError("rational input: a polynomial vanishes at the number")
            val[k] = np.inf
    m = float(val.min())
    idx = np.nonzero(val <= m + margin)[0]
    return m, [shift(coeffs(int(k))) for k in idx]


def best_polynomial(oracle: NumberOracle, n: int, X: int, threads: Optional[int] = None) -> BestApproxRecord:
    """Minimum of ``|P(zeta)|`` over nonzero integer ``P`` with ``deg P <= n`` and ``H(P) <= X``.

    Polynomials vanishing at ``zeta`` are skipped.  Ties keep the
    lexicographically greatest coefficient vector (highest degree first).
    """
    if n < 1 or X < 1:
        raise DomainError("need n >= 1 and X >= 1")
    _poly_budget(n, X)
    z = np.concatenate([[1.0], _float_powers(oracle, n)])
    margin = 2 * (n + 2) * X * float(np.sum(np.abs(z))) * 2.0**-51
    leads = list(range(0, X + 1))
    workers = thread_count(threads)
    job = lambda a: _poly_block(oracle, z, n, X, a, margin)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(job, leads))
    else:
        results = [job(a) for a in leads]
    best = min(m for m, _ in results)
    cands = [c for m, cs in results for c in cs]
    cands = [c for c in cands if _poly_float(z, c) <= best + margin]

    def evaluate(c, eps):
        Z = [Interval.point(Fraction(1))] + oracle.powers(n, eps)
        acc = Interval.point(Fraction(0))
        for i, coef in enumerate(c):
            acc = acc + Z[n - i] * coef
        return abs(acc), [list(c)]

    neg = lambda c: tuple(-v for v in c)
    c, enc = _rank(oracle, cands, evaluate, X, tie_key=neg)
    return BestApproxRecord(X, "polynomial", tuple(c), enc, sample_exponent(enc, X))


def _poly_float(z, c) -> float:
    n = len(c) - 1
    return abs(sum(coef * z[n - i] for i, coef in enumerate(c)))


# ---------------------------------------------------------------- CSV


CSV_COLUMNS = ["X", "witness", "error_lo", "error_hi", "sample_exponent_lo", "sample_exponent_hi"]


def records_csv(records: Sequence[BestApproxRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        se = r.sample_exponent
        w.writerow([r.X, r.witness_str(), sci_str(r.error.lo), sci_str(r.error.hi),
                    "" if se is None else sci_str(se.lo), "" if se is None else sci_str(se.hi)])
    return buf.getvalue()
