"""Parametric successive minima of the approximation bodies and an identity audit.

``psi_n,j(Q)`` is the least ``eta`` for which the primal body
``|x| <= Q^(1+eta)``, ``max_i |zeta^i x - y_i| <= Q^(-1/n+eta)`` holds ``j``
linearly independent integer points.  The dual body uses
``H(P) <= Q^(1/n+eta)``, ``|P(zeta)| <= Q^(-1+eta)``.

Each integer point has its own level ``eta(v)``; the ``j``-th minimum is
what a greedy scan in increasing ``eta`` returns at its ``j``-th
independent pick.  Running the scan once on certified lower levels and once
on upper levels brackets the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .approx import BestApproxRecord, _float_powers
from .catalog import NumberOracle
from .errors import BudgetError, DomainError
from .numeric import Interval

PSI_BUDGET = 10**7
SLACK = 1e-12


@dataclass
class PsiSample:
    n: int
    j: int
    Q: float
    psi: Interval
    side: str  # "primal" or "dual"
    witnesses: list = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= self.j <= self.n + 1:
            raise DomainError("j must lie in [1, n+1]")
        if self.side not in ("primal", "dual"):
            raise DomainError("side must be primal or dual")

    @property
    def value(self) -> float:
        return float(self.psi.mid)

    def exponent(self) -> float:
        """Exponent implied by this sample through the parametric identities."""
        n = self.n
        if self.side == "primal":
            return (n + 1) / n / (1 + self.value) - 1
        return (n + 1) / n / (1 / n + self.value) - 1

    def to_dict(self) -> dict:
        return {"n": self.n, "j": self.j, "Q": self.Q, "side": self.side,
                "psi": [float(self.psi.lo), float(self.psi.hi)],
                "witnesses": [list(w) for w in self.witnesses]}


class _Basis:
    """Incremental exact rank test for integer vectors."""

    def __init__(self):
        self.rows: list[tuple[int, list[Fraction]]] = []

    def add(self, v: Sequence[int]) -> bool:
        r = [Fraction(c) for c in v]
        for piv, row in self.rows:
            if r[piv]:
                f = r[piv] / row[piv]
                r = [a - f * b for a, b in zip(r, row)]
        piv = next((i for i, c in enumerate(r) if c), None)
        if piv is None:
            return False
        self.rows.append((piv, r))
        return True


def _greedy(keys: np.ndarray, vectors, j: int):
    basis, picks = _Basis(), []
    for k in np.argsort(keys, kind="stable"):
        v = vectors(int(k))
        if basis.add(v):
            picks.append(int(k))
            if len(picks) == j:
                return float(keys[k]), picks
    raise DomainError("candidate set does not span enough dimensions")


def _primal_candidates(z: np.ndarray, n: int, logQ: float, xmax: int):
    xs = np.arange(1, xmax + 1, dtype=np.float64)
    combos = list(np.ndindex(*([2] * n)))
    t = np.outer(xs, z)  # x * zeta^i
    fl = np.floor(t)
    delta = xs[:, None] * (np.abs(z) * 2.0**-51 + 2.0**-59)
    lo_keys, hi_keys, vecs = [], [], []
    for combo in combos:
        y = fl + np.array(combo)
        e = np.abs(t - y)
        e_lo = np.max(np.maximum(e - delta, 0.0), axis=1)
        e_hi = np.max(e + delta, axis=1)
        with np.errstate(divide="ignore"):
            size = np.log(xs) / logQ - 1
            lo_keys.append(np.maximum(size, np.log(e_lo) / logQ + 1 / n) - SLACK)
            hi_keys.append(np.maximum(size, np.log(e_hi) / logQ + 1 / n) + SLACK)
        vecs.append(y)
    lo = np.concatenate(lo_keys + [np.full(n, 1 / n)])
    hi = np.concatenate(hi_keys + [np.full(n, 1 / n)])
    N = len(xs)

    def vector(k):
        if k >= len(combos) * N:
            u = [0] * (n + 1)
            u[1 + k - len(combos) * N] = 1
            return u
        c, i = divmod(k, N)
        return [i + 1] + [int(v) for v in vecs[c][i]]

    return lo, hi, vector


def _dual_candidates(z: np.ndarray, n: int, logQ: float, hmax: int):
    # rows: coefficient vectors (c_n, ..., c_1) with the first nonzero entry positive
    rng = np.arange(-hmax, hmax + 1)
    grid = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
    sign = np.zeros(len(grid), dtype=np.int64)
    for col in range(n):
        sign = np.where(sign == 0, np.sign(grid[:, col]), sign)
    grid = grid[sign > 0]
    zpow = z[::-1]  # zeta^n .. zeta^1
    s = grid.astype(np.float64) @ zpow
    base = np.floor(-s)
    lo_keys, hi_keys, consts = [], [], []
    S = float(np.sum(np.abs(z))) + 1
    for d in (0, 1):
        c0 = base + d
        val = np.abs(s + c0)
        H = np.maximum(np.max(np.abs(grid), axis=1), np.abs(c0))
        delta = (n + 2) * H * S * 2.0**-51
        with np.errstate(divide="ignore"):
            size = np.log(H) / logQ - 1 / n
            lo_keys.append(np.maximum(size, np.log(np.maximum(val - delta, 0.0)) / logQ + 1) - SLACK)
            hi_keys.append(np.maximum(size, np.log(val + delta) / logQ + 1) + SLACK)
        consts.append(c0)
    lo = np.concatenate(lo_keys + [np.array([1.0])])
    hi = np.concatenate(hi_keys + [np.array([1.0])])
    N = len(grid)

    def vector(k):
        if k == 2 * N:
            return [0] * n + [1]
        d, i = divmod(k, N)
        return [int(c) for c in grid[i]] + [int(consts[d][i])]

    return lo, hi, vector


def psi_sample(oracle: NumberOracle, n: int, j: int, Q: float, side: str = "primal",
               budget: int = PSI_BUDGET) -> PsiSample:
    """Certified bracket of ``psi_n,j(Q)`` (primal) or its dual analogue."""
    if n < 1 or not 1 <= j <= n + 1:
        raise DomainError("need n >= 1 and 1 <= j <= n+1")
    if side == "primal" and n > 3:
        raise BudgetError("primal psi enumeration is limited to n <= 3")
    Q = float(Q)
    if Q <= 1:
        raise DomainError("Q must exceed 1")
    logQ = math.log(Q)
    z = _float_powers(oracle, n)
    cap = 0.0  # search only points with level <= cap, then widen if needed
    while True:
        if side == "primal":
            size = int(math.floor(Q ** (1 + cap) * (1 + 1e-12)))
            if size * 2**n > budget:
                raise BudgetError(f"{size * 2 ** n} primal candidates exceed the budget {budget}")
            lo, hi, vector = _primal_candidates(z, n, logQ, max(size, 1))
        elif side == "dual":
            size = int(math.floor(Q ** (1 / n + cap) * (1 + 1e-12)))
            if 2 * (2 * size + 1) ** n > budget:
                raise BudgetError(f"dual candidate grid exceeds the budget {budget}")
            lo, hi, vector = _dual_candidates(z, n, logQ, max(size, 1))
        else:
            raise DomainError("side must be primal or dual")
        upper, picks = _greedy(hi, vector, j)
        if upper <= cap:
            break
        cap = upper
    lower, _ = _greedy(lo, vector, j)
    psi = Interval(Fraction(lower), Fraction(upper))
    return PsiSample(n, j, Q, psi, side, [tuple(vector(k)) for k in picks])


def matched_parameter(record: BestApproxRecord, n: int) -> float:
    """The ``Q`` whose primal body has the record's witness on its boundary."""
    x = record.witness[0]
    err = float(record.error.mid)
    return math.exp(n / (n + 1) * (math.log(x) - math.log(err)))


def pairing_product(lambda_sample: float, psi: float, n: int) -> float:
    """``(1 + lambda)(1 + psi)``; equals ``(n+1)/n`` in the limit identity."""
    return (1 + lambda_sample) * (1 + psi)


# ---------------------------------------------------------------- audit


@dataclass
class AuditCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class AuditReport:
    checks: list = field(default_factory=list)

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}


def _limits(samples, n, side):
    """``j -> (liminf proxy, limsup proxy)`` as (min lower end, max upper end) over Q."""
    out = {}
    for s in samples:
        if s.n == n and s.side == side:
            lo, hi = out.get(s.j, (math.inf, -math.inf))
            out[s.j] = (min(lo, float(s.psi.lo)), max(hi, float(s.psi.hi)))
    return out


def identity_audit(samples: Sequence[PsiSample], tolerance: float = 0.1) -> AuditReport:
    """Check box constraints, duality, the signed-sum inequalities and the
    monotonicity of the dual successive-minima exponents across ``n``."""
    rep = AuditReport()
    add = lambda name, ok, detail: rep.checks.append(AuditCheck(name, bool(ok), detail))
    for s in samples:
        lo_b, hi_b = (-1, 1 / s.n) if s.side == "primal" else (-1 / s.n, 1)
        ok = float(s.psi.hi) >= lo_b - SLACK and float(s.psi.lo) <= hi_b + SLACK
        add("box", ok, f"{s.side} n={s.n} j={s.j} Q={s.Q:g}: {float(s.psi.lo):.6g}..{float(s.psi.hi):.6g}")
    by_point = {}
    for s in samples:
        by_point.setdefault((s.n, s.side, s.Q), {})[s.j] = s
    for (n, side, Q), row in sorted(by_point.items()):
        js = sorted(row)
        for a, b in zip(js, js[1:]):
            ok = float(row[a].psi.lo) <= float(row[b].psi.hi) + SLACK
            add("ordering", ok, f"{side} n={n} Q={Q:g}: psi_{a} <= psi_{b}")
        dual = by_point.get((n, "dual", Q)) if side == "primal" else None
        if dual:
            for j, s in row.items():
                d = dual.get(n + 2 - j)
                if d is not None:
                    gap = abs(s.value + d.value)
                    add("duality", gap <= tolerance,
                        f"n={n} Q={Q:g}: psi_{j} + psi*_{n + 2 - j} = {s.value + d.value:.4g}")
    ns = sorted({s.n for s in samples})
    for n in ns:
        for side, name in (("primal", "signed sum"), ("dual", "dual signed sum")):
            lim = _limits(samples, n, side)
            if n + 1 not in lim:
                continue
            low_last, up_last = lim[n + 1]
            for j, (low, up) in sorted(lim.items()):
                s1 = j * low + (n + 1 - j) * up_last
                s2 = j * up + (n + 1 - j) * low_last
                add(name, s1 >= -tolerance and s2 >= -tolerance,
                    f"n={n} j={j}: {s1:.4g}, {s2:.4g}")
    w = {}
    for n in ns:
        for j, (low, _) in _limits(samples, n, "dual").items():
            if 1 / n + low > 0:
                w[(n, j)] = (n + 1) / n / (1 / n + low) - 1
    for (n, i), wv in sorted(w.items()):
        for (n2, i2), wv2 in sorted(w.items()):
            if n2 > n and i2 == n2 - n + i:
                add("dual monotonicity", wv2 >= wv - tolerance * (1 + abs(wv)),
                    f"w_{n2},{i2} = {wv2:.4g} vs w_{n},{i} = {wv:.4g}")
    return rep


def corrupt(samples: Sequence[PsiSample], shift: float = 0.5) -> list[PsiSample]:
    """Copy of ``samples`` with every dual value shifted; a negative control for the audit."""
    out = []
    for s in samples:
        if s.side == "dual":
            d = Fraction(shift)
            s = PsiSample(s.n, s.j, s.Q, Interval(s.psi.lo + d, s.psi.hi + d), s.side, s.witnesses)
        out.append(s)
    return out
