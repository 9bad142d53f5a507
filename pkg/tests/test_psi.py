import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dioph import approx, catalog, psi
from dioph.errors import BudgetError, DomainError


@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(40):
        yield




def brute_psi_1(zeta, j, Q):
    """Successive minima of the n = 1 primal body by plain enumeration."""
    logQ = mpmath.log(Q)
    levels = [(mpmath.mpf(1), (0, 1))]
    for x in range(1, int(Q ** 2) + 1):
        for y in range(int(mpmath.floor(zeta * x)) - 1, int(mpmath.floor(zeta * x)) + 3):
            e = abs(zeta * x - y)
            levels.append((max(mpmath.log(x) / logQ - 1, mpmath.log(e) / logQ + 1), (x, y)))
    levels.sort(key=lambda t: t[0])
    first = levels[0]
    if j == 1:
        return first[0]
    for lv, v in levels[1:]:
        if first[1][0] * v[1] - first[1][1] * v[0] != 0:
            return lv


@pytest.mark.parametrize("name,ref", [("sqrt2", lambda: mpmath.sqrt(2)), ("phi", lambda: (1 + mpmath.sqrt(5)) / 2)])
@pytest.mark.parametrize("j", [1, 2])
@pytest.mark.parametrize("Q", [7.0, 30.0, 55.5])
def test_against_enumeration(name, ref, j, Q):
    s = psi.psi_sample(catalog.get(name), 1, j, Q)
    b = brute_psi_1(ref(), j, Q)
    assert float(s.psi.lo) - 1e-9 <= b <= float(s.psi.hi) + 1e-9
    assert s.psi.width < Fraction(1, 10**6)


def test_phi_badly_approximable():
    Q = 89.0 ** 2
    s = psi.psi_sample(catalog.get("phi"), 1, 1, Q)
    assert abs(s.value) < 0.05
    assert s.witnesses[0][0] in (4181, 6765, 2584, 10946)


def test_second_minimum_nonnegative_trend():
    for Q in (1e3, 1e4):
        s = psi.psi_sample(catalog.get("sqrt2"), 1, 2, Q)
        assert s.psi.hi >= -2 / math.log(Q)


def test_pairing_identity_on_records():
    z = catalog.get("sqrt2")
    for X in (1000, 30000):
        rec = approx.best_simultaneous(z, 1, X)
        Q = psi.matched_parameter(rec, 1)
        lam = float(approx.sample_exponent(rec.error, rec.witness[0]).mid)
        s = psi.psi_sample(z, 1, 1, Q)
        assert abs(psi.pairing_product(lam, s.value, 1) - 2) <= 0.1


def test_validation():
    with pytest.raises(DomainError):
        psi.psi_sample(catalog.get("sqrt2"), 1, 3, 10.0)
    with pytest.raises(DomainError):
        psi.psi_sample(catalog.get("sqrt2"), 1, 1, 1.0)
    with pytest.raises(BudgetError):
        psi.psi_sample(catalog.get("sqrt2"), 4, 1, 10.0)
    with pytest.raises(BudgetError):
        psi.psi_sample(catalog.get("sqrt2"), 2, 1, 1e9, budget=1000)


@settings(max_examples=20)
@given(st.sampled_from(["sqrt2", "cbrt2", "random42", "phi"]), st.integers(1, 2),
       st.sampled_from(["primal", "dual"]), st.floats(3.0, 400.0), st.data())
def test_box_constraints(name, n, side, Q, data):
    j = data.draw(st.integers(1, n + 1))
    s = psi.psi_sample(catalog.get(name), n, j, Q, side)
    lo_b, hi_b = (-1, 1 / n) if side == "primal" else (-1 / n, 1)
    assert lo_b - 1e-9 <= float(s.psi.lo) <= float(s.psi.hi) <= hi_b + 1e-9


def test_audit_sqrt2_and_negative_control():
    z = catalog.get("sqrt2")
    samples = [psi.psi_sample(z, 1, j, Q, side)
               for Q in (100.0, 1000.0, 10000.0) for j in (1, 2) for side in ("primal", "dual")]
    rep = psi.identity_audit(samples)
    assert rep.passed, [c.detail for c in rep.violations]
    names = {c.name for c in rep.checks}
    assert {"box", "ordering", "duality", "signed sum"} <= names
    dual = [s for s in samples if s.side == "dual" and s.j == 1]
    assert all(abs(s.exponent() - 1) < 0.35 for s in dual)
    bad = psi.identity_audit(psi.corrupt(samples))
    assert not bad.passed
    assert "duality" in {c.name for c in bad.violations}
