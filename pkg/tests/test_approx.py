import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dioph import approx, catalog
from dioph.errors import BudgetError, DomainError, RationalInputError


@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(60):
        yield



REFS = {
    "sqrt2": lambda: mpmath.sqrt(2),
    "cbrt2": lambda: mpmath.cbrt(2),
    "phi": lambda: (1 + mpmath.sqrt(5)) / 2,
}


def mp_value(name):
    if name in REFS:
        return REFS[name]()
    e = catalog.get(name).enclose(Fraction(1, 10**55))
    return mpmath.mpf(e.lo.numerator) / e.lo.denominator


def brute_simultaneous(zeta, n, X):
    best = None
    for x in range(1, X + 1):
        err = max(abs(zeta ** i * x - mpmath.nint(zeta ** i * x)) for i in range(1, n + 1))
        if best is None or err < best[1]:
            best = (x, err)
    return best


def mp_in(enc, v):
    lo = mpmath.mpf(enc.lo.numerator) / enc.lo.denominator
    hi = mpmath.mpf(enc.hi.numerator) / enc.hi.denominator
    return lo <= v <= hi


def test_sqrt2_x5():
    r = approx.best_simultaneous(catalog.get("sqrt2"), 1, 5)
    assert r.witness == (5, (7,))
    assert mp_in(r.error, 5 * mpmath.sqrt(2) - 7)


def test_rational_rejected():
    with pytest.raises(RationalInputError, match="rational input"):
        approx.best_simultaneous(catalog.get("third"), 1, 3)


@pytest.mark.parametrize("k", range(5, 20, 3))
def test_phi_fibonacci(k):
    fib = [1, 1]
    while len(fib) <= k:
        fib.append(fib[-1] + fib[-2])
    r = approx.best_simultaneous(catalog.get("phi"), 1, fib[k])
    assert r.witness[0] == fib[k]


@settings(max_examples=25)
@given(st.sampled_from(["sqrt2", "cbrt2", "phi", "random42", "champernowne10"]),
       st.integers(1, 3), st.integers(1, 400))
def test_against_brute_force(name, n, X):
    zeta = mp_value(name)
    x, err = brute_simultaneous(zeta, n, X)
    r = approx.best_simultaneous(catalog.get(name), n, X)
    assert r.witness[0] == x
    assert mp_in(r.error, err)


def test_error_monotone_in_X():
    z = catalog.get("random7")
    errs = [approx.best_simultaneous(z, 2, X).error for X in (10, 50, 200, 1000, 5000, 20000)]
    for a, b in zip(errs, errs[1:]):
        assert b.hi <= a.hi


def test_witness_reverifies_at_higher_precision():
    for name, n, X in (("cbrt2", 2, 5000), ("random42", 3, 2000), ("sqrt2", 1, 10**5)):
        r = approx.best_simultaneous(catalog.get(name), n, X)
        x, ys = r.witness
        zeta = mp_value(name)
        with mpmath.workdps(120):
            err = max(abs(zeta ** i * x - y) for i, y in enumerate(ys, start=1))
        assert mp_in(r.error, err)


def test_threads_do_not_change_result():
    z = catalog.get("random42")
    assert approx.best_simultaneous(z, 2, 60000, threads=1) == approx.best_simultaneous(z, 2, 60000, threads=4)
    p = catalog.get("cbrt3")
    assert approx.best_polynomial(p, 2, 12, threads=1) == approx.best_polynomial(p, 2, 12, threads=3)


def test_cf_quotients():
    assert approx.continued_fraction(catalog.get("phi"), 12).quotients == [1] * 12
    assert approx.continued_fraction(catalog.get("sqrt2"), 8).quotients == [1] + [2] * 7


def test_cf_champernowne_giant_quotient():
    cf = approx.continued_fraction(catalog.get("champernowne10"), 20)
    assert cf.quotients[:5] == [0, 8, 9, 1, 149083]
    assert len(str(cf.quotients[18])) == 166
    assert max(cf.samples) >= 5


def test_cf_rational_terminates():
    cf = approx.continued_fraction(catalog.get("third"), 5)
    assert cf.quotients == [0, 3] and cf.terminated


def test_cf_convergents_are_best_approximations():
    z = catalog.get("sqrt2")
    cf = approx.continued_fraction(z, 12)
    for p, q in cf.convergents[1:]:
        r = approx.best_simultaneous(z, 1, q)
        assert r.witness == (q, (p,))


def test_poly_height_one():
    r = approx.best_polynomial(catalog.get("sqrt2"), 2, 1)
    assert r.witness == (1, -1, -1)
    assert mp_in(r.error, mpmath.sqrt(2) - 1)


def brute_poly(zeta, n, X):
    best = None
    for c in itertools.product(range(-X, X + 1), repeat=n + 1):
        if not any(c):
            continue
        v = abs(mpmath.polyval(list(c), zeta))
        if v < mpmath.mpf(10) ** -45:
            continue
        if best is None or v < best:
            best = v
    return best


@pytest.mark.parametrize("name,n,X", [("sqrt2", 2, 10), ("random42", 2, 6), ("cbrt2", 3, 3), ("phi", 2, 5)])
def test_poly_against_brute_force(name, n, X):
    zeta = mp_value(name)
    r = approx.best_polynomial(catalog.get(name), n, X)
    assert mp_in(r.error, brute_poly(zeta, n, X))
    assert max(abs(c) for c in r.witness) <= X and any(r.witness)
    assert mp_in(r.error, abs(mpmath.polyval(list(r.witness), zeta)))


def test_poly_budget_guard():
    with pytest.raises(BudgetError):
        approx.best_polynomial(catalog.get("sqrt2"), 4, 2)


def test_schedule_and_minimum_points():
    s = approx.geometric_schedule(10**5, hints=[10, 7000, 10**6])
    assert s == sorted(set(s)) and s[-1] == 10**5 and len(s) == 9
    assert 7000 in s and 10 not in s
    with pytest.raises(DomainError):
        approx.lambda_estimate(catalog.get("sqrt2"), 1, [10, 20, 30])


def test_lambda_sqrt2():
    z = catalog.get("sqrt2")
    for n in (1, 2):
        est = approx.lambda_estimate(z, n, approx.geometric_schedule(10**5))
        assert Fraction("0.9") <= est.limsup_estimate.lo and est.limsup_estimate.hi <= Fraction("1.1")
        assert est.label == approx.HEURISTIC


def test_estimates_decrease_with_n():
    z = catalog.get("random42")
    sched = approx.geometric_schedule(10**4)
    ests = [approx.lambda_estimate(z, n, sched).limsup_estimate for n in (1, 2, 3)]
    for a, b in zip(ests, ests[1:]):
        assert b.lo <= a.hi + Fraction(5, 100)


def test_generic_lambda1_soft():
    est = approx.lambda_estimate(catalog.get("random42"), 1, approx.geometric_schedule(10**5))
    assert Fraction("0.85") <= est.limsup_estimate.lo and est.limsup_estimate.hi <= Fraction("1.25")


def test_records_csv():
    r = approx.best_simultaneous(catalog.get("sqrt2"), 1, 5)
    lines = approx.records_csv([r]).splitlines()
    assert lines[0].split(",") == approx.CSV_COLUMNS
    assert lines[1].startswith("5,x=5;y=7,")


def test_sci_str():
    assert approx.sci_str(Fraction(1, 3)) == "3.33333333333e-01"
    assert approx.sci_str(Fraction(1, 10**400)) == "1.00000000000e-400"
    assert approx.sci_str(Fraction(-25, 2)) == "-1.25000000000e+01"
