from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from dioph import algebra as A
from dioph.errors import DomainError, InconsistentDataError
from dioph.numeric import INF


@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(40):
        yield




def contains_mp(enc, x):
    lo = mpmath.mpf(enc.lo.numerator) / enc.lo.denominator
    hi = mpmath.mpf(enc.hi.numerator) / enc.hi.denominator
    return lo <= x <= hi


def unconditional_ref(n):
    h = mpmath.mpf(1) / (2 * n)
    return mpmath.sqrt((n + h) ** 2 - mpmath.mpf(1) / n) - n + h


def conditional_ref(n):
    f = lambda x: n ** (2 * n) * x ** (2 * n + 1) - (n + 1) * x + 1
    return mpmath.findroot(f, (mpmath.mpf(1) / (n + 1) + mpmath.mpf(10) ** -30, mpmath.mpf(1) / n - mpmath.mpf(10) ** -30),
                           solver="anderson")


# ---------------------------------------------------------------- corridor and friends

def test_khintchine_collapses_at_floor():
    lo, hi = A.khintchine_corridor(3, 3)
    assert lo.value == hi.value == Fraction(1, 3)


def test_khintchine_substitution():
    lo, hi = A.khintchine_corridor(2, 4)
    assert (lo.value, hi.value) == (Fraction(2, 3), Fraction(3, 2))


def test_khintchine_infinite_n1():
    lo, hi = A.khintchine_corridor(1, INF)
    assert lo.value == INF and hi.value == INF


def test_khintchine_below_floor():
    with pytest.raises(DomainError):
        A.khintchine_corridor(2, Fraction(3, 2))


def test_multiple_index_lower():
    assert A.lambda_multiple_lower(1, 2, 3).value == 1
    assert A.lambda_multiple_lower(2, 1, 1).value == 1
    b = A.lambda_multiple_lower(1, 3, 1)
    assert b.value == Fraction(1, 3) and b.notes


def test_large_value_equality():
    assert A.lambda_large_equality(1, 5).value == 5
    b = A.lambda_large_equality(2, 5)
    assert b.value == 2 and b.applicable and b.kind == "equality"
    assert not A.lambda_large_equality(3, 2).applicable


def test_transfer_reciprocal():
    for N in (6, 7, 20):
        assert A.transfer_upper_lambda("reciprocal", 2, N, Fraction(5, 2)).value == Fraction(1, 2)
    assert not A.transfer_upper_lambda("reciprocal", 2, 5, Fraction(5, 2)).applicable


def test_transfer_short_at_2n():
    b = A.transfer_upper_lambda("short", 2, 4, Fraction(5, 2))
    assert b.applicable and b.value == Fraction(1, 2)
    assert A.FLOOR_NOTE in b.notes


def test_transfer_general_vacuous():
    b = A.transfer_upper_lambda("general", 1, 1, 1)
    assert b.applicable and b.value == INF


def test_transfer_general_value():
    b = A.transfer_upper_lambda("general", 2, 4, Fraction(5, 2), w_hat_n=2, w_hat_tail=4)
    assert b.value == Fraction(2, 3)  # max(1/2, 1/(4 - 5/2))


# ---------------------------------------------------------------- spectra and aggregates

def test_spectra():
    assert A.spectrum_sequence("u2", 2, 3, 5) == [3, 1, 1, 1, 1]
    assert A.spectrum_sequence("algebraic_like", 2, 1, 4) == [1, 1, 1, 1]
    assert A.spectrum_sequence("algebraic_like", 3, 1, 4) == [1, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]
    with pytest.raises(DomainError):
        A.spectrum_sequence("algebraic_like", 3, 3, 4)


def test_aggregate_lambda_bar():
    lo, hi = A.aggregate_bounds(A.AggregateQuantities(w_bar=1), "lambda_bar")
    assert (lo.value, hi.value) == (1, 3)


def test_aggregate_infinite_forces_zero():
    _, hi = A.aggregate_bounds(A.AggregateQuantities(w_bar=INF, w_under=INF), "w_hat_star_under")
    assert hi.value == 0


def test_aggregate_uniform_lambda():
    lo, hi = A.aggregate_bounds(A.AggregateQuantities(w_hat_bar=1, w_hat_under=1), "lambda_hat_bar")
    assert (lo.value, hi.value) == (1, 2)


def test_aggregate_invariants():
    with pytest.raises(InconsistentDataError):
        A.AggregateQuantities(w_bar=1, w_under=2)
    with pytest.raises(InconsistentDataError):
        A.AggregateQuantities(tau=Fraction(1, 2))


def test_sigma_tau_theta():
    assert A.sigma_tau_theta_identity(1) == (-1, 1)
    assert A.sigma_tau_theta_identity(INF) == (0, 0)
    assert A.sigma_tau_theta_identity(3) == (Fraction(-1, 3), Fraction(1, 3))


# ---------------------------------------------------------------- uniform lambda_{2n}

@pytest.mark.parametrize("n", [1, 2, 3, 10])
def test_unconditional_against_mpmath(n):
    b = A.lambda2n_upper(n)
    assert b.value.width <= Fraction(1, 10**9)
    assert contains_mp(b.value, unconditional_ref(n))


def test_unconditional_closed_forms():
    assert contains_mp(A.lambda2n_upper(1).value, (mpmath.sqrt(5) - 1) / 2)
    assert contains_mp(A.lambda2n_upper(2).value, (mpmath.sqrt(73) - 7) / 4)


@pytest.mark.parametrize("n", [2, 3, 10])
def test_conditional_against_mpmath(n):
    assert contains_mp(A.lambda2n_upper(n, "conditional").value, conditional_ref(n))


def test_conditional_n2_value():
    v = A.lambda2n_upper(2, "conditional").value
    assert Fraction("0.3706") <= v.lo and v.hi < Fraction("0.3707")


def test_deflation_is_exact():
    # multiplying back by (n x - 1) recovers the original coefficients
    n = 3
    g = A.deflated_conditional_poly(n)
    prod = [Fraction(0)] * (len(g) + 1)
    for i, c in enumerate(g):
        prod[i] += n * c
        prod[i + 1] -= c
    assert prod[0] == n ** (2 * n) and prod[-2] == -(n + 1) and prod[-1] == 1
    assert all(c == 0 for c in prod[1:-2])


@pytest.mark.parametrize("n", range(2, 21))
def test_conditional_below_unconditional(n):
    c = A.lambda2n_upper(n, "conditional").value
    t = A.lambda2n_upper(n).value
    assert Fraction(1, n + 1) < c.lo and c.hi < Fraction(1, n)
    assert c.certainly_lt(t) and t.certainly_lt(Fraction(1, n))


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_parametrised_family_matches_at_floor(n):
    s = A.lambda2n_upper(n, "schmidt_summerer", Fraction(1, n)).value
    assert s.overlaps(A.lambda2n_upper(n).value)


def test_parametrised_needs_value():
    with pytest.raises(DomainError):
        A.lambda2n_upper(2, "schmidt_summerer")


def test_roy_constant():
    ref = (2 + mpmath.sqrt(5) - mpmath.sqrt(7 + 2 * mpmath.sqrt(5))) / 2
    assert contains_mp(A.roy_constant(), ref)


# ---------------------------------------------------------------- alpha

def test_alpha_routes_agree():
    s = A.alpha_series_root(Fraction(1, 10**6))
    assert Fraction("0.796") < s.lo and s.hi < Fraction("0.797")
    c = A.alpha_closed_form_root()
    assert s.overlaps(c)
    ref = mpmath.findroot(lambda x: mpmath.exp(-2 * x) - 1 + x, 0.8)
    assert contains_mp(c, ref)


def test_alpha_residual():
    s = A.alpha_series_root()
    mid = mpmath.mpf(s.mid.numerator) / s.mid.denominator
    width = mpmath.mpf(s.width.numerator) / s.width.denominator
    assert abs(mpmath.exp(-2 * mid) - (1 - mid)) <= 10 * width


def test_alpha_truncations_nest():
    x = Fraction("0.7968")
    e20, e40 = A.alpha_series_enclosure(x, 20), A.alpha_series_enclosure(x, 40)
    assert e20.lo <= e40.lo and e40.hi <= e20.hi


# ---------------------------------------------------------------- next exponents and w_3

def test_star_tail():
    assert A.next_exponent_upper("star_tail", 2, 1, Fraction(5, 2), j=0).value == 5


def test_star_next_u1():
    assert A.next_exponent_upper("star_next_u1", 2, w_hat=Fraction(5, 2)).value == Fraction(103, 2)


def test_uniform_lambda_vacuous():
    b = A.next_exponent_upper("uniform_lambda", 1, m=1, w_m=1, w_hat_n=1)
    assert b.applicable and b.value == 1


def test_hat_variant_needs_side_condition():
    assert not A.next_exponent_upper("hat_next", 2, 1, Fraction(5, 2)).applicable
    assert A.next_exponent_upper("hat_next", 2, 1, Fraction(5, 2), side_condition=True).applicable


def test_star_tail_requires_positivity():
    assert not A.next_exponent_upper("star_tail", 2, 1, 2).applicable


def test_w3_bound():
    assert A.w3_bound(Fraction(5, 2)).value == Fraction(103, 2)
    assert not A.w3_bound(2).applicable
    assert not A.w3_bound(3).applicable


def test_w3_constant_two_routes():
    direct, closed = A.w3_constant()
    assert direct.overlaps(closed)
    assert contains_mp(closed, 6 + 4 * mpmath.sqrt(5))
    assert closed.hi <= Fraction("14.9444")


# ---------------------------------------------------------------- decay

def test_decay_subspace():
    b = A.decay_envelope("subspace", 1, 2, Fraction(1, 2), 3)
    ref = mpmath.exp(mpmath.log(9) ** 2 * mpmath.log(mpmath.log(9)) ** 2)
    assert contains_mp(b.value, ref)
    assert not A.decay_envelope("subspace", 1, 2, Fraction(1, 2), 2).applicable


def test_decay_champernowne():
    b = A.decay_envelope("champernowne", 1, 1, Fraction(1, 2), 1)
    assert contains_mp(b.value, mpmath.power(2, mpmath.log(mpmath.log(3))))


def test_decay_monotone():
    vals = [A.decay_envelope("lambda_decay", 1, 2, Fraction(1, 3), N).value for N in (2, 5, 50, 5000)]
    for a, b in zip(vals, vals[1:]):
        assert b.certainly_lt(a)


# ---------------------------------------------------------------- algebraic approximation

def test_reciprocal_lambda():
    (b,) = A.star_conversions("reciprocal_lambda", 3, lam=Fraction(1, 2))
    assert b.value == 2 and b.kind == "lower"


def test_bugeaud_laurent_floor_case():
    (b,) = A.star_conversions("bugeaud_laurent", 2, w=2)
    assert b.value == 2


def test_uniform_star_bound():
    lo, hi = A.star_conversions("star_w_hat", 3, w_hat_star=3)
    assert (lo.value, hi.value) == (3, 5)


def test_wirsing():
    (b,) = A.star_conversions("wirsing", 2, w=4)
    assert b.value == Fraction(5, 2)


@given(st.integers(1, 6), st.fractions(0, 1, max_denominator=40), st.fractions(0, 1, max_denominator=40))
def test_conversion_chain_consistent(n, a, b):
    lam_hat = Fraction(1, n) + a
    lam = lam_hat + b
    for r in A.star_conversions("reciprocal_lambda", n, lam=lam, lam_hat=lam_hat):
        w_star = r.value
        lo, hi = A.star_conversions("star_w", n, w_star=w_star)
        assert lo.value <= hi.value


# ---------------------------------------------------------------- classification

def test_classify_examples():
    assert A.classify(A.ClassifyData(lim_lambda=Fraction(1, 2))).label == "U3"
    assert A.classify(A.ClassifyData(lim_lambda=0, limsup_n_lambda=3)).label == "S"
    assert A.classify(A.ClassifyData(lim_lambda=INF)).label == "Liouville"
    assert A.classify(A.ClassifyData(lim_lambda=0, limsup_n_lambda=INF)).label == "T"
    with pytest.raises(InconsistentDataError):
        A.classify(A.ClassifyData(lim_lambda=Fraction(2, 5)))


def test_classify_underdetermined():
    with pytest.raises(DomainError):
        A.classify(A.ClassifyData(lim_lambda=0))


# ---------------------------------------------------------------- properties

@given(st.integers(1, 12), st.fractions(0, 40, max_denominator=60))
def test_corridor_ordered(n, extra):
    lo, hi = A.khintchine_corridor(n, n + extra)
    assert lo.value <= hi.value
    # for n = 1 the corridor is always the single point w_1
    assert (lo.value == hi.value) == (extra == 0 or n == 1)


@given(st.sampled_from(["u2", "algebraic_like"]), st.integers(2, 8), st.fractions(1, 2, max_denominator=30))
def test_spectrum_shape(kind, m, w):
    seq = A.spectrum_sequence(kind, m, w, 20)
    for i, (a, b) in enumerate(zip(seq[1:], seq[2:]), start=2):
        assert b <= a
    assert all(v >= Fraction(1, i) for i, v in enumerate(seq, start=1))


@given(st.fractions(1, 30, max_denominator=40), st.fractions(0, 5, max_denominator=40))
def test_aggregate_corridor_ordered(w_under, gap):
    q = A.AggregateQuantities(w_bar=w_under + gap, w_under=w_under)
    for target in A.AGGREGATE_TARGETS:
        lo, hi = A.aggregate_bounds(q, target)
        if lo.applicable and hi.applicable and target in ("lambda_bar", "lambda_under"):
            assert lo.value <= hi.value
