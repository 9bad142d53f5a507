import json
import random
from fractions import Fraction

import pytest

from dioph import catalog
from dioph.errors import RootIsolationError


def test_sqrt2_tight_width():
    z = catalog.make_algebraic([1, 0, -2], (1, 2))
    e = z.enclose(Fraction(1, 10**20))
    assert e.width <= Fraction(1, 10**20)
    assert e.lo ** 2 <= 2 <= e.hi ** 2


def test_cbrt2():
    z = catalog.make_algebraic([1, 0, 0, -2], (1, 2))
    e = z.enclose(Fraction(1, 10**15))
    assert e.lo ** 3 <= 2 <= e.hi ** 3


def test_two_roots_rejected():
    with pytest.raises(RootIsolationError):
        catalog.make_algebraic([1, 0, -2], (-2, 2))


def test_liouville_terms_and_hints():
    z = catalog.make_liouville(10)
    assert z.terms_needed(Fraction(1, 10**7)) == 3
    assert z.hints[:3] == [10, 100, 10**6]
    e = z.enclose(Fraction(1, 10**7))
    assert 0 < e.lo and e.hi < Fraction(12, 100)
    assert e.contains(Fraction(1, 10) + Fraction(1, 100) + Fraction(1, 10**6))


def test_champernowne_digits():
    assert catalog.make_champernowne(10, [1, 0]).digits(15) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0, 1, 1, 1, 2]
    assert catalog.make_champernowne(2, [1, 0]).digits(9) == [1, 1, 0, 1, 1, 1, 0, 0, 1]
    assert catalog.make_champernowne(10, [1, 0, 0]).digits(7) == [1, 4, 9, 1, 6, 2, 5]


def test_champernowne_skips_nonpositive_values():
    z = catalog.make_champernowne(10, [1, -3])  # P(T) = T - 3
    assert z.digits(3) == [1, 2, 3]


def test_random_digits_reproducible():
    a, b = catalog.make_digit_random(42), catalog.make_digit_random(42)
    assert a.digits(50) == b.digits(50)
    eps = Fraction(1, 10**30)
    assert a.enclose(eps) == b.enclose(eps)
    assert catalog.make_digit_random(7).digits(50) != a.digits(50)


def test_cf_oracle_phi():
    z = catalog.get("phi")
    e = z.enclose(Fraction(1, 10**20))
    assert e.lo ** 2 - e.lo - 1 <= 0 <= e.hi ** 2 - e.hi - 1


def test_rational_oracle():
    z = catalog.get("third")
    assert z.is_rational
    assert z.enclose(Fraction(1, 10)).contains(Fraction(1, 3))


def test_zero_test():
    z = catalog.get("sqrt2")
    assert z.zero_test([1, 0, -2]) is True
    assert z.zero_test([2, 0, -4]) is True
    assert z.zero_test([1, -1, -1]) is False
    assert catalog.get("third").zero_test([3, -1]) is True


def test_manifest_round_trip():
    data = json.loads(catalog.manifest_json())
    assert set(data) == set(catalog.MANIFEST)
    for name in data:
        z = catalog.get(name)
        assert z.enclose(Fraction(1, 10**12)).width <= Fraction(1, 10**12)


@pytest.mark.parametrize("name", sorted(catalog.MANIFEST))
def test_nested_enclosures(name):
    z = catalog.get(name)
    rng = random.Random(name)
    encs = [z.enclose(Fraction(1, 10 ** rng.randint(1, 60))) for _ in range(10)]
    common = encs[0]
    for e in encs[1:]:
        assert common.overlaps(e)
        common = common.intersect(e)


@pytest.mark.parametrize("digits", [5, 20, 60, 150])
def test_sqrt2_squared_contains_two(digits):
    e = catalog.get("sqrt2").enclose(Fraction(1, 10**digits))
    assert (e * e).contains(2)


def test_powers_width():
    ps = catalog.get("cbrt2").powers(3, Fraction(1, 10**25))
    assert all(p.width <= Fraction(1, 10**25) for p in ps)
    assert ps[2].contains(2)


def test_unknown_name():
    with pytest.raises(Exception, match="unknown catalog entry"):
        catalog.get("pi")


@pytest.mark.parametrize("head,period,poly", [([1], [1], [1, -1, -1]), ([1], [2], [1, 0, -2]),
                                              ([0, 3], [1, 2], [1, -4, 1]), ([2], [1, 1, 1, 4], [1, 0, -7])])
def test_periodic_cf_minimal_polynomial(head, period, poly):
    assert catalog.periodic_minpoly(head, period) == poly
    z = catalog.make_cf(head, period)
    e = z.enclose(Fraction(1, 10**30))
    lo, hi = (sum(c * x ** (2 - i) for i, c in enumerate(poly)) for x in (e.lo, e.hi))
    assert lo * hi <= 0
    assert z.zero_test([3 * c for c in poly]) and not z.zero_test([1, 0])
