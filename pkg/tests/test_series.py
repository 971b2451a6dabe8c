from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from qlerch.errors import BeyondTruncation, EmptySeries, PoleAtSpecialization
from qlerch.series import MonomialSpec, Series, dilate, geom_expand

# oracle: plain dict polynomial arithmetic, independent of Series internals

def poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = out.get(k, F(0)) + ca * cb
    return {k: c for k, c in out.items() if c}


def from_dict(d: dict, order, scale=1) -> Series:
    return Series(scale, order * scale, {k: F(c) for k, c in d.items()})


coeffs = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
).filter(lambda f: f != 0)


@st.composite
def small_series(draw, min_exp=-3, max_exp=6, scale=st.sampled_from([1, 2, 3])):
    s = draw(scale)
    n = draw(st.integers(0, 5))
    exps = draw(
        st.lists(st.integers(min_exp * s, max_exp * s), min_size=n, max_size=n)
    )
    terms = {e: draw(coeffs) for e in set(exps)}
    return Series(s, max_exp * s, terms)


@settings(max_examples=60, deadline=None)
@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    n = min((a + b + c).order, (a * b).order, (b * c).order, (a * (b + c)).order)
    assert ((a + b) + c).eq_upto(a + (b + c), n).equal
    nm = min((a * b).order, (b * a).order)
    assert (a * b).eq_upto(b * a, nm).equal
    lhs = a * (b + c)
    rhs = a * b + a * c
    nd = min(lhs.order, rhs.order)
    assert lhs.eq_upto(rhs, nd).equal


@settings(max_examples=100, deadline=None)
@given(small_series())
def test_invert_two_sided(a):
    if a.is_zero():
        with pytest.raises(EmptySeries):
            a.invert()
        return
    inv = a.invert()
    prod = a * inv
    n = prod.order
    assert prod.eq_upto(Series.one(n), n).equal
    prod2 = inv * a
    assert prod2.eq_upto(Series.one(prod2.order), prod2.order).equal


@settings(max_examples=60, deadline=None)
@given(small_series(), small_series())
def test_mul_matches_oracle(a, b):
    prod = a * b
    # align both by brute rescale through Fractions
    da = {F(k, a.scale): c for k, c in a.terms.items()}
    db = {F(k, b.scale): c for k, c in b.terms.items()}
    want = {}
    for ka, ca in da.items():
        for kb, cb in db.items():
            k = ka + kb
            want[k] = want.get(k, F(0)) + ca * cb
    for e, c in prod.items():
        assert want.get(e, F(0)) == c
    for e, c in want.items():
        if c and e <= prod.order:
            assert prod.coeff(e) == c


def test_add_examples():
    one = Series.one(10)
    q = Series.monomial(1, 1, 10)
    assert ((one - q) + q) == Series.one(10)
    a = one + Series.monomial(1, 2, 10)
    assert (a + Series.zero(10)).eq_upto(a, 10).equal
    h = Series.monomial(F(1, 2), F(1, 2), 10)
    assert (h + h) == Series.monomial(1, F(1, 2), 10)


def test_mul_examples():
    one = Series.one(10)
    q = Series.monomial(1, 1, 10)
    assert ((one - q) * (one + q)).eq_upto(one - Series.monomial(1, 2, 10), 10).equal
    lau = Series.monomial(1, -1, 5) * Series.monomial(1, 1, 5)
    assert lau.coeff(0) == 1
    # truncation-order rule: (sum to order 5) * (1 - q)
    geo = geom_expand(1, 1, 5)
    prod = geo * (one - q)
    assert prod.order == 5
    assert prod.eq_upto(Series.one(5), 5).equal


def test_invert_examples():
    one_minus_q = Series.one(8) - Series.monomial(1, 1, 8)
    inv = one_minus_q.invert()
    # geometric series oracle
    for k in range(9):
        assert inv.coeff(k) == 1
    two = Series.const(2, 8)
    assert two.invert().coeff(0) == F(1, 2)
    m = Series.monomial(1, F(1, 2), 8) * one_minus_q
    inv2 = m.invert()
    lo, c = inv2.lowest()
    assert lo == F(-1, 2) and c == 1


def test_geom_expand_regimes():
    g = geom_expand(2, 1, 3)
    assert [g.coeff(k) for k in range(4)] == [1, 2, 4, 8]
    assert geom_expand(3, 0, 5).coeff(0) == F(-1, 2)
    g = geom_expand(2, -1, 3)
    assert g.coeff(1) == F(-1, 2) and g.coeff(2) == F(-1, 4) and g.coeff(3) == F(-1, 8)
    with pytest.raises(PoleAtSpecialization):
        geom_expand(1, 0, 5)
    # multiply back in all three sign regimes
    for c, d in ((2, F(3, 2)), (F(1, 2), 0), (3, -2), (-1, 1)):
        g = geom_expand(c, d, 12)
        back = Series.one(12) - Series.monomial(c, d, 12) if d >= 0 else None
        factor = Series.one(14) - Series.monomial(F(c), F(d), 14)
        prod = g * factor
        assert prod.eq_upto(Series.one(prod.order), prod.order).equal


def test_dilate_laws():
    a = Series.one(6) - Series.monomial(1, 1, 6) + Series.monomial(1, 3, 6)
    assert dilate(a, 2).coeff(2) == -1
    assert dilate(Series.monomial(1, F(1, 2), 5), 2) == Series.monomial(1, 1, 10)
    got = dilate(a, F(1, 2))
    assert got.coeff(F(1, 2)) == -1 and got.coeff(F(3, 2)) == 1
    k1, k2 = F(2, 3), F(3, 4)
    assert dilate(a, k1 * k2) == dilate(dilate(a, k1), k2)
    assert dilate(a, 1) == a


def test_coeff_at_contract():
    a = Series.one(5) - Series.monomial(1, 1, 5)
    assert a.coeff(0) == 1
    assert a.coeff(3) == 0
    with pytest.raises(BeyondTruncation):
        a.coeff(7)


def test_eq_upto_contract():
    one = Series.one(50)
    bump = one + Series.monomial(1, 40, 50)
    assert one.eq_upto(bump, 39).equal
    rep = one.eq_upto(bump, 40)
    assert not rep.equal and rep.exponent == 40 and (rep.lhs, rep.rhs) == (0, 1)
    prod = (Series.one(12) - Series.monomial(1, 1, 12)) * (
        Series.one(12) + Series.monomial(1, 1, 12)
    )
    assert prod.eq_upto(Series.one(12) - Series.monomial(1, 2, 12), 10).equal
    with pytest.raises(BeyondTruncation):
        one.eq_upto(bump, 60)


@settings(max_examples=80, deadline=None)
@given(small_series())
def test_structural_validator(a):
    a.validate()
    (a * a).validate()
    (a + a).validate()
    (-a).validate()
    a.dilate(F(3, 2)).validate()


def test_monomial_spec_predicates():
    assert MonomialSpec(1, 3).is_integral_power_of_q()
    assert not MonomialSpec(2, 3).is_integral_power_of_q()
    assert not MonomialSpec(1, F(1, 2)).is_integral_power_of_q()
    assert MonomialSpec(1, 4).is_integral_power_of_q(2)
    assert not MonomialSpec(1, 3).is_integral_power_of_q(2)
    assert MonomialSpec(-1, 2).is_pm_even_power()
    assert MonomialSpec(1, -4).is_pm_even_power()
    assert not MonomialSpec(-1, 3).is_pm_even_power()
    assert MonomialSpec(-1, 3).is_pm_odd_power()
    with pytest.raises(ValueError):
        MonomialSpec(0, 1)


def test_dense_packed_mul_matches_schoolbook():
    import random

    from qlerch.series import _convolve_int, _pack_mul

    rng = random.Random(11)
    for _ in range(25):
        la = rng.randrange(1, 120)
        lb = rng.randrange(1, 120)
        a = [rng.randrange(-10**9, 10**9) for _ in range(la)]
        b = [rng.randrange(-10**9, 10**9) for _ in range(lb)]
        want = [0] * (la + lb - 1)
        for i, xx in enumerate(a):
            for j, yy in enumerate(b):
                want[i + j] += xx * yy
        assert _pack_mul(a, b) == want
        assert _convolve_int(a, b) == want
