from fractions import Fraction as F

import pytest

from qlerch.errors import DegenerateZ, NegativeExponentProduct, PoleAtSpecialization
from qlerch.qfunctions import (
    J_shorthand,
    appell_lerch_m,
    jacobi_theta,
    pochhammer_finite,
    pochhammer_inf,
)
from qlerch.series import MonomialSpec as M, Series, geom_expand

# brute-force oracles on plain dicts (independent of the Series arithmetic)

def poly_mul(a, b, cap):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            if k <= cap:
                out[k] = out.get(k, F(0)) + ca * cb
    return {k: c for k, c in out.items() if c}


def euler_oracle(cap):
    out = {F(0): F(1)}
    for i in range(1, cap + 1):
        out = poly_mul(out, {F(0): F(1), F(i): F(-1)}, cap)
    return out


def test_pochhammer_finite_examples():
    p = pochhammer_finite(M(1, F(1, 2)), 2, 3)
    assert p.coeff(0) == 1 and p.coeff(F(1, 2)) == -1
    assert p.coeff(F(3, 2)) == -1 and p.coeff(2) == 1
    assert pochhammer_finite(M(1, F(1, 2)), 0, 3) == Series.one(3)
    assert pochhammer_finite(M(2, 0), 1, 3).coeff(0) == -1


def test_pochhammer_inf_euler():
    e = pochhammer_inf(M(1, 1), 12)
    want = euler_oracle(12)
    for k in range(13):
        assert e.coeff(k) == want.get(F(k), F(0))
    # exponents 0,1,2,5,7,12 with signs per the pentagonal pattern
    assert [e.coeff(k) for k in (0, 1, 2, 5, 7, 12)] == [1, -1, -1, 1, 1, -1]


def test_pochhammer_inf_window_and_minus():
    assert pochhammer_inf(M(1, 13), 12) == Series.one(12)
    p = pochhammer_inf(M(-1, 1), 4)
    # (1+q)(1+q^2)(1+q^3)(1+q^4) expanded by hand
    assert [p.coeff(k) for k in range(5)] == [1, 1, 1, 2, 2]
    with pytest.raises(NegativeExponentProduct):
        pochhammer_inf(M(1, -1), 5)


def test_theta_lattice_vanishes():
    assert jacobi_theta(M(1, 1), 1, 8).is_zero()
    assert jacobi_theta(M(1, 1), 1, 8, form="sum").is_zero()
    assert jacobi_theta(M(1, -2), 1, 8).is_zero()


def test_theta_J13_is_euler():
    t = jacobi_theta(M(1, 1), 3, 12)
    e = pochhammer_inf(M(1, 1), 12)
    assert t.eq_upto(e, 12).equal


def test_theta_minus_one_value():
    # j(-1;q) = 2 J_2^2 / J_1
    lhs = jacobi_theta(M(-1, 0), 1, 15)
    J2 = J_shorthand(0, 2, "eta", 15)
    J1 = J_shorthand(0, 1, "eta", 15)
    rhs = (J2 * J2 * J1.invert()).scaled(2)
    assert lhs.eq_upto(rhs, 14).equal


def test_J_shorthand_product_rearrangements():
    n = 20
    J1 = J_shorthand(0, 1, "eta", n)
    J2 = J_shorthand(0, 2, "eta", n)
    J4 = J_shorthand(0, 4, "eta", n)
    # Jbar_{0,2} = 2 J_4^2 / J_2
    lhs = J_shorthand(0, 2, "bar", n)
    rhs = (J4 * J4 * J2.invert()).scaled(2)
    assert lhs.eq_upto(rhs, n).equal
    # Jbar_{1,2} = J_2^5 / (J_1^2 J_4^2)
    lhs = J_shorthand(1, 2, "bar", n)
    rhs = J2**5 * (J1 * J1 * J4 * J4).invert()
    assert lhs.eq_upto(rhs, n).equal
    # J_{1,2} = J_1^2 / J_2
    lhs = J_shorthand(1, 2, "plain", n)
    rhs = J1 * J1 * J2.invert()
    assert lhs.eq_upto(rhs, n).equal
    # eta kind gives the Euler product with pentagonal support
    e = J_shorthand(0, 1, "eta", 12)
    assert [e.coeff(k) for k in (0, 1, 2, 5, 7, 12)] == [1, -1, -1, 1, 1, -1]


def test_theta_product_vs_sum_random():
    import random

    rng = random.Random(3)
    exps = [F(1, 2), F(1, 3), F(2, 5), F(3, 7), F(5, 8), F(-5, 3), F(9, 4)]
    coeffs = [F(1), F(-1), F(2), F(-2), F(3), F(1, 2)]
    for _ in range(50):
        x = M(rng.choice(coeffs), rng.choice(exps))
        m = rng.choice((1, 2, 3))
        p = jacobi_theta(x, m, 10, form="product")
        s = jacobi_theta(x, m, 10, form="sum")
        assert p.eq_upto(s, 10).equal, (x, m)


def m_oracle(x: M, mod: int, z: M, order, rng=14):
    """Direct truncated bilateral summation with every factor expanded
    separately; independent of the library's index-bound machinery."""
    pad = order + 10
    total = Series.zero(pad)
    for r in range(-rng, rng + 1):
        num_c = (-1 if r % 2 else 1) * z.c**r
        num_e = F(mod * r * (r - 1), 2) + z.e * r
        xz = x * z
        d = mod * (r - 1) + xz.e
        geo = geom_expand(xz.c, d, pad - num_e)
        total = total + geo.shift(num_c, num_e).truncate(pad)
    theta = jacobi_theta(z, mod, pad)
    return (total * theta.invert()).truncate(order)


def test_appell_lerch_m_vs_oracle():
    x, z = M(1, F(1, 2)), M(1, F(1, 3))
    got = appell_lerch_m(x, 1, z, 5)
    assert got.eq_upto(m_oracle(x, 1, z, 5), 5).equal
    x, z = M(2, F(2, 5)), M(-1, F(1, 2))
    got = appell_lerch_m(x, 2, z, 8)
    assert got.eq_upto(m_oracle(x, 2, z, 8), 8).equal


def test_m_shift_law_24c():
    x, z = M(1, F(1, 3)), M(1, F(1, 5))
    lhs = appell_lerch_m(x.q_shift(1), 1, z, 20)
    rhs = Series.one(20) - appell_lerch_m(x, 1, z, 20).shift(x.c, x.e).truncate(20)
    assert lhs.eq_upto(rhs, 20).equal


def test_m_inversion_24b_laurent():
    x, z = M(2, F(1, 2)), M(1, F(1, 3))
    lhs = appell_lerch_m(x, 1, z, 20)
    xi = x.inverse()
    rhs = (
        appell_lerch_m(xi, 1, z.inverse(), 21).shift(xi.c, xi.e).truncate(20)
    )
    assert lhs.eq_upto(rhs, 20).equal


def test_m_genericity_errors():
    with pytest.raises(DegenerateZ):
        appell_lerch_m(M(1, F(1, 2)), 1, M(1, 2), 5)
    with pytest.raises(PoleAtSpecialization):
        appell_lerch_m(M(1, F(1, 2)), 1, M(1, F(1, 2)), 5)  # xz = q


def test_theta_normalization_shifts():
    # j(q^(mn) x; q^m) = (-1)^n q^(-m C(n,2)) x^(-n) j(x; q^m), n in -3..3
    x = M(2, F(2, 5))
    for mod in (1, 2):
        for n in range(-3, 4):
            lhs = jacobi_theta(x.q_shift(mod * n), mod, 10, form="sum")
            pref_c = (-1 if n % 2 else 1) * x.c ** (-n)
            pref_e = -mod * F(n * (n - 1), 2) - n * x.e
            base = jacobi_theta(x, mod, 10 + max(F(0), -pref_e), form="sum")
            rhs = base.shift(pref_c, pref_e).truncate(10)
            assert lhs.eq_upto(rhs, 10).equal, (mod, n)
