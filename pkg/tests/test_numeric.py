from fractions import Fraction as F

import pytest

from qlerch.errors import NonconvergentPoint, PoleTooClose
from qlerch.numeric import (
    Ball,
    F_kernel_num,
    G1_kernel_num,
    G2_kernel_num,
    G_kernel_num,
    appell_lerch_m_num,
    bilateral_pole_sum_num,
    hecke_double_sum_num,
    jacobi_theta_num,
    kronecker_product_rhs_num,
    kronecker_unilateral_num,
    pochhammer_inf_num,
    triple_sum_num,
    _geom_tail_linear,
    _geom_tail_quadratic,
)

Q7 = F(1, 7)
EPS = F(1, 10**30)


def test_ball_arithmetic_contracts():
    a = Ball(F(3, 2), F(1, 100))
    b = Ball(F(-2, 3), F(1, 200))
    s = a + b
    assert s.val == F(3, 2) - F(2, 3) and s.err == F(1, 100) + F(1, 200)
    p = a * b
    assert abs(p.val) == F(1, 1)
    assert p.err >= abs(a.val) * b.err + abs(b.val) * a.err
    with pytest.raises(PoleTooClose):
        a / Ball(F(1, 1000), F(1, 100))


def test_tail_formulas_against_direct_sums():
    beta = F(2, 5)
    for T in (1, 3, 7):
        direct = sum((m + 1) * beta**m for m in range(T + 1, 400))
        assert abs(_geom_tail_linear(beta, T) - direct) < F(1, 10**40)
        direct2 = sum(
            (m + 1) * (m + 2) * beta**m / 2 for m in range(T + 1, 400)
        )
        assert abs(_geom_tail_quadratic(beta, T) - direct2) < F(1, 10**40)


def test_pochhammer_tail_bound_is_rigorous():
    q = F(1, 2)
    b = pochhammer_inf_num(q, q, F(1, 10**20))
    exact = F(1)
    for i in range(1, 400):
        exact *= 1 - q**i
    assert abs(b.val - exact) <= b.err


def test_theta_num_vs_product_oracle():
    q = F(1, 5)
    w = F(2, 3)
    b = jacobi_theta_num(w, 1, q, EPS)
    exact = F(1)
    for i in range(0, 200):
        exact *= (1 - q**i * w) * (1 - q ** (i + 1) / w) * (1 - q ** (i + 1))
    assert abs(b.val - exact) <= b.err


def test_bilateral_num_vs_brute():
    q = F(1, 10)
    t, w = F(2, 5), F(-3, 5)
    b = bilateral_pole_sum_num(t, w, F(1), F(0), 2, 0, True, q, EPS)
    brute = F(0)
    for k in range(-40, 41):
        s = -1 if k % 2 else 1
        brute += s * t**k * q ** (k * k) / (1 - w * q ** (2 * k))
    assert abs(b.val - brute) <= b.err


def test_appell_lerch_num_vs_brute():
    q = F(1, 10)
    x, z = F(-3, 4), F(2, 5)
    b = appell_lerch_m_num(x, 2, z, q, EPS)
    tot = F(0)
    for r in range(-50, 51):
        s = -1 if r % 2 else 1
        tot += s * q ** (2 * (r * (r - 1)) // 2) * z**r / (1 - q ** (2 * (r - 1)) * x * z)
    theta = jacobi_theta_num(z, 2, q, F(1, 10**40))
    assert abs(b.val - tot / theta.val) <= b.err + F(1, 10**35)


def test_kronecker_identity_numeric():
    q = F(1, 10)
    x, y = F(1, 2), F(1, 3)
    L = kronecker_unilateral_num(x, y, q, EPS)
    R = kronecker_product_rhs_num(x, y, q, EPS)
    assert abs(L.val - R.val) <= 2 * (L.err + R.err)
    with pytest.raises(NonconvergentPoint):
        kronecker_unilateral_num(F(2), y, q, EPS)
    with pytest.raises(NonconvergentPoint):
        kronecker_unilateral_num(x, y, F(2), EPS)


def brute_F_thm1(x, y, z, q, B=120):
    tot = F(0)
    for s in range(B):
        for t in range(B):
            if s * t + s + t > B + 10:
                continue
            tot += q ** (s * t) * y**s * z**t / (1 - x * q ** (s + t))
    for b in range(1, B):
        for c in range(1, B):
            if b * c > B + 10:
                continue
            tot -= q ** (b * c) * y**-b * z**-c / (1 - x * q ** (-(b + c)))
    return tot


def test_F_num_thm1_vs_brute():
    y, z = F(1, 2), F(2, 5)
    for x in (F(-2, 3), F(49) * F(17, 16)):
        v = F_kernel_num("thm1", x, y, z, Q7, EPS)
        # the brute box is exact well past 1e-30
        assert abs(v.val - brute_F_thm1(x, y, z, Q7)) <= v.err + F(1, 10**28), x


def test_F_num_parity_variants_vs_brute():
    q = F(1, 5)
    x, y, z = F(1, 2), F(2, 5), F(-1, 3)
    B = 35
    x2 = x * x
    tot = F(0)
    for sgn, rng in ((1, range(0, B)), (-1, range(-B, 0))):
        for s in rng:
            for t in rng:
                tot += sgn * q ** (4 * s * t) * y ** (2 * s) * z ** (2 * t) / (
                    1 - x2 * q ** (4 * s + 4 * t)
                )
                tot += sgn * x * q ** (4 * s * t + 4 * s + 4 * t + 3) * y ** (
                    2 * s + 1
                ) * z ** (2 * t + 1) / (1 - x2 * q ** (4 * s + 4 * t + 4))
    v = F_kernel_num("same_parity", x, y, z, q, EPS)
    assert abs(v.val - tot) <= v.err + F(1, 10**25)
    tot = F(0)
    for sgn, rng in ((1, range(0, B)), (-1, range(-B, 0))):
        for s in rng:
            for t in rng:
                den = 1 - x2 * q ** (4 * s + 4 * t + 2)
                tot += sgn * z * q ** (4 * s * t + 2 * s) * y ** (2 * s) * z ** (2 * t) / den
                tot += sgn * x * y * q * q ** (4 * s * t + 2 * s + 4 * t) * y ** (
                    2 * s
                ) * z ** (2 * t) / den
    v = F_kernel_num("diff_parity", x, y, z, q, EPS)
    assert abs(v.val - tot) <= v.err + F(1, 10**25)


def test_theorem_identities_numeric():
    q = F(1, 10)
    x, y, z = F(-3, 5), F(1, 2), F(2, 5)
    FL = F_kernel_num("thm1", x, y, z, q, EPS)
    GR = G_kernel_num("thm1", x, y, z, q, EPS)
    assert abs(FL.val - GR.val) <= 2 * (FL.err + GR.err)
    # triple sums match the kernels inside the annulus (the 3d sum is the
    # expensive evaluator, so a moderate eps keeps this test quick)
    eps3 = F(1, 10**12)
    xx = F(2, 5)
    T = triple_sum_num("all", xx, y, z, q, eps3)
    FF = F_kernel_num("thm1", xx, y, z, q, eps3)
    assert abs(T.val - FF.val) <= 2 * (T.err + FF.err)
    for mode, variant in (("same", "same_parity"), ("diff", "diff_parity")):
        T = triple_sum_num(mode, xx, y, z, q, eps3)
        GG = G_kernel_num(variant, xx, y, z, q, eps3)
        assert abs(T.val - GG.val) <= 2 * (T.err + GG.err), mode


def test_double_sum_numeric_identities():
    q = F(1, 10)
    x, y = F(1, 2), F(1, 3)
    D = hecke_double_sum_num(0, 0, 1, False, None, x, y, q, EPS)
    R = kronecker_product_rhs_num(x, y, q, EPS)
    assert abs(D.val - R.val) <= 2 * (D.err + R.err)
    # parity split: full = same + diff
    S = hecke_double_sum_num(0, 0, 1, False, "same", x, y, q, EPS)
    Dd = hecke_double_sum_num(0, 0, 1, False, "diff", x, y, q, EPS)
    assert abs(D.val - S.val - Dd.val) <= D.err + S.err + Dd.err


def test_g_decomposition_numeric():
    q = F(1, 7)
    x, y, z = F(3, 4), F(1, 2), F(2, 5)
    for variant in ("thm1", "same_parity", "diff_parity"):
        g1 = G1_kernel_num(variant, x, y, z, q, EPS)
        g2 = G2_kernel_num(variant, x, y, z, q, EPS)
        g = G_kernel_num(variant, x, y, z, q, EPS)
        assert abs(g.val - g1.val - g2.val) <= g.err + g1.err + g2.err
