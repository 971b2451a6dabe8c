"""The named special functions: Pochhammer symbols, the theta function j,
the J shorthands, and the Appell-Lerch sum m(x, q^M, z).

Everything is built under monomial specialization x := c*q^e and returned as
an exact truncated Series.  Bilateral sums are truncated soundly: index k is
included whenever a provable lower bound lam(k) on its term's q-order is <=
the target order; lam is convex in k, so the scan stops once it fails on both
sides of the minimum.  A runtime guard asserts no emitted term ever lands
below its predicted bound.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

from .errors import DegenerateZ, NegativeExponentProduct, PoleAtSpecialization
from .series import MonomialSpec, Series, alt_sign, build_to_order, geom_expand

_HALF = Fraction(1, 2)
_ZERO = Fraction(0)


def _binom2(n: int) -> Fraction:
    return Fraction(n * (n - 1), 2)


def pochhammer_finite(x: MonomialSpec, n: int, order, base: int = 1) -> Series:
    """(x; q^base)_n = prod_{i=0}^{n-1} (1 - q^(base*i) x), truncated."""
    if n < 0:
        raise ValueError("finite Pochhammer needs n >= 0")
    order = Fraction(order)
    out = Series.one(order)
    for i in range(n):
        factor = Series.one(order) - Series.of_monomial(x.q_shift(base * i), order)
        out = out * factor
    return out


def pochhammer_inf(x: MonomialSpec, order, base: int = 1) -> Series:
    """(x; q^base)_inf = prod_{i>=0} (1 - q^(base*i) x), truncated.

    Factors whose monomial exponent exceeds the order are identically 1 on
    the window and are skipped, so the result is exact.  Requires e_x >= 0;
    negative exponents must be normalized away via the theta shift law first.
    """
    if x.e < 0:
        raise NegativeExponentProduct(
            f"(x; q^{base})_inf with x = {x}: leading exponent is negative"
        )
    order = Fraction(order)
    out = Series.one(order)
    i = 0
    while x.e + base * i <= order:
        factor = Series.one(order) - Series.of_monomial(x.q_shift(base * i), order)
        out = out * factor
        i += 1
    return out


@lru_cache(maxsize=None)
def _euler_product(m: int, order: Fraction) -> Series:
    """J_m = (q^m; q^m)_inf."""
    return pochhammer_inf(MonomialSpec(1, m), order, base=m)


def jacobi_theta(
    x: MonomialSpec,
    m: int,
    order,
    form: str = "product",
    normalize: bool = True,
) -> Series:
    """j(x; q^m) = (x;q^m)_inf (q^m/x;q^m)_inf (q^m;q^m)_inf, truncated.

    The product form first moves the effective exponent of x into [0, m)
    through the shift law j(q^{mn} x; q^m) = (-1)^n q^{-m*C(n,2)} x^{-n}
    j(x; q^m); the sum form evaluates the bilateral theta sum directly and
    needs no shift.  Lattice arguments x = q^{mk} give the zero series.
    """
    if m <= 0:
        raise ValueError("theta modulus must be a positive integer")
    order = Fraction(order)
    if form == "sum":
        return _theta_sum(x, m, order)
    if form != "product":
        raise ValueError("form must be 'product' or 'sum'")
    if not normalize:
        return _theta_product(x, m, order)
    n = int(x.e // m)
    if n == 0:
        return _theta_product(x, m, order)
    x0 = x.q_shift(-m * n)
    pref_c = alt_sign(n) * x0.c ** (-n)
    pref_e = -m * _binom2(n) - n * x0.e
    inner = _theta_product(x0, m, order + max(_ZERO, -pref_e))
    return inner.shift(pref_c, pref_e).truncate(order)


@lru_cache(maxsize=None)
def _theta_product(x: MonomialSpec, m: int, order: Fraction) -> Series:
    a = pochhammer_inf(x, order, base=m)
    b = pochhammer_inf(MonomialSpec(1 / x.c, m - x.e), order, base=m)
    return a * b * _euler_product(m, order)


@lru_cache(maxsize=None)
def _theta_sum(x: MonomialSpec, m: int, order: Fraction) -> Series:
    # bilateral sum_k (-1)^k q^{m C(k,2)} x^k; the exponent is convex in k
    def expo(k: int) -> Fraction:
        return m * _binom2(k) + k * x.e

    scale = lcm(x.e.denominator, order.denominator)
    terms: dict[int, Fraction] = {}

    def emit(k: int) -> bool:
        e = expo(k)
        if e > order:
            return False
        key = int(e * scale)
        c = alt_sign(k) * x.c**k
        v = terms.get(key, _ZERO) + c
        if v:
            terms[key] = v
        else:
            terms.pop(key, None)
        return True

    hint = int(_HALF - x.e / m)
    best = min(range(hint - 3, hint + 4), key=expo)
    k = best
    while emit(k):
        k += 1
    k = best - 1
    while emit(k):
        k -= 1
    return Series(scale, int(order * scale), terms)


def J_shorthand(a: int, m: int, kind: str = "plain", order=None) -> Series:
    """J_{a,m} = j(q^a; q^m), Jbar_{a,m} = j(-q^a; q^m), J_m = (q^m;q^m)_inf."""
    if order is None:
        raise ValueError("order is required")
    order = Fraction(order)
    if kind == "plain":
        return jacobi_theta(MonomialSpec(1, a), m, order)
    if kind == "bar":
        return jacobi_theta(MonomialSpec(-1, a), m, order)
    if kind == "eta":
        return _euler_product(m, order)
    raise ValueError("kind must be 'plain', 'bar' or 'eta'")


def bilateral_pole_sum(
    t: MonomialSpec,
    w: MonomialSpec,
    alpha: Fraction,
    beta: Fraction,
    slope: int,
    offset: Fraction,
    alternating: bool,
    order,
) -> Series:
    """sum_k sgn^k t^k q^{alpha k^2 + beta k} / (1 - w q^{slope*k + offset}).

    The common shape behind the Appell-Lerch sum and every k-sum in the G1
    decompositions.  Term k has q-order at least

        lam(k) = alpha k^2 + (beta + e_t) k + max(0, -(e_w + slope*k + offset)),

    a convex function of k, so indices are scanned outward from the integer
    minimum of lam until lam > order on both sides.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    offset = Fraction(offset)
    order = Fraction(order)
    if alpha <= 0:
        raise ValueError("quadratic growth coefficient must be positive")
    if w.c == 1 and ((w.e + offset) / slope).denominator == 1:
        raise PoleAtSpecialization(
            f"w = {w}: the denominator 1 - w q^({slope}k{offset:+}) vanishes "
            f"at k = {int(-(w.e + offset) / slope)}"
        )

    def lam(k: int) -> Fraction:
        d = w.e + slope * k + offset
        base = alpha * k * k + (beta + t.e) * k
        return base + max(_ZERO, -d)

    hint = int(-(beta + t.e) / (2 * alpha))
    best = min(range(hint - 3, hint + 4), key=lam)

    total = Series.zero(order)

    def term(k: int) -> Series | None:
        if lam(k) > order:
            return None
        d = w.e + slope * k + offset
        base_e = alpha * k * k + beta * k + t.e * k
        geo = geom_expand(w.c, d, order - base_e)
        sign = alt_sign(k) if alternating else 1
        piece = geo.shift(sign * t.c**k, base_e)
        if not piece.is_zero():
            low, _ = piece.lowest()
            assert low >= lam(k), "term fell below its predicted order bound"
        return piece.truncate(order)

    k = best
    while (piece := term(k)) is not None:
        total = total + piece
        k += 1
    k = best - 1
    while (piece := term(k)) is not None:
        total = total + piece
        k -= 1
    return total


def appell_lerch_m(x: MonomialSpec, M: int, z: MonomialSpec, order) -> Series:
    """m(x, q^M, z) truncated at ``order``:

        (1/j(z;q^M)) * sum_r (-1)^r q^{M C(r,2)} z^r / (1 - q^{M(r-1)} x z).

    Genericity is checked eagerly from the monomial data so failures name the
    violated hypothesis instead of surfacing as a division by zero.
    """
    if M <= 0:
        raise ValueError("Appell-Lerch modulus must be a positive integer")
    order = Fraction(order)
    if z.is_integral_power_of_q(M):
        raise DegenerateZ(
            f"z = {z} is an integral power of q^{M}, so j(z; q^{M}) = 0"
        )
    xz = x * z
    if xz.is_integral_power_of_q(M):
        raise PoleAtSpecialization(
            f"x*z = {xz} is an integral power of q^{M}: a denominator "
            f"1 - q^(M(r-1)) x z vanishes"
        )

    def build(n: Fraction) -> Series:
        theta_z = jacobi_theta(z, M, n)
        if theta_z.is_zero():
            raise DegenerateZ(f"j(z; q^{M}) vanishes to working order for z = {z}")
        inner = bilateral_pole_sum(
            t=z,
            w=xz,
            alpha=Fraction(M, 2),
            beta=Fraction(-M, 2),
            slope=M,
            offset=Fraction(-M),
            alternating=True,
            order=n,
        )
        return inner * theta_z.invert()

    return build_to_order(build, order)
