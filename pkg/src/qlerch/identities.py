"""The identity catalog: every verifiable statement the library implements,
as (lhs, rhs) Series builders with machine-checkable constraints.

Each entry's ``build(bindings, order)`` yields one or more
(case label, lhs, rhs) triples exact through ``order``.  ``constraints``
raises ConstraintViolation naming the violated hypothesis; it pre-checks
both the theorem-level hypotheses and the genericity every component
denominator needs, so random specializations can be filtered cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import ConstraintViolation
from .qfunctions import J_shorthand, appell_lerch_m, jacobi_theta
from .heckesums import (
    DoubleSumSpec,
    F_kernel,
    G_kernel,
    TripleSumSpec,
    double_sum,
    kronecker_unilateral,
    reindex_shift_sides,
    triple_sum,
)
from .series import MonomialSpec, Series, build_to_order
from . import numeric

_ZERO = Fraction(0)
_Q = MonomialSpec(1, 1)


@dataclass
class IdentitySpec:
    id: str
    params: tuple
    citation: str
    build: Callable
    constraints: Callable
    default_order: Fraction = Fraction(25)
    default_count: int = 3
    expected: str = "pass"
    numeric_lhs: Optional[Callable] = None
    numeric_rhs: Optional[Callable] = None
    numeric_abs: Optional[Callable] = None


def _need(cond: bool, msg: str):
    if not cond:
        raise ConstraintViolation(msg)


def _window(b, name, lo=0, hi=1):
    _need(
        Fraction(lo) < b[name].e < Fraction(hi),
        f"exponent of {name} must lie in ({lo}, {hi})",
    )


def _units(pairs):
    """Each (monomial, modulus, label) must avoid the lattice q^(m Z)."""
    for w, m, label in pairs:
        _need(
            not w.is_integral_power_of_q(m),
            f"{label} is an integral power of q^{m} (degenerate denominator)",
        )


def _theta(w, m, n):
    return jacobi_theta(w, m, n)


def _inv(w, m, n):
    return jacobi_theta(w, m, n).invert()


def _Jc(m, n):
    e = J_shorthand(0, m, "eta", n)
    return e * e * e


def _tq1(u, v, n):
    """J1^3 j(uv; q) / (j(u; q) j(v; q))."""
    return _Jc(1, n) * _theta(u * v, 1, n) * _inv(u, 1, n) * _inv(v, 1, n)


def _tq4(u, v, n):
    """J4^3 j(u^2 v^2; q^4) / (j(u^2; q^4) j(v^2; q^4))."""
    u2, v2 = u * u, v * v
    return _Jc(4, n) * _theta(u2 * v2, 4, n) * _inv(u2, 4, n) * _inv(v2, 4, n)


def _pair(lhs_fn, rhs_fn, order, label="") -> tuple:
    return (
        label,
        build_to_order(lhs_fn, order),
        build_to_order(rhs_fn, order),
    )


# individual builders

def _b_kron11(b, order):
    x, y = b["x"], b["y"]
    yield _pair(
        lambda n: kronecker_unilateral(x, y, n),
        lambda n: _tq1(x, y, n),
        order,
    )


def _c_kron11(b):
    _window(b, "x")
    _units([(b["y"], 1, "y"), (b["x"], 1, "x")])


def _b_kron12(b, order):
    x, y = b["x"], b["y"]
    yield _pair(
        lambda n: double_sum(DoubleSumSpec(0, 0, 1, False, None, x, y), n),
        lambda n: _tq1(x, y, n),
        order,
    )


def _c_kron12(b):
    _window(b, "x")
    _window(b, "y")
    _units([(b["x"], 1, "x"), (b["y"], 1, "y")])


def _b_hecke14(b, order):
    x, y = b["x"], b["y"]

    def rhs(n):
        t1 = _theta(y, 1, n) * appell_lerch_m(x.q_shift(2) / (y * y), 3, MonomialSpec(-1, 0), n)
        t2 = _theta(x, 1, n) * appell_lerch_m(y.q_shift(2) / (x * x), 3, MonomialSpec(-1, 0), n)
        quot = (
            _Jc(3, n)
            * _theta(-(x / y), 1, n)
            * _theta((x * y).q_shift(2), 3, n)
            * _inv(MonomialSpec(-1, 0), 3, n)
            * _inv(-(y * y / x).q_shift(1), 3, n)
            * _inv(-(x * x / y).q_shift(1), 3, n)
        ).shift(y.c, y.e)
        return t1 + t2 - quot

    yield _pair(
        lambda n: double_sum(DoubleSumSpec(1, 1, 2, True, None, x, y), n),
        rhs,
        order,
    )


def _c_hecke14(b):
    _window(b, "x")
    _window(b, "y")
    x, y = b["x"], b["y"]
    _units([
        (-(x.q_shift(2) / (y * y)), 3, "-q^2 x/y^2"),
        (-(y.q_shift(2) / (x * x)), 3, "-q^2 y/x^2"),
        (-(y * y / x).q_shift(1), 3, "-q y^2/x"),
        (-(x * x / y).q_shift(1), 3, "-q x^2/y"),
    ])


def _b_hick(parity):
    def build(b, order):
        x, y = b["x"], b["y"]
        x2, y2 = x * x, y * y

        def rhs(n):
            core = (
                J_shorthand(2, 4, "plain", n)
                * _theta((x * y).q_shift(0 if parity == "diff" else 1), 2, n)
                * _theta(-(x / y) if parity == "diff" else -(x / y).q_shift(1), 2, n)
                * _theta((x2 * y2).q_shift(2 if parity == "diff" else 0), 4, n)
                * _inv(x2, 2, n)
                * _inv(y2, 2, n)
            )
            if parity == "diff":
                core = core.shift(y.c, y.e)
            return core

        yield _pair(
            lambda n: double_sum(DoubleSumSpec(0, 0, 1, False, parity, x, y), n),
            rhs,
            order,
        )

    return build


def _c_hick(b):
    _window(b, "x")
    _window(b, "y")
    x, y = b["x"], b["y"]
    _units([(x * x, 2, "x^2"), (y * y, 2, "y^2")])


def _thm1_gside_units(x, y, z):
    return [
        (x, 1, "x"), (y, 1, "y"), (z, 1, "z"),
        (-x, 2, "-x"), (-y, 2, "-y"), (-z, 2, "-z"),
        ((y * z).q_shift(1), 2, "qyz"),
        ((x * y).q_shift(1), 2, "qxy"),
        ((x * z).q_shift(1), 2, "qxz"),
        (-x.q_shift(2), 2, "-q^2 x"),
        (-y.q_shift(2), 2, "-q^2 y"),
        (-z.q_shift(2), 2, "-q^2 z"),
    ]


def _b_thm1(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: F_kernel("thm1", x, y, z, n),
        lambda n: G_kernel("thm1", x, y, z, n),
        order,
    )


def _c_thm1(b):
    x, y, z = b["x"], b["y"], b["z"]
    _need(not x.is_integral_power_of_q(), "x is an integral power of q")
    _window(b, "y")
    _window(b, "z")
    _units(_thm1_gside_units(x, y, z))


def _b_cor12(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: triple_sum(TripleSumSpec("all", x, y, z), n),
        lambda n: G_kernel("thm1", x, y, z, n),
        order,
    )


def _c_cor12(b):
    _window(b, "x")
    _c_thm1(b)


def _same_gside_units(x, y, z):
    qx, qy, qz = x.q_shift(1), y.q_shift(1), z.q_shift(1)
    return [
        (x, 1, "x"), (y, 1, "y"), (z, 1, "z"),
        (-x, 2, "-x"), (-y, 2, "-y"), (-z, 2, "-z"),
        (x * x, 4, "x^2"), (y * y, 4, "y^2"), (z * z, 4, "z^2"),
        (-(y * z), 2, "-yz"), (-(x * z), 2, "-xz"), (-(x * y), 2, "-xy"),
        (qx, 2, "qx"), (qy, 2, "qy"), (qz, 2, "qz"),
    ]


def _b_thm13(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: triple_sum(TripleSumSpec("same", x, y, z), n),
        lambda n: G_kernel("same_parity", x, y, z, n),
        order,
    )


def _c_thm13(b):
    x, y, z = b["x"], b["y"], b["z"]
    for name in ("x", "y", "z"):
        _window(b, name)
        _need(
            not b[name].is_pm_even_power(),
            f"{name} has the form +-q^(2n)",
        )
    _units(_same_gside_units(x, y, z))


def _diff_gside_units(x, y, z):
    q2 = MonomialSpec(1, 2)
    return [
        (x, 1, "x"), (y, 1, "y"), (z, 1, "z"),
        (-x.q_shift(1), 2, "-qx"), (-y.q_shift(1), 2, "-qy"), (-z, 2, "-z"),
        ((x * x).q_shift(2), 4, "q^2 x^2"), ((y * y).q_shift(2), 4, "q^2 y^2"),
        (z * z, 4, "z^2"),
        (-(y * z).q_shift(1), 2, "-qyz"), (-(x * z).q_shift(1), 2, "-qxz"),
        (-(x * y), 2, "-xy"),
        (x.q_shift(2), 2, "q^2 x"), (y.q_shift(2), 2, "q^2 y"),
        (z.q_shift(1), 2, "qz"),
    ]


def _b_thm14(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: triple_sum(TripleSumSpec("diff", x, y, z), n),
        lambda n: G_kernel("diff_parity", x, y, z, n),
        order,
    )


def _c_thm14(b):
    x, y, z = b["x"], b["y"], b["z"]
    for name in ("x", "y", "z"):
        _window(b, name)
    _need(not x.is_pm_odd_power(), "x has the form +-q^(2n+1)")
    _units(_diff_gside_units(x, y, z))


def _b_geom_split(variant, mode):
    def build(b, order):
        x, y, z = b["x"], b["y"], b["z"]
        yield _pair(
            lambda n: F_kernel(variant, x, y, z, n),
            lambda n: triple_sum(TripleSumSpec(mode, x, y, z), n),
            order,
        )
    return build


def _c_geom_split(variant):
    def chk(b):
        for name in ("x", "y", "z"):
            _window(b, name)
        x = b["x"]
        if variant == "thm1":
            _need(not x.is_integral_power_of_q(), "x is an integral power of q")
        elif variant == "same_parity":
            _need(not x.is_pm_even_power(), "x has the form +-q^(2n)")
        else:
            _need(not x.is_pm_odd_power(), "x has the form +-q^(2n+1)")
    return chk


def _b_gdecomp(variant):
    def build(b, order):
        x, y, z = b["x"], b["y"], b["z"]
        yield _pair(
            lambda n: G_kernel(variant, x, y, z, n),
            lambda n: G_kernel(variant, x, y, z, n, part="g1")
            + G_kernel(variant, x, y, z, n, part="g2"),
            order,
        )
    return build


def _c_gvariant(variant):
    def chk(b):
        x, y, z = b["x"], b["y"], b["z"]
        for name in ("y", "z"):
            _window(b, name)
        if variant == "thm1":
            _need(not x.is_integral_power_of_q(), "x is an integral power of q")
            _units(_thm1_gside_units(x, y, z))
            # the G1 k-sums need x, z, y off -q^(2n)
            for w, nm in ((x, "x"), (y, "y"), (z, "z")):
                _need(not (-w).is_integral_power_of_q(2), f"{nm} = -q^(2n)")
        elif variant == "same_parity":
            _need(not x.is_pm_even_power(), "x has the form +-q^(2n)")
            _units(_same_gside_units(x, y, z))
            for w, nm in ((x, "x"), (y, "y"), (z, "z")):
                _need(not w.is_pm_odd_power(), f"{nm} = +-q^(2n+1)")
        else:
            _need(not x.is_pm_odd_power(), "x has the form +-q^(2n+1)")
            _units(_diff_gside_units(x, y, z))
            for w, nm in ((x, "x"), (y, "y"), (z, "z")):
                _need(not w.is_pm_even_power(), f"{nm} = +-q^(2n)")
    return chk


def _fe_correction_thm1(x, y, z, pref, n):
    t = _tq1(y, z, n)
    t = t - _tq1(x, y, n).shift(pref.c, pref.e).truncate(n)
    t = t - _tq1(x, z, n).shift(pref.c, pref.e).truncate(n)
    return t


def _fe_correction_same(x, y, z, pref, n):
    t = _tq4(y, z, n)
    t = t - _tq4(x, y, n).shift(pref.c, pref.e).truncate(n)
    t = t - _tq4(x, z, n).shift(pref.c, pref.e).truncate(n)
    return t


def _fe_correction_diff(x, y, z, pref, n):
    q2 = MonomialSpec(1, 2)
    x2, y2, z2 = x * x, y * y, z * z
    q2x2, q2y2 = x2.q_shift(2), y2.q_shift(2)
    t1 = (
        _Jc(4, n) * _theta(q2y2 * z2, 4, n) * _inv(q2y2, 4, n) * _inv(z2, 4, n)
    ).shift(z.c, z.e)
    w2 = _Q * x / y
    t2 = (
        _Jc(4, n) * _theta(q2x2 * z2, 4, n) * _inv(q2x2, 4, n) * _inv(z2, 4, n)
    ).shift(-w2.c, w2.e)
    w3 = q2 / (z * y * y)
    t3 = (
        _Jc(4, n) * _theta(x2 * y2, 4, n) * _inv(q2x2, 4, n) * _inv(q2y2, 4, n)
    ).shift(w3.c, w3.e)
    return t1 + t2 + t3


def _b_functional(variant, which):
    corr = {
        "thm1": _fe_correction_thm1,
        "same_parity": _fe_correction_same,
        "diff_parity": _fe_correction_diff,
    }[variant]

    def kernel(n, x, y, z):
        if which == "F":
            return F_kernel(variant, x, y, z, n)
        if which == "G":
            return G_kernel(variant, x, y, z, n)
        return F_kernel(variant, x, y, z, n) - G_kernel(variant, x, y, z, n)

    def build(b, order):
        x, y, z = b["x"], b["y"], b["z"]
        pref = _Q * x / (y * z)
        pad = max(_ZERO, -pref.e)

        def lhs(n):
            return kernel(n, x.q_shift(2), y, z)

        def rhs(n):
            base = kernel(n + pad, x, y, z).shift(pref.c, pref.e).truncate(n)
            if which == "H":
                return base
            return base + corr(x, y, z, pref, n)

        yield _pair(lhs, rhs, order)

    return build


def _c_functional(variant):
    base = _c_gvariant(variant)

    def chk(b):
        base(b)
        # the shifted kernels at q^2 x need the same genericity for q^2 x
        shifted = dict(b)
        shifted["x"] = b["x"].q_shift(2)
        base(shifted)

    return chk


def _b_lemma81(b, order):
    x, y, z = b["x"], b["y"], b["z"]

    def lhs(n):
        t0 = triple_sum(TripleSumSpec("all", x, y, z), n)
        t1 = triple_sum(
            TripleSumSpec("all", x, y.q_shift(1), z.q_shift(1)), n
        )
        return t0 - t1.shift(x.c, x.e).truncate(n)

    yield _pair(lhs, lambda n: _tq1(y, z, n), order)


def _c_lemma81(b):
    for name in ("x", "y", "z"):
        _window(b, name)
    _units([(b["y"], 1, "y"), (b["z"], 1, "z")])


def _b_theta21a(b, order):
    x = b["x"]
    for n in range(-3, 4):
        pref_c = (-1 if n % 2 else 1) * x.c ** (-n)
        pref_e = -Fraction(n * (n - 1), 2) - n * x.e
        pad = max(_ZERO, -pref_e)
        yield _pair(
            lambda m: jacobi_theta(x.q_shift(n), 1, m, form="sum"),
            lambda m, pc=pref_c, pe=pref_e, pd=pad: jacobi_theta(
                x, 1, m + pd
            ).shift(pc, pe).truncate(m),
            order,
            label=f"n={n}",
        )


def _b_theta21b(b, order):
    x = b["x"]
    yield _pair(
        lambda n: jacobi_theta(x, 1, n),
        lambda n: jacobi_theta(MonomialSpec(1 / x.c, 1 - x.e), 1, n),
        order,
        label="j(q/x)",
    )
    inv = x.inverse()
    pad = max(_ZERO, -x.e)
    yield _pair(
        lambda n: jacobi_theta(x, 1, n),
        lambda n: jacobi_theta(inv, 1, n + pad).shift(-x.c, x.e).truncate(n),
        order,
        label="-x j(1/x)",
    )


def _b_theta21c(b, order):
    x = b["x"]
    yield _pair(
        lambda n: jacobi_theta(x, 1, n),
        lambda n: (
            J_shorthand(0, 1, "eta", n)
            * jacobi_theta(x, 2, n)
            * jacobi_theta(x.q_shift(1), 2, n)
            * (J_shorthand(0, 2, "eta", n) ** 2).invert()
        ),
        order,
    )


def _b_theta21d(b, order, denom_power=2):
    x = b["x"]
    yield _pair(
        lambda n: jacobi_theta(x * x, 2, n),
        lambda n: (
            J_shorthand(0, 2, "eta", n)
            * jacobi_theta(x, 1, n)
            * jacobi_theta(-x, 1, n)
            * (J_shorthand(0, 1, "eta", n) ** denom_power).invert()
        ),
        order,
    )


def _c_theta_generic(b):
    # the theta builders are total over nonzero monomials
    pass


def _m_units(x, z, M=1):
    return [
        (z, M, "z"),
        (x * z, M, "xz"),
    ]


def _b_m24(which):
    def build(b, order):
        x, z = b["x"], b["z"]
        if which == "a":
            yield _pair(
                lambda n: appell_lerch_m(x, 1, z, n),
                lambda n: appell_lerch_m(x, 1, z.q_shift(1), n),
                order,
            )
        elif which == "b":
            xi, zi = x.inverse(), z.inverse()
            pad = max(_ZERO, -xi.e)
            yield _pair(
                lambda n: appell_lerch_m(x, 1, z, n),
                lambda n: appell_lerch_m(xi, 1, zi, n + pad)
                .shift(xi.c, xi.e)
                .truncate(n),
                order,
            )
        elif which == "c":
            pad = max(_ZERO, -x.e)
            yield _pair(
                lambda n: appell_lerch_m(x.q_shift(1), 1, z, n),
                lambda n: Series.one(n)
                - appell_lerch_m(x, 1, z, n + pad).shift(x.c, x.e).truncate(n),
                order,
            )
        else:
            w = (x * z).inverse()
            yield _pair(
                lambda n: appell_lerch_m(x, 1, z, n),
                lambda n: appell_lerch_m(x, 1, w, n),
                order,
            )

    return build


def _c_m24(which):
    def chk(b):
        x, z = b["x"], b["z"]
        _units(_m_units(x, z))
        if which == "a":
            _units([(z.q_shift(1), 1, "qz")])
        elif which == "b":
            _units(_m_units(x.inverse(), z.inverse()))
        elif which == "c":
            _units(_m_units(x.q_shift(1), z))
        else:
            w = (x * z).inverse()
            _units(_m_units(x, w))
    return chk


def _b_eq26(b, order):
    x, z = b["x"], b["z"]
    xm = x.q_shift(-1)
    pad = max(_ZERO, -xm.e)
    yield _pair(
        lambda n: appell_lerch_m(x, 1, z, n),
        lambda n: Series.one(n)
        - appell_lerch_m(xm, 1, z, n + pad).shift(xm.c, xm.e).truncate(n),
        order,
    )


def _c_eq26(b):
    x, z = b["x"], b["z"]
    _units(_m_units(x, z) + _m_units(x.q_shift(-1), z))


def _b_prop23(b, order):
    x, z0, z1 = b["x"], b["z0"], b["z1"]

    def rhs(n):
        quot = (
            _Jc(1, n)
            * _theta(z1 / z0, 1, n)
            * _theta(x * z0 * z1, 1, n)
            * _inv(z0, 1, n)
            * _inv(z1, 1, n)
            * _inv(x * z0, 1, n)
            * _inv(x * z1, 1, n)
        )
        return quot.shift(z0.c, z0.e)

    yield _pair(
        lambda n: appell_lerch_m(x, 1, z1, n) - appell_lerch_m(x, 1, z0, n),
        rhs,
        order,
    )


def _c_prop23(b):
    x, z0, z1 = b["x"], b["z0"], b["z1"]
    _units(
        _m_units(x, z0)
        + _m_units(x, z1)
        + [(x * z0, 1, "xz0"), (x * z1, 1, "xz1"), (z0, 1, "z0"), (z1, 1, "z1")]
    )


def _b_eq29(b, order):
    y, z = b["y"], b["z"]
    xm = -(z / y.q_shift(1))

    def rhs(n):
        pref = (y.q_shift(1)) / z
        quot = (
            _Jc(2, n)
            * _theta(MonomialSpec(-1, 1), 2, n)
            * _theta(y * z, 2, n)
            * _inv(y.q_shift(1), 2, n)
            * _inv(-y, 2, n)
            * _inv(-z, 2, n)
            * _inv(z.q_shift(1), 2, n)
        )
        return quot.shift(pref.c, pref.e)

    yield _pair(
        lambda n: appell_lerch_m(xm, 2, y.q_shift(1), n)
        - appell_lerch_m(xm, 2, -y, n),
        rhs,
        order,
    )


def _c_eq29(b):
    y, z = b["y"], b["z"]
    xm = -(z / y.q_shift(1))
    _units(
        _m_units(xm, y.q_shift(1), 2)
        + _m_units(xm, -y, 2)
        + [(-z, 2, "-z"), (z.q_shift(1), 2, "qz")]
    )


def _b_eq210(b, order):
    x, y = b["x"], b["y"]
    for R, S in ((0, 0), (1, 1), (2, 0), (0, -1), (-1, 2), (1, -2)):
        lhs, rhs = reindex_shift_sides(R, S, x, y, order)
        yield (f"R={R},S={S}", lhs, rhs)


def _c_eq210(b):
    _window(b, "x")
    _window(b, "y")


def _b_eq213(b, order):
    x, z = b["x"], b["z"]
    for n in range(-3, 4):
        sign = -1 if n % 2 else 1
        mono_c = sign * x.c**n
        mono_e = Fraction(n * (n - 1), 2) + n * x.e
        pad = max(_ZERO, -mono_e)

        def rhs(m, n=n, mono_c=mono_c, mono_e=mono_e, pad=pad):
            def term(k):
                kc = (-1 if k % 2 else 1) * x.c**k
                ke = k * (n - 1) - Fraction(k * (k - 1), 2) + k * x.e
                return Series.monomial(kc, ke, m)

            head = Series.zero(m)
            if n >= 1:
                for k in range(0, n):
                    head = head + term(k)
            elif n <= -1:
                for k in range(n, 0):
                    head = head - term(k)
            tail = appell_lerch_m(x, 1, z, m + pad).shift(mono_c, mono_e)
            return head + tail.truncate(m)

        yield _pair(
            lambda m, n=n: appell_lerch_m(x.q_shift(n), 1, z, m),
            rhs,
            order,
            label=f"n={n}",
        )


def _c_eq213(b):
    x, z = b["x"], b["z"]
    _units(_m_units(x, z))
    for n in range(-3, 4):
        _units([(x.q_shift(n) * z, 1, f"q^{n} x z")])


def _b_sym_thm1(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: F_kernel("thm1", x, y, z, n),
        lambda n: F_kernel("thm1", x, z, y, n),
        order,
        label="F: y<->z",
    )
    yield _pair(
        lambda n: G_kernel("thm1", x, y, z, n),
        lambda n: G_kernel("thm1", x, z, y, n),
        order,
        label="G: y<->z",
    )


def _c_sym_thm1(b):
    _c_thm1(b)
    swapped = dict(b)
    swapped["y"], swapped["z"] = b["z"], b["y"]
    _c_thm1(swapped)


def _b_sym_triple(b, order):
    from itertools import permutations

    x, y, z = b["x"], b["y"], b["z"]
    base = triple_sum(TripleSumSpec("all", x, y, z), order)
    for perm in list(permutations((x, y, z)))[1:]:
        yield (
            "perm=" + ",".join(str(m) for m in perm),
            base,
            triple_sum(TripleSumSpec("all", *perm), order),
        )


def _c_triple(b):
    for name in ("x", "y", "z"):
        _window(b, name)


def _b_parity_split(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    lhs = triple_sum(TripleSumSpec("all", x, y, z), order)
    rhs = (
        triple_sum(TripleSumSpec("same", x, y, z), order)
        + triple_sum(TripleSumSpec("diff", x, y, z), order)
        + triple_sum(TripleSumSpec("diff", x, z, y), order)
        + triple_sum(TripleSumSpec("diff", y, z, x), order)
    )
    yield ("", lhs, rhs)


def _b_theta_prodsum(b, order):
    x = b["x"]
    for m in (1, 2, 3, 4):
        yield (
            f"m={m}",
            jacobi_theta(x, m, order, form="product"),
            jacobi_theta(x, m, order, form="sum"),
        )


# negative controls

def _b_ctl_qxy(b, order):
    x, y, z = b["x"], b["y"], b["z"]
    yield _pair(
        lambda n: F_kernel("thm1", x, y, z, n),
        lambda n: G_kernel("thm1", x, y, z, n, third_z_slot="qxy"),
        order,
    )


def _b_ctl_21d(b, order):
    yield from _b_theta21d(b, order, denom_power=1)


def _b_ctl_perturb(b, order):
    x, y = b["x"], b["y"]
    yield _pair(
        lambda n: double_sum(DoubleSumSpec(0, 0, 1, False, None, x, y), n),
        lambda n: _tq1(x, y, n) + Series.monomial(1, 3, n),
        order,
    )


# numeric twins for the cross-validated identities

def _n_kron11_lhs(v, q, eps, absolute=False):
    return numeric.kronecker_unilateral_num(v["x"], v["y"], q, eps, absolute)


def _n_kron11_rhs(v, q, eps, absolute=False):
    return numeric.kronecker_product_rhs_num(v["x"], v["y"], q, eps, absolute)


def _n_thm1_lhs(v, q, eps, absolute=False):
    return numeric.F_kernel_num("thm1", v["x"], v["y"], v["z"], q, eps, absolute)


def _n_thm1_rhs(v, q, eps, absolute=False):
    return numeric.G_kernel_num("thm1", v["x"], v["y"], v["z"], q, eps, absolute)


def catalog() -> dict[str, IdentitySpec]:
    specs = [
        IdentitySpec(
            "kronecker-1.1", ("x", "y"),
            "unilateral Kronecker sum = theta quotient",
            _b_kron11, _c_kron11, Fraction(25), 5,
            numeric_lhs=_n_kron11_lhs, numeric_rhs=_n_kron11_rhs,
        ),
        IdentitySpec(
            "kronecker-1.2", ("x", "y"),
            "sg-matched double sum = J1^3 j(xy)/(j(x) j(y))",
            _b_kron12, _c_kron12, Fraction(25), 5,
        ),
        IdentitySpec(
            "hecke-1.4", ("x", "y"),
            "Hecke-type double sum = Appell-Lerch + theta quotient",
            _b_hecke14, _c_hecke14, Fraction(25), 5,
        ),
        IdentitySpec(
            "hickerson-1.7", ("x", "y"),
            "same-parity sg double sum = theta quotient",
            _b_hick("same"), _c_hick, Fraction(25), 5,
        ),
        IdentitySpec(
            "hickerson-1.8", ("x", "y"),
            "mixed-parity sg double sum = theta quotient",
            _b_hick("diff"), _c_hick, Fraction(25), 5,
        ),
        IdentitySpec(
            "thm1", ("x", "y", "z"),
            "double-sum kernel F = Appell-Lerch closed form G",
            _b_thm1, _c_thm1, Fraction(25), 5,
            numeric_lhs=_n_thm1_lhs, numeric_rhs=_n_thm1_rhs,
        ),
        IdentitySpec(
            "cor1.2", ("x", "y", "z"),
            "symmetric triple sum = Appell-Lerch closed form",
            _b_cor12, _c_cor12, Fraction(25), 5,
        ),
        IdentitySpec(
            "thm1.3", ("x", "y", "z"),
            "same-parity triple sum = closed form",
            _b_thm13, _c_thm13, Fraction(25), 5,
        ),
        IdentitySpec(
            "thm1.4", ("x", "y", "z"),
            "mixed-parity triple sum = closed form",
            _b_thm14, _c_thm14, Fraction(25), 5,
        ),
        IdentitySpec(
            "geom-split-thm1", ("x", "y", "z"),
            "geometric expansion of the kernel = unrestricted triple sum",
            _b_geom_split("thm1", "all"), _c_geom_split("thm1"), Fraction(20), 3,
        ),
        IdentitySpec(
            "geom-split-6", ("x", "y", "z"),
            "geometric splitting = same-parity triple sum",
            _b_geom_split("same_parity", "same"), _c_geom_split("same_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "geom-split-7", ("x", "y", "z"),
            "restricted-sum splitting = mixed-parity triple sum",
            _b_geom_split("diff_parity", "diff"), _c_geom_split("diff_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "gdecomp-thm1", ("x", "y", "z"), "G = G1 + G2 (kernel family 1)",
            _b_gdecomp("thm1"), _c_gvariant("thm1"), Fraction(20), 3,
        ),
        IdentitySpec(
            "gdecomp-same", ("x", "y", "z"), "G = G1 + G2 (same-parity family)",
            _b_gdecomp("same_parity"), _c_gvariant("same_parity"), Fraction(20), 3,
        ),
        IdentitySpec(
            "gdecomp-diff", ("x", "y", "z"), "G = G1 + G2 (mixed-parity family)",
            _b_gdecomp("diff_parity"), _c_gvariant("diff_parity"), Fraction(20), 3,
        ),
        IdentitySpec(
            "theta-2.1a", ("x",), "theta shift law under q^n x",
            _b_theta21a, _c_theta_generic, Fraction(20), 10,
        ),
        IdentitySpec(
            "theta-2.1b", ("x",), "theta inversion laws",
            _b_theta21b, _c_theta_generic, Fraction(20), 10,
        ),
        IdentitySpec(
            "theta-2.1c", ("x",), "modulus-doubling factorization",
            _b_theta21c, _c_theta_generic, Fraction(20), 10,
        ),
        IdentitySpec(
            "theta-2.1d", ("x",),
            "square-argument factorization (denominator J1^2, corrected)",
            _b_theta21d, _c_theta_generic, Fraction(20), 10,
        ),
        IdentitySpec(
            "m-2.4a", ("x", "z"), "z -> qz invariance of the Appell-Lerch sum",
            _b_m24("a"), _c_m24("a"), Fraction(20), 10,
        ),
        IdentitySpec(
            "m-2.4b", ("x", "z"), "inversion law of the Appell-Lerch sum",
            _b_m24("b"), _c_m24("b"), Fraction(20), 10,
        ),
        IdentitySpec(
            "m-2.4c", ("x", "z"), "x -> qx shift of the Appell-Lerch sum",
            _b_m24("c"), _c_m24("c"), Fraction(20), 10,
        ),
        IdentitySpec(
            "m-2.4d", ("x", "z"), "z -> 1/(xz) invariance",
            _b_m24("d"), _c_m24("d"), Fraction(20), 10,
        ),
        IdentitySpec(
            "eq2.6", ("x", "z"), "downward x-shift rewrite",
            _b_eq26, _c_eq26, Fraction(20), 10,
        ),
        IdentitySpec(
            "prop2.3", ("x", "z0", "z1"), "change of z: theta-quotient difference",
            _b_prop23, _c_prop23, Fraction(20), 10,
        ),
        IdentitySpec(
            "eq2.9", ("y", "z"), "specialized change-of-z difference",
            _b_eq29, _c_eq29, Fraction(20), 10,
        ),
        IdentitySpec(
            "eq2.10", ("x", "y"), "lattice reindexing with row/column corrections",
            _b_eq210, _c_eq210, Fraction(20), 5,
        ),
        IdentitySpec(
            "eq2.13", ("x", "z"), "q^n x recursion with conventional sums",
            _b_eq213, _c_eq213, Fraction(20), 10,
        ),
        IdentitySpec(
            "prop3.1-F", ("x", "y", "z"), "functional equation of F (family 1)",
            _b_functional("thm1", "F"), _c_functional("thm1"), Fraction(20), 3,
        ),
        IdentitySpec(
            "prop3.1-G", ("x", "y", "z"), "functional equation of G (family 1)",
            _b_functional("thm1", "G"), _c_functional("thm1"), Fraction(20), 3,
        ),
        IdentitySpec(
            "prop6-F", ("x", "y", "z"), "functional equation of F (same parity)",
            _b_functional("same_parity", "F"), _c_functional("same_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "prop6-G", ("x", "y", "z"), "functional equation of G (same parity)",
            _b_functional("same_parity", "G"), _c_functional("same_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "prop7-F", ("x", "y", "z"), "functional equation of F (mixed parity)",
            _b_functional("diff_parity", "F"), _c_functional("diff_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "prop7-G", ("x", "y", "z"), "functional equation of G (mixed parity)",
            _b_functional("diff_parity", "G"), _c_functional("diff_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "fe-H-thm1", ("x", "y", "z"),
            "H = F - G satisfies the homogeneous functional equation",
            _b_functional("thm1", "H"), _c_functional("thm1"), Fraction(20), 3,
        ),
        IdentitySpec(
            "fe-H-same", ("x", "y", "z"),
            "H functional equation (same parity)",
            _b_functional("same_parity", "H"), _c_functional("same_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "fe-H-diff", ("x", "y", "z"),
            "H functional equation (mixed parity)",
            _b_functional("diff_parity", "H"), _c_functional("diff_parity"),
            Fraction(20), 3,
        ),
        IdentitySpec(
            "lemma8.1", ("x", "y", "z"),
            "index shift of the unrestricted triple sum",
            _b_lemma81, _c_lemma81, Fraction(25), 5,
        ),
        IdentitySpec(
            "sym-thm1", ("x", "y", "z"), "y <-> z symmetry of F and G",
            _b_sym_thm1, _c_sym_thm1, Fraction(15), 3,
        ),
        IdentitySpec(
            "sym-triple", ("x", "y", "z"), "full S3 symmetry of the triple sum",
            _b_sym_triple, _c_triple, Fraction(15), 3,
        ),
        IdentitySpec(
            "parity-split", ("x", "y", "z"),
            "triple sum = same-parity + three mixed orientations",
            _b_parity_split, _c_triple, Fraction(15), 3,
        ),
        IdentitySpec(
            "theta-prodsum", ("x",), "product form = bilateral sum form",
            _b_theta_prodsum, _c_theta_generic, Fraction(40), 50,
        ),
        IdentitySpec(
            "ctl-thm1-qxy", ("x", "y", "z"),
            "negative control: qxy reading of the third Appell-Lerch term",
            _b_ctl_qxy, _c_thm1, Fraction(10), 1, expected="fail",
        ),
        IdentitySpec(
            "ctl-2.1d-J1", ("x",),
            "negative control: printed J1^1 denominator",
            _b_ctl_21d, _c_theta_generic, Fraction(10), 1, expected="fail",
        ),
        IdentitySpec(
            "ctl-perturb", ("x", "y"),
            "negative control: deliberately perturbed coefficient",
            _b_ctl_perturb, _c_kron12, Fraction(10), 1, expected="fail",
        ),
    ]
    return {s.id: s for s in specs}


CATALOG = catalog()
