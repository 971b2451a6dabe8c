"""Certified evaluation at exact rational points.

Every evaluator returns a Ball (value, err) with a rigorous error bound: the
defining sums and products are accumulated in exact rational arithmetic and
cut off only once a provable tail bound drops below the requested eps.  The
tail inequalities are stated in comments next to the code that uses them.

The same enumerations run in ``absolute`` mode to produce an upper bound on
the sum of absolute values of all terms; that majorant certifies coefficient
tails when a truncated formal series is compared against a direct numeric
evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NonconvergentPoint, PoleAtSpecialization, PoleTooClose

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


class Ball:
    """An exact rational value with a rigorous absolute error bound."""

    __slots__ = ("val", "err")

    def __init__(self, val, err=0):
        self.val = Fraction(val)
        self.err = Fraction(err)
        if self.err < 0:
            raise ValueError("error bound must be nonnegative")

    def __repr__(self):
        return f"Ball({self.val} +- {self.err})"

    def __add__(self, other):
        other = _as_ball(other)
        return Ball(self.val + other.val, self.err + other.err)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.val, self.err)

    def __sub__(self, other):
        return self + (-_as_ball(other))

    def __rsub__(self, other):
        return (-self) + _as_ball(other)

    def __mul__(self, other):
        other = _as_ball(other)
        # |ab - a^b^| <= |a^| e_b + |b^| e_a + e_a e_b
        err = (
            abs(self.val) * other.err
            + abs(other.val) * self.err
            + self.err * other.err
        )
        return Ball(self.val * other.val, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ball(other)
        if other.err >= abs(other.val):
            raise PoleTooClose(
                f"division by a ball that may contain zero: {other!r}"
            )
        lo = abs(other.val) - other.err
        err = (self.err * abs(other.val) + abs(self.val) * other.err) / (
            abs(other.val) * lo
        )
        return Ball(self.val / other.val, err)

    def __pow__(self, k: int):
        out = Ball(1)
        b = self
        if k < 0:
            b = Ball(1) / b
            k = -k
        for _ in range(k):
            out = out * b
        return out

    def mag(self) -> Fraction:
        return abs(self.val) + self.err


def _as_ball(x) -> Ball:
    return x if isinstance(x, Ball) else Ball(x)


def _require_q(q: Fraction):
    if not (0 < abs(q) < 1):
        raise NonconvergentPoint(f"|q| must lie in (0, 1), got q = {q}")


def _geom_tail_linear(beta: Fraction, T: int) -> Fraction:
    """sum_{m>T} (m+1) beta^m = beta^(T+1) ((T+2) - (T+1) beta) / (1-beta)^2."""
    return beta ** (T + 1) * ((T + 2) - (T + 1) * beta) / (1 - beta) ** 2

def _geom_tail_quadratic(beta: Fraction, T: int) -> Fraction:
    """sum_{m>T} (m+1)(m+2)/2 beta^m, the second derivative of the geometric
    tail: ((T+2)(T+3) b^(T+1) (1-b)^2 + 2 b^(T+2) ((T+3)-(T+2) b)) / (2(1-b)^3)."""
    b = beta
    num = (T + 2) * (T + 3) * b ** (T + 1) * (1 - b) ** 2 + 2 * b ** (T + 2) * (
        (T + 3) - (T + 2) * b
    )
    return num / (2 * (1 - b) ** 3)


def _abs_geom_factor(aw: Fraction, QD: Fraction) -> Fraction:
    """Majorant of the coefficientwise absolute expansion of 1/(1 - w q^d):
    sum_j |w|^j Q^{jd} for d > 0 orientation, or the inverted rewrite.  QD is
    |w| * Q^d; the majorant diverges when QD = 1."""
    if QD < 1:
        return 1 / (1 - QD)
    if QD > 1:
        return 1 / (QD - 1)
    raise NonconvergentPoint("absolute majorant diverges: |w q^d| = 1")


@lru_cache(maxsize=100000)
def pochhammer_inf_num(
    x: Fraction, q: Fraction, eps: Fraction, base: int = 1, absolute: bool = False
) -> Ball:
    """(x; q^base)_inf at rational x.

    Tail bound: with u_i = x q^{base*i},  |prod_{i>I} (1 - u_i) - 1|
    <= 2 sum_{i>I} |u_i| = 2 |x| Q^{base(I+1)} / (1 - Q^base), valid once
    that sum is <= 1/2 (a logarithm-free product bound).  In absolute mode
    the factors become (1 + |u_i|) and the same tail bounds the remainder.
    """
    _require_q(q)
    x = Fraction(x)
    eps = Fraction(eps)
    Qb = abs(q) ** base
    ax = abs(x)
    prod = _ONE
    i = 0
    while True:
        # remaining factors start at index i
        sigma = 2 * ax * Qb**i / (1 - Qb)
        if sigma <= _HALF and abs(prod) * sigma <= eps:
            return Ball(prod, abs(prod) * sigma)
        u = x * q ** (base * i)
        prod *= (1 + abs(u)) if absolute else (1 - u)
        i += 1
        if i > 100000:
            raise NonconvergentPoint("Pochhammer product failed to converge")


def euler_num(m: int, q: Fraction, eps: Fraction) -> Ball:
    """J_m = (q^m; q^m)_inf."""
    return pochhammer_inf_num(q**m, q, eps, base=m)


@lru_cache(maxsize=100000)
def pochhammer_inv_abs_num(x: Fraction, q: Fraction, eps: Fraction, base: int = 1) -> Ball:
    """Upper bound on the absolute-coefficient series of 1/(x; q^base)_inf
    evaluated at |q|: each factor 1/(1 - u_i) dominates coefficientwise by
    1/(1 - |u_i|), and the tail product is <= 1/(1 - sigma) for sigma =
    sum_{i>I} |u_i| <= 1/2."""
    _require_q(q)
    x = Fraction(x)
    Qb = abs(q) ** base
    ax = abs(x)
    prod = _ONE
    i = 0
    while True:
        u = ax * Qb**i
        if u >= 1:
            raise NonconvergentPoint(
                "no absolute majorant: |x q^(base i)| >= 1 in a denominator factor"
            )
        sigma = ax * Qb**i / (1 - Qb)
        if sigma <= _HALF and abs(prod) * sigma <= eps:
            return Ball(prod / (1 - sigma), 0)
        prod /= 1 - u
        i += 1
        if i > 100000:
            raise NonconvergentPoint("inverse Pochhammer majorant did not close")


def jacobi_theta_abs_num(
    w: Fraction, m: int, q: Fraction, eps: Fraction, invert: bool = False
) -> Ball:
    """Absolute-coefficient majorant of j(w; q^m) or of its reciprocal."""
    if w == 0:
        raise NonconvergentPoint("theta argument must be nonzero")
    q = Fraction(q)
    sub = Fraction(eps) / 16
    parts = (w, q**m / w, q**m)
    if not invert:
        out = Ball(1)
        for p in parts:
            out = out * pochhammer_inf_num(p, q, sub, base=m, absolute=True)
        return Ball(out.mag(), 0)
    out = Ball(1)
    for p in parts:
        out = out * pochhammer_inv_abs_num(p, q, sub, base=m)
    return Ball(out.mag(), 0)


def jacobi_theta_num(
    w: Fraction, m: int, q: Fraction, eps: Fraction, absolute: bool = False
) -> Ball:
    """j(w; q^m) = (w;q^m)_inf (q^m/w;q^m)_inf (q^m;q^m)_inf at rational w."""
    if w == 0:
        raise NonconvergentPoint("theta argument must be nonzero")
    q = Fraction(q)
    eps = Fraction(eps)
    sub = eps / 16
    for _ in range(16):
        a = pochhammer_inf_num(w, q, sub, base=m, absolute=absolute)
        b = pochhammer_inf_num(q**m / w, q, sub, base=m, absolute=absolute)
        c = pochhammer_inf_num(q**m, q, sub, base=m, absolute=absolute)
        out = a * b * c
        if out.err <= eps:
            return out
        sub = sub * eps / (2 * out.err)
    raise NonconvergentPoint("theta evaluation failed to reach target accuracy")


def bilateral_pole_sum_num(
    t: Fraction,
    w: Fraction,
    a2: Fraction,
    a1: Fraction,
    slope: int,
    offset: int,
    alternating: bool,
    q: Fraction,
    eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """sum_k sgn^k t^k q^{a2 k^2 + a1 k} / (1 - w q^{slope k + offset}).

    Ascending tail (k >= K): once |w| Q^{slope k + offset} <= 1/2 the
    denominator satisfies |1 - w q^(.)| >= 1/2, so |term_k| <= h(k) :=
    2 |t|^k Q^{a2 k^2 + a1 k}; the ratio h(k+1)/h(k) = |t| Q^{a2(2k+1)+a1}
    is < 1 and decreasing, giving tail <= h(K+1)/(1 - ratio).

    Descending tail (k <= -K): once |w| Q^{slope k + offset} >= 2 the
    denominator is >= |w| Q^(.)/2, so |term_k| <= h'(k) :=
    2 |t|^k Q^{a2 k^2 + a1 k - slope k - offset} / |w| with ratio
    h'(k-1)/h'(k) = Q^{a2(1-2k) - a1 + slope} / |t| -> 0.
    """
    _require_q(q)
    t, w, eps = Fraction(t), Fraction(w), Fraction(eps)
    a2, a1 = Fraction(a2), Fraction(a1)
    Q, at, aw = abs(q), abs(t), abs(w)
    if at == 0:
        raise NonconvergentPoint("t must be nonzero")

    def term_value(k: int) -> Fraction:
        e = a2 * k * k + a1 * k
        de = slope * k + offset
        base = t**k * q ** int(e)
        if alternating and k & 1:
            base = -base
        if absolute:
            QD = aw * Q ** int(de)
            return abs(base) * _abs_geom_factor(aw, QD)
        den = 1 - w * q ** int(de)
        if den == 0:
            raise PoleAtSpecialization(
                f"bilateral sum denominator vanishes at k = {k}"
            )
        return base / den

    total = _ZERO
    # ascending side
    k = 0
    while True:
        total += term_value(k)
        kk = k + 1
        cond = aw * Q ** (slope * kk + offset) <= _HALF
        ratio = at * Q ** int(a2 * (2 * kk + 1) + a1)
        if cond and ratio < 1:
            tail_up = 2 * at**kk * Q ** int(a2 * kk * kk + a1 * kk) / (1 - ratio)
            if tail_up <= eps / 2:
                break
        k += 1
        if k > 10000:
            raise NonconvergentPoint("ascending bilateral tail did not close")
    # descending side
    k = -1
    while True:
        total += term_value(k)
        kk = k - 1
        cond = aw * Q ** (slope * kk + offset) >= 2
        ratio = Q ** int(a2 * (1 - 2 * kk) - a1 + slope) / at
        if cond and ratio < 1:
            h = (
                2
                * at**kk
                * Q ** int(a2 * kk * kk + a1 * kk - slope * kk - offset)
                / aw
            )
            tail_dn = h / (1 - ratio)
            if tail_dn <= eps / 2:
                break
        k -= 1
        if k < -10000:
            raise NonconvergentPoint("descending bilateral tail did not close")
    return Ball(total, eps)


def appell_lerch_m_num(
    x: Fraction, M: int, z: Fraction, q: Fraction, eps: Fraction
) -> Ball:
    """m(x, q^M, z) at rational arguments."""
    q, eps = Fraction(q), Fraction(eps)
    sub = eps / 16
    for _ in range(16):
        theta = jacobi_theta_num(z, M, q, sub)
        inner = bilateral_pole_sum_num(
            t=z, w=Fraction(x) * Fraction(z),
            a2=Fraction(M, 2), a1=Fraction(-M, 2),
            slope=M, offset=-M, alternating=True, q=q, eps=sub,
        )
        out = inner / theta
        if out.err <= eps:
            return out
        sub = sub * eps / (2 * out.err)
    raise NonconvergentPoint("Appell-Lerch evaluation failed to reach accuracy")


def kronecker_unilateral_num(
    x: Fraction, y: Fraction, q: Fraction, eps: Fraction, absolute: bool = False
) -> Ball:
    """sum_{r in Z} x^r / (1 - y q^r) for |q| < |x| < 1.

    Ascending tail: once |y| Q^r <= 1/2, |term_r| <= 2 |x|^r with ratio
    |x| < 1.  Descending (r = -k): once |y| Q^{-k} >= 2, |term| <=
    2 (Q/|x|)^k / |y| with ratio Q/|x| < 1.
    """
    _require_q(q)
    x, y, eps = Fraction(x), Fraction(y), Fraction(eps)
    Q, ax, ay = abs(q), abs(x), abs(y)
    if not (Q < ax < 1):
        raise NonconvergentPoint(f"|x| = {ax} outside the annulus (|q|, 1)")
    if ay == 0:
        raise NonconvergentPoint("y must be nonzero")

    def term_value(r: int) -> Fraction:
        if absolute:
            QD = ay * Q**r
            return ax**r * _abs_geom_factor(ay, QD)
        den = 1 - y * q**r
        if den == 0:
            raise PoleAtSpecialization(
                f"Kronecker denominator vanishes at r = {r}: y = q^-{r}"
            )
        return x**r / den

    total = _ZERO
    r = 0
    while True:
        total += term_value(r)
        rr = r + 1
        if ay * Q**rr <= _HALF:
            tail = 2 * ax**rr / (1 - ax)
            if tail <= eps / 2:
                break
        r += 1
        if r > 100000:
            raise NonconvergentPoint("Kronecker ascending tail did not close")
    r = -1
    while True:
        total += term_value(r)
        k = -r + 1
        if ay * Q ** (-k) >= 2:
            tail = 2 * (Q / ax) ** k / (ay * (1 - Q / ax))
            if tail <= eps / 2:
                break
        r -= 1
        if r < -100000:
            raise NonconvergentPoint("Kronecker descending tail did not close")
    return Ball(total, eps)


def _adaptive_2d(term, A, rho, margin_ok, row_ratio: Fraction, eps: Fraction) -> Fraction:
    """Sum term(i, j) over i, j >= 0 with certified truncation.

    Contract, proved by the caller for its piece:
      * |term(i, j)| <= A(i) * rho(i)^j whenever i + j > T0, where T0 is the
        first m with margin_ok(m) and margin_ok is monotone (true for all m
        beyond it);
      * rho(i) in (0, 1), non-increasing in i;
      * A(i+1) <= row_ratio * A(i) for i > T0, with row_ratio < 1.

    Rows get geometric error budgets b_i = eps (1 - sig) sig^i with
    sig = (1 + row_ratio)/2; each row is cut when its geometric tail fits its
    budget, and the row loop stops once a full row bound A(i)/(1 - rho(i))
    fits b_i past the unsafe strip (later rows then fit their budgets too,
    because rho is non-increasing).  The total discarded mass is <= eps.
    """
    T0 = 0
    while not margin_ok(T0 + 1):
        T0 += 1
        if T0 > 100000:
            raise NonconvergentPoint("margin condition never satisfied")
    sig = (1 + row_ratio) / 2
    total = _ZERO
    i = 0
    while True:
        budget = eps * (1 - sig) * sig**i
        Ai = A(i)
        ri = rho(i)
        if not (0 < ri < 1):
            raise NonconvergentPoint("row ratio outside (0, 1)")
        if i > T0 and Ai / (1 - ri) <= budget:
            break
        j = 0
        while True:
            total += term(i, j)
            j += 1
            if i + j > T0 and Ai * ri**j / (1 - ri) <= budget:
                break
        i += 1
        if i > 100000:
            raise NonconvergentPoint("2d row loop failed to terminate")
    return total


def F_kernel_num(
    variant: str,
    x: Fraction,
    y: Fraction,
    z: Fraction,
    q: Fraction,
    eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """Numeric twin of the F kernels; needs |q| < |y| < 1 and |q| < |z| < 1
    with x off the kernel's pole set (exact lattice hits raise)."""
    _require_q(q)
    x, y, z, eps = Fraction(x), Fraction(y), Fraction(z), Fraction(eps)
    Q = abs(q)
    ax, ay, az = abs(x), abs(y), abs(z)
    for name, a in (("y", ay), ("z", az)):
        if not (Q < a < 1):
            raise NonconvergentPoint(f"|{name}| = {a} outside the annulus (|q|, 1)")
    if variant == "thm1":
        pieces = _f_thm1_pieces(x, y, z, q, absolute)
    elif variant == "same_parity":
        pieces = _f_same_pieces(x, y, z, q, absolute)
    elif variant == "diff_parity":
        pieces = _f_diff_pieces(x, y, z, q, absolute)
    else:
        raise ValueError(f"unknown kernel variant {variant!r}")
    total = _ZERO
    sub = eps / len(pieces)
    for piece in pieces:
        total += _adaptive_2d(*piece, eps=sub)
    return Ball(total, eps)


def _geom_cell(one_minus: Fraction, aw: Fraction, QD: Fraction, absolute: bool) -> Fraction:
    """1/(1 - w q^d) exactly, or the majorant of its absolute expansion."""
    if absolute:
        return _abs_geom_factor(aw, QD)
    if one_minus == 0:
        raise PoleAtSpecialization("kernel denominator vanishes at a lattice cell")
    return 1 / one_minus


def _f_thm1_pieces(x, y, z, q, absolute):
    """(sum_{s,t>=0} - sum_{s,t<0}) q^{st} y^s z^t / (1 - x q^{s+t}).

    Positive orthant rows (i = s, j = t):
      |term| = Q^{st} ay^s az^t |1 - x q^{s+t}|^{-1} <= 2 ay^s (Q^s az)^t
      once ax Q^{s+t} <= 1/2; A(s) = 2 ay^s, rho(s) = Q^s az, ratio ay.
    Negative orthant rows (i = b-1, j = c-1; s = -b, t = -c):
      |term| <= 2/ax * Q^{bc} nu_y^b nu_z^c Q^{b+c}
              = (2/ax) (Q nu_y)^b ((Q^{b+1}) nu_z)^c
      once ax Q^{-(b+c)} >= 2; A, rho read off with Q nu_y < 1, Q^2 nu_z < 1.
    """
    Q, ax, ay, az = abs(q), abs(x), abs(y), abs(z)
    ny, nz = 1 / ay, 1 / az
    sgn = 1 if absolute else -1

    def pos_term(s, t):
        QD = ax * Q ** (s + t)
        v = q ** (s * t) * y**s * z**t * _geom_cell(1 - x * q ** (s + t), ax, QD, absolute)
        return abs(v) if absolute else v

    def neg_term(i, j):
        b, c = i + 1, j + 1
        QD = ax * Q ** (-(b + c))
        v = q ** (b * c) * y ** (-b) * z ** (-c) * _geom_cell(
            1 - x * q ** (-(b + c)), ax, QD, absolute
        )
        return abs(v) if absolute else sgn * v

    pos = (
        pos_term,
        lambda s: 2 * ay**s,
        lambda s: Q**s * az,
        lambda m: ax * Q**m <= _HALF,
        ay,
    )
    neg = (
        neg_term,
        lambda i: (2 / ax) * (Q * ny) ** (i + 1) * (Q ** (i + 2) * nz),
        lambda i: Q ** (i + 2) * nz,
        lambda m: ax * Q ** (-(m + 2)) >= 2,
        Q * ny,
    )
    return [pos, neg]


def _f_same_pieces(x, y, z, q, absolute):
    """Same-parity kernel pieces; bounds per cell (margins valid past T0):

      A+: |q^{4st} y^{2s} z^{2t}| den <= 2 ay^{2s} (Q^{4s} az^2)^t
      B+: <= 2 ax Q^3 ay az (Q^4 ay^2)^s (Q^{4s+4} az^2)^t
      A-: <= (2/ax^2) (Q^4 ny^2)^b (Q^{4b+4} nz^2)^c
      B-: <= (2 ay az/(ax Q)) (Q^4 ny^2)^b (Q^{4b} nz^2)^c
    """
    Q, ax, ay, az = abs(q), abs(x), abs(y), abs(z)
    ny, nz = 1 / ay, 1 / az
    x2 = x * x
    ax2 = ax * ax
    sgn = 1 if absolute else -1

    def a_pos(s, t):
        d = 4 * (s + t)
        v = q ** (4 * s * t) * y ** (2 * s) * z ** (2 * t) * _geom_cell(
            1 - x2 * q**d, ax2, ax2 * Q**d, absolute
        )
        return abs(v) if absolute else v

    def b_pos(s, t):
        d = 4 * (s + t) + 4
        v = (
            x * q ** (4 * s * t + 4 * s + 4 * t + 3)
            * y ** (2 * s + 1) * z ** (2 * t + 1)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else v

    def a_neg(i, j):
        b, c = i + 1, j + 1
        d = -4 * (b + c)
        v = q ** (4 * b * c) * y ** (-2 * b) * z ** (-2 * c) * _geom_cell(
            1 - x2 * q**d, ax2, ax2 * Q**d, absolute
        )
        return abs(v) if absolute else sgn * v

    def b_neg(i, j):
        b, c = i + 1, j + 1
        d = -4 * (b + c) + 4
        v = (
            x * q ** (4 * b * c - 4 * b - 4 * c + 3)
            * y ** (1 - 2 * b) * z ** (1 - 2 * c)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else sgn * v

    return [
        (
            a_pos,
            lambda s: 2 * ay ** (2 * s),
            lambda s: Q ** (4 * s) * az**2,
            lambda m: ax2 * Q ** (4 * m) <= _HALF,
            ay**2,
        ),
        (
            b_pos,
            lambda s: 2 * ax * Q**3 * ay * az * (Q**4 * ay**2) ** s,
            lambda s: Q ** (4 * s + 4) * az**2,
            lambda m: ax2 * Q ** (4 * m + 4) <= _HALF,
            Q**4 * ay**2,
        ),
        (
            a_neg,
            lambda i: (2 / ax2) * (Q**4 * ny**2) ** (i + 1) * (Q ** (4 * i + 8) * nz**2),
            lambda i: Q ** (4 * i + 8) * nz**2,
            lambda m: ax2 * Q ** (-4 * (m + 2)) >= 2,
            Q**4 * ny**2,
        ),
        (
            b_neg,
            lambda i: (2 * ay * az / (ax * Q)) * (Q**4 * ny**2) ** (i + 1) * nz**2,
            lambda i: Q ** (4 * i + 4) * nz**2,
            lambda m: ax2 * Q ** (-4 * (m + 2) + 4) >= 2,
            Q**4 * ny**2,
        ),
    ]


def _f_diff_pieces(x, y, z, q, absolute):
    """Different-parity kernel pieces; bounds per cell:

      A+: |z q^{4st+2s} y^{2s} z^{2t}| den <= 2 az (Q^2 ay^2)^s (Q^{4s} az^2)^t
      B+: <= 2 ax ay Q (Q^2 ay^2)^s (Q^{4s+4} az^2)^t
      A-: <= (2 az/(ax^2 Q^2)) (Q^2 ny^2)^b (Q^{4b+4} nz^2)^c
      B-: <= (2 ay/(ax Q)) (Q^2 ny^2)^b (Q^{4b} nz^2)^c
    """
    Q, ax, ay, az = abs(q), abs(x), abs(y), abs(z)
    ny, nz = 1 / ay, 1 / az
    x2 = x * x
    ax2 = ax * ax
    sgn = 1 if absolute else -1

    def a_pos(s, t):
        d = 4 * (s + t) + 2
        v = (
            z * q ** (4 * s * t + 2 * s) * y ** (2 * s) * z ** (2 * t)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else v

    def b_pos(s, t):
        d = 4 * (s + t) + 2
        v = (
            x * y * q * q ** (4 * s * t + 2 * s + 4 * t)
            * y ** (2 * s) * z ** (2 * t)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else v

    def a_neg(i, j):
        b, c = i + 1, j + 1
        d = -4 * (b + c) + 2
        v = (
            z * q ** (4 * b * c - 2 * b) * y ** (-2 * b) * z ** (-2 * c)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else sgn * v

    def b_neg(i, j):
        b, c = i + 1, j + 1
        d = -4 * (b + c) + 2
        v = (
            x * y * q * q ** (4 * b * c - 2 * b - 4 * c)
            * y ** (-2 * b) * z ** (-2 * c)
            * _geom_cell(1 - x2 * q**d, ax2, ax2 * Q**d, absolute)
        )
        return abs(v) if absolute else sgn * v

    return [
        (
            a_pos,
            lambda s: 2 * az * (Q**2 * ay**2) ** s,
            lambda s: Q ** (4 * s) * az**2,
            lambda m: ax2 * Q ** (4 * m + 2) <= _HALF,
            Q**2 * ay**2,
        ),
        (
            b_pos,
            lambda s: 2 * ax * ay * Q * (Q**2 * ay**2) ** s,
            lambda s: Q ** (4 * s + 4) * az**2,
            lambda m: ax2 * Q ** (4 * m + 2) <= _HALF,
            Q**2 * ay**2,
        ),
        (
            a_neg,
            lambda i: (2 * az / (ax2 * Q**2)) * (Q**2 * ny**2) ** (i + 1)
            * (Q ** (4 * i + 8) * nz**2),
            lambda i: Q ** (4 * i + 8) * nz**2,
            lambda m: ax2 * Q ** (-4 * (m + 2) + 2) >= 2,
            Q**2 * ny**2,
        ),
        (
            b_neg,
            lambda i: (2 * ay / (ax * Q)) * (Q**2 * ny**2) ** (i + 1)
            * (Q ** (4 * i + 4) * nz**2),
            lambda i: Q ** (4 * i + 4) * nz**2,
            lambda m: ax2 * Q ** (-4 * (m + 2) + 2) >= 2,
            Q**2 * ny**2,
        ),
    ]


def hecke_double_sum_num(
    arr: int, ass: int, ars: int, twist: bool, parity,
    x: Fraction, y: Fraction, q: Fraction, eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """Numeric sg(r)=sg(s) double sum with quadratic form exponents.

    Positive orthant: |term| <= beta^m with beta = max(|x|, |y|) < 1.
    Negative orthant: the form's value is at least arr*C(-a,2) + ass*C(-b,2)
    + ars*ab >= (arr + ass + ars)(m - 1) for a + b = m (each of a(a+1)/2,
    b(b+1)/2, ab is >= m-1 on its support), so |term| <= Q^{g(m-1)} nu^m with
    g = arr + ass + ars >= 1.
    """
    _require_q(q)
    x, y, eps = Fraction(x), Fraction(y), Fraction(eps)
    Q, ax, ay = abs(q), abs(x), abs(y)
    for name, a in (("x", ax), ("y", ay)):
        if not (Q < a < 1):
            raise NonconvergentPoint(f"|{name}| = {a} outside the annulus (|q|, 1)")
    beta = max(ax, ay)
    nu = 1 / min(ax, ay)
    g = arr + ass + ars
    if g < 1:
        raise NonconvergentPoint("quadratic form too weak for the tail bound")

    def keep(r, s):
        if parity == "same":
            return (r - s) % 2 == 0
        if parity == "diff":
            return (r - s) % 2 == 1
        return True

    def cell(r, s):
        e = (
            arr * (r * (r - 1)) // 2
            + ass * (s * (s - 1)) // 2
            + ars * r * s
        )
        v = q**e * x**r * y**s
        if twist and (r + s) % 2:
            v = -v
        return abs(v) if absolute else v

    pos = _ZERO
    T = 1
    while _geom_tail_linear(beta, T) > eps / 4:
        T += 1
    for m in range(T + 1):
        for r in range(m + 1):
            if keep(r, m - r):
                pos += cell(r, m - r)
    eta = Q**g * nu
    if eta >= 1:
        raise NonconvergentPoint("negative orthant ratio >= 1")
    neg = _ZERO
    T = 1
    while (1 / Q**g) * _geom_tail_linear(eta, T) > eps / 4:
        T += 1
    for m in range(2, T + 1):
        for a in range(1, m):
            if keep(-a, -(m - a)):
                neg += cell(-a, -(m - a))
    val = pos + neg if absolute else pos - neg
    return Ball(val, eps)


def triple_sum_num(
    mode: str, x: Fraction, y: Fraction, z: Fraction,
    q: Fraction, eps: Fraction, absolute: bool = False,
) -> Ball:
    """Numeric plus-form triple sum with parity filter.

    Positive orthant: |term| <= beta^m over shells m = r+s+t with
    (m+1)(m+2)/2 cells.  Negative orthant: ab+ac+bc >= 2m-3 for
    a+b+c = m (minimum at (1,1,m-2)), so |term| <= Q^{2m-3} nu^m.
    """
    _require_q(q)
    x, y, z, eps = Fraction(x), Fraction(y), Fraction(z), Fraction(eps)
    Q = abs(q)
    ax, ay, az = abs(x), abs(y), abs(z)
    for name, a in (("x", ax), ("y", ay), ("z", az)):
        if not (Q < a < 1):
            raise NonconvergentPoint(f"|{name}| = {a} outside the annulus (|q|, 1)")
    beta = max(ax, ay, az)
    nu = 1 / min(ax, ay, az)

    def keep(r, s, t):
        if mode == "same":
            return (r - s) % 2 == 0 and (s - t) % 2 == 0
        if mode == "diff":
            return (r - s) % 2 == 0 and (s - t) % 2 == 1
        return True

    def cell(r, s, t):
        v = q ** (r * s + r * t + s * t) * x**r * y**s * z**t
        return abs(v) if absolute else v

    pos = _ZERO
    T = 1
    while _geom_tail_quadratic(beta, T) > eps / 4:
        T += 1
    for m in range(T + 1):
        for r in range(m + 1):
            for s in range(m - r + 1):
                t = m - r - s
                if keep(r, s, t):
                    pos += cell(r, s, t)
    eta = Q**2 * nu
    if eta >= 1:
        raise NonconvergentPoint("negative orthant ratio >= 1")
    neg = _ZERO
    T = 2
    while (1 / Q**3) * _geom_tail_quadratic(eta, T) > eps / 4:
        T += 1
    for m in range(3, T + 1):
        for a in range(1, m - 1):
            for b in range(1, m - a):
                c = m - a - b
                if keep(-a, -b, -c):
                    neg += cell(-a, -b, -c)
    return Ball(pos + neg, eps)


def eval_to_accuracy(build, eps: Fraction, tries: int = 16) -> Ball:
    """Run a Ball-valued builder taking a working eps until the propagated
    error bound meets the target."""
    eps = Fraction(eps)
    sub = eps / 16
    for _ in range(tries):
        out = build(sub)
        if out.err <= eps:
            return out
        sub = sub * eps / (2 * out.err)
    raise NonconvergentPoint("evaluation failed to reach target accuracy")


def G1_kernel_num(
    variant: str, x: Fraction, y: Fraction, z: Fraction, q: Fraction, eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """Numeric twin of the G1 decompositions (the bilateral k-sum pieces).

    With ``absolute`` the theta factors, reciprocals and k-sums are replaced
    by their coefficientwise absolute majorants, giving an upper bound on
    the absolute-coefficient series of G1 at radius |q|."""
    x, y, z, q = Fraction(x), Fraction(y), Fraction(z), Fraction(q)
    _require_q(q)

    def build(sub: Fraction) -> Ball:
        if absolute:
            def th(w, m):
                return jacobi_theta_abs_num(w, m, q, sub)

            def inv_th(w, m):
                return jacobi_theta_abs_num(w, m, q, sub, invert=True)
        else:
            def th(w, m):
                return jacobi_theta_num(w, m, q, sub)

            def inv_th(w, m):
                return Ball(1) / jacobi_theta_num(w, m, q, sub)
        if variant == "thm1":
            if absolute:
                J1a = pochhammer_inf_num(q, q, sub, absolute=True)
                pref = J1a**4 * pochhammer_inv_abs_num(q**2, q, sub, base=2) ** 2
                pref = Ball(pref.mag(), 0)
            else:
                J1 = euler_num(1, q, sub)
                J2 = euler_num(2, q, sub)
                pref = J1**4 / (J2 * J2)
            total = Ball(0)
            for u, v, w in ((y, z, x), (x, y, z), (x, z, y)):
                ks = bilateral_pole_sum_num(
                    t=u * v, w=-w, a2=_ONE, a1=_ZERO, slope=2, offset=0,
                    alternating=True, q=q, eps=sub, absolute=absolute,
                )
                total = total + th(u * v, 2) * inv_th(u, 1) * inv_th(v, 1) * pref * ks
            return total
        if variant == "same_parity":
            if absolute:
                J4a = pochhammer_inf_num(q**4, q, sub, base=4, absolute=True)
                pref = J4a**4 * pochhammer_inv_abs_num(q**2, q, sub, base=2) ** 2
                pref = Ball(pref.mag(), 0)
            else:
                J4 = euler_num(4, q, sub)
                J2 = euler_num(2, q, sub)
                pref = J4**4 / (J2 * J2)
            total = Ball(0)
            for u, v, w in ((y, z, x), (x, z, y), (x, y, z)):
                ks = bilateral_pole_sum_num(
                    t=u * v, w=w, a2=_ONE, a1=Fraction(-1), slope=2, offset=-1,
                    alternating=False, q=q, eps=sub, absolute=absolute,
                )
                total = total + th(u * v, 2) * inv_th(u * u, 4) * inv_th(v * v, 4) * pref * ks
            return total
        if variant == "diff_parity":
            if absolute:
                J4a = pochhammer_inf_num(q**4, q, sub, base=4, absolute=True)
                pref = J4a**4 * pochhammer_inv_abs_num(q**2, q, sub, base=2) ** 2
                pref = Ball(pref.mag(), 0)
            else:
                J4 = euler_num(4, q, sub)
                J2 = euler_num(2, q, sub)
                pref = J4**4 / (J2 * J2)
            p1 = (
                th(q * y * z, 2) * inv_th(q * q * y * y, 4) * inv_th(z * z, 4) * pref
                * bilateral_pole_sum_num(
                    t=y * z, w=x, a2=_ONE, a1=_ZERO, slope=2, offset=0,
                    alternating=False, q=q, eps=sub, absolute=absolute,
                ) * (abs(z) if absolute else z)
            )
            p2 = (
                th(q * x * z, 2) * inv_th(q * q * x * x, 4) * inv_th(z * z, 4) * pref
                * bilateral_pole_sum_num(
                    t=x * z, w=y, a2=_ONE, a1=_ZERO, slope=2, offset=0,
                    alternating=False, q=q, eps=sub, absolute=absolute,
                ) * (abs(z) if absolute else z)
            )
            p3 = (
                th(x * y, 2) * inv_th(q * q * x * x, 4) * inv_th(q * q * y * y, 4) * pref
                * bilateral_pole_sum_num(
                    t=x * y, w=z, a2=_ONE, a1=Fraction(-1), slope=2, offset=-1,
                    alternating=False, q=q, eps=sub, absolute=absolute,
                ) * (abs(q / (x * y)) if absolute else (q / (x * y)))
            )
            return p1 + p2 + p3 if absolute else p1 + p2 - p3
        raise ValueError(f"unknown kernel variant {variant!r}")

    return eval_to_accuracy(build, eps)


def G2_kernel_num(
    variant: str, x: Fraction, y: Fraction, z: Fraction, q: Fraction, eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """Numeric twin of the G2 theta-quotient terms (optionally the
    coefficientwise absolute majorant)."""
    x, y, z, q = Fraction(x), Fraction(y), Fraction(z), Fraction(q)
    _require_q(q)

    def build(sub: Fraction) -> Ball:
        if absolute:
            def th(w, m):
                return jacobi_theta_abs_num(w, m, q, sub)

            def inv_th(w, m):
                return jacobi_theta_abs_num(w, m, q, sub, invert=True)
        else:
            def th(w, m):
                return jacobi_theta_num(w, m, q, sub)

            def inv_th(w, m):
                return Ball(1) / jacobi_theta_num(w, m, q, sub)
        if absolute:
            J1 = pochhammer_inf_num(q, q, sub, absolute=True)
            J2 = pochhammer_inf_num(q**2, q, sub, base=2, absolute=True)
        else:
            J1 = euler_num(1, q, sub)
            J2 = euler_num(2, q, sub)
        if variant == "thm1":
            out = Ball(2 if absolute else -2) * (
                J1**3 * J2**3 * th(x * y, 2) * th(x * z, 2) * th(y * z, 2)
                * inv_th(x, 1) * inv_th(y, 1) * inv_th(z, 1)
                * inv_th(-x, 2) * inv_th(-y, 2) * inv_th(-z, 2)
            )
        elif variant == "same_parity":
            out = (
                J1**3 * J2**3 * th(x * y, 2) * th(x * z, 2) * th(y * z, 2)
                * inv_th(x, 1) * inv_th(y, 1) * inv_th(z, 1)
                * inv_th(-x, 2) * inv_th(-y, 2) * inv_th(-z, 2)
            )
        elif variant == "diff_parity":
            out = Ball(abs(z) if absolute else -z) * (
                J1**3 * J2**3 * th(x * y, 2) * th(q * x * z, 2) * th(q * y * z, 2)
                * inv_th(x, 1) * inv_th(y, 1) * inv_th(z, 1)
                * inv_th(-q * x, 2) * inv_th(-q * y, 2) * inv_th(-z, 2)
            )
        else:
            raise ValueError(f"unknown kernel variant {variant!r}")
        return Ball(out.mag(), 0) if absolute else out

    return eval_to_accuracy(build, eps)


def G_kernel_num(
    variant: str, x: Fraction, y: Fraction, z: Fraction, q: Fraction, eps: Fraction,
    absolute: bool = False,
) -> Ball:
    """G = G1 + G2 numerically (the closed-form side of each theorem)."""
    eps = Fraction(eps)
    return G1_kernel_num(variant, x, y, z, q, eps / 2, absolute) + G2_kernel_num(
        variant, x, y, z, q, eps / 2, absolute
    )


def inv_jacobi_theta_num(
    w: Fraction, m: int, q: Fraction, eps: Fraction, beta: Fraction = _ONE, b_exp: int = 1
) -> Ball:
    """1/j(beta * w^b; q^m) as a function of w, used by the residue checks."""

    def build(sub: Fraction) -> Ball:
        return Ball(1) / jacobi_theta_num(beta * Fraction(w) ** b_exp, m, q, sub)

    return eval_to_accuracy(build, eps)


def kronecker_product_rhs_num(
    x: Fraction, y: Fraction, q: Fraction, eps: Fraction, absolute: bool = False
) -> Ball:
    """(q)_inf^2 (xy; q)_inf (q/xy; q)_inf / ((x,q/x,y,q/y; q)_inf)."""
    x, y, q, eps = Fraction(x), Fraction(y), Fraction(q), Fraction(eps)

    def build(sub: Fraction) -> Ball:
        p = lambda w: pochhammer_inf_num(w, q, sub, absolute=absolute)
        num = p(q) * p(q) * p(x * y) * p(q / (x * y))
        if absolute:
            inv = Ball(1)
            for w in (x, q / x, y, q / y):
                inv = inv * pochhammer_inv_abs_num(w, q, sub)
            return Ball((num * inv).mag(), 0)
        den = p(x) * p(q / x) * p(y) * p(q / y)
        return num / den

    return eval_to_accuracy(build, eps)
