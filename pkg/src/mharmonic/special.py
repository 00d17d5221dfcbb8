"""Scalar special functions: log-gamma ratios, Pochhammer symbols, digamma,
zeta(3), Jacobi polynomials and a complete Gauss 2F1 engine.

The 2F1 engine sums the defining series for |z| <= 1/2, switches to the
1-z connection formulas beyond (including the logarithmic case whenever
c-a-b is within 1e-8 of an integer), and sums terminating series exactly.
For large a*b the connection series suffers catastrophic cancellation, so
the switch additionally requires |a*b|*|1-z| to be small; outside that the
defining series (monotone for positive parameters) is used on the whole
disc.  Everything is evaluated in log-space with sign tracking so that
Gamma(n+p+q+j+l)-type factors never overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, gammasgn

from ._backend import series as _series
from .errors import DomainError, NonConvergent

MAX_TERMS = 100_000
_INT_GAP_EPS = 1e-8  # c-a-b this close to an integer takes the log branch
_AB_W_CAP = 8.0  # connection cancels ~exp(4*sqrt(ab*|1-z|)); keep it under 1e5

#: zeta(3), Apery's constant, to full double precision.
ZETA3 = 1.2020569031595942854

_EULER_GAMMA = 0.5772156649015328606


@dataclass(frozen=True)
class SeriesValue:
    """A numeric result with the truncation order and a tail bound."""

    value: complex
    truncation_order: int
    tail_estimate: float

    @property
    def real(self) -> float:
        return self.value.real


def zeta3() -> float:
    """Riemann zeta at 3."""
    return ZETA3


def is_nonpositive_int(x: float, eps: float = 0.0) -> bool:
    return x <= eps and abs(x - round(x)) <= eps


def pochhammer(a: float, j: int) -> float:
    """Raising factorial (a)_j = a(a+1)...(a+j-1); empty product 1.

    Direct product for small j or non-positive a (where the product can
    vanish or change sign), lgamma otherwise.
    """
    if j < 0:
        raise DomainError("pochhammer order must be a non-negative integer")
    if j == 0:
        return 1.0
    if j <= 20 or a <= 0.0:
        out = 1.0
        for k in range(j):
            out *= a + k
        return out
    return math.exp(math.lgamma(a + j) - math.lgamma(a))


def log_gamma_ratio(numerator_args, denominator_args) -> tuple[float, float]:
    """(log magnitude, sign) of prod Gamma(num) / prod Gamma(den)."""
    logv = 0.0
    sign = 1.0
    for x in numerator_args:
        if is_nonpositive_int(x):
            raise DomainError(f"Gamma pole at {x} in numerator")
        logv += gammaln(x)
        sign *= gammasgn(x)
    for x in denominator_args:
        if is_nonpositive_int(x):
            raise DomainError(f"Gamma pole at {x} in denominator")
        logv -= gammaln(x)
        sign *= gammasgn(x)
    return logv, sign


def gamma_ratio(numerator_args, denominator_args) -> float:
    """prod Gamma(num) / prod Gamma(den), evaluated in log-space."""
    logv, sign = log_gamma_ratio(numerator_args, denominator_args)
    return sign * math.exp(logv)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x) via recurrence plus asymptotic series."""
    if is_nonpositive_int(x):
        raise DomainError(f"digamma pole at {x}")
    if x < 0.5:
        # reflection psi(1-x) = psi(x) + pi*cot(pi*x)
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # Bernoulli tail B_2k/(2k x^{2k}); truncation below 1e-16 for x >= 12
    tail = inv2 * (
        1.0 / 12.0
        - inv2
        * (
            1.0 / 120.0
            - inv2
            * (
                1.0 / 252.0
                - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0)))
            )
        )
    )
    return acc + math.log(x) - 0.5 / x - tail


def jacobi_poly(alpha: float, beta: float, m: int, x: float) -> float:
    """Jacobi polynomial P_m^{(alpha,beta)}(x) by the three-term recurrence."""
    if m < 0:
        raise DomainError("Jacobi degree must be non-negative")
    if m == 0:
        return 1.0
    p_prev = 1.0
    p = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x
    for k in range(2, m + 1):
        a1 = 2.0 * k * (k + alpha + beta) * (2.0 * k + alpha + beta - 2.0)
        a2 = (2.0 * k + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        a3 = (
            (2.0 * k + alpha + beta - 2.0)
            * (2.0 * k + alpha + beta - 1.0)
            * (2.0 * k + alpha + beta)
        )
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + alpha + beta)
        p, p_prev = ((a2 + a3 * x) * p - a4 * p_prev) / a1, p
    return p


def _terminating_order(a: float, b: float) -> int | None:
    """Smallest series length if a or b is a non-positive integer, else None."""
    orders = [int(round(-t)) for t in (a, b) if is_nonpositive_int(t, 1e-14)]
    return min(orders) if orders else None


def _validate_c(a: float, b: float, c: float) -> None:
    if not is_nonpositive_int(c, 1e-14):
        return
    nterm = _terminating_order(a, b)
    pole = int(round(-c))
    if nterm is None or nterm > pole:
        raise DomainError(
            f"c={c} is a non-positive integer and the series does not terminate first"
        )


def _run_series(runner, tol: float):
    """Run a backend series, tightening until the tail honours the tolerance."""
    inner = 0.1 * tol
    for _ in range(3):
        value, order, tail, ok = runner(inner)
        if not ok:
            raise NonConvergent("series did not meet its tail bound within the term budget")
        if tail <= tol * max(1.0, abs(value)):
            return value, order, tail
        inner *= 0.1
    return value, order, tail


def _f21_int_gap(a: float, b: float, m: int, z: complex, tol: float) -> tuple[complex, int, float]:
    """F(a,b;a+b+m;z) for integer m >= 0 via the logarithmic 1-z formula."""
    if _terminating_order(a, b) is not None:
        # the Euler transform can make the series terminate; sum it exactly
        value, order, _, _ = _series.f21_series(a, b, a + b + m, z, 0.0, _terminating_order(a, b) + 2)
        return value, order, 0.0
    w = 1.0 - z
    logw = cmath.log(w)
    c = a + b + m
    finite = 0.0 + 0.0j
    if m >= 1:
        pref1 = gamma_ratio([m, c], [a + m, b + m])
        term = 1.0 + 0.0j
        for k in range(m):
            finite += term
            if k + 1 < m:
                term = term * (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w
        finite *= pref1
    lp2, sp2 = log_gamma_ratio([c], [a, b])
    pref2 = ((-1.0) ** m) * sp2 * math.exp(lp2) * w**m
    value, order, tail, ok = _series.f21_log_series(
        a,
        b,
        m,
        w,
        logw,
        -_EULER_GAMMA,
        digamma(m + 1.0),
        digamma(a + m),
        digamma(b + m),
        tol * 0.1,
        MAX_TERMS,
    )
    if not ok:
        raise NonConvergent("logarithmic connection series did not converge")
    return finite - pref2 * value, order, abs(pref2) * tail


def _f21_noninteger_gap(a: float, b: float, c: float, d: float, z: complex, tol: float):
    """A&S 15.3.6 two-series connection for non-integer d = c-a-b."""
    w = 1.0 - z
    for arg in (c - a, c - b):
        if is_nonpositive_int(arg, 1e-12):
            raise DomainError(
                "connection formula pole (c-a or c-b non-positive integer); "
                "perturb the parameters"
            )
    p1 = gamma_ratio([c, d], [c - a, c - b])
    p2 = gamma_ratio([c, -d], [a, b])
    v1, o1, t1, ok1 = _series.f21_series(a, b, 1.0 - d, w, tol * 0.05, MAX_TERMS)
    v2, o2, t2, ok2 = _series.f21_series(c - a, c - b, 1.0 + d, w, tol * 0.05, MAX_TERMS)
    if not (ok1 and ok2):
        raise NonConvergent("1-z connection series did not converge")
    wd = cmath.exp(d * cmath.log(w))
    value = p1 * v1 + p2 * wd * v2
    tail = abs(p1) * t1 + abs(p2 * wd) * t2
    return value, o1 + o2, tail


def gauss_2f1(a: float, b: float, c: float, z, tol: float = 1e-12) -> SeriesValue:
    """Gauss hypergeometric function F(a,b;c;z) on the closed unit disc.

    Terminating series are summed exactly (tail 0).  At z=1 the Gauss
    summation formula applies and requires c-a-b > 0.  DomainError for
    |z| > 1 or an unusable parameter combination; NonConvergent if the term
    budget is exhausted.
    """
    z = complex(z)
    _validate_c(a, b, c)
    absz = abs(z)
    if absz > 1.0 + 1e-12:
        raise DomainError(f"|z| = {absz} > 1")

    nterm = _terminating_order(a, b)
    if nterm is not None:
        value, order, _, _ = _series.f21_series(a, b, c, z, 0.0, nterm + 2)
        return SeriesValue(value, order, 0.0)

    if z == 0:
        return SeriesValue(1.0 + 0.0j, 1, 0.0)

    d = c - a - b
    if abs(z - 1.0) <= 1e-14:
        if d <= 0:
            raise DomainError("F(a,b;c;1) requires c-a-b > 0 for a non-terminating series")
        return SeriesValue(complex(gamma_ratio([c, d], [c - a, c - b])), 0, 0.0)

    if absz <= 0.5:
        value, order, tail = _run_series(
            lambda t: _series.f21_series(a, b, c, z, t, MAX_TERMS), tol
        )
        return SeriesValue(value, order, tail)

    w = 1.0 - z
    connection_safe = abs(w) <= 0.499 and abs(a * b) * abs(w) <= _AB_W_CAP
    near_int = abs(d - round(d)) < _INT_GAP_EPS
    if connection_safe and near_int:
        m = int(round(d))
        if m >= 0:
            value, order, tail = _f21_int_gap(a, b, m, z, tol)
        else:
            # Euler transform first so the gap becomes the positive integer -m
            value, order, tail = _f21_int_gap(c - a, c - b, -m, z, tol)
            factor = cmath.exp(d * cmath.log(w))
            value *= factor
            tail *= abs(factor)
        return SeriesValue(value, order, tail)
    if connection_safe and not near_int:
        value, order, tail = _f21_noninteger_gap(a, b, c, d, z, tol)
        return SeriesValue(value, order, tail)

    zp = z / (z - 1.0)
    if abs(zp) <= 0.75 and absz < 1.0 - 1e-12:
        # Pfaff transform keeps the series argument small when z is far from 1
        value, order, tail = _run_series(
            lambda t: _series.f21_series(a, c - b, c, zp, t, MAX_TERMS), tol
        )
        factor = cmath.exp(-a * cmath.log(w))
        return SeriesValue(factor * value, order, abs(factor) * tail)

    if absz >= 1.0 - 1e-12 and d <= 0:
        raise DomainError("series on |z|=1 requires c-a-b > 0")
    value, order, tail = _run_series(
        lambda t: _series.f21_series(a, b, c, z, t, MAX_TERMS), tol
    )
    return SeriesValue(value, order, tail)


def hyp2f1_nonneg_grid(a: float, b: float, c: float, t: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Vectorised F(a,b;c;t) on a grid 0 <= t <= 1 for a,b >= 0, c-a-b = g > 0.

    Used by the coefficient quadratures, where g is the ball dimension.  The
    defining series (all terms positive) covers moderate t; nodes close to 1
    take the logarithmic connection formula, restricted to w small enough
    that its cancellation stays harmless even for large a*b.
    """
    t = np.asarray(t, dtype=float)
    if t.size and (t.min() < 0.0 or t.max() > 1.0):
        raise DomainError("grid evaluation requires 0 <= t <= 1")
    g = c - a - b
    m = int(round(g))
    if abs(g - m) > 1e-12 or m <= 0:
        raise DomainError("grid evaluation requires c-a-b a positive integer")
    if a < 0 or b < 0:
        raise DomainError("grid evaluation requires a,b >= 0")
    if a == 0.0 or b == 0.0:
        return np.ones_like(t)
    w_switch = min(0.1, _AB_W_CAP / max(a * b, 1.0))
    out, ok = _series.f21_pos_grid(
        a,
        b,
        c,
        np.ascontiguousarray(t),
        w_switch,
        digamma(a + m),
        digamma(b + m),
        digamma(m + 1.0),
        tol,
        MAX_TERMS,
    )
    if not ok:
        raise NonConvergent("grid 2F1 evaluation exhausted its term budget")
    return out


# ---------------------------------------------------------------------------
# Exact rational+log differentiation oracle
# ---------------------------------------------------------------------------
# Functions of the form A(z) + B(z) log(1-z), with A, B rational of the shape
# P(z) / (z^i (1-z)^j), are closed under d/dz and multiplication by (1-z)^k.
# Coefficients stay exact Fractions until the final evaluation.


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [
        (p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
        for i in range(n)
    ]


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_diff(p):
    return [k * p[k] for k in range(1, len(p))] or [Fraction(0)]


class _Rat:
    """P(z) / (z^i (1-z)^j) with exact Fraction coefficients."""

    __slots__ = ("p", "i", "j")

    def __init__(self, p, i=0, j=0):
        self.p = [Fraction(x) for x in p]
        self.i = i
        self.j = j

    def diff(self):
        # d/dz [P / (z^i (1-z)^j)] = [P' z(1-z) - P (i(1-z) - jz)] / (z^{i+1}(1-z)^{j+1})
        num = _poly_add(
            _poly_mul(_poly_diff(self.p), [Fraction(0), Fraction(1), Fraction(-1)]),
            _poly_mul(self.p, [Fraction(-self.i), Fraction(self.i + self.j)]),
        )
        return _Rat(num, self.i + 1, self.j + 1)

    def mul_one_minus_z(self, k):
        if k <= self.j:
            return _Rat(self.p, self.i, self.j - k)
        extra = [Fraction(1)]
        for _ in range(k - self.j):
            extra = _poly_mul(extra, [Fraction(1), Fraction(-1)])
        return _Rat(_poly_mul(self.p, extra), self.i, 0)

    def add(self, other):
        i = max(self.i, other.i)
        j = max(self.j, other.j)

        def lift(r):
            p = r.p
            for _ in range(i - r.i):
                p = _poly_mul(p, [Fraction(0), Fraction(1)])
            for _ in range(j - r.j):
                p = _poly_mul(p, [Fraction(1), Fraction(-1)])
            return p

        return _Rat(_poly_add(lift(self), lift(other)), i, j)

    def scale(self, s):
        return _Rat([s * x for x in self.p], self.i, self.j)

    def eval_fraction(self, zq: Fraction) -> Fraction:
        # exact Horner: the integer coefficients grow factorially and
        # float evaluation cancels catastrophically
        num = Fraction(0)
        for coeff in reversed(self.p):
            num = num * zq + coeff
        return num / (zq**self.i * (1 - zq) ** self.j)


class _RatLog:
    """A(z) + B(z) log(1-z) with rational A, B."""

    __slots__ = ("a", "b")

    def __init__(self, a: _Rat, b: _Rat):
        self.a = a
        self.b = b

    def diff(self):
        # (A + B log(1-z))' = A' - B/(1-z) + B' log(1-z)
        return _RatLog(self.a.diff().add(_Rat(self.b.p, self.b.i, self.b.j + 1).scale(Fraction(-1))), self.b.diff())

    def mul_one_minus_z(self, k):
        return _RatLog(self.a.mul_one_minus_z(k), self.b.mul_one_minus_z(k))

    def scale(self, s):
        return _RatLog(self.a.scale(s), self.b.scale(s))

    def __call__(self, z: float) -> float:
        # the rational and logarithmic parts nearly cancel, so combine
        # them in 50-digit decimals (log included) before rounding once
        zq = Fraction(z)
        a = self.a.eval_fraction(zq)
        b = self.b.eval_fraction(zq)
        w = 1 - zq
        with localcontext() as ctx:
            ctx.prec = 50
            logw = (Decimal(w.numerator) / Decimal(w.denominator)).ln()
            total = (
                Decimal(a.numerator) / Decimal(a.denominator)
                + (Decimal(b.numerator) / Decimal(b.denominator)) * logw
            )
        return float(total)


def f21_log_form(n: int, m: int, l: int, z: float) -> float:
    """F(n+1, n+m+1; n+m+l+2; z) by exact rational/log differentiation.

    Closed form: the (n+m)-th derivative of (1-z)^{m+l} d^l/dz^l [log(1-z)/z],
    scaled by (n+m+l+1)! (-1)^{m+1} / (l! n! (m+n)! (m+l)!).  Exact Fraction
    arithmetic throughout; serves as an independent check of gauss_2f1.
    Requires 0 <= z < 1 (at z=0 the limit value 1 is returned).
    """
    if min(n, m, l) < 0:
        raise DomainError("indices must be non-negative integers")
    if not 0.0 <= z < 1.0:
        raise DomainError("f21_log_form requires 0 <= z < 1")
    if z == 0.0:
        return 1.0
    f = _RatLog(_Rat([0]), _Rat([1], i=1, j=0))  # log(1-z)/z
    for _ in range(l):
        f = f.diff()
    f = f.mul_one_minus_z(m + l)
    for _ in range(n + m):
        f = f.diff()
    pref = Fraction(
        math.factorial(n + m + l + 1) * (-1) ** (m + 1),
        math.factorial(l) * math.factorial(n) * math.factorial(m + n) * math.factorial(m + l),
    )
    return f.scale(pref)(z)
