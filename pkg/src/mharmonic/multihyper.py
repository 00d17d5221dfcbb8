"""Multivariable hypergeometric series: Appell F1 and F3, the four-variable
FD1 series with its Euler transform and symmetry, and the unit-argument
double series for the radial-measure coefficients.

All series are summed shell-by-total-degree (three consecutive shells below
tolerance declare convergence; the tail estimate is the geometric
extrapolation of the last shell).  Arguments are accepted up to modulus
0.97: beyond that the geometric extrapolation is unreliable and the caller
must transform first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import series as _series
from .errors import DomainError, NonConvergent
from .special import SeriesValue, gamma_ratio, is_nonpositive_int

MAX_TOTAL_DEGREE = 400
_MOD_CAP = 0.97


def _check_disc(*args):
    for v in args:
        if abs(complex(v)) > _MOD_CAP:
            raise DomainError(
                f"series argument with modulus {abs(complex(v)):.4f} > {_MOD_CAP}; "
                "use a transformed form"
            )


def _check_c(c: float):
    if is_nonpositive_int(c, 1e-14):
        raise DomainError(f"lower parameter c = {c} is a non-positive integer")


def _run_shells(runner, tol: float) -> tuple[complex, int, float]:
    inner = 0.1 * tol
    for _ in range(3):
        value, degree, tail, ok = runner(inner)
        if not ok:
            raise NonConvergent(
                f"shell summation did not converge within total degree {MAX_TOTAL_DEGREE}"
            )
        if tail <= tol * max(1.0, abs(value)):
            return value, degree, tail
        inner *= 0.1
    return value, degree, tail


def appell_f1(a: float, b1: float, b2: float, c: float, x, y, tol: float = 1e-10) -> SeriesValue:
    """Appell F1(a; b1, b2; c; x, y) for |x|, |y| < 1."""
    _check_c(c)
    _check_disc(x, y)
    value, degree, tail = _run_shells(
        lambda t: _series.f1_shells(a, b1, b2, c, complex(x), complex(y), t, MAX_TOTAL_DEGREE),
        tol,
    )
    return SeriesValue(value, degree, tail)


def appell_f3(a: float, aprime: float, b: float, bprime: float, c: float, x, y, tol: float = 1e-10) -> SeriesValue:
    """Appell F3(a, a'; b, b'; c; x, y) for |x|, |y| < 1."""
    _check_c(c)
    _check_disc(x, y)
    value, degree, tail = _run_shells(
        lambda t: _series.f3_shells(a, aprime, b, bprime, c, complex(x), complex(y), t, MAX_TOTAL_DEGREE),
        tol,
    )
    return SeriesValue(value, degree, tail)


@dataclass(frozen=True)
class FD1Params:
    """Parameters and arguments of the four-variable FD1 series."""

    a: float
    a_prime: float
    b1: float
    b2: float
    c: float
    x1: complex = 0.0
    x2: complex = 0.0
    y1: complex = 0.0
    y2: complex = 0.0

    def validate(self) -> "FD1Params":
        _check_c(self.c)
        _check_disc(self.x1, self.x2, self.y1, self.y2)
        return self


def fd1(params: FD1Params, tol: float = 1e-10) -> SeriesValue:
    """The four-variable series
    sum (a)_{i1+i2} (a')_{j1+j2} (b1)_{i1+j1} (b2)_{i2+j2} / (c)_{i1+i2+j1+j2}
        * x1^i1 x2^i2 y1^j1 y2^j2 / (i1! i2! j1! j2!).

    Terminating directions (non-positive integer numerator parameters) are
    truncated exactly by the vanishing coefficients.
    """
    p = params.validate()
    value, degree, tail = _run_shells(
        lambda t: _series.fd1_shells(
            p.a, p.a_prime, p.b1, p.b2, p.c,
            complex(p.x1), complex(p.x2), complex(p.y1), complex(p.y2),
            t, MAX_TOTAL_DEGREE,
        ),
        tol,
    )
    return SeriesValue(value, degree, tail)


def fd1_symmetry(params: FD1Params) -> FD1Params:
    """The exchange symmetry: FD1(a,a',b1,b2;c)(x1,x2,y1,y2)
    = FD1(b1,b2,a,a';c)(x1,y1,x2,y2)."""
    return FD1Params(
        a=params.b1, a_prime=params.b2, b1=params.a, b2=params.a_prime, c=params.c,
        x1=params.x1, x2=params.y1, y1=params.x2, y2=params.y2,
    )


def fd1_euler_transform(params: FD1Params) -> tuple[FD1Params, complex]:
    """Euler-type transform: returns (transformed, prefactor) with
    prefactor * fd1(transformed) = fd1(params).

    FD1(a,a',b1,b2;c)(x1,x2,y1,y2) = (1-x1)^{-b1} (1-x2)^{-b2}
        * FD1(c-a-a', a', b1, b2; c)(x1/(x1-1), x2/(x2-1),
                                     (y1-x1)/(1-x1), (y2-x2)/(1-x2)).
    """
    x1, x2, y1, y2 = (complex(params.x1), complex(params.x2),
                      complex(params.y1), complex(params.y2))
    if abs(1.0 - x1) < 1e-14 or abs(1.0 - x2) < 1e-14:
        raise DomainError("Euler transform singular at x1 = 1 or x2 = 1")
    new = FD1Params(
        a=params.c - params.a - params.a_prime,
        a_prime=params.a_prime,
        b1=params.b1,
        b2=params.b2,
        c=params.c,
        x1=x1 / (x1 - 1.0),
        x2=x2 / (x2 - 1.0),
        y1=(y1 - x1) / (1.0 - x1),
        y2=(y2 - x2) / (1.0 - x2),
    )
    new.validate()
    prefactor = (1.0 - x1) ** (-params.b1) * (1.0 - x2) ** (-params.b2)
    return new, complex(prefactor)


def aitken_ladder(partials: np.ndarray) -> tuple[float, float]:
    """Iterated Aitken delta-squared on geometrically spaced partial sums.

    Returns (extrapolated value, error estimate).  For power-law tails the
    geometric spacing makes each Aitken pass remove one power exactly; the
    iteration stops as soon as a pass fails to improve, which is where
    roundoff noise would otherwise blow up in the divided differences.
    """
    seq = np.asarray(partials, dtype=float)
    if len(seq) < 3:
        return float(seq[-1]), abs(seq[-1] - seq[-2]) if len(seq) > 1 else abs(float(seq[-1]))
    best = float(seq[-1])
    best_err = math.inf
    prev_tail = float(seq[-1])
    while len(seq) >= 3:
        d1 = seq[1:-1] - seq[:-2]
        d2 = seq[2:] - seq[1:-1]
        denom = d2 - d1
        if np.any(np.abs(denom) <= 1e-9 * np.abs(d2)):
            break  # divided differences at roundoff: extrapolation exhausted
        seq = seq[2:] - d2 * d2 / denom
        est = abs(float(seq[-1]) - prev_tail)
        prev_tail = float(seq[-1])
        if est < best_err:
            best, best_err = prev_tail, est
        else:
            break  # a pass stopped helping: noise dominates from here on
    if not math.isfinite(best_err):
        best_err = abs(best - prev_tail)
    return best, best_err


def cpq_unit_double_series(p: int, q: int, n: int, s: float, tol: float = 1e-9) -> SeriesValue:
    """Twice the radial coefficient, 2 c_pq(s), by the unit-argument double
    series

        GG(n+p, n+q; n, n+p+q)^2 GG(n+p+q, s+1; n+p+q+s+1)
        * sum_{j,k} (p)_j(q)_j / ((n+p+q)_j j!) * (p)_k(q)_k / ((n+p+q)_k k!)
                  * (n+p+q)_{j+k} / (n+p+q+s+1)_{j+k},

    shell-summed with Aitken acceleration on geometrically spaced partial
    sums.  Slowly convergent cases (large p, q with small s) raise
    NonConvergent and the caller falls back to quadrature.
    """
    if p < 0 or q < 0 or n < 1:
        raise DomainError("indices must be non-negative and n >= 1")
    if s <= -1.0:
        raise DomainError("the double series requires s > -1")
    if p > q:
        p, q = q, p  # summand symmetric in p <-> q
    h = float(n + p + q)
    pref = gamma_ratio([n + p, n + q], [n, n + p + q]) ** 2 * gamma_ratio(
        [n + p + q, s + 1.0], [n + p + q + s + 1.0]
    )

    if p == 0:
        # the j and k series terminate at the constant term
        return SeriesValue(pref, 1, 0.0)

    dmax = 4096
    while dmax <= 65536:
        f = np.empty(dmax + 1)
        f[0] = 1.0
        jj = np.arange(dmax)
        ratios = (p + jj) * (q + jj) / ((h + jj) * (jj + 1.0))
        np.cumprod(ratios, out=f[1:])
        conv = np.convolve(f, f)[: dmax + 1]
        dd = np.arange(dmax)
        rr = np.empty(dmax + 1)
        rr[0] = 1.0
        np.cumprod((h + dd) / (h + s + 1.0 + dd), out=rr[1:])
        shells = conv * rr
        partial = np.cumsum(shells)
        if shells[-1] == 0.0:  # terminating case summed exactly
            return SeriesValue(pref * partial[-1], int(np.argmin(shells > 0)), 0.0)
        idx = dmax >> np.arange(9, -1, -1)  # dmax/512 ... dmax
        value, err = aitken_ladder(partial[idx - 1])
        if pref * err <= tol * max(1.0, pref * abs(value)):
            return SeriesValue(pref * value, dmax, pref * err)
        dmax *= 2
    raise NonConvergent(
        "unit-argument double series converges too slowly; fall back to quadrature"
    )
