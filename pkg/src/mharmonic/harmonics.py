"""Bigraded spherical harmonics on the unit sphere of C^n.

Zonal kernels H^{pq}, the radial factors S^{pq} of the invariant-harmonic
extension, exact monomial integration over the sphere, and partial sums of
the Poisson-Szego expansion.

The zonal kernels are evaluated through the terminating-hypergeometric
closed form; the classical Jacobi-polynomial form is kept only as a
cross-check (the two carry different-looking normalisations and the test
suite records their measured agreement).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import geometry, special
from .errors import DomainError

_MAX_EXACT_INDEX = 6  # polynomial expansions use exact rationals up to here


def surface_measure(n: int) -> float:
    """Total surface measure of the unit sphere in C^n: 2 pi^n / Gamma(n)."""
    return 2.0 * math.pi**n / math.gamma(n)


def _check_dim(n: int) -> None:
    if n < 1:
        raise DomainError("ball dimension must be a positive integer")


def zonal_h(p: int, q: int, n: int, z) -> complex:
    """Zonal kernel H^{pq}(z) of the bigraded harmonics, |z| <= 1.

    For p >= q:
        H^{pq}(z) = G(n)/(2 pi^n) * (-1)^q (n+p+q-1) (n+p-2)! / ((n-1)! q! (p-q)!)
                    * z^{p-q} F(-q, n+p-1; p-q+1; |z|^2),
    with (n+p+q-1)*(n+p-2)! read as Gamma(n+p) + q*Gamma(n+p-1) so the
    n=1, p=q=0 case stays finite; H^{pq}(z) = H^{qp}(conj z) for p < q.
    For n=1 the kernel is z^p/(2 pi), conj(z)^q/(2 pi), or identically 0
    when both p and q are positive.
    """
    _check_dim(n)
    if p < 0 or q < 0:
        raise DomainError("bigraded indices must be non-negative")
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise DomainError(f"|z| = {abs(z)} > 1")
    if n == 1:
        if p and q:
            return 0.0 + 0.0j
        if q == 0:
            return z**p / (2.0 * math.pi)
        return np.conj(z) ** q / (2.0 * math.pi)
    if p < q:
        return zonal_h(q, p, n, np.conj(z))
    # (n+p+q-1) Gamma(n+p-1) = Gamma(n+p) + q Gamma(n+p-1), finite for n >= 1
    reg = math.exp(math.lgamma(n + p)) + (q * math.exp(math.lgamma(n + p - 1)) if q else 0.0)
    coeff = ((-1.0) ** q) * reg / (
        math.gamma(n) * math.factorial(q) * math.factorial(p - q)
    )
    hyp = special.gauss_2f1(-q, n + p - 1.0, p - q + 1.0, abs(z) ** 2).value.real
    return (math.gamma(n) / (2.0 * math.pi**n)) * coeff * z ** (p - q) * hyp


def zonal_h_via_jacobi(p: int, q: int, n: int, z) -> complex:
    """Jacobi-polynomial form of H^{pq}; cross-check oracle, n >= 2."""
    _check_dim(n)
    if n < 2:
        raise DomainError("the Jacobi form needs n >= 2")
    z = complex(z)
    r = abs(z)
    m = min(p, q)
    beta = abs(p - q)
    comb = (
        (n + p + q - 1)
        * math.factorial(n + p - 2)
        * math.factorial(n + q - 2)
        / (math.factorial(p) * math.factorial(q) * math.factorial(n - 1) * math.factorial(n - 2))
    )
    ratio = special.jacobi_poly(n - 2.0, float(beta), m, 2.0 * r * r - 1.0) / special.jacobi_poly(
        n - 2.0, float(beta), m, 1.0
    )
    phase = (z / r) ** (p - q) if r > 0 else (1.0 if p == q else 0.0)
    return comb * r**beta * phase * (math.gamma(n) / (2.0 * math.pi**n)) * ratio


def zonal_h_at_one(p: int, q: int, n: int) -> float:
    """H^{pq}(1) without the Gamma(n)/(2 pi^n) measure factor (n >= 2)."""
    if n < 2:
        raise DomainError("needs n >= 2")
    return (
        (n + p + q - 1)
        * math.factorial(n + p - 2)
        * math.factorial(n + q - 2)
        / (math.factorial(p) * math.factorial(q) * math.factorial(n - 1) * math.factorial(n - 2))
    )


def radial_s(p: int, q: int, n: int, r: float) -> float:
    """Radial factor S^{pq}(r) of the invariant-harmonic extension.

    S^{pq}(r) = GG(p+n, q+n; n, p+q+n) r^{p+q} F(p, q; p+q+n; r^2),
    normalised so that S^{pq}(1) = 1; S^{pq} == 1 for p = q = 0.
    """
    _check_dim(n)
    if not 0.0 <= r <= 1.0:
        raise DomainError("radius must lie in [0, 1]")
    if p == 0 and q == 0:
        return 1.0
    if r == 0.0:
        return 0.0
    pref = special.gamma_ratio([p + n, q + n], [n, p + q + n])
    hyp = special.gauss_2f1(float(p), float(q), float(p + q + n), r * r, tol=1e-14).value.real
    return pref * r ** (p + q) * hyp


def sphere_monomial_integral(nu, mu, n: int) -> float:
    """Exact sphere integral of zeta^nu conj(zeta)^mu.

    Vanishes unless nu == mu; otherwise nu!/(n)_{|nu|} times the total
    surface measure 2 pi^n / Gamma(n).
    """
    _check_dim(n)
    nu = tuple(int(k) for k in nu)
    mu = tuple(int(k) for k in mu)
    if len(nu) != n or len(mu) != n:
        raise DomainError("multi-indices must have length n")
    if any(k < 0 for k in nu + mu):
        raise DomainError("multi-indices must be non-negative")
    if nu != mu:
        return 0.0
    total = sum(nu)
    num = Fraction(1)
    for k in nu:
        num *= math.factorial(k)
    den = Fraction(1)
    for i in range(total):
        den *= n + i
    return float(num / den) * surface_measure(n)


def sphere_poly_integral(terms, n: int) -> complex:
    """Integrate a finite monomial list sum coeff * zeta^nu conj(zeta)^mu."""
    out = 0.0 + 0.0j
    for nu, mu, coeff in terms:
        if tuple(nu) == tuple(mu):
            out += coeff * sphere_monomial_integral(nu, mu, n)
    return out


def _compositions(total: int, parts: int):
    """All multi-indices of length `parts` summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _power_expansion(vec: np.ndarray, power: int):
    """Multinomial expansion of (sum_i vec_i m_i)^power as {multi-index: coeff}."""
    n = len(vec)
    out = {}
    fact_p = math.factorial(power)
    for alpha in _compositions(power, n):
        coeff = fact_p
        val = 1.0 + 0.0j
        skip = False
        for a, v in zip(alpha, vec):
            if a and v == 0.0:
                skip = True
                break
            coeff //= math.factorial(a)
            val *= v**a
        if not skip:
            out[alpha] = coeff * val
    return out


def _zonal_series_coeffs(p: int, q: int, n: int):
    """Exact rational coefficients c_k of H^{PQ}: H = sum_k c_k z^{P-Q+k} conj(z)^k
    for P = max(p,q), Q = min(p,q), excluding the measure factor G(n)/(2 pi^n)."""
    P, Q = max(p, q), min(p, q)
    pref = Fraction(
        (-1) ** Q * (n + P + Q - 1) * math.factorial(n + P - 2),
        math.factorial(n - 1) * math.factorial(Q) * math.factorial(P - Q),
    )
    coeffs = []
    c_k = Fraction(1)
    for k in range(Q + 1):
        coeffs.append(pref * c_k)
        if k < Q:
            c_k *= Fraction((-Q + k) * (n + P - 1 + k), (P - Q + 1 + k) * (k + 1))
    return coeffs


def zonal_h_eta_poly(p: int, q: int, n: int, x) -> dict:
    """H^{pq}(<x, eta>) expanded in eta-monomials for a fixed numeric x.

    Returns {(nu, mu): coeff} meaning coeff * eta^nu conj(eta)^mu.  The
    hypergeometric coefficients and multinomials are exact rationals
    (indices are small); only the powers of x are floating point.
    """
    _check_dim(n)
    if n == 1:
        raise DomainError("polynomial expansion is for n >= 2")
    if max(p, q) > 2 * _MAX_EXACT_INDEX:
        raise DomainError("expansion indices out of the supported range")
    x = geometry.as_point(x)
    measure_factor = math.gamma(n) / (2.0 * math.pi**n)
    coeffs = _zonal_series_coeffs(p, q, n)
    out: dict = {}
    P, Q = max(p, q), min(p, q)
    for k, c_k in enumerate(coeffs):
        lead = P - Q + k
        # <x,eta>^A contributes conj(eta) monomials, <eta,x>^B contributes eta ones
        if p >= q:
            a_pow, b_pow = lead, k
        else:
            a_pow, b_pow = k, lead
        left = _power_expansion(x, a_pow)  # goes with conj(eta)^alpha
        right = _power_expansion(np.conj(x), b_pow)  # goes with eta^beta
        for alpha, ca in left.items():
            for beta, cb in right.items():
                key = (beta, alpha)
                out[key] = out.get(key, 0.0) + float(c_k) * measure_factor * ca * cb
    return out


def poly_product_integral(poly_a: dict, poly_b: dict, n: int) -> complex:
    """Integral over the sphere of the product of two eta-monomial expansions."""
    out = 0.0 + 0.0j
    for (nu1, mu1), c1 in poly_a.items():
        for (nu2, mu2), c2 in poly_b.items():
            nu = tuple(a + b for a, b in zip(nu1, nu2))
            mu = tuple(a + b for a, b in zip(mu1, mu2))
            if nu == mu:
                out += c1 * c2 * sphere_monomial_integral(nu, mu, n)
    return out


def poisson_partial_sum(n: int, z, eta, degree_cap: int) -> complex:
    """Partial sum sum_{p+q<=cap} S^{pq}(|z|) H^{pq}(<z/|z|, eta>).

    Converges to the Poisson-Szego kernel P(z, eta); at z = 0 only the
    (0,0) term contributes.
    """
    _check_dim(n)
    z = geometry.as_ball_point(z)
    eta = geometry.as_sphere_point(eta)
    r = math.sqrt(geometry.norm_sq(z))
    if r == 0.0:
        return complex(math.gamma(n) / (2.0 * math.pi**n))
    zeta = z / r
    arg = geometry.inner(zeta, eta)
    total = 0.0 + 0.0j
    for p in range(degree_cap + 1):
        for q in range(degree_cap + 1 - p):
            if n == 1 and p and q:
                continue
            h = zonal_h(p, q, n, arg)
            if h != 0.0:
                total += radial_s(p, q, n, r) * h
    return total
