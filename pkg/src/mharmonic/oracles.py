"""Independent brute-force oracles.

The sphere integrals behind the kernel identities are evaluated here by
truncated binomial expansion plus exact monomial integration, never through
the hypergeometric formulas under test; a Monte Carlo integrator provides a
second opinion.  Oracle results are wrapped in OracleReport records that
serialise into the CLI's JSON schema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry, harmonics, kernels, multihyper
from .errors import DomainError, TruncationBudgetExceeded
from .kernels import KernelParams
from .multihyper import FD1Params
from .special import SeriesValue


@dataclass
class OracleReport:
    identity_name: str
    lhs: complex
    rhs: complex
    abs_error: float
    rel_error: float
    budget: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.rel_error <= self.budget.get("rel_tol", 1e-8))

    def to_record(self) -> dict:
        def clean(v):
            if isinstance(v, (bool, np.bool_)):
                return bool(v)
            if isinstance(v, (int, np.integer)):
                return int(v)
            if isinstance(v, (float, np.floating)):
                return float(v)
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            return v

        return {
            "identity": self.identity_name,
            "lhs": {"re": float(self.lhs.real), "im": float(self.lhs.imag)},
            "rhs": {"re": float(self.rhs.real), "im": float(self.rhs.imag)},
            "abs_error": float(self.abs_error),
            "rel_error": float(self.rel_error),
            "budget": clean(self.budget),
            "pass": self.passed,
        }


def make_report(name: str, lhs: complex, rhs: complex, **budget) -> OracleReport:
    lhs = complex(lhs)
    rhs = complex(rhs)
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    return OracleReport(name, lhs, rhs, abs_err, rel_err, dict(budget))


def _poch_row(a: float, kmax: int) -> np.ndarray:
    """(a)_k for k = 0..kmax in linear arithmetic."""
    out = np.empty(kmax + 1)
    out[0] = 1.0
    if kmax:
        np.cumprod(a + np.arange(kmax, dtype=float), out=out[1:])
    return out


def four_factor_sphere_integral(
    n: int, alpha: float, beta: float, gamma_: float, delta: float, z, w, degree_cap: int = 80
) -> SeriesValue:
    """Truncated-binomial evaluation of

        int (1-<z,zeta>)^-alpha (1-<zeta,z>)^-beta
            (1-<w,zeta>)^-gamma (1-<zeta,w>)^-delta  dsigma(zeta).

    A unitary change of variables puts z on coordinate 1 and w in the span
    of coordinates 1 and 2; each factor is expanded by the binomial series
    to the degree cap, the product is integrated monomial by monomial via
    the exact formula, and the neglected degrees carry a geometric bound.
    """
    z = geometry.as_ball_point(z)
    w = geometry.as_ball_point(w)
    a = math.sqrt(geometry.norm_sq(z))
    if a > 0.0:
        b = complex(geometry.inner(w, z)) / a  # first coordinate of w after rotation
    elif n == 1:
        b = complex(math.sqrt(geometry.norm_sq(w)))
    else:
        b = 0.0 + 0.0j
    c2 = geometry.norm_sq(w) - abs(b) ** 2
    if c2 < -1e-12:
        raise DomainError("inconsistent reduction (|<w,z>| exceeds |w||z|)")
    if n == 1:
        if c2 > 1e-10:
            raise DomainError("a one-dimensional pair cannot have a transverse component")
        c = 0.0  # exact in dimension one; c2 is rounding noise
    else:
        c = math.sqrt(max(c2, 0.0))

    d = degree_cap
    fact = np.concatenate(([1.0], np.cumprod(np.arange(1.0, d + 1.0))))
    pal, pbe, pga, pde = (_poch_row(x, d) for x in (alpha, beta, gamma_, delta))
    apow = a ** np.arange(d + 1)
    bpow = b ** np.arange(d + 1)
    cpow = c ** np.arange(d + 1)

    # zeta-bar side (factors with alpha, gamma): coefficient of zbar1^u zbar2^v
    # zeta side (factors with beta, delta):      coefficient of z1^u z2^v
    P = np.zeros((d + 1, d + 1), dtype=complex)
    Q = np.zeros((d + 1, d + 1), dtype=complex)
    base_a = pal * apow / fact
    base_b = pbe * apow / fact  # conj(a) = a (real)
    for v in range(d + 1):
        kmax = d - v
        g = pga[v : v + kmax + 1] * bpow[: kmax + 1] / (fact[: kmax + 1] * fact[v])
        h = pde[v : v + kmax + 1] * np.conj(bpow[: kmax + 1]) / (fact[: kmax + 1] * fact[v])
        P[: kmax + 1, v] = np.convolve(base_a[: kmax + 1], g)[: kmax + 1] * cpow[v]
        Q[: kmax + 1, v] = np.convolve(base_b[: kmax + 1], h)[: kmax + 1] * cpow[v]

    pochn = _poch_row(float(n), d)
    shells = np.zeros(d + 1)
    total = 0.0 + 0.0j
    for deg in range(d + 1):
        u = np.arange(deg + 1)
        v = deg - u
        terms = P[u, v] * Q[u, v] * fact[u] * fact[v] / pochn[deg]
        total += terms.sum()
        shells[deg] = np.abs(terms).sum()

    measure = harmonics.surface_measure(n)
    tail_raw = shells[-1]
    ratio = shells[-1] / shells[-2] if shells[-2] > 0.0 else 0.5
    if ratio >= 1.0:
        raise TruncationBudgetExceeded(
            f"binomial shells still growing at degree {d}; increase degree_cap"
        )
    tail = measure * tail_raw * ratio / (1.0 - ratio)
    value = measure * total
    if tail > 1e-6 * max(abs(value), 1e-300):
        raise TruncationBudgetExceeded(
            f"tail bound {tail:.2e} too large at degree cap {d}; increase degree_cap"
        )
    return SeriesValue(value, d, tail)


def szego_bruteforce(n: int, z, w, degree_cap: int = 80) -> SeriesValue:
    """Szego kernel straight from its Poisson-product integral:

        K(z,w) = Gamma(n)^2/(4 pi^{2n}) (1-|z|^2)^n (1-|w|^2)^n
                 * int dsigma / (|1-<z,zeta>|^{2n} |1-<w,zeta>|^{2n}),

    with the integral done by four_factor_sphere_integral.  Requires
    max(|z|, |w|) <= 0.6 so the binomial truncation converges fast.
    """
    z = geometry.as_ball_point(z)
    w = geometry.as_ball_point(w)
    if max(geometry.norm_sq(z), geometry.norm_sq(w)) > 0.36 + 1e-12:
        raise DomainError("brute-force oracle restricted to max(|z|,|w|) <= 0.6")
    nn = float(n)
    integral = four_factor_sphere_integral(n, nn, nn, nn, nn, z, w, degree_cap)
    pref = (
        math.gamma(n) ** 2
        / (4.0 * math.pi ** (2 * n))
        * (1.0 - geometry.norm_sq(z)) ** n
        * (1.0 - geometry.norm_sq(w)) ** n
    )
    return SeriesValue(pref * integral.value, integral.truncation_order, pref * integral.tail_estimate)


def theorem_pb_check(
    n: int,
    alpha: float,
    beta: float,
    gamma_: float,
    delta: float,
    z,
    w,
    degree_cap: int = 80,
    rel_tol: float = 1e-8,
    seed=None,
) -> OracleReport:
    """Certify the four-factor integral against its FD1 closed form.

    lhs: truncated-binomial sphere integral.
    rhs: (2 pi^n / Gamma(n)) FD1(beta, delta, alpha, gamma; n) at the
    invariant arguments (|z|^2, <w,z>, <z,w>, |w|^2).  Note the middle
    arguments: with the inner product <z,w> = sum z conj(w) this ordering
    is the one the expansion actually produces (the published display has
    the conjugate pair swapped; the n=1 case was settled by direct circle
    quadrature, see the decisions log).
    """
    z = geometry.as_ball_point(z)
    w = geometry.as_ball_point(w)
    if max(geometry.norm_sq(z), geometry.norm_sq(w)) > 0.36 + 1e-12:
        raise DomainError("oracle restricted to max(|z|,|w|) <= 0.6")
    lhs = four_factor_sphere_integral(n, alpha, beta, gamma_, delta, z, w, degree_cap)
    params = FD1Params(
        a=beta,
        a_prime=delta,
        b1=alpha,
        b2=gamma_,
        c=float(n),
        x1=geometry.norm_sq(z),
        x2=geometry.inner(w, z),
        y1=geometry.inner(z, w),
        y2=geometry.norm_sq(w),
    )
    rhs = multihyper.fd1(params, tol=min(rel_tol * 1e-2, 1e-10))
    rhs_val = 2.0 * math.pi**n / math.gamma(n) * rhs.value
    report = make_report(
        "four_factor_integral_vs_fd1",
        lhs.value,
        rhs_val,
        degree_cap=degree_cap,
        rel_tol=rel_tol,
        lhs_tail=lhs.tail_estimate,
        rhs_tail=rhs.tail_estimate,
        params=[alpha, beta, gamma_, delta],
    )
    if seed is not None:
        report.budget["seed"] = seed
    return report


def montecarlo_sphere(n: int, integrand, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo sphere integral: uniform points from normalised complex
    Gaussians, scaled by the total measure 2 pi^n / Gamma(n).

    Returns (mean, standard error)."""
    if samples < 1000:
        raise DomainError("use at least 10^3 samples")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    vals = np.array([integrand(row) for row in g], dtype=complex)
    measure = harmonics.surface_measure(n)
    mean = measure * float(np.mean(vals.real))
    stderr = measure * float(np.std(vals.real, ddof=1)) / math.sqrt(samples)
    return mean, stderr


def reproducing_check(params: KernelParams, p: int, q: int, z) -> OracleReport:
    """Verify the reproducing identity for the solid harmonic
    f(r zeta) = S^{pq}(r) zeta_1^p conj(zeta_2)^q.

    The sphere integral of f against the kernel's bigraded term collapses
    (orthogonality) to the (p,q) component and is carried out exactly by
    monomial integration; the radial integral is an independent
    Gauss-Legendre quadrature of S^{pq}(sqrt t)^2 t^{n-1} against the
    radial measure.  The reconstruction
        S^{pq}(r) * [exact sphere collapse](zeta) * I_radial / c_pq
    is compared against f(z)."""
    n = params.n
    if n < 2:
        raise DomainError("the solid-harmonic check needs n >= 2")
    if max(p, q) > 3:
        raise DomainError("indices restricted to p, q <= 3")
    z = geometry.as_ball_point(z)
    r = math.sqrt(geometry.norm_sq(z))
    if r == 0.0:
        raise DomainError("pick a nonzero evaluation point")
    zeta = z / r

    # exact sphere collapse: int H^{pq}(<zeta,eta>) eta_1^p conj(eta_2)^q dsigma(eta)
    kernel_poly = harmonics.zonal_h_eta_poly(p, q, n, zeta)
    nu = tuple([p] + [0] * (n - 1))
    mu = tuple([0, q] + [0] * (n - 2))
    f_poly = {(nu, mu): 1.0}
    sphere_val = harmonics.poly_product_integral(kernel_poly, f_poly, n)

    # independent radial integral of S^{pq}(sqrt t)^2 t^{n-1} d mu(t)
    if params.weight.kind == "point":
        i_rad = 1.0
    else:
        s = params.weight.s
        x, wts = np.polynomial.legendre.leggauss(400)
        t = 0.5 * (x + 1.0)
        vals = np.array([harmonics.radial_s(p, q, n, math.sqrt(tt)) ** 2 for tt in t])
        # interval map contributes 1/2, the measure (1/2)(1-t)^s dt another 1/2
        i_rad = 0.25 * float(np.dot(wts, vals * t ** (n - 1) * (1.0 - t) ** s))

    c_pq = kernels.coeff_cpq(params, p, q)
    lhs = harmonics.radial_s(p, q, n, r) * sphere_val * i_rad / c_pq
    f_sph = zeta[0] ** p * np.conj(zeta[1]) ** q
    rhs = harmonics.radial_s(p, q, n, r) * f_sph
    return make_report(
        f"reproducing_p{p}q{q}",
        lhs,
        rhs,
        weight=params.weight.kind,
        s=params.weight.s,
        radial_nodes=400,
        rel_tol=1e-6,
    )
