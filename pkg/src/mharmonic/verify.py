"""Named verification suites behind the CLI ``verify`` subcommand.

Every suite returns a list of OracleReport records; a suite passes when all
of its reports pass.  Randomised suites draw from a seeded generator and
record the seed, so failures are reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from . import geometry, harmonics, kernels, oracles, special
from .kernels import KernelParams, WeightSpec
from .oracles import OracleReport, make_report

SUITES = (
    "pb",
    "szego-forms",
    "orthogonality",
    "folland",
    "reproducing",
    "identity-6-5",
    "asymptotics",
    "wallach",
    "semiclassical",
)


def _rand_ball(rng: np.random.Generator, n: int, rmax: float) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return rmax * rng.uniform(0.2, 1.0) * v / np.linalg.norm(v)


def suite_pb(seed: int, draws: int = 50, dims=(1, 2, 3)) -> list[OracleReport]:
    """Randomised certification of the four-factor integral formula."""
    rng = np.random.default_rng(seed)
    out = []
    for n in dims:
        for k in range(draws):
            z = _rand_ball(rng, n, 0.6)
            w = _rand_ball(rng, n, 0.6)
            alpha, beta, gamma_, delta = rng.uniform(0.5, 2.5, 4)
            rep = oracles.theorem_pb_check(n, alpha, beta, gamma_, delta, z, w, seed=seed)
            rep.identity_name = f"pb_n{n}_case{k}"
            out.append(rep)
    return out


def _forms_grid(n: int):
    """Radial/angle grid for the form-equivalence suite (radii <= 0.6)."""
    radii = [0.12, 0.24, 0.36, 0.48, 0.6]
    angles = [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]
    for r1 in radii:
        for r2 in radii:
            for th in angles:
                z = np.zeros(n, dtype=complex)
                z[0] = r1
                w = np.zeros(n, dtype=complex)
                if n == 1:
                    w[0] = r2 * np.exp(1j * th)
                else:
                    w[0] = 0.6 * r2 * np.exp(1j * th)
                    w[1] = 0.8 * r2
                yield z, w


def suite_szego_forms(seed: int, dims=(2, 3)) -> list[OracleReport]:
    """Pairwise agreement of the Szego kernel forms, and the disc closed form."""
    out = []
    for n in dims:
        hardy = KernelParams(n=n, weight=WeightSpec.hardy(), tol=1e-11, degree_cap=96)
        for k, (z, w) in enumerate(_forms_grid(n)):
            a = kernels.szego_fd(n, z, w, tol=1e-11).value.real
            b = kernels.szego_2f1(n, z, w, tol=1e-11).value.real
            c = oracles.szego_bruteforce(n, z, w).value.real
            d = kernels.bergman_kernel(hardy, z, w).value.real
            lo, hi = min(a, b, c, d), max(a, b, c, d)
            rep = make_report(f"szego_forms_n{n}_case{k}", lo, hi, rel_tol=1e-8, seed=seed)
            out.append(rep)
    for k, (z, w) in enumerate(_forms_grid(1)):
        got = kernels.szego_2f1(1, z, w, tol=1e-12).value.real
        ref = kernels.szego_closed_form_dim1(z[0], w[0])
        out.append(make_report(f"szego_disc_case{k}", got, ref, rel_tol=1e-10, seed=seed))
    return out


def suite_orthogonality(seed: int, dims=(2, 3), index_cap: int = 3) -> list[OracleReport]:
    """Exact zonal-kernel orthogonality through monomial sphere integration."""
    rng = np.random.default_rng(seed)
    out = []
    for n in dims:
        zeta = _rand_ball(rng, n, 1.0)
        zeta /= np.linalg.norm(zeta)
        xi = _rand_ball(rng, n, 1.0)
        xi /= np.linalg.norm(xi)
        pairs = [(p, q) for p in range(index_cap + 1) for q in range(index_cap + 1)]
        for p, q in pairs:
            for k, l in pairs:
                a = harmonics.zonal_h_eta_poly(p, q, n, zeta)
                b = harmonics.zonal_h_eta_poly(l, k, n, xi)  # H^{kl}(<eta,xi>)
                val = harmonics.poly_product_integral(a, b, n)
                expect = (
                    harmonics.zonal_h(p, q, n, geometry.inner(zeta, xi))
                    if (p, q) == (k, l)
                    else 0.0
                )
                rep = make_report(
                    f"orthogonality_n{n}_{p}{q}_{k}{l}", val, expect, rel_tol=1e-10, seed=seed
                )
                # zero targets: grade on absolute error against the kernel scale
                if (p, q) != (k, l):
                    scale = abs(harmonics.zonal_h(p, q, n, geometry.inner(zeta, xi))) + 1.0
                    rep.rel_error = rep.abs_error / scale
                out.append(rep)
    return out


def suite_folland(seed: int, dims=(1, 2, 3), cap: int = 40) -> list[OracleReport]:
    """Bigraded partial sums against the closed Poisson-Szego formula."""
    rng = np.random.default_rng(seed)
    out = []
    for n in dims:
        for k in range(4):
            z = _rand_ball(rng, n, 0.5)
            eta = _rand_ball(rng, n, 1.0)
            eta /= np.linalg.norm(eta)
            got = harmonics.poisson_partial_sum(n, z, eta, cap)
            ref = kernels.poisson_szego(n, z, eta)
            out.append(
                make_report(f"folland_n{n}_case{k}", got, ref, rel_tol=1e-8, cap=cap, seed=seed)
            )
    return out


def suite_reproducing(seed: int, n: int = 2, index_cap: int = 2) -> list[OracleReport]:
    """Reproducing identity for solid harmonics, Hardy and s=0 weights."""
    rng = np.random.default_rng(seed)
    z = _rand_ball(rng, n, 0.55)
    out = []
    for weight in (WeightSpec.hardy(), WeightSpec.power(0.0)):
        params = KernelParams(n=n, weight=weight)
        for p in range(index_cap + 1):
            for q in range(index_cap + 1):
                if p == q == 0:
                    continue
                rep = oracles.reproducing_check(params, p, q, z)
                rep.identity_name = f"reproducing_{weight.kind}_p{p}q{q}"
                rep.budget["seed"] = seed
                out.append(rep)
    return out


def identity_65_lhs(n: int, m: int) -> float:
    """Coefficient identity from the diagonal Szego evaluation:

        sum_{p+q+j+k=m} GG(p+n+j, q+n+j; n, p+q+n+j) / j!
                      * GG(p+n+k, q+n+k; n, p+q+n+k) / k!  * H^{pq}(1)
        = (2n)_m^2 / (m! (n)_m),

    where H^{pq}(1) is the combinatorial value (no measure factor).  The
    1/j! and 1/k! factors are forced by the Taylor-coefficient derivation.
    """
    total = 0.0
    for p in range(m + 1):
        for q in range(m + 1 - p):
            for j in range(m + 1 - p - q):
                k = m - p - q - j
                total += (
                    special.gamma_ratio([p + n + j, q + n + j], [n, p + q + n + j])
                    / math.factorial(j)
                    * special.gamma_ratio([p + n + k, q + n + k], [n, p + q + n + k])
                    / math.factorial(k)
                    * harmonics.zonal_h_at_one(p, q, n)
                )
    return total


def suite_identity_65(seed: int, dims=(2, 3), mmax: int = 8) -> list[OracleReport]:
    out = []
    for n in dims:
        for m in range(mmax + 1):
            lhs = identity_65_lhs(n, m)
            rhs = special.pochhammer(2.0 * n, m) ** 2 / (
                math.factorial(m) * special.pochhammer(float(n), m)
            )
            out.append(make_report(f"identity65_n{n}_m{m}", lhs, rhs, rel_tol=1e-10, seed=seed))
    return out


def suite_asymptotics(seed: int, n: int = 2, s_values=(0.0, 1.0), lambdas=(8, 16, 32, 64)) -> list[OracleReport]:
    """Leading-order trend of c_{lambda,lambda}(s): |ratio - 1| must decrease
    strictly along the doubling ladder and end below 0.05."""
    out = []
    for s in s_values:
        params = KernelParams(n=n, weight=WeightSpec.power(s))
        devs = []
        for lam in lambdas:
            c = kernels.coeff_cpq(params, lam, lam)
            lead = kernels.cpq_asymptotic_leading(n, s, lam, lam)
            devs.append(abs(c / lead - 1.0))
        decreasing = all(b < a for a, b in zip(devs, devs[1:]))
        rep = make_report(
            f"asymptotics_s{s:g}",
            devs[-1],
            0.0,
            rel_tol=1.0,
            seed=seed,
            deviations=[float(d) for d in devs],
        )
        rep.rel_error = devs[-1] / 0.05 if decreasing else math.inf
        out.append(rep)
    return out


def suite_wallach(seed: int, n: int = 2) -> list[OracleReport]:
    out = []
    for s in (-2.5, -1.5, 0.0, 1.0):
        got = kernels.wallach_f(n, 1, 0, s)
        ref = (n + s + 1.0) / n
        out.append(make_report(f"wallach_f10_s{s:g}", got, ref, rel_tol=1e-8, seed=seed))
    grid = np.linspace(-n - 1 + 0.1, 2.0, 10)
    worst = math.inf
    for p in range(4):
        for q in range(4):
            if p == q == 0:
                continue
            for s in grid:
                worst = min(worst, kernels.wallach_f(n, p, q, float(s), tol=1e-5))
    rep = make_report("wallach_positivity_min", worst, abs(worst), rel_tol=1e-12, seed=seed)
    rep.rel_error = 0.0 if worst > 0 else math.inf
    out.append(rep)
    for (p, q) in ((1, 1), (2, 1), (3, 3)):
        for s in (0.0, 1.0):
            params = KernelParams(n=n, weight=WeightSpec.power(s))
            got = kernels.wallach_f(n, p, q, s, tol=1e-8)
            ref = kernels.coeff_cpq(params, 0, 0) / kernels.coeff_cpq(params, p, q)
            out.append(
                make_report(f"wallach_vs_quadrature_p{p}q{q}s{s:g}", got, ref, rel_tol=1e-6, seed=seed)
            )
    return out


def suite_semiclassical(seed: int, n: int = 2, s_values=(25.0, 50.0, 100.0)) -> list[OracleReport]:
    z = np.zeros(n, dtype=complex)
    z[0] = 0.4
    devs = [abs(kernels.semiclassical_ratio(n, s, z) - 1.0) for s in s_values]
    decreasing = all(b < a for a, b in zip(devs, devs[1:]))
    rep = make_report(
        "semiclassical_trend",
        devs[-1],
        0.0,
        rel_tol=1.0,
        seed=seed,
        deviations=[float(d) for d in devs],
    )
    rep.rel_error = 0.0 if decreasing else math.inf
    return [rep]


_SUITE_FUNCS = {
    "pb": suite_pb,
    "szego-forms": suite_szego_forms,
    "orthogonality": suite_orthogonality,
    "folland": suite_folland,
    "reproducing": suite_reproducing,
    "identity-6-5": suite_identity_65,
    "asymptotics": suite_asymptotics,
    "wallach": suite_wallach,
    "semiclassical": suite_semiclassical,
}


def run_suite(name: str, seed: int, **kwargs) -> list[OracleReport]:
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(_SUITE_FUNCS[s](seed))
        return out
    if name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; pick from {SUITES + ('all',)}")
    return _SUITE_FUNCS[name](seed, **kwargs)