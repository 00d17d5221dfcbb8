"""Kernel engine: coefficient machinery, the Szego kernel forms, weighted
Bergman kernels, analytic continuation, asymptotics and limits."""

import math

import numpy as np
import pytest

from mharmonic import (
    DomainError,
    KernelParams,
    WeightSpec,
    ZETA3,
    bergman_kernel,
    c0q_closed_form,
    coeff_apqjm,
    coeff_cpq,
    cpq_asymptotic_leading,
    cpq_unit_double_series,
    f_s_kernel,
    gamma_ratio,
    get_cache,
    harm_szego,
    hol_kernel,
    poisson_szego,
    semiclassical_ratio,
    szego_2f1,
    szego_diagonal,
    szego_fd,
    szego_orthogonal,
)
from mharmonic.kernels import apqjm_point_mass, bergman_diagonal, szego_closed_form_dim1

from conftest import ball_point, sphere_point


def params_power(n, s, **kw):
    return KernelParams(n=n, weight=WeightSpec.power(s), **kw)


def params_hardy(n, **kw):
    return KernelParams(n=n, weight=WeightSpec.hardy(), **kw)


class TestWeightSpec:
    def test_power_validation(self):
        with pytest.raises(DomainError):
            WeightSpec.power(-1.0)

    def test_point_mass_has_no_parameter(self):
        assert WeightSpec.hardy() == WeightSpec("point", 123.0)


class TestCpq:
    def test_c00_closed_form(self):
        for n in (1, 2, 3):
            for s in (0.0, 1.0, 2.5):
                got = coeff_cpq(params_power(n, s), 0, 0)
                ref = gamma_ratio([n, s + 1.0], [2.0]) * 0.5 * gamma_ratio([2.0], [n + s + 1.0])
                ref = 0.5 * gamma_ratio([n, s + 1.0], [n + s + 1.0])
                assert got == pytest.approx(ref, rel=1e-12)

    def test_c11_zeta3(self):
        got = coeff_cpq(params_power(2, 0.0), 1, 1)
        assert got == pytest.approx((96 * ZETA3 - 115) / 4, rel=1e-11)

    def test_c03_beta_integral(self):
        # p=0 makes the hypergeometric factor 1: a pure Beta integral
        got = coeff_cpq(params_power(2, 1.0), 0, 3)
        assert got == pytest.approx(1.0 / 60.0, rel=1e-12)
        assert c0q_closed_form(2, 1.0, 3) == pytest.approx(1.0 / 60.0, rel=1e-14)

    def test_point_mass_all_ones(self):
        params = params_hardy(3)
        for (p, q) in [(0, 0), (2, 1), (5, 5)]:
            assert coeff_cpq(params, p, q) == 1.0

    def test_symmetry_exact(self):
        params = params_power(2, 0.5)
        assert coeff_cpq(params, 3, 1) == coeff_cpq(params, 1, 3)

    def test_cross_check_against_double_series(self):
        val = coeff_cpq(params_power(2, 0.0), 1, 1, cross_check=True)
        twice = cpq_unit_double_series(1, 1, 2, 0.0, tol=1e-10)
        assert 2 * val == pytest.approx(twice.value.real, rel=1e-9)

    def test_cache_reproducible(self):
        params = params_power(2, 0.75)
        a = coeff_cpq(params, 2, 3)
        get_cache(2, WeightSpec.power(0.75))._c.clear()
        b = coeff_cpq(params, 2, 3)
        assert a == b

    def test_cache_concurrent_first_access(self):
        import threading

        weight = WeightSpec.power(1.25)
        get_cache(2, weight)._c.clear()
        params = KernelParams(n=2, weight=weight)
        results = []

        def worker():
            results.append(coeff_cpq(params, 2, 2))

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(results) == 8 and len(set(results)) == 1


class TestApqjm:
    def test_a0000_reciprocal_c00(self):
        for n in (1, 2, 3):
            for s in (0.0, 1.5):
                params = params_power(n, s)
                assert coeff_apqjm(params, 0, 0, 0, 0) == pytest.approx(
                    1.0 / coeff_cpq(params, 0, 0), rel=1e-11
                )

    def test_a0000_value(self):
        assert coeff_apqjm(params_power(2, 0.0), 0, 0, 0, 0) == pytest.approx(4.0, rel=1e-12)

    def test_a1100_forced_by_c11(self):
        # A_1100(s) = n^3/((n+1) c_11(s)); at n=2, s=0 this is
        # 32/(3(96 zeta(3) - 115)).  The frequently quoted value without
        # the factor 3 contradicts A_0000 = 1/c_00 and the kernel identity
        # (see decisions log).
        got = coeff_apqjm(params_power(2, 0.0), 1, 1, 0, 0)
        assert got == pytest.approx(32.0 / (3.0 * (96.0 * ZETA3 - 115.0)), rel=1e-10)
        assert got == pytest.approx(8.0 / (3.0 * coeff_cpq(params_power(2, 0.0), 1, 1)), rel=1e-10)

    def test_point_mass_closed_form(self):
        for n in (1, 2, 3):
            params = params_hardy(n)
            for (p, q, j, m) in [(0, 0, 0, 0), (1, 2, 1, 0), (2, 2, 2, 2), (3, 1, 0, 2)]:
                got = coeff_apqjm(params, p, q, j, m)
                assert got == pytest.approx(apqjm_point_mass(n, p, q, j, m), rel=1e-12)

    def test_dim1_regularised_value(self):
        # n=1, p=q=l=0: the factor Gamma(h+l-1)(h+2l-1) is 0*inf and must
        # resolve to Gamma(1) = 1
        assert coeff_apqjm(params_hardy(1), 0, 0, 0, 0) == pytest.approx(1.0, rel=1e-13)


class TestClosedFormKernels:
    def test_poisson_at_origin(self):
        for n in (1, 2, 3):
            zeta = np.zeros(n, dtype=complex)
            zeta[0] = 1.0
            got = poisson_szego(n, np.zeros(n), zeta)
            assert got == pytest.approx(math.gamma(n) / (2 * math.pi**n), rel=1e-14)

    def test_poisson_dim1(self):
        got = poisson_szego(1, np.array([0.5 + 0j]), np.array([1.0 + 0j]))
        assert got == pytest.approx(3.0 / (2 * math.pi), rel=1e-14)
        assert got == pytest.approx((1 - 0.25) / (2 * math.pi * 0.25), rel=1e-14)

    def test_hol_kernel_origin(self):
        assert hol_kernel(2, 0.0, np.zeros(2), np.zeros(2)).real == pytest.approx(
            2.0 / math.pi**2, rel=1e-14
        )

    def test_harm_at_origin(self):
        assert harm_szego(2, np.zeros(2), np.zeros(2)) == pytest.approx(
            1.0 / (2 * math.pi**2), rel=1e-14
        )

    def test_harm_equals_invariant_in_dim1(self, rng):
        z, w = ball_point(rng, 1, 0.7), ball_point(rng, 1, 0.7)
        assert harm_szego(1, z, w) == pytest.approx(
            szego_fd(1, z, w, tol=1e-12).value.real, rel=1e-10
        )


class TestSzegoForms:
    def test_fd_at_origin(self):
        for n in (1, 2, 3):
            got = szego_fd(n, np.zeros(n), np.zeros(n))
            assert got.value.real == pytest.approx(math.gamma(n) / (2 * math.pi**n), rel=1e-13)

    def test_dim1_closed_form(self):
        z = np.array([0.3 + 0j])
        w = np.array([0.2j])
        ref = szego_closed_form_dim1(0.3, 0.2j)
        assert szego_fd(1, z, w, tol=1e-12).value.real == pytest.approx(ref, rel=1e-11)
        assert szego_2f1(1, z, w, tol=1e-12).value.real == pytest.approx(ref, rel=1e-11)

    def test_forms_agree(self, rng):
        for n in (2, 3):
            for _ in range(4):
                z, w = ball_point(rng, n, 0.65), ball_point(rng, n, 0.65)
                a = szego_fd(n, z, w, tol=1e-11)
                b = szego_2f1(n, z, w, tol=1e-11)
                tol = a.tail_estimate + b.tail_estimate + 1e-11 * abs(a.value)
                assert abs(a.value - b.value) <= tol

    def test_symmetry_in_arguments(self, rng):
        n = 2
        z, w = ball_point(rng, n, 0.7), ball_point(rng, n, 0.7)
        a = szego_2f1(n, z, w, tol=1e-12).value.real
        b = szego_2f1(n, w, z, tol=1e-12).value.real
        assert a == pytest.approx(b, rel=1e-10)

    def test_hermitian_and_real(self, rng):
        n = 2
        z, w = ball_point(rng, n, 0.7), ball_point(rng, n, 0.7)
        k = szego_2f1(n, z, w, tol=1e-12).value
        assert abs(k.imag) < 1e-10 * abs(k)

    def test_diagonal_closed_form(self, rng):
        for n in (2, 3):
            z = ball_point(rng, n, 0.8)
            via_sum = szego_2f1(n, z, z, tol=1e-12).value.real
            assert szego_diagonal(n, z) == pytest.approx(via_sum, rel=1e-9)

    def test_diagonal_dim1_consistency(self, rng):
        z = ball_point(rng, 1, 0.9)
        ref = szego_closed_form_dim1(z[0], z[0])
        assert szego_diagonal(1, z) == pytest.approx(ref, rel=1e-13)

    def test_diagonal_positive(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4))
            z = ball_point(rng, n, 0.95)
            assert szego_diagonal(n, z) > 0.0

    def test_orthogonal_points_f3_form(self):
        n = 2
        r1, r2 = 0.5, 0.4
        z = np.array([r1, 0], dtype=complex)
        w = np.array([0, r2], dtype=complex)
        a = szego_orthogonal(n, r1, r2, tol=1e-12).value.real
        b = szego_fd(n, z, w, tol=1e-12).value.real
        assert a == pytest.approx(b, rel=1e-10)

    def test_orthogonal_trivial(self):
        n = 2
        assert szego_orthogonal(n, 0.0, 0.0).value.real == pytest.approx(
            math.gamma(n) / (2 * math.pi**n), rel=1e-13
        )
        got = szego_orthogonal(n, 0.0, 0.45).value.real
        ref = szego_fd(n, np.zeros(2), np.array([0, 0.45], dtype=complex)).value.real
        assert got == pytest.approx(ref, rel=1e-11)

    def test_near_boundary_2f1_matches_diagonal(self, rng):
        n = 2
        z = 0.97 * sphere_point(rng, n)
        assert szego_2f1(n, z, z, tol=1e-11).value.real == pytest.approx(
            szego_diagonal(n, z), rel=1e-8
        )


class TestBergman:
    def test_point_mass_recovers_szego(self, rng):
        for n in (2, 3):
            hardy = params_hardy(n, tol=1e-11, degree_cap=96)
            z, w = ball_point(rng, n, 0.6), ball_point(rng, n, 0.6)
            a = bergman_kernel(hardy, z, w)
            b = szego_fd(n, z, w, tol=1e-11)
            tol = a.tail_estimate + b.tail_estimate + 1e-10 * abs(b.value)
            assert abs(a.value - b.value) <= tol

    def test_origin_value(self):
        params = params_power(2, 0.0)
        got = bergman_kernel(params, np.zeros(2), np.zeros(2)).value.real
        assert got == pytest.approx(2.0 / math.pi**2, rel=1e-12)

    def test_dim1_holomorphic_identity(self, rng):
        params = params_power(1, 0.0, tol=1e-10, degree_cap=90)
        for _ in range(3):
            z, w = ball_point(rng, 1, 0.6), ball_point(rng, 1, 0.6)
            got = bergman_kernel(params, z, w).value.real
            ref = 2 * hol_kernel(1, 0.0, z, w).real - math.gamma(2) / math.pi
            assert got == pytest.approx(ref, rel=1e-9)

    def test_diagonal_positive(self, rng):
        params = params_power(2, 1.0)
        for _ in range(5):
            z = ball_point(rng, 2, 0.6)
            assert bergman_kernel(params, z, z).value.real > 0.0

    def test_hermitian_symmetry(self, rng):
        params = params_power(2, 0.5, tol=1e-10)
        z, w = ball_point(rng, 2, 0.55), ball_point(rng, 2, 0.55)
        a = bergman_kernel(params, z, w).value
        b = bergman_kernel(params, w, z).value
        assert abs(a - np.conj(b)) < 1e-9 * abs(a)
        assert abs(a.imag) < 1e-9 * abs(a)

    def test_diagonal_route_equivalence(self, rng):
        # quadruple series vs bigraded diagonal form
        z = np.array([0.4, 0.0], dtype=complex)
        s = 8.0
        quad = bergman_kernel(params_power(2, s, tol=1e-10, degree_cap=160), z, z).value.real
        big = bergman_diagonal(2, WeightSpec.power(s), z, tol=1e-11).value.real
        assert quad == pytest.approx(big, rel=1e-8)


class TestFsKernel:
    def test_zero_point_value(self):
        n, s = 2, 1
        got = f_s_kernel(n, s, np.zeros(n), np.array([0.3, 0], dtype=complex)).value.real
        ref = math.gamma(n) / (2 * math.pi**n) * ((n - 1) / 2.0) ** (2 * s + 2)
        assert got == pytest.approx(ref, rel=1e-13)

    def test_szego_mode(self, rng):
        # s = -1 gives unit weights: the bigraded Szego expansion
        n = 2
        z, w = ball_point(rng, n, 0.5), ball_point(rng, n, 0.5)
        got = f_s_kernel(n, -1, z, w, cap=70, tol=1e-11).value
        ref = szego_2f1(n, z, w, tol=1e-12).value
        assert abs(got - ref) < 1e-8 * abs(ref)

    def test_cap_stability(self):
        n, s = 2, 0
        z = np.array([0.5, 0], dtype=complex)
        w = np.array([0.4, 0], dtype=complex)
        a = f_s_kernel(n, s, z, w, cap=30, tol=1e-10)
        b = f_s_kernel(n, s, z, w, cap=60, tol=1e-10)
        assert abs(a.value - b.value) <= a.tail_estimate + b.tail_estimate + 1e-12


class TestWallach:
    def test_f10_closed_form(self):
        n = 2
        for s in (-2.5, -1.5, 0.0, 1.0):
            from mharmonic import wallach_f

            assert wallach_f(n, 1, 0, s) == pytest.approx((n + s + 1) / n, rel=1e-12)

    def test_wallach_endpoint(self):
        from mharmonic import wallach_f

        # f_10(s) -> 0 as s -> -n-1 from above
        vals = [wallach_f(2, 1, 0, s) for s in (-2.9, -2.99, -2.999)]
        assert vals[0] > vals[1] > vals[2] > 0.0
        assert vals[2] < 1e-3

    def test_overlap_with_quadrature(self):
        from mharmonic import wallach_f

        n = 2
        for (p, q) in [(1, 1), (2, 1)]:
            for s in (0.0, 1.0):
                params = params_power(n, s)
                got = wallach_f(n, p, q, s, tol=1e-9)
                ref = coeff_cpq(params, 0, 0) / coeff_cpq(params, p, q)
                assert got == pytest.approx(ref, rel=1e-8)

    def test_positive_on_grid(self):
        from mharmonic import wallach_f

        n = 2
        for s in np.linspace(-2.9, 2.0, 10):
            for (p, q) in [(1, 1), (3, 3), (2, 0)]:
                assert wallach_f(n, p, q, float(s), tol=1e-5) > 0.0

    def test_domain(self):
        from mharmonic import wallach_f

        with pytest.raises(DomainError):
            wallach_f(2, 0, 0, 0.0)
        with pytest.raises(DomainError):
            wallach_f(2, 1, 1, -3.2)


class TestAsymptotics:
    def test_leading_term_trend(self):
        # the ratio approaches 1 along the doubling ladder
        n = 2
        for s in (0.0, 1.0):
            params = params_power(n, s)
            devs = []
            for lam in (8, 16, 32, 64):
                ratio = coeff_cpq(params, lam, lam) / cpq_asymptotic_leading(n, s, lam, lam)
                devs.append(abs(ratio - 1.0))
            assert all(b < a for a, b in zip(devs, devs[1:]))
            assert devs[-1] <= 0.05

    def test_symmetric_positive(self):
        val = cpq_asymptotic_leading(2, 0.5, 3.0, 3.0)
        assert val > 0.0
        assert cpq_asymptotic_leading(2, 0.5, 2.0, 5.0) == cpq_asymptotic_leading(2, 0.5, 5.0, 2.0)

    def test_q0_closed_form_decay(self):
        # the excluded p=0 row follows the Beta closed form
        n, s = 2, 1.0
        for q in (10, 20):
            got = coeff_cpq(params_power(n, s), 0, q)
            assert got == pytest.approx(c0q_closed_form(n, s, q), rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            cpq_asymptotic_leading(2, 0.0, 0.0, 1.0)


class TestSemiclassical:
    def test_origin_algebraic_value(self):
        # at z=0 only the (0,0) term survives:
        # K_s(0,0) = Gamma(n)/(2 pi^n) / c_00(s)
        n, s = 2, 10.0
        params = params_power(n, s)
        got = bergman_kernel(params, np.zeros(n), np.zeros(n)).value.real
        ref = math.gamma(n) / (2 * math.pi**n) / coeff_cpq(params, 0, 0)
        assert got == pytest.approx(ref, rel=1e-11)

    def test_ratio_moves_toward_one(self):
        z = np.array([0.4, 0.0], dtype=complex)
        d1 = abs(semiclassical_ratio(2, 25.0, z) - 1.0)
        d2 = abs(semiclassical_ratio(2, 50.0, z) - 1.0)
        assert d2 < d1

    def test_dim1_sanity(self):
        # against the explicit dimension-1 identity
        # K_s = 2 Re K^hol_s - Gamma(s+2)/(Gamma(s+1) pi)
        s = 25.0
        z = np.array([0.4 + 0j])
        k = bergman_kernel(params_power(1, s, degree_cap=160), z, z).value.real
        ref = 2 * hol_kernel(1, s, z, z).real - math.gamma(s + 2) / (math.gamma(s + 1) * math.pi)
        assert k == pytest.approx(ref, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            semiclassical_ratio(2, 0.0, np.zeros(2))
        with pytest.raises(DomainError):
            semiclassical_ratio(2, 5.0, np.array([0.8, 0], dtype=complex))
