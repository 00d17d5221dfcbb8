"""Appell F1/F3, the four-variable FD1 series, and the unit-argument
double series for the radial coefficients."""

import numpy as np
import pytest

from mharmonic import (
    DomainError,
    FD1Params,
    ZETA3,
    appell_f1,
    appell_f3,
    cpq_unit_double_series,
    fd1,
    fd1_euler_transform,
    fd1_symmetry,
    gauss_2f1,
    gamma_ratio,
)


def rand_params(rng):
    a, ap, b1, b2 = rng.uniform(0.4, 2.2, 4)
    c = rng.uniform(1.2, 3.0)
    mags = rng.uniform(0.05, 0.45, 4)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 4))
    x1, x2, y1, y2 = mags * phases
    return FD1Params(a, ap, b1, b2, c, x1, x2, y1, y2)


class TestAppellF1:
    def test_constant_term(self):
        assert appell_f1(1.3, 0.7, 0.9, 2.0, 0.0, 0.0).value == 1.0

    def test_collapse_to_gauss(self):
        got = appell_f1(1.2, 0.9, 0.0, 2.3, 0.45 + 0.2j, 0.77, tol=1e-12)
        ref = gauss_2f1(1.2, 0.9, 2.3, 0.45 + 0.2j, tol=1e-13)
        assert abs(got.value - ref.value) < 1e-11

    def test_binomial_product_when_a_equals_c(self):
        got = appell_f1(1.7, 0.8, 1.1, 1.7, 0.3, 0.2, tol=1e-12)
        ref = (1 - 0.3) ** -0.8 * (1 - 0.2) ** -1.1
        assert got.value.real == pytest.approx(ref, rel=1e-11)

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            appell_f1(1.0, 1.0, 1.0, 2.0, 0.99, 0.1)


class TestAppellF3:
    def test_constant_term(self):
        assert appell_f3(1.0, 2.0, 0.5, 0.7, 2.0, 0.0, 0.0).value == 1.0

    def test_collapse_to_gauss(self):
        got = appell_f3(1.2, 3.0, 0.9, 1.1, 2.3, 0.45, 0.0, tol=1e-12)
        ref = gauss_2f1(1.2, 0.9, 2.3, 0.45, tol=1e-13)
        assert abs(got.value - ref.value) < 1e-11


class TestFD1:
    def test_constant_term(self):
        assert fd1(FD1Params(1.0, 1.0, 1.0, 1.0, 2.0)).value == 1.0

    def test_collapse_to_gauss(self):
        p = FD1Params(1.1, 0.9, 1.3, 0.7, 2.1, 0, 0, 0, 0.35)
        got = fd1(p, tol=1e-12)
        ref = gauss_2f1(0.7, 0.9, 2.1, 0.35, tol=1e-13)
        assert abs(got.value - ref.value) < 1e-11

    # frozen from the quadruple series summed at 30 digits (mpmath):
    # FD1(1.5, 0.8, 1.2, 0.9; 2.0)(0.2, 0.15+0.1i, 0.15-0.1i, 0.25)
    REF = 1.6182997163841959 + 0.0368857473896663j

    def test_reference_value(self):
        p = FD1Params(1.5, 0.8, 1.2, 0.9, 2.0, 0.2, 0.15 + 0.1j, 0.15 - 0.1j, 0.25)
        got = fd1(p, tol=1e-12)
        assert abs(got.value - self.REF) / abs(self.REF) < 1e-12

    def test_symmetry(self, rng):
        for _ in range(12):
            p = rand_params(rng)
            a = fd1(p, tol=1e-11)
            b = fd1(fd1_symmetry(p), tol=1e-11)
            tol = a.tail_estimate + b.tail_estimate + 1e-12 * abs(a.value)
            assert abs(a.value - b.value) <= tol

    def test_reduces_to_f1_when_x2_y2_vanish(self, rng):
        # FD1(a,a',b1,b2;c)(x1,0,y1,0) = F1(b1; a, a'; c)(x1, y1)
        for _ in range(10):
            p = rand_params(rng)
            p0 = FD1Params(p.a, p.a_prime, p.b1, p.b2, p.c, p.x1, 0.0, p.y1, 0.0)
            lhs = fd1(p0, tol=1e-11)
            rhs = appell_f1(p.b1, p.a, p.a_prime, p.c, p.x1, p.y1, tol=1e-11)
            assert abs(lhs.value - rhs.value) <= lhs.tail_estimate + rhs.tail_estimate + 1e-11

    def test_reduces_to_f1_when_x1_x2_vanish(self, rng):
        # FD1(a,a',b1,b2;c)(0,0,y1,y2) = F1(a'; b1, b2; c)(y1, y2)
        for _ in range(10):
            p = rand_params(rng)
            p0 = FD1Params(p.a, p.a_prime, p.b1, p.b2, p.c, 0.0, 0.0, p.y1, p.y2)
            lhs = fd1(p0, tol=1e-11)
            rhs = appell_f1(p.a_prime, p.b1, p.b2, p.c, p.y1, p.y2, tol=1e-11)
            assert abs(lhs.value - rhs.value) <= lhs.tail_estimate + rhs.tail_estimate + 1e-11

    def test_terminating_directions(self):
        # negative-integer parameters truncate exactly
        p = FD1Params(-2.0, 1.3, -1.0, 0.7, 2.4, 0.6, 0.4, 0.3, 0.5)
        got = fd1(p, tol=1e-12)
        assert got.value.imag == 0.0


class TestEulerTransform:
    def test_identity_at_zero(self):
        p = FD1Params(1.0, 1.1, 0.9, 0.8, 2.0)
        newp, pref = fd1_euler_transform(p)
        assert pref == 1.0
        assert (newp.x1, newp.x2, newp.y1, newp.y2) == (0, 0, 0, 0)

    def test_randomized_agreement(self, rng):
        count = 0
        while count < 10:
            p = rand_params(rng)
            try:
                newp, pref = fd1_euler_transform(p)
            except DomainError:
                continue  # transformed argument left the accepted disc
            lhs = fd1(p, tol=1e-11).value
            rhs = pref * fd1(newp, tol=1e-11).value
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
            count += 1

    def test_kernel_reduction_chain(self, rng):
        # the chain tWL -> tWM -> tWM maps the symmetric-parameter series to
        # the terminating (-n, n, -n, n; n) form:
        # FD1(n,n,n,n;n)(x1,x2,y1,y2) = (1-x1)^{-n} (1-x2)^{-n} (1-y1)^{-n}
        #   * FD1(-n,n,-n,n;n)(x1, (x1-y1)/(1-y1), (x1-x2)/(1-x2), V),
        # V = 1 - (1-x1)(1-y2)/((1-x2)(1-y1))
        n = 2.0
        from conftest import ball_point
        from mharmonic.geometry import inner as ip, norm_sq

        for _ in range(6):
            z = ball_point(rng, 2, 0.55)
            w = ball_point(rng, 2, 0.55)
            x1, x2, y1, y2 = norm_sq(z), ip(z, w), ip(w, z), norm_sq(w)
            lhs = fd1(FD1Params(n, n, n, n, n, x1, x2, y1, y2), tol=1e-11).value
            v = 1 - (1 - x1) * (1 - y2) / ((1 - x2) * (1 - y1))
            rhs_params = FD1Params(
                -n, n, -n, n, n, x1, (x1 - y1) / (1 - y1), (x1 - x2) / (1 - x2), v
            )
            pref = (1 - x1) ** -n * (1 - x2) ** -n * (1 - y1) ** -n
            rhs = pref * fd1(rhs_params, tol=1e-11).value
            assert abs(lhs - rhs) <= 1e-9 * abs(lhs)


class TestUnitDoubleSeries:
    def test_c00(self):
        for n in (1, 2, 3):
            for s in (0.0, 1.0, 2.5):
                got = cpq_unit_double_series(0, 0, n, s)
                ref = gamma_ratio([n, s + 1.0], [n + s + 1.0])
                assert got.value.real == pytest.approx(ref, rel=1e-13)
                assert got.tail_estimate == 0.0

    def test_c10(self):
        got = cpq_unit_double_series(1, 0, 2, 0.0)
        assert got.value.real == pytest.approx(1.0 / 3.0, rel=1e-13)

    def test_c11_zeta3(self):
        got = cpq_unit_double_series(1, 1, 2, 0.0, tol=1e-10)
        ref = (96.0 * ZETA3 - 115.0) / 2.0
        assert got.value.real == pytest.approx(ref, rel=1e-10)

    def test_symmetry_exact(self):
        a = cpq_unit_double_series(2, 1, 2, 0.5)
        b = cpq_unit_double_series(1, 2, 2, 0.5)
        assert a.value == b.value  # identical code path by construction

    def test_domain(self):
        with pytest.raises(DomainError):
            cpq_unit_double_series(1, 1, 2, -1.0)
