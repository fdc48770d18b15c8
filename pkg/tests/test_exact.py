"""Unit tests for exact eigenfunctions, commuting operators and the
Mehler-Fock transform.

Oracles: closed-form tridiagonal coefficients of L, finite-difference
application of the differential operators against their exact polynomial
action, plane waves under the Schroedinger map, and transform round trips.
"""
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import legendre as npleg

from kab.exact import (
    ContinuumMode,
    DiffOperatorL,
    MehlerFockCoeffs,
    apply_L,
    apply_L_legendre,
    apply_commutator_c_legendre,
    apply_ell,
    hyperbolic_similarity_check,
    k00_eigenfunction,
    mehler_fock_forward,
    mehler_fock_inverse,
    mm_commutator_projections,
    mm_eigenfunction,
    mm_k01_residual,
    verify_g_of_ell,
)
from kab.specfun import conical_legendre, g_dispersion, lipatov_kappa


class TestDiffOperatorL:
    def test_closed_form_coefficients(self):
        op = DiffOperatorL()
        for n in range(1, 15):
            assert op.coeff_a(n) == pytest.approx(
                -((n + 1.0) ** 3) / (2.0 * n + 1.0), abs=1e-12
            )
            assert op.coeff_c(n) == pytest.approx(
                -(n**3) / (2.0 * n + 1.0), abs=1e-12
            )

    def test_tridiagonal_action(self):
        # L P_n has only the P_{n-1}, P_n, P_{n+1} components
        op = DiffOperatorL()
        for n in range(1, 10):
            c = np.zeros(n + 1)
            c[n] = 1.0
            lc = apply_L_legendre(c)
            assert lc.size <= n + 2
            assert abs(lc[n + 1] - op.coeff_a(n)) < 1e-12
            assert abs(lc[n - 1] - op.coeff_c(n)) < 1e-12
            if n >= 2:
                assert np.max(np.abs(lc[: n - 1])) < 1e-12

    def test_eigenvalue_formula(self):
        assert DiffOperatorL.eigenvalue(0.0) == -0.5
        assert DiffOperatorL.eigenvalue(2.0) == -8.5

    def test_fd_matches_polynomial_action(self, rng):
        c = rng.normal(size=5)
        phi = lambda x: npleg.legval(x, c)
        lc = apply_L_legendre(c)
        for x in (-0.6, 0.1, 0.8):
            assert apply_L(phi, x) == pytest.approx(
                float(npleg.legval(x, lc)), abs=1e-7
            )


class TestCommutator:
    def test_c_action_coefficients(self):
        # C P_n = R_n P_{n+1} + S_{n-1} P_{n-1}
        for n in range(1, 12):
            c = np.zeros(n + 1)
            c[n] = 1.0
            cc = apply_commutator_c_legendre(c)
            r_n = -2.0 * (n + 1.0) ** 2 / (2.0 * n + 1.0)
            s_nm1 = 2.0 * n**2 / (2.0 * n + 1.0)
            assert abs(cc[n + 1] - r_n) < 1e-12
            assert abs(cc[n - 1] - s_nm1) < 1e-12

    def test_commutator_identities(self):
        # the P_{n+1} projection of [L, M] P_n is R_n - 2 A_n/(n+1) and the
        # P_{n-1} projection is 2 C_{n-1}/n + S_{n-1}; both vanish identically
        for n in range(1, 13):
            up, down = mm_commutator_projections(n)
            assert abs(up) < 1e-10
            assert abs(down) < 1e-10

    def test_algebraic_cancellation(self):
        op = DiffOperatorL()
        for n in range(1, 13):
            r_n = -2.0 * (n + 1.0) ** 2 / (2.0 * n + 1.0)
            s_nm1 = 2.0 * n**2 / (2.0 * n + 1.0)
            assert abs(r_n - 2.0 * op.coeff_a(n) / (n + 1.0)) < 1e-12
            assert abs(2.0 * op.coeff_c(n) / n + s_nm1) < 1e-12


class TestContinuumMode:
    def test_dispersion_autofill(self):
        m = ContinuumMode(1.5, "mm")
        assert m.dispersion == pytest.approx(float(lipatov_kappa(1.5)), abs=1e-14)
        m2 = ContinuumMode(1.5, "k00")
        assert m2.dispersion == pytest.approx(float(g_dispersion(1.5)), abs=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            ContinuumMode(1.0, "bogus")
        with pytest.raises(ValueError):
            ContinuumMode(-1.0, "mm")


class TestMMEigenfunction:
    def test_value_is_conical_over_xi(self):
        for k, xi in [(0.5, 0.3), (1.0, 0.9), (2.0, 0.05)]:
            ref = conical_legendre(k, 2.0 / xi - 1.0) / xi
            assert mm_eigenfunction(k, xi) == pytest.approx(ref, rel=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            mm_eigenfunction(1.0, 0.0)
        with pytest.raises(ValueError):
            mm_eigenfunction(1.0, 1.5)

    def test_eigenvalue_residual(self):
        # the eigenvalue relation K_01 phi = (kappa(k) + log 2) phi
        x = np.array([-0.5, 0.0, 0.5])
        for k in (0.5, 1.0, 2.0):
            assert np.max(mm_k01_residual(k, x)) < 1e-5

    def test_residual_domain(self):
        with pytest.raises(ValueError):
            mm_k01_residual(1.0, [0.99])


class TestK00Eigenfunction:
    def test_modulus(self, rng):
        x = rng.uniform(-0.95, 0.95, 20)
        v = k00_eigenfunction(1.3, x)
        assert np.max(np.abs(np.abs(v) ** 2 - 1.0 / (1.0 - x**2))) < 1e-12

    def test_ell_eigenrelation(self):
        # ell phi = k phi, both operator forms
        k = 0.8
        phi = lambda x: k00_eigenfunction(k, x)
        for form in ("direct", "factored"):
            for x in (-0.4, 0.2, 0.6):
                lv = apply_ell(phi, x, form=form)
                assert abs(lv - k * phi(x)) < 1e-6

    def test_g_of_ell(self, rng):
        # K_00 acts as g(ell); packet with endpoint decay
        c = rng.normal(size=4)
        phi = lambda x: (1.0 - np.asarray(x) ** 2) * npleg.legval(x, c)
        res = verify_g_of_ell(phi, np.array([-0.5, 0.0, 0.4]))
        assert res < 1e-5

    def test_g_of_ell_rejects_nondecaying(self):
        with pytest.raises(ValueError):
            verify_g_of_ell(lambda x: np.ones_like(np.asarray(x, float)), [0.0])


class TestMehlerFock:
    def test_round_trip(self):
        # forward then inverse on a smooth compact profile
        u = lambda xi: xi**2 * (1.0 - xi)
        coeffs = mehler_fock_forward(u, k_max=40.0, dk=0.05)
        xi = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            back = mehler_fock_inverse(coeffs, xi)
        assert np.max(np.abs(back - u(xi))) < 1e-4

    def test_slow_decay_raises(self):
        # u ~ const near xi = 0 maps to a non-decaying integrand
        with pytest.raises(RuntimeError):
            mehler_fock_forward(lambda xi: 1.0 - xi, t_max=1e4)

    def test_coeffs_validation(self):
        with pytest.raises(ValueError):
            MehlerFockCoeffs(np.array([0.0, 1.0]), np.array([0.0, 1.0]), 1e4)
        with pytest.raises(ValueError):
            MehlerFockCoeffs(
                np.array([0.0, 2.0, 1.0]), np.zeros(3), 1e4
            )

    def test_underresolved_warns(self):
        u = lambda xi: xi**2 * (1.0 - xi)
        coeffs = mehler_fock_forward(u, k_max=40.0, dk=0.8)
        with pytest.warns(RuntimeWarning):
            mehler_fock_inverse(coeffs, 0.5)

    def test_serialization(self):
        c = MehlerFockCoeffs(np.array([0.0, 0.5, 1.0]), np.array([1.0, 2.0, 3.0]), 10.0)
        d = c.to_json_dict()
        assert d["k"] == [0.0, 0.5, 1.0]
        assert c.to_csv_rows()[1] == (0.5, 2.0)


class TestHyperbolicSimilarity:
    @given(k=st.floats(0.1, 3.0))
    @settings(max_examples=10, deadline=None)
    def test_radial_equation(self, k):
        # (Delta_r + 1/4 + k^2) P_{-1/2+ik}(cosh r) = 0
        res = hyperbolic_similarity_check(k, np.array([0.5, 1.5, 3.0]))
        assert res < 1e-5

    def test_small_r_raises(self):
        with pytest.raises(ValueError):
            hyperbolic_similarity_check(1.0, [1e-4])
