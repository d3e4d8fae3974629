import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_genlaguerre, eval_hermite, gamma, gammaln

from mtspectral.basis_core import SQRT_2_OVER_PI, eval_mt
from mtspectral.exceptions import ParameterError, ReducibilityError, WindowError
from mtspectral.laguerre import (
    beta_table,
    build_phi_from_derivatives,
    eval_fl,
    eval_fl_mirror,
    eval_fl_sum,
    eval_twisted_hermite,
    fl_bc_full,
    fl_polynomial,
    hermite_bc,
    hermite_functions,
    laguerre_bc,
    laguerre_poly_table,
    phi0_derivative,
)

ALPHAS = [0.0, 0.5, 1.0, 2.0]


def fd5(f, x, h=1e-5):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def fourier_oracle(alpha, n, x):
    """i^n / sqrt(2 pi) * integral of p_n(xi) xi^(a/2) e^(-xi/2) e^(i x xi) over (0, inf)."""
    norm = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + 1 + alpha)))

    def g(xi):
        return (-1) ** n * norm * eval_genlaguerre(n, alpha, xi) * xi ** (alpha / 2) * np.exp(-xi / 2)

    re = quad(lambda s: g(s) * np.cos(x * s), 0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    im = quad(lambda s: g(s) * np.sin(x * s), 0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    return 1j**n * (re + 1j * im) / np.sqrt(2 * np.pi)


@pytest.mark.parametrize(
    "alpha, n, expected",
    [(0.0, 0, (1.0, 1.0)), (0.0, 5, (6.0, 11.0)), (2.0, 0, (np.sqrt(3.0), 3.0))],
)
def test_laguerre_bc_examples(alpha, n, expected):
    assert laguerre_bc(alpha, n) == pytest.approx(expected)


def test_laguerre_bc_rejects_bad_input():
    with pytest.raises(ParameterError):
        laguerre_bc(-1.5, 0)
    with pytest.raises(ParameterError):
        laguerre_bc(0.0, -1)


def test_phi0_derivative_examples():
    assert phi0_derivative(0.0, 0, 0.0) == pytest.approx(SQRT_2_OVER_PI)
    assert phi0_derivative(0.0, 1, 0.0) == pytest.approx(4j / np.sqrt(2 * np.pi))
    x = np.linspace(-3, 3, 11)
    np.testing.assert_allclose(phi0_derivative(0.0, 0, x), eval_mt(0, x), atol=1e-15)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_phi0_derivative_by_finite_difference(alpha):
    x = np.linspace(-2, 2, 9)
    for ell in range(4):
        fd = fd5(lambda t: phi0_derivative(alpha, ell, t), x)
        np.testing.assert_allclose(fd, phi0_derivative(alpha, ell + 1, x), atol=1e-7)


class TestBetaTable:
    def mt_table(self, n_max):
        n = np.arange(n_max)
        return beta_table(n + 1.0, 2.0 * n + 1.0, n_max)

    def test_seed_rows(self):
        t = self.mt_table(2).entries
        assert t[0, 0] == 1
        assert t[1, 0] == pytest.approx(-1j)
        assert t[1, 1] == 1

    def test_second_row_by_hand(self):
        t = self.mt_table(2).entries
        np.testing.assert_allclose(t[2, :3], [-2, -4j, 1])

    def test_zero_b_is_reducible(self):
        with pytest.raises(ReducibilityError):
            beta_table([1.0, 0.0, 2.0], [1.0, 1.0, 1.0], 3)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_matches_polynomial_coefficients(self, alpha):
        n_max = 12
        bc = [laguerre_bc(alpha, n) for n in range(n_max)]
        beta = beta_table([b for b, _ in bc], [c for _, c in bc], n_max)
        poly = laguerre_poly_table(alpha, n_max)
        for n in range(n_max + 1):
            ell = np.arange(n + 1)
            lhs = beta.entries[n, : n + 1] * 1j**ell / np.prod(beta.b[:n])
            rhs = 1j**n * poly.p[n, : n + 1] / poly.p[0, 0]
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * np.abs(rhs).max())


def test_poly_table_against_scipy():
    alpha = 1.5
    xi = np.linspace(0, 8, 7)
    table = laguerre_poly_table(alpha, 6)
    for n in range(7):
        ours = np.polynomial.polynomial.polyval(xi, table.p[n, : n + 1])
        norm = np.sqrt(gamma(n + 1) / gamma(n + 1 + alpha))
        np.testing.assert_allclose(ours, (-1) ** n * norm * eval_genlaguerre(n, alpha, xi), atol=1e-10)


class TestEvalFlSum:
    def test_alpha_zero_is_mt(self):
        assert eval_fl_sum(0.0, 3, 0.7) == pytest.approx(eval_mt(3, 0.7), abs=1e-14)
        assert eval_fl_sum(0.0, 0, 0.0) == pytest.approx(SQRT_2_OVER_PI)

    def test_alpha_one_origin(self):
        expected = gamma(1.5) * 2**1.5 / np.sqrt(2 * np.pi)
        assert eval_fl_sum(1.0, 0, 0.0) == pytest.approx(expected)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("n", [0, 1, 3, 6])
    def test_against_fourier_integral(self, alpha, n):
        for x in (-1.3, 0.0, 0.4, 2.5):
            assert eval_fl_sum(alpha, n, x) == pytest.approx(fourier_oracle(alpha, n, x), abs=1e-9)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_derivative_recurrence(self, alpha):
        x = np.random.default_rng(8).uniform(-2, 2, 20)
        for n in range(11):
            b, c = laguerre_bc(alpha, n)
            b_prev = laguerre_bc(alpha, n - 1)[0] if n else 0.0
            rhs = (
                -b_prev * (eval_fl_sum(alpha, n - 1, x) if n else 0)
                + 1j * c * eval_fl_sum(alpha, n, x)
                + b * eval_fl_sum(alpha, n + 1, x)
            )
            lhs = fd5(lambda t: eval_fl_sum(alpha, n, t), x, h=1e-4)
            assert np.max(np.abs(lhs - rhs)) < 1e-6

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_opuc_factor_is_polynomial(self, alpha):
        n = 7
        x = np.tan(np.linspace(-1.4, 1.4, n + 1))
        w = np.exp(2j * np.arctan(2 * x))

        def ratio(xx):
            return eval_fl_sum(alpha, n, xx) * (1 - 2j * xx) ** (1 + alpha / 2) * 1j**n * np.sqrt(np.pi / 2)

        coeffs = np.linalg.solve(np.vander(w, n + 1, increasing=True), ratio(x))
        x_test = np.random.default_rng(9).uniform(-6, 6, 20)
        w_test = np.exp(2j * np.arctan(2 * x_test))
        resid = np.polynomial.polynomial.polyval(w_test, coeffs) - ratio(x_test)
        assert np.max(np.abs(resid)) < 1e-9


class TestRoutes:
    def test_mt_first_function(self):
        n = np.arange(3)
        table = beta_table(n + 1.0, 2.0 * n + 1.0, 3)
        x = np.linspace(-2, 2, 9)
        got = build_phi_from_derivatives(table, lambda ell, t: phi0_derivative(0.0, ell, t), 1, x)
        np.testing.assert_allclose(got, eval_mt(1, x), atol=1e-14)

    def test_zeroth_function_is_phi0(self):
        table = laguerre_poly_table(1.0, 3)
        x = np.linspace(-1, 1, 5)
        got = build_phi_from_derivatives(table, lambda ell, t: phi0_derivative(1.0, ell, t), 0, x)
        np.testing.assert_allclose(got, phi0_derivative(1.0, 0, x))

    def test_half_alpha_n4(self):
        alpha, x = 0.5, 0.3
        bc = [laguerre_bc(alpha, k) for k in range(4)]
        beta = beta_table([b for b, _ in bc], [c for _, c in bc], 4)
        deriv = lambda ell, t: phi0_derivative(alpha, ell, t)  # noqa: E731
        a = build_phi_from_derivatives(beta, deriv, 4, x)
        b = build_phi_from_derivatives(laguerre_poly_table(alpha, 4), deriv, 4, x)
        assert abs(a - b) <= 1e-10 * abs(a)
        assert abs(a - eval_fl_sum(alpha, 4, x)) <= 1e-10 * abs(a)

    def test_window_error(self):
        with pytest.raises(WindowError):
            build_phi_from_derivatives(laguerre_poly_table(0.0, 2), phi0_derivative, 3, 0.0)


class TestStableForm:
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.0, 3.7])
    def test_matches_sum_for_small_n(self, alpha):
        x = np.linspace(-5, 5, 23)
        for n in range(0, 21):
            a, b = eval_fl(alpha, n, x), eval_fl_sum(alpha, n, x)
            # the hypergeometric sum loses about 3^n ulps to cancellation
            assert np.max(np.abs(a - b)) < max(1e-13, 1e-15 * 3.0**n)

    def test_large_n_bounded(self):
        x = np.linspace(-50, 50, 1001)
        v = eval_fl(1.0, 400, x)
        assert np.all(np.isfinite(v))
        # orthonormal functions of this family are bounded by a modest multiple of the envelope
        assert np.abs(v).max() < 5.0

    def test_polynomial_alpha_zero_is_monomial(self):
        c = fl_polynomial(0.0, 4)
        np.testing.assert_allclose(c, [0, 0, 0, 0, 1.0])


class TestMirror:
    def test_alpha_zero_matches_mt(self):
        assert eval_fl_mirror(0.0, -1, 0.0) == pytest.approx(-1j * SQRT_2_OVER_PI)
        x = np.linspace(-3, 3, 7)
        for n in range(-6, 0):
            np.testing.assert_allclose(eval_fl_mirror(0.0, n, x), eval_mt(n, x), atol=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(
        alpha=st.sampled_from([0.5, 1.0, 2.0]),
        n=st.integers(-25, -1),
        x=st.floats(-20, 20),
    )
    def test_modulus(self, alpha, n, x):
        assert abs(eval_fl_mirror(alpha, n, x)) == pytest.approx(abs(eval_fl_sum(alpha, -n - 1, x)), abs=1e-12)

    def test_rejects_nonnegative(self):
        with pytest.raises(ParameterError):
            eval_fl_mirror(1.0, 0, 0.0)

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_full_line_recurrence(self, alpha):
        x = np.random.default_rng(10).uniform(-2, 2, 15)
        for n in range(-8, 0):
            b, c = fl_bc_full(alpha, n)
            b_prev, _ = fl_bc_full(alpha, n - 1)
            rhs = (
                -b_prev * eval_fl(alpha, n - 1, x)
                + 1j * c * eval_fl(alpha, n, x)
                + (b * eval_fl(alpha, n + 1, x) if n < -1 else 0)
            )
            lhs = fd5(lambda t: eval_fl(alpha, n, t), x)
            assert np.max(np.abs(lhs - rhs)) < 1e-6

    def test_coupling_vanishes_between_halves(self):
        assert fl_bc_full(1.0, -1)[0] == 0.0


class TestHermite:
    def test_functions_against_scipy(self):
        x = np.linspace(-4, 4, 17)
        psi = hermite_functions(8, x)
        for n in range(9):
            ref = eval_hermite(n, x) * np.exp(-x * x / 2) / np.sqrt(2.0**n * gamma(n + 1) * np.sqrt(np.pi))
            np.testing.assert_allclose(psi[n], ref, atol=1e-13)

    def test_examples(self):
        assert eval_twisted_hermite(0.0, 0, 0.0) == pytest.approx(np.pi**-0.25)
        assert eval_twisted_hermite(2.0, 0, 1.0) == pytest.approx(np.exp(-0.5 + 2j) / np.pi**0.25)

    @pytest.mark.parametrize("alpha", [0.0, 2.0, -1.3])
    def test_derivative_recurrence(self, alpha):
        x = np.random.default_rng(11).uniform(-4, 4, 25)
        for n in range(12):
            b, c = hermite_bc(alpha, n)
            b_prev = hermite_bc(alpha, n - 1)[0] if n else 0.0
            rhs = (
                -b_prev * (eval_twisted_hermite(alpha, n - 1, x) if n else 0)
                + 1j * c * eval_twisted_hermite(alpha, n, x)
                + b * eval_twisted_hermite(alpha, n + 1, x)
            )
            lhs = fd5(lambda t: eval_twisted_hermite(alpha, n, t), x)
            assert np.max(np.abs(lhs - rhs)) < 1e-6

    def test_no_overflow_far_out(self):
        assert np.all(hermite_functions(300, np.array([1e3, -40.0, 1e15])) == 0.0)
