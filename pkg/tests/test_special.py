import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from hlito.special import bessel_jn, hermite, laguerre, laguerre_via_bessel


# --- independent oracles -----------------------------------------------------

def double_factorial(k):
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out


def hermite_series_oracle(n, x, rho):
    """Brute-force power series sum_k C(n,2k) (2k-1)!! x^(n-2k) (-rho)^k, exact."""
    x, rho = Fraction(x), Fraction(rho)
    return sum(
        math.comb(n, 2 * k) * double_factorial(k) * x ** (n - 2 * k) * (-rho) ** k
        for k in range(n // 2 + 1)
    )


def bessel_series_oracle(n, x, terms=60):
    """Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!), exact rationals."""
    x = Fraction(x)
    return float(
        sum(
            (-1) ** k * (x / 2) ** (2 * k + n) / (math.factorial(k) * math.factorial(k + n))
            for k in range(terms)
        )
    )


# --- hermite -----------------------------------------------------------------

def test_hermite_order_zero_is_one():
    assert hermite(0, 3.7, 1.0) == 1.0


@pytest.mark.parametrize("x", [-2.0, -0.3, 0.0, 1.1, 4.5])
@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_hermite_order_two_closed_form(x, rho):
    assert hermite(2, x, rho) == pytest.approx(x * x - rho, rel=1e-14)


def test_hermite_frozen_series_values():
    # oracle: hermite_series_oracle(6, 1/2, 2) = -4919/64
    assert hermite(6, 0.5, 2.0) == pytest.approx(-76.859375, rel=1e-12)
    # oracle: hermite_series_oracle(8, -3/2, 1/2) = 5217/256
    assert hermite(8, -1.5, 0.5) == pytest.approx(20.37890625, rel=1e-12)
    assert hermite(6, 0.5, 2.0) == pytest.approx(
        float(hermite_series_oracle(6, Fraction(1, 2), 2)), rel=1e-13
    )


def test_hermite_accepts_arrays():
    x = np.linspace(-2, 2, 7)
    np.testing.assert_allclose(hermite(3, x, 1.5), x**3 - 3 * 1.5 * x, rtol=1e-13)


def test_hermite_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hermite(3, 1.0, 0.0)
    with pytest.raises(ValueError):
        hermite(3, 1.0, -1.0)
    with pytest.raises(ValueError):
        hermite(-1, 1.0, 1.0)


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_hermite_recursion_residual(rho):
    xs = np.linspace(-3.0, 3.0, 13)
    for n in range(1, 13):
        for x in xs:
            h_next = hermite(n + 1, x, rho)
            resid = abs(h_next - (x * hermite(n, x, rho) - n * rho * hermite(n - 1, x, rho)))
            assert resid <= 1e-10 * max(1.0, abs(h_next))


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_hermite_orthogonality_by_quadrature(rho):
    # Gaussian weight of variance rho: x = s*sqrt(2 rho) maps from exp(-s^2)
    s, w = np.polynomial.hermite.hermgauss(80)
    x = s * math.sqrt(2.0 * rho)
    w = w / math.sqrt(math.pi)
    for n in range(9):
        for m in range(9):
            val = np.sum(w * hermite(n, x, rho) * hermite(m, x, rho))
            norm = math.factorial(n) * rho**n
            if n == m:
                assert val == pytest.approx(norm, rel=1e-10)
            else:
                assert abs(val) <= 1e-9 * norm


# --- laguerre ----------------------------------------------------------------

def test_laguerre_order_zero_is_one():
    assert laguerre(0, 2, 1.3, 0.7) == 1.0


@pytest.mark.parametrize("alpha", [0, 1, 3])
@pytest.mark.parametrize("x", [0.2, 1.0, 2.5])
@pytest.mark.parametrize("rho", [0.5, 1.0])
def test_laguerre_order_one_closed_form(alpha, x, rho):
    assert laguerre(1, alpha, x, rho) == pytest.approx((1 + alpha) * rho - x, rel=1e-14)


def test_laguerre_frozen_value_matches_recursion_route():
    # exact series value: L_3^1(2, 1) = -4/3; recursion route crosses alpha+1
    assert laguerre(3, 1, 2.0, 1.0) == pytest.approx(-4.0 / 3.0, rel=1e-13)
    assert laguerre(3, 1, 2.0, 1.0) == pytest.approx(
        laguerre(3, 2, 2.0, 1.0) - 1.0 * laguerre(2, 2, 2.0, 1.0), rel=1e-13
    )


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_laguerre_alpha_recursion_residual(rho):
    # L_n^a = L_n^(a+1) - rho L_(n-1)^(a+1)
    for n in range(1, 11):
        for alpha in range(6):
            lhs = laguerre(n, alpha, 1.7, rho)
            rhs = laguerre(n, alpha + 1, 1.7, rho) - rho * laguerre(n - 1, alpha + 1, 1.7, rho)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_laguerre_derivative_recursion(rho):
    # x d/dx L_n^a = n L_n^a - (n+a) rho L_(n-1)^a, with d/dx L_n^a = -L_(n-1)^(a+1)
    for n in range(1, 9):
        for alpha in range(5):
            for x in (0.4, 1.0, 2.3):
                lhs = x * (-laguerre(n - 1, alpha + 1, x, rho))
                rhs = n * laguerre(n, alpha, x, rho) - (n + alpha) * rho * laguerre(
                    n - 1, alpha, x, rho
                )
                assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_laguerre_real_alpha_matches_scipy_at_unit_scale():
    for n in range(5):
        for alpha in (0.5, 1.25, 2.75):
            for x in (0.3, 1.0, 2.2):
                assert laguerre(n, alpha, x, 1.0) == pytest.approx(
                    float(eval_genlaguerre(n, alpha, x)), rel=1e-12
                )


def test_laguerre_rejects_bad_arguments():
    with pytest.raises(ValueError):
        laguerre(2, -1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        laguerre(2, -2, 1.0, 1.0)
    with pytest.raises(ValueError):
        laguerre(2, 1, 1.0, 0.0)
    with pytest.raises(ValueError):
        laguerre(60, 10, 1.0, 1.0)  # n + alpha beyond the exact-integer range


# --- bessel ------------------------------------------------------------------

def test_bessel_at_zero():
    assert bessel_jn(0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert bessel_jn(1, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_bessel_frozen_series_values():
    # values from bessel_series_oracle, exact rational partial sums
    assert bessel_jn(2, 1.5) == pytest.approx(0.23208767214421472, abs=1e-12)
    assert bessel_jn(0, 0.6) == pytest.approx(0.9120048634972108, abs=1e-12)
    assert bessel_jn(3, 2.2) == pytest.approx(0.16232547283328747, abs=1e-12)
    assert bessel_jn(2, 1.5) == pytest.approx(bessel_series_oracle(2, Fraction(3, 2)), abs=1e-12)


def test_bessel_negative_order_symmetry():
    for n in (1, 2, 5):
        for x in (0.4, 1.7, 3.0):
            assert bessel_jn(-n, x) == pytest.approx((-1) ** n * bessel_jn(n, x), abs=1e-12)


def test_bessel_rejects_tiny_grid():
    with pytest.raises(ValueError):
        bessel_jn(0, 1.0, grid_size=4)


# --- laguerre via the Bessel transform ----------------------------------------

def test_laguerre_via_bessel_trivial_cases():
    assert laguerre_via_bessel(0, 0, 1.0, 1.0) == pytest.approx(1.0, abs=1e-8)
    assert laguerre_via_bessel(1, 0, 2.0, 0.5) == pytest.approx(
        laguerre(1, 0, 2.0, 0.5), abs=1e-8
    )
    assert laguerre_via_bessel(2, 1, 0.8, 1.0) == pytest.approx(
        laguerre(2, 1, 0.8, 1.0), abs=1e-8
    )


@pytest.mark.parametrize("rho", [0.5, 1.0])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_laguerre_via_bessel_agreement(rho, x):
    for n in range(5):
        for alpha in range(4):
            direct = laguerre(n, alpha, x, rho)
            via = laguerre_via_bessel(n, alpha, x, rho)
            assert abs(via - direct) <= 1e-8 * max(1.0, abs(direct))


def test_laguerre_via_bessel_rejects_bad_arguments():
    with pytest.raises(ValueError):
        laguerre_via_bessel(1, 0, -1.0, 1.0)
    with pytest.raises(ValueError):
        laguerre_via_bessel(-1, 0, 1.0, 1.0)
