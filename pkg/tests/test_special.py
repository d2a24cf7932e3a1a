"""Chebyshev polynomials, the clipped factor tau_m, and ultraspherical
polynomials."""
from fractions import Fraction

import mpmath
import pytest

from shapeapprox import (
    chebyshev_T,
    lupas_product_identity_check,
    phi_bernstein_expansion,
    phi_leading_coefficient,
    pochhammer,
    tau,
    ultraspherical_phi,
)


def test_pochhammer_values():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert pochhammer(Fraction(1, 2), 3) == Fraction(1, 2) * Fraction(3, 2) * Fraction(5, 2)
    with pytest.raises(ValueError):
        pochhammer(1, -1)


def test_chebyshev_T_known_coefficients():
    assert chebyshev_T(0).coeffs == (1,)
    assert chebyshev_T(1).coeffs == (0, 1)
    assert chebyshev_T(2).coeffs == (-1, 0, 2)
    assert chebyshev_T(3).coeffs == (0, -3, 0, 4)
    assert chebyshev_T(4).coeffs == (1, 0, -8, 0, 8)


def test_chebyshev_T_cos_identity():
    with mpmath.workprec(80):
        for m in (5, 9):
            theta = mpmath.mpf(3) / 7
            lhs = chebyshev_T(m).to_float()(mpmath.cos(theta))
            assert abs(lhs - mpmath.cos(m * theta)) < mpmath.mpf(2) ** -60


def test_tau_division_and_scaling():
    with mpmath.workprec(256):
        for m in (2, 5, 12):
            t = tau(m)
            assert abs(t.x_tilde - mpmath.cos(mpmath.pi / (2 * m))) < mpmath.mpf(2) ** -200
            assert abs(t.len_I1 - 2 * mpmath.sin(mpmath.pi / (2 * m)) ** 2) < mpmath.mpf(2) ** -200
            # tau(x) * (x - x_tilde) == |I_1| * T_m(x) at a test point
            x = mpmath.mpf(1) / 3
            lhs = t.poly(x) * (x - t.x_tilde)
            rhs = t.len_I1 * chebyshev_T(m).to_float()(x)
            assert abs(lhs - rhs) < mpmath.mpf(2) ** -180
            assert t.poly.degree == m - 1


def test_tau_requires_m_at_least_2():
    with pytest.raises(ValueError):
        tau(1)


def test_ultraspherical_phi_normalization_and_symmetry():
    for n in range(6):
        for alpha in (0, Fraction(1, 2), 2):
            p = ultraspherical_phi(n, alpha)
            assert p(1) == 1
            # reflection parity about x = 1/2
            x = Fraction(2, 7)
            assert p(1 - x) == (-1) ** n * p(x)


def test_ultraspherical_alpha_half_negative_is_shifted_chebyshev():
    from shapeapprox import Polynomial

    for n in range(1, 8):
        shifted = chebyshev_T(n).compose(Polynomial.monomial([-1, 2]))
        assert ultraspherical_phi(n, Fraction(-1, 2)).coeffs == shifted.coeffs


def test_phi_bernstein_expansion_matches_recurrence():
    for n in range(1, 7):
        for alpha in (0, Fraction(1, 2), 1):
            a = ultraspherical_phi(n, alpha)
            b = phi_bernstein_expansion(n, alpha)
            lead = phi_leading_coefficient(n, alpha)
            mono = b.to_monomial()
            assert mono.coeffs[-1] == lead
            # values agree after normalizing the expansion at x = 1
            x = Fraction(3, 8)
            assert a(x) == b(x) / b(1)


def test_lupas_product_identity_exact():
    for n in (1, 3, 5):
        res = lupas_product_identity_check(n, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))
        assert res == 0 or abs(res) < Fraction(1, 10**25)
