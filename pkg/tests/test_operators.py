"""Operator images: Bernstein, genuine Durrmeyer, Lupas-weighted Durrmeyer,
the weighted combination driven by a generating polynomial, and the composite
shape-preserving construction."""
from fractions import Fraction

import pytest

from shapeapprox import (
    ExpFunction,
    PolyFunction,
    Polynomial,
    bernstein_image,
    build_generator,
    check_k_monotone_poly,
    derivative_bridge_residual,
    durrmeyer_lupas_image,
    gavrea_image,
    genuine_durrmeyer_image,
    genuine_durrmeyer_moment,
    genuine_durrmeyer_moment_recurrence,
    lupas_derivative_identity_check,
    lupas_endpoint_moment,
    lupas_moment_closed_form,
    mn_image,
    moment_profile,
    monomial,
    pochhammer,
)

E = Polynomial.e


def test_bernstein_preserves_linear_and_e2():
    for n in (1, 4, 9):
        assert bernstein_image(n, monomial(0)).to_monomial().coeffs == (1,)
        assert bernstein_image(n, monomial(1)).to_monomial().coeffs == (0, 1)
    # B_n(e_2) = x^2 + x(1-x)/n
    for n in (2, 5):
        img = bernstein_image(n, monomial(2)).to_monomial()
        expect = E(2) + Polynomial.monomial([0, Fraction(1, n), Fraction(-1, n)])
        assert img.coeffs == expect.to_monomial().coeffs


def test_genuine_durrmeyer_moments_exact():
    # coefficients of U_n(e_i) in the Bernstein basis are (k)_i / (n)_i
    for n in (3, 7, 12):
        for i in range(5):
            img = genuine_durrmeyer_moment(n, i).to_bernstein(n)
            for k, c in enumerate(img.coeffs):
                assert c == Fraction(pochhammer(k, i), pochhammer(n, i))


def test_genuine_durrmeyer_recurrence_matches_closed_form():
    for n in (4, 9):
        for i in range(5):
            a = genuine_durrmeyer_moment(n, i).to_monomial()
            b = genuine_durrmeyer_moment_recurrence(n, i).to_monomial()
            assert a.coeffs == b.coeffs


def test_genuine_durrmeyer_preserves_linear_interpolates_endpoints():
    f = PolyFunction(Polynomial.monomial([Fraction(1, 3), Fraction(2, 5)]))
    for n in (2, 6):
        img = genuine_durrmeyer_image(n, f).to_monomial()
        assert img.coeffs == (Fraction(1, 3), Fraction(2, 5))
    g = PolyFunction(Polynomial.monomial([1, -2, 0, 3]))
    img = genuine_durrmeyer_image(5, g)
    assert img(0) == g.poly(0)
    assert img(1) == g.poly(1)


def test_lupas_moment_closed_forms():
    for n in (3, 8):
        for alpha in (0, Fraction(1, 2), 2):
            for i in (0, 1, 2):
                img = durrmeyer_lupas_image(n, alpha, monomial(i)).to_monomial()
                ref = lupas_moment_closed_form(n, alpha, i).to_monomial()
                for a, b in zip(img.coeffs, ref.coeffs):
                    assert a == b
                # value at 0 equals the stated endpoint moment
                assert img(0) == lupas_endpoint_moment(n, alpha, i)


def test_lupas_bernstein_coefficients():
    # coefficients of D_n(e_i) in the Bernstein basis: (alpha+k+1)_i/(n+2alpha+2)_i
    n, alpha = 6, Fraction(1, 2)
    for i in range(4):
        img = durrmeyer_lupas_image(n, alpha, monomial(i)).to_bernstein(n)
        for k, c in enumerate(img.coeffs):
            assert c == pochhammer(alpha + k + 1, i) / pochhammer(n + 2 * alpha + 2, i)


def test_lupas_derivative_identity():
    p = PolyFunction(Polynomial.monomial([1, Fraction(-1, 2), 3, Fraction(2, 7), 1]))
    for n in (5, 8):
        for alpha in (0, 1):
            for nu in (1, 2, 3):
                assert lupas_derivative_identity_check(n, alpha, nu, p) <= 1e-9


def test_derivative_bridge():
    p = PolyFunction(Polynomial.monomial([0, 1, -3, 2, Fraction(1, 5)]))
    for n in (4, 9):
        assert derivative_bridge_residual(n, p) <= 1e-9


def test_gavrea_moments_with_unit_generator():
    # generating polynomial 1: the combination reduces to U_2
    one = Polynomial.monomial([1])
    h0 = gavrea_image(one, monomial(0)).to_monomial()
    h1 = gavrea_image(one, monomial(1)).to_monomial()
    assert h0.coeffs == (1,)
    assert h1.coeffs == (0, 1)
    # H(e_2) - e_2 is proportional to x(1-x) with factor 1 - int t^2 P(t) dt
    h2 = gavrea_image(one, monomial(2)).to_monomial()
    s = h2 - E(2)
    factor = 1 - E(2).integrate_01()
    expect = Polynomial.monomial([0, factor, -factor])
    assert s.coeffs == expect.to_monomial().coeffs


def test_gavrea_moments_with_built_generator():
    gen = build_generator(32, 1)
    prof = moment_profile("gavrea", gen=gen)
    assert prof.conforming
    assert prof.residual <= 1e-10


def test_moment_profiles_conforming():
    assert moment_profile("bernstein", n=8).conforming
    assert moment_profile("genuine_durrmeyer", n=8).conforming
    # neither plain Durrmeyer nor the Lupas variant preserves e_1
    assert moment_profile("lupas", n=8, alpha=Fraction(1, 2)).conforming is False
    assert moment_profile("durrmeyer", n=8).conforming is False


def test_mn_image_preserves_shape():
    res = mn_image(2, 64, ExpFunction())
    assert res.q == 2 and res.n == 64
    for k in range(3):
        assert check_k_monotone_poly(res.poly, k).passed


def test_mn_fallback_for_small_n():
    res = mn_image(3, 10, ExpFunction())
    assert res.used_fallback
    for k in range(4):
        assert check_k_monotone_poly(res.poly, k).passed
