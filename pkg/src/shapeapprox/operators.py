"""Positive linear polynomial operators on C[0,1]:

* B_n            classical Bernstein operator
* U_n            genuine Bernstein-Durrmeyer operator (endpoint interpolating)
* D_n / D_n^<a>  Bernstein-Durrmeyer operator, plain and with ultraspherical
                 weight t^a (1-t)^a in its inner products
* H              the generating-polynomial combination sum_k a_k/(k+1) U_{k+2}
* M_n            the composite operator: H driven by the constructed
                 generating polynomial, with a linear-interpolation fallback

Operators are exposed both pointwise (``apply_*``) and as full polynomial
images (``*_image``), which is what the shape and moment tests consume.
Polynomial inputs and catalog functions with exact moments take an exact or
extended-precision path; other callables fall back to quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath
import numpy as np
from scipy.special import roots_jacobi
from scipy.stats import binom as _binom

from .functions import FunctionHandle, PolyFunction
from .generator import GeneratorPoly, build_generator
from .polynomial import Polynomial, _to_mpf
from .special import pochhammer


class _CallbackHandle(FunctionHandle):
    """Adapter for plain callables: float/array evaluation only."""

    def __init__(self, fn):
        self.fn = fn
        self.name = getattr(fn, "__name__", "callback")

    def __call__(self, x):
        if isinstance(x, (Fraction, mpmath.mpf)):
            return self.fn(float(x))
        return self.fn(x)


def _as_handle(f) -> FunctionHandle:
    if isinstance(f, FunctionHandle):
        return f
    if isinstance(f, Polynomial):
        return PolyFunction(f)
    if callable(f):
        return _CallbackHandle(f)
    raise TypeError(f"cannot interpret {f!r} as a function on [0,1]")


@lru_cache(maxsize=8192)
def _bernstein_monomial_row(m: int, j: int) -> tuple:
    """Integer monomial coefficients of p_{m,j}, degrees 0..m."""
    base = comb(m, j)
    row = [0] * (m + 1)
    for l in range(j, m + 1):
        row[l] = base * comb(m - j, l - j) * (-1) ** (l - j)
    return tuple(row)


# ----------------------------------------------------------------------
# Bernstein operator
def bernstein_image(n: int, f) -> Polynomial:
    """B_n(f): Bernstein form with coefficients f(k/n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    f = _as_handle(f)
    vals = [f.value_at(Fraction(k, n)) for k in range(n + 1)]
    return Polynomial.bernstein(vals)


def apply_bernstein(n: int, f, x):
    return bernstein_image(n, f)(x)


# ----------------------------------------------------------------------
# genuine Bernstein-Durrmeyer operator U_n
def genuine_durrmeyer_image(n: int, f, quad_order: int | None = None) -> Polynomial:
    """U_n(f) as a Bernstein-form polynomial of degree n.

    Coefficients: c_0 = f(0), c_n = f(1),
    c_k = (n-1) int_0^1 p_{n-2,k-1}(t) f(t) dt for 0 < k < n.
    """
    if n < 2:
        raise ValueError("U_n requires n >= 2")
    f = _as_handle(f)
    if isinstance(f, PolyFunction):
        # exact route: the image of e_i has Bernstein coefficients (k)_i/(n)_i
        c = f.poly.coeffs
        exact = f.poly.backend == "exact"
        out = []
        for k in range(n + 1):
            acc = Fraction(0) if exact else mpmath.mpf(0)
            kk = Fraction(k) if exact else mpmath.mpf(k)
            nn = Fraction(n) if exact else mpmath.mpf(n)
            for i, ci in enumerate(c):
                if ci == 0:
                    continue
                acc += ci * pochhammer(kk, i) / pochhammer(nn, i)
            out.append(acc)
        return Polynomial.bernstein(out)
    try:
        moments = f.monomial_moments(n - 2)
    except NotImplementedError:
        return _genuine_durrmeyer_image_quadrature(n, f, quad_order)
    if all(isinstance(m, (int, Fraction)) for m in moments):
        out = [f.value_at(Fraction(0))]
        for k in range(1, n):
            row = _bernstein_monomial_row(n - 2, k - 1)
            out.append((n - 1) * sum(b * m for b, m in zip(row, moments) if b))
        out.append(f.value_at(Fraction(1)))
        return Polynomial.bernstein(out)
    # mpf moments: the binomial expansion of p_{n-2,k-1} cancels heavily
    with mpmath.workprec(mpmath.mp.prec + 2 * n + 64):
        mm = [_to_mpf(m) for m in moments]
        out = [_to_mpf(f.value_at(mpmath.mpf(0)))]
        for k in range(1, n):
            row = _bernstein_monomial_row(n - 2, k - 1)
            out.append((n - 1) * mpmath.fsum(b * m for b, m in zip(row, mm) if b))
        out.append(_to_mpf(f.value_at(mpmath.mpf(1))))
    return Polynomial.bernstein(out)


def _gauss_legendre_01(order: int):
    u, w = np.polynomial.legendre.leggauss(order)
    return (u + 1) / 2, w / 2


def _genuine_durrmeyer_image_quadrature(n, f, quad_order) -> Polynomial:
    order = quad_order or max(64, n + 2)
    t, w = _gauss_legendre_01(order)
    fv = np.asarray(f(t), dtype=float)
    k = np.arange(n - 1)
    basis = _binom.pmf(k[None, :], n - 2, t[:, None])  # (order, n-1)
    mids = (n - 1) * ((w * fv) @ basis)
    coeffs = [float(np.asarray(f(np.array([0.0])))[0])]
    coeffs += [float(v) for v in mids]
    coeffs.append(float(np.asarray(f(np.array([1.0])))[0]))
    return Polynomial.bernstein([mpmath.mpf(c) for c in coeffs])


def apply_genuine_durrmeyer(n: int, f, x, quad_order: int | None = None):
    return genuine_durrmeyer_image(n, f, quad_order)(x)


def genuine_durrmeyer_moment(n: int, i: int) -> Polynomial:
    """Closed-form image U_n(e_i) as an exact monomial polynomial."""
    if n < 2 or i < 0:
        raise ValueError("need n >= 2, i >= 0")
    if i == 0:
        return Polynomial.monomial([1])
    pref = Fraction(math.factorial(n - 1) * math.factorial(i), math.factorial(n + i - 1))
    coeffs = [Fraction(0)] * (i + 1)
    for j in range(max(0, i - n), i):
        coeffs[i - j] += pref * comb(i - 1, j) * comb(n, i - j)
    return Polynomial.monomial(coeffs)


def genuine_durrmeyer_moment_recurrence(n: int, i: int) -> Polynomial:
    """U_n(e_i) via the three-term recurrence in the moment index."""
    if n < 2 or i < 0:
        raise ValueError("need n >= 2, i >= 0")
    if i == 0:
        return Polynomial.monomial([1])
    prev2 = Polynomial.monomial([1])  # U_n(e_0)
    prev1 = Polynomial.e(1)  # U_n(e_1) = x
    x = Polynomial.e(1)
    one_minus_x = Polynomial.monomial([1, -1])
    for k in range(1, i):
        lead = (x.scale(n - k) + Polynomial.monomial([2 * k])).scale(Fraction(1, n + k))
        cur = lead * prev1 - (one_minus_x * prev2).scale(
            Fraction(k * (k - 1), (n + k) * (n + k - 1))
        )
        prev2, prev1 = prev1, cur
    return prev1.to_monomial()


# ----------------------------------------------------------------------
# Bernstein-Durrmeyer operators with ultraspherical weights
def durrmeyer_lupas_image(n: int, alpha, f, quad_order: int | None = None) -> Polynomial:
    """D_n^<alpha>(f) in Bernstein form; coefficients <p_{n,k},f>/<p_{n,k},1>
    against the weight t^alpha (1-t)^alpha."""
    if alpha <= -1:
        raise ValueError("alpha must be > -1")
    if n < 0:
        raise ValueError("n must be >= 0")
    f = _as_handle(f)
    exact_alpha = isinstance(alpha, (int, Fraction))
    if isinstance(f, PolyFunction) and exact_alpha and f.poly.backend == "exact":
        # exact route: the image of e_i has coefficients
        # (alpha+k+1)_i / (n+2 alpha+2)_i
        a = Fraction(alpha)
        c = f.poly.coeffs
        out = []
        for k in range(n + 1):
            acc = Fraction(0)
            for i, ci in enumerate(c):
                if ci == 0:
                    continue
                acc += ci * pochhammer(a + k + 1, i) / pochhammer(n + 2 * a + 2, i)
            out.append(acc)
        return Polynomial.bernstein(out)
    if alpha == 0:
        try:
            moments = f.monomial_moments(n)
        except NotImplementedError:
            moments = None
        if moments is not None:
            if all(isinstance(m, (int, Fraction)) for m in moments):
                out = []
                for k in range(n + 1):
                    row = _bernstein_monomial_row(n, k)
                    out.append((n + 1) * sum(b * m for b, m in zip(row, moments) if b))
                return Polynomial.bernstein(out)
            with mpmath.workprec(mpmath.mp.prec + 2 * n + 64):
                mm = [_to_mpf(m) for m in moments]
                out = []
                for k in range(n + 1):
                    row = _bernstein_monomial_row(n, k)
                    out.append((n + 1) * mpmath.fsum(b * m for b, m in zip(row, mm) if b))
            return Polynomial.bernstein(out)
    # Gauss-Jacobi quadrature with weight t^alpha (1-t)^alpha on [0,1]
    a = float(alpha)
    order = quad_order or max(64, n + 2)
    u, w = roots_jacobi(order, a, a)
    t = (u + 1) / 2
    fv = np.asarray(f(t), dtype=float)
    k = np.arange(n + 1)
    basis = _binom.pmf(k[None, :], n, t[:, None])  # (order, n+1)
    num = (w * fv) @ basis
    den = w @ basis
    return Polynomial.bernstein([mpmath.mpf(v) for v in num / den])


def durrmeyer_image(n: int, f, quad_order: int | None = None) -> Polynomial:
    """The plain Bernstein-Durrmeyer operator D_n (alpha = 0)."""
    return durrmeyer_lupas_image(n, 0, f, quad_order)


def apply_durrmeyer_lupas(n: int, alpha, f, x, quad_order: int | None = None):
    return durrmeyer_lupas_image(n, alpha, f, quad_order)(x)


def lupas_endpoint_moment(n: int, alpha, i: int):
    """D_n^<alpha>(e_i, 0) = (alpha+1)_i / (n+2 alpha+2)_i."""
    return pochhammer(alpha + 1, i) / pochhammer(n + 2 * alpha + 2, i)


def lupas_moment_closed_form(n: int, alpha, i: int) -> Polynomial:
    """Closed-form images of e_0, e_1, e_2 under D_n^<alpha>."""
    if not isinstance(alpha, (int, Fraction)):
        raise TypeError("closed forms use exact alpha")
    a = Fraction(alpha)
    if i == 0:
        return Polynomial.monomial([1])
    if i == 1:
        d = n + 2 * a + 2
        return Polynomial.monomial([(a + 1) / d, Fraction(n) / d])
    if i == 2:
        d = (n + 2 * a + 2) * (n + 2 * a + 3)
        return Polynomial.monomial(
            [(a + 1) * (a + 2) / d, 2 * n * (a + 2) / d, Fraction(n * (n - 1)) / d]
        )
    raise ValueError("closed forms implemented for i <= 2")


def lupas_derivative_identity_check(n: int, alpha, nu: int, f) -> float:
    """Max grid residual of the commutation identity

        d^nu/dx^nu D_n^<a>(f) = n!/((n-nu)! (n+2a+2)_nu) D_{n-nu}^<a+nu>(f^(nu))
    """
    if not 1 <= nu <= n:
        raise ValueError("need 1 <= nu <= n")
    f = _as_handle(f)
    if not isinstance(f, PolyFunction):
        raise TypeError("identity check requires a polynomial input")
    lhs = durrmeyer_lupas_image(n, alpha, f).to_monomial().differentiate(nu)
    factor = pochhammer(n - nu + 1, nu) / pochhammer(n + 2 * alpha + 2, nu)
    fder = PolyFunction(f.poly.differentiate(nu))
    rhs = durrmeyer_lupas_image(n - nu, alpha + nu, fder).to_monomial().scale(factor)
    return _max_grid_diff(lhs, rhs)


def derivative_bridge_residual(n: int, f) -> float:
    """Max grid residual of d/dx U_{n+1}(f) = D_n(f')."""
    f = _as_handle(f)
    if not isinstance(f, PolyFunction):
        raise TypeError("bridge check requires a polynomial input")
    lhs = genuine_durrmeyer_image(n + 1, f).to_monomial().differentiate()
    rhs = durrmeyer_lupas_image(n, 0, PolyFunction(f.poly.differentiate())).to_monomial()
    return _max_grid_diff(lhs, rhs)


def _max_grid_diff(p: Polynomial, q: Polynomial, points: int = 50) -> float:
    if p.backend != q.backend:
        p, q = p.to_float(), q.to_float()
    diff = p - q
    if diff.backend == "exact":
        grid = [Fraction(j, points - 1) for j in range(points)]
    else:
        grid = [mpmath.mpf(j) / (points - 1) for j in range(points)]
    return max(abs(float(diff(x))) for x in grid)


# ----------------------------------------------------------------------
# Gavrea combination and the composite operator M_n
def gavrea_image(gen_poly: Polynomial, f, quad_order: int | None = None) -> Polynomial:
    """sum_k a_k/(k+1) U_{k+2}(f), where a_k are the monomial coefficients of
    the generating polynomial.

    The weights a_k/(k+1) are huge and alternate in sign while the result is
    O(||f||); the float path therefore runs in mpmath at a precision sized to
    the coefficient magnitudes.
    """
    a = gen_poly.to_monomial().coeffs
    f = _as_handle(f)
    nmax = len(a) - 1
    exact = (
        gen_poly.backend == "exact"
        and isinstance(f, PolyFunction)
        and f.poly.backend == "exact"
    )
    if exact:
        acc = [Fraction(0)] * (nmax + 3)
        for k, ak in enumerate(a):
            if ak == 0:
                continue
            mono = genuine_durrmeyer_image(k + 2, f).to_monomial().coeffs
            w = Fraction(ak) / (k + 1)
            for l, cl in enumerate(mono):
                acc[l] += w * cl
        return Polynomial.monomial(acc)
    mag = max((mpmath.mag(_to_mpf(ak)) for ak in a if ak != 0), default=0)
    with mpmath.workprec(mpmath.mp.prec + max(0, mag) + 2 * nmax + 96):
        acc = [mpmath.mpf(0)] * (nmax + 3)
        for k, ak in enumerate(a):
            if ak == 0:
                continue
            mono = genuine_durrmeyer_image(k + 2, f, quad_order).to_monomial()
            w = _to_mpf(ak) / (k + 1)
            for l, cl in enumerate(mono.coeffs):
                acc[l] += w * _to_mpf(cl)
    return Polynomial.monomial(acc)


def apply_gavrea(gen, f, x, quad_order: int | None = None):
    gen_poly = gen.P if isinstance(gen, GeneratorPoly) else gen
    return gavrea_image(gen_poly, f, quad_order)(x)


@dataclass(frozen=True)
class MnResult:
    poly: Polynomial
    q: int
    n: int
    r: int
    used_fallback: bool
    alpha_n: object  # second-moment gap; None if the small-n gate fired first
    generator: GeneratorPoly | None


def _linear_interpolation_image(f) -> Polynomial:
    f = _as_handle(f)
    v0 = f.value_at(Fraction(0))
    v1 = f.value_at(Fraction(1))
    return Polynomial.monomial([v0, v1 - v0])


def mn_image(q: int, n: int, f, prec_bits: int = 256, quad_order: int | None = None) -> MnResult:
    """The composite operator of degree <= n preserving k-monotonicity for
    all k <= q.

    With r = max(q-1, 1): for n-2 > 8r build the generating polynomial of
    degree <= n-2 and apply the combination when its second-moment gap
    alpha_n <= 1/4; otherwise (small n, or gap too large) fall back to the
    endpoint linear interpolant.
    """
    if q < 0 or n < 1:
        raise ValueError("need q >= 0, n >= 1")
    r = max(q - 1, 1)
    if n - 2 <= 8 * r:
        return MnResult(_linear_interpolation_image(f), q, n, r, True, None, None)
    gen = build_generator(n - 2, r, prec_bits)
    alpha_n = gen.moment_deficiency[2]
    if alpha_n > 0.25:
        return MnResult(_linear_interpolation_image(f), q, n, r, True, alpha_n, gen)
    with mpmath.workprec(prec_bits):
        img = gavrea_image(gen.P, f, quad_order)
    return MnResult(img, q, n, r, False, alpha_n, gen)


def apply_Mn(q: int, n: int, f, x, prec_bits: int = 256):
    return mn_image(q, n, f, prec_bits).poly(x)


# ----------------------------------------------------------------------
# moment profiles
@dataclass(frozen=True)
class MomentProfile:
    n: int
    image_e0: Polynomial
    image_e1: Polynomial
    image_e2: Polynomial
    alpha_n: object  # factor in L(e_2,x) - x^2 = alpha_n x(1-x); None if n/a
    conforming: bool
    residual: float


def _image_fn(kind: str, params: dict):
    if kind == "bernstein":
        return (lambda f: bernstein_image(params["n"], f)), params["n"]
    if kind == "genuine_durrmeyer":
        return (lambda f: genuine_durrmeyer_image(params["n"], f)), params["n"]
    if kind == "durrmeyer":
        return (lambda f: durrmeyer_image(params["n"], f)), params["n"]
    if kind == "lupas":
        return (lambda f: durrmeyer_lupas_image(params["n"], params["alpha"], f)), params["n"]
    if kind == "gavrea":
        gen = params["gen"]
        gen_poly = gen.P if isinstance(gen, GeneratorPoly) else gen
        return (lambda f: gavrea_image(gen_poly, f)), gen_poly.degree + 2
    if kind == "mn":
        prec = params.get("prec_bits", 256)
        return (lambda f: mn_image(params["q"], params["n"], f, prec).poly), params["n"]
    if kind == "fallback":
        return (lambda f: _linear_interpolation_image(f)), 1
    raise ValueError(f"unknown operator kind {kind!r}")


def _float_coeffs(p: Polynomial, length: int) -> list[float]:
    c = [float(v) for v in p.to_monomial().coeffs]
    return c + [0.0] * max(0, length - len(c))


def moment_profile(kind: str, **params) -> MomentProfile:
    """Images of e_0, e_1, e_2 and the factor alpha_n when the operator
    reproduces linear functions and L(e_2,x) - x^2 is proportional to x(1-x).

    Operators that fail either property (e.g. the weighted Durrmeyer family,
    which does not fix e_1) come back with conforming=False and alpha_n=None.
    """
    image, n = _image_fn(kind, params)
    imgs = [image(Polynomial.e(i)).to_monomial() for i in range(3)]
    tol = 1e-10
    lin_resid = 0.0
    for i in (0, 1):
        c = _float_coeffs(imgs[i], i + 2)
        c[i] -= 1.0
        lin_resid = max(lin_resid, max(abs(v) for v in c))
    s = _float_coeffs(imgs[2], max(4, len(imgs[2].coeffs)))
    s[2] -= 1.0  # subtract x^2
    alpha_float = s[1]
    resid = max(
        abs(s[0]),
        abs(s[1] + s[2]),  # the gap must be alpha * (x - x^2)
        max((abs(v) for v in s[3:]), default=0.0),
    )
    conforming = lin_resid <= tol and resid <= tol and alpha_float >= -tol
    alpha_n = None
    if conforming:
        # report the exact/high-precision coefficient, not its float cast
        raw = list(imgs[2].coeffs)
        alpha_n = raw[1] if len(raw) > 1 else alpha_float
    return MomentProfile(
        n=n,
        image_e0=imgs[0],
        image_e1=imgs[1],
        image_e2=imgs[2],
        alpha_n=alpha_n,
        conforming=conforming,
        residual=max(lin_resid, resid),
    )
