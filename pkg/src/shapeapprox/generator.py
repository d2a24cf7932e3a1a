"""Construction of the generating polynomial P_n with nonnegative derivatives
up to order r, unit integral, and O(n^-2) moment deficiency."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy.stats import binom as _binom

from .errors import PrecisionError, RegimeError
from .polynomial import Polynomial
from .special import tau

UNIT_INTEGRAL_TOL = mpmath.mpf("1e-20")
GRID_SIGN_REL_TOL = 1e-15
GRID_POINTS = 2048
MAX_PRECISION_BITS = 1024


@dataclass(frozen=True)
class GeneratorPoly:
    """The degree-<=n generating polynomial with its construction metadata."""

    n: int
    r: int
    m: int
    Q: Polynomial
    lambda_n: mpmath.mpf
    P: Polynomial
    moment_deficiency: dict = field(repr=False)  # mu -> 1 - int x^mu P
    precision_bits: int = 256


def moment(P: Polynomial, mu: int):
    """Integral of x^mu * P(x) over [0,1], exact in the coefficients."""
    from fractions import Fraction

    c = P.to_monomial().coeffs
    if P.backend == "exact":
        total = Fraction(0)
        for k, ck in enumerate(c):
            total += ck * Fraction(1, k + mu + 1)
        return total
    # the terms cancel down to O(1); work at a precision covering their size
    mag = max((mpmath.mag(ck) for ck in c if ck != 0), default=0)
    with mpmath.workprec(mpmath.mp.prec + max(0, mag) + 64):
        total = mpmath.mpf(0)
        for k, ck in enumerate(c):
            total += ck / mpmath.mpf(k + mu + 1)
    return total


def bernstein_grid_values(coeffs, xs):
    """Evaluate a Bernstein-form polynomial (float64 coeffs) at points xs
    via the binomial pmf; stable since all basis values are nonnegative."""
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    k = np.arange(n + 1)
    basis = _binom.pmf(k[None, :], n, np.asarray(xs, dtype=float)[:, None])
    return basis @ c


def _grid_min_relative(poly: Polynomial, points: int = GRID_POINTS):
    """(min value)/(coefficient scale) of poly on a uniform grid of [0,1],
    computed from its Bernstein form in float64."""
    bern = poly.to_bernstein()
    coeffs = np.array([float(c) for c in bern.coeffs])
    scale = max(1e-300, float(np.max(np.abs(coeffs))))
    xs = np.linspace(0.0, 1.0, points)
    vals = bernstein_grid_values(coeffs, xs)
    return float(vals.min()) / scale


def _grid_min_certified(poly: Polynomial, points: int = GRID_POINTS):
    """Like _grid_min_relative, but grid points dipping below the sign
    tolerance are re-evaluated at the ambient working precision; float64
    Bernstein evaluation is only good to a few ulps at high degree."""
    bern = poly.to_bernstein()
    coeffs = np.array([float(c) for c in bern.coeffs])
    scale = max(1e-300, float(np.max(np.abs(coeffs))))
    xs = np.linspace(0.0, 1.0, points)
    vals = bernstein_grid_values(coeffs, xs) / scale
    rel_min = float(vals.min())
    if rel_min >= -GRID_SIGN_REL_TOL:
        return rel_min
    mono = poly.to_monomial()
    low = vals < -GRID_SIGN_REL_TOL
    redo = min(float(mono(mpmath.mpf(x))) for x in xs[low]) / scale
    rest = vals[~low]
    return min(redo, float(rest.min())) if rest.size else redo


def _build_at_precision(n: int, r: int, prec_bits: int) -> GeneratorPoly:
    m = math.ceil(n / (8 * r))
    deg_q = 4 * r * (m - 1)
    work = prec_bits + 2 * deg_q + 64  # convolution/conversion guard digits
    with mpmath.workprec(work):
        t = tau(m, prec_bits=work)
        Q = t.poly ** (4 * r)
        one_minus_t_r = Polynomial.monomial([1, -1]).to_float() ** r
        denom = (Q * one_minus_t_r).integrate_01()
        lam = r / denom
        kernel = Q
        for _ in range(r):
            kernel = kernel.antidifferentiate_from_zero()
        P = kernel.scale(lam * mpmath.factorial(r - 1))

        if P.degree > n:
            raise RegimeError(f"generator degree {P.degree} exceeds n={n}")
        total = P.integrate_01()
        if abs(total - 1) > UNIT_INTEGRAL_TOL:
            raise PrecisionError(f"unit integral off by {abs(total - 1)}")
        deficiency = {}
        for mu in (1, 2, 3, 4):
            d = 1 - moment(P, mu)
            if d <= 0:
                raise PrecisionError(f"moment deficiency delta_{mu} = {d} <= 0")
            deficiency[mu] = d
        for nu in range(r + 1):
            rel_min = _grid_min_certified(P.differentiate(nu))
            if rel_min < -GRID_SIGN_REL_TOL:
                raise PrecisionError(
                    f"derivative order {nu} dips to {rel_min} (relative) on grid"
                )
    return GeneratorPoly(
        n=n,
        r=r,
        m=m,
        Q=Q,
        lambda_n=lam,
        P=P,
        moment_deficiency=deficiency,
        precision_bits=prec_bits,
    )


@lru_cache(maxsize=64)
def build_generator(n: int, r: int, prec_bits: int = 256) -> GeneratorPoly:
    """Build the generating polynomial for n > 8r; doubles the precision on
    certification failure, up to 1024 bits."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if n <= 8 * r:
        raise RegimeError(f"construction requires n > 8r (n={n}, r={r})")
    bits = prec_bits
    last_err = None
    while bits <= MAX_PRECISION_BITS:
        try:
            return _build_at_precision(n, r, bits)
        except PrecisionError as exc:  # escalate and retry
            last_err = exc
            bits *= 2
    raise PrecisionError(f"failed up to {MAX_PRECISION_BITS} bits: {last_err}")


def deficiency_slope(r: int, n_list, prec_bits: int = 256) -> float:
    """Least-squares slope of log delta_2(n) against log n."""
    ns = list(n_list)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly increasing")
    logs_n, logs_d = [], []
    for n in ns:
        gen = build_generator(n, r, prec_bits)
        logs_n.append(math.log(n))
        logs_d.append(float(mpmath.log(gen.moment_deficiency[2])))
    slope, _ = np.polyfit(logs_n, logs_d, 1)
    return float(slope)
