"""Catalog of test functions on [0,1].

Each handle is callable on floats and numpy arrays.  Handles that support the
exact operator path also provide ``monomial_moments(imax)``, the integrals
``int_0^1 t^i f(t) dt`` for i = 0..imax (Fractions where exact, mpf for exp),
and declare the k-monotonicity orders they are known to satisfy.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

import mpmath
import numpy as np

from .polynomial import Polynomial, _to_mpf


class FunctionHandle:
    name = "f"
    #: orders k for which the function is known to be k-monotone on [0,1]
    known_monotone_orders: frozenset = frozenset()

    def __call__(self, x):
        raise NotImplementedError

    def monomial_moments(self, imax: int):
        raise NotImplementedError(f"{self.name} has no exact moment path")

    def value_at(self, x):
        """Evaluation usable with Fraction/mpf scalars (falls back to float)."""
        return self(x)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class PolyFunction(FunctionHandle):
    def __init__(self, poly: Polynomial, name: str | None = None):
        self.poly = poly.to_monomial()
        self.name = name or "poly"
        self._float_coeffs = np.array([float(c) for c in self.poly.coeffs])

    def __call__(self, x):
        if isinstance(x, (Fraction, mpmath.mpf)):
            return self.poly(x)
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in self._float_coeffs[::-1]:
            acc = acc * x + c
        return acc

    def value_at(self, x):
        return self.poly(x)

    def monomial_moments(self, imax: int):
        c = self.poly.coeffs
        out = []
        for i in range(imax + 1):
            if self.poly.backend == "exact":
                out.append(sum((ck * Fraction(1, i + k + 1) for k, ck in enumerate(c)), Fraction(0)))
            else:
                out.append(sum((ck / mpmath.mpf(i + k + 1) for k, ck in enumerate(c)), mpmath.mpf(0)))
        return out


class ExpFunction(FunctionHandle):
    """exp(x); k-monotone for every k."""

    name = "exp"
    known_monotone_orders = frozenset(range(32))

    def __call__(self, x):
        if isinstance(x, mpmath.mpf):
            return mpmath.exp(x)
        if isinstance(x, Fraction):
            return float(np.exp(float(x)))
        return np.exp(x)

    def monomial_moments(self, imax: int):
        # I_i = e - i I_{i-1}; the downward recurrence I_{i-1} = (e - I_i)/i
        # contracts, so a zero guess well above imax converges to full precision
        start = imax + 60
        with mpmath.workprec(mpmath.mp.prec + 64):
            e = mpmath.e + 0
            seq = [mpmath.mpf(0)] * (start + 1)
            for i in range(start, 0, -1):
                seq[i - 1] = (e - seq[i]) / i
        return seq[: imax + 1]


class PowerFunction(FunctionHandle):
    """x^eps with 0 < eps < 1; nonnegative and nondecreasing (k <= 1)."""

    def __init__(self, eps):
        self.eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**12)
        self.name = f"x^{float(self.eps):g}"
        if not 0 < self.eps < 1:
            raise ValueError("eps must be in (0,1)")
        self.known_monotone_orders = frozenset({0, 1})

    def __call__(self, x):
        if isinstance(x, mpmath.mpf):
            return x ** _to_mpf(self.eps)
        if isinstance(x, Fraction):
            return float(x) ** float(self.eps)
        return np.power(np.asarray(x, dtype=float), float(self.eps))

    def monomial_moments(self, imax: int):
        return [Fraction(1) / (i + self.eps + 1) for i in range(imax + 1)]


class TruncatedPowerFunction(FunctionHandle):
    """(x - a)_+^p for rational a in (0,1) and integer p >= 1.

    k-monotone for every k <= p + 1.
    """

    def __init__(self, a, p: int):
        self.a = Fraction(a).limit_denominator(10**9) if isinstance(a, float) else Fraction(a)
        self.p = int(p)
        if not 0 < self.a < 1:
            raise ValueError("a must be in (0,1)")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        self.name = f"(x-{float(self.a):g})_+^{self.p}"
        self.known_monotone_orders = frozenset(range(self.p + 2))

    def __call__(self, x):
        if isinstance(x, (Fraction, mpmath.mpf)):
            d = x - self.a
            return d**self.p if d > 0 else 0 * d
        d = np.asarray(x, dtype=float) - float(self.a)
        return np.where(d > 0, d, 0.0) ** self.p

    def monomial_moments(self, imax: int):
        a, p = self.a, self.p
        out = []
        for i in range(imax + 1):
            # expand t^i = ((t-a)+a)^i and integrate over [a,1]
            s = Fraction(0)
            for j in range(i + 1):
                s += comb(i, j) * a ** (i - j) * (1 - a) ** (p + j + 1) / Fraction(p + j + 1)
            out.append(s)
        return out


class LogShiftFunction(FunctionHandle):
    """ln(x + eps); the lambda=2 counterexample family."""

    def __init__(self, eps: float):
        self.eps = float(eps)
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        self.name = f"ln(x+{self.eps:g})"
        self.known_monotone_orders = frozenset({1})

    def __call__(self, x):
        if isinstance(x, mpmath.mpf):
            return mpmath.log(x + self.eps)
        if isinstance(x, Fraction):
            return float(np.log(float(x) + self.eps))
        return np.log(np.asarray(x, dtype=float) + self.eps)


class PiecewiseLinearFunction(FunctionHandle):
    """Continuous piecewise-linear interpolant of (xs, ys) with rational data;
    supports exact moments for positivity/contraction checks."""

    def __init__(self, xs, ys, name: str = "pwl"):
        self.xs = [Fraction(v) for v in xs]
        self.ys = [Fraction(v) for v in ys]
        if sorted(self.xs) != self.xs or self.xs[0] != 0 or self.xs[-1] != 1:
            raise ValueError("breakpoints must increase from 0 to 1")
        self.name = name
        if all(y >= 0 for y in self.ys):
            self.known_monotone_orders = frozenset({0})

    def __call__(self, x):
        if isinstance(x, (Fraction, mpmath.mpf)):
            for (x0, y0), (x1, y1) in zip(
                zip(self.xs, self.ys), zip(self.xs[1:], self.ys[1:])
            ):
                if x <= x1:
                    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            return self.ys[-1]
        return np.interp(
            np.asarray(x, dtype=float),
            [float(v) for v in self.xs],
            [float(v) for v in self.ys],
        )

    def monomial_moments(self, imax: int):
        out = []
        for i in range(imax + 1):
            s = Fraction(0)
            for (x0, y0), (x1, y1) in zip(
                zip(self.xs, self.ys), zip(self.xs[1:], self.ys[1:])
            ):
                slope = (y1 - y0) / (x1 - x0)
                c0 = y0 - slope * x0
                # integral of t^i (c0 + slope t) over [x0, x1]
                s += c0 * (x1 ** (i + 1) - x0 ** (i + 1)) / Fraction(i + 1)
                s += slope * (x1 ** (i + 2) - x0 ** (i + 2)) / Fraction(i + 2)
            out.append(s)
        return out


def monomial(i: int) -> PolyFunction:
    f = PolyFunction(Polynomial.e(i), name=f"x^{i}")
    f.known_monotone_orders = frozenset(range(32))
    return f


def linear(a, b) -> PolyFunction:
    """a + b x."""
    return PolyFunction(Polynomial.monomial([a, b]), name=f"{a}+{b}x")


def q_monotone_catalog(q: int) -> list[FunctionHandle]:
    """Five functions known to be k-monotone for every k <= q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    entries = [
        ExpFunction(),
        monomial(q),
        monomial(q + 1),
        TruncatedPowerFunction(Fraction(3, 10), max(q - 1, 1)),
        TruncatedPowerFunction(Fraction(3, 5), max(q - 1, 1)),
    ]
    return entries


def catalog(name: str, **params) -> FunctionHandle:
    """Build a handle from a CLI-style name such as ``exp``, ``xeps:0.5``,
    ``truncpow:0.5:3``, ``logeps:1e-4``, ``monomial:3`` or ``linear:1:2``."""
    parts = name.split(":")
    kind = parts[0]
    if kind == "exp":
        return ExpFunction()
    if kind == "xeps":
        return PowerFunction(Fraction(parts[1]) if "/" in parts[1] else float(parts[1]))
    if kind == "truncpow":
        return TruncatedPowerFunction(Fraction(parts[1]) if "/" in parts[1] else float(parts[1]), int(parts[2]))
    if kind == "logeps":
        return LogShiftFunction(float(parts[1]))
    if kind == "monomial":
        return monomial(int(parts[1]))
    if kind == "linear":
        return linear(Fraction(parts[1]), Fraction(parts[2]))
    raise ValueError(f"unknown catalog function {name!r}")
