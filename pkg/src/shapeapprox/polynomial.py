"""Degree-bounded polynomials on [0,1] in monomial and Bernstein bases.

Two scalar backends are supported:

* ``exact``: coefficients are ``fractions.Fraction`` (or ``int``), and every
  operation is exact.
* ``float``: coefficients are ``mpmath.mpf``; the working precision is the
  ambient mpmath precision (wrap calls in ``mpmath.workprec(bits)`` to
  control it).

Bernstein coefficients refer to the basis p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf

from .errors import BackendError, BasisError, DegreeCapError, DomainError

DEGREE_CAP = 4096

MONOMIAL = "monomial"
BERNSTEIN = "bernstein"

_EXACT_TYPES = (int, Fraction)


def _to_mpf(v):
    if isinstance(v, mpf):
        return v
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _normalize(coeffs: Iterable) -> tuple[tuple, str]:
    vals = list(coeffs)
    if not vals:
        vals = [0]
    exact = all(isinstance(v, _EXACT_TYPES) for v in vals)
    if exact:
        return tuple(Fraction(v) for v in vals), "exact"
    return tuple(_to_mpf(v) for v in vals), "float"


def _zero_of(backend: str):
    return Fraction(0) if backend == "exact" else mpmath.mpf(0)


@dataclass(frozen=True)
class Polynomial:
    """Immutable polynomial; ``coeffs[k]`` multiplies x^k (monomial) or
    p_{n,k} (bernstein, n = len(coeffs)-1)."""

    basis: str
    coeffs: tuple
    backend: str

    def __init__(self, basis: str, coeffs: Sequence):
        if basis not in (MONOMIAL, BERNSTEIN):
            raise BasisError(f"unknown basis {basis!r}")
        vals, backend = _normalize(coeffs)
        if basis == MONOMIAL:
            # trim trailing exact zeros; keep Bernstein length (it encodes n)
            vals = list(vals)
            while len(vals) > 1 and vals[-1] == 0:
                vals.pop()
            vals = tuple(vals)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", vals)
        object.__setattr__(self, "backend", backend)

    # ------------------------------------------------------------------
    # constructors
    @staticmethod
    def monomial(coeffs: Sequence) -> "Polynomial":
        return Polynomial(MONOMIAL, coeffs)

    @staticmethod
    def bernstein(coeffs: Sequence) -> "Polynomial":
        return Polynomial(BERNSTEIN, coeffs)

    @staticmethod
    def e(i: int) -> "Polynomial":
        """The monomial x^i with exact coefficients."""
        return Polynomial(MONOMIAL, [0] * i + [1])

    @staticmethod
    def basis_bernstein(n: int, k: int) -> "Polynomial":
        """The Bernstein fundamental polynomial p_{n,k}."""
        if not 0 <= k <= n:
            raise BasisError(f"p_{{{n},{k}}} undefined")
        c = [0] * (n + 1)
        c[k] = 1
        return Polynomial(BERNSTEIN, c)

    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        if self.basis == MONOMIAL:
            return len(self.coeffs) - 1
        return len(self.coeffs) - 1  # formal degree n of the Bernstein form

    @property
    def bernstein_n(self) -> int:
        if self.basis != BERNSTEIN:
            raise BasisError("not in Bernstein form")
        return len(self.coeffs) - 1

    def _coerce_pair(self, other: "Polynomial"):
        if self.backend == other.backend:
            return self, other
        raise BackendError(
            f"mixed backends {self.backend}/{other.backend}; convert explicitly"
        )

    def to_float(self) -> "Polynomial":
        """Copy with mpf coefficients (rounded at the ambient precision)."""
        return Polynomial(self.basis, [_to_mpf(c) for c in self.coeffs])

    # ------------------------------------------------------------------
    # evaluation
    def __call__(self, x):
        if self.basis == MONOMIAL:
            acc = _zero_of(self.backend)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        # de Casteljau; domain restricted to [0,1]
        if x < 0 or x > 1:
            raise DomainError(f"Bernstein form evaluated at x={x} outside [0,1]")
        b = list(self.coeffs)
        one = 1
        for r in range(1, len(b)):
            for i in range(len(b) - r):
                b[i] = (one - x) * b[i] + x * b[i + 1]
        return b[0]

    # ------------------------------------------------------------------
    # arithmetic
    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self._coerce_pair(other)
        if a.basis == b.basis == BERNSTEIN and a.bernstein_n == b.bernstein_n:
            return Polynomial(BERNSTEIN, [x + y for x, y in zip(a.coeffs, b.coeffs)])
        am, bm = a.to_monomial(), b.to_monomial()
        n = max(len(am.coeffs), len(bm.coeffs))
        z = _zero_of(a.backend)
        ca = list(am.coeffs) + [z] * (n - len(am.coeffs))
        cb = list(bm.coeffs) + [z] * (n - len(bm.coeffs))
        out = Polynomial(MONOMIAL, [x + y for x, y in zip(ca, cb)])
        if a.basis == BERNSTEIN:
            return out.to_bernstein(max(a.bernstein_n, out.degree))
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def scale(self, s) -> "Polynomial":
        if self.backend == "exact" and not isinstance(s, _EXACT_TYPES):
            return self.to_float().scale(_to_mpf(s))
        return Polynomial(self.basis, [c * s for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        a, b = self._coerce_pair(other)
        am, bm = a.to_monomial().coeffs, b.to_monomial().coeffs
        deg = len(am) + len(bm) - 2
        if deg > DEGREE_CAP:
            raise DegreeCapError(f"product degree {deg} exceeds cap {DEGREE_CAP}")
        z = _zero_of(a.backend)
        out = [z] * (deg + 1)
        for i, ci in enumerate(am):
            if ci == 0:
                continue
            for j, cj in enumerate(bm):
                out[i + j] += ci * cj
        res = Polynomial(MONOMIAL, out)
        if a.basis == BERNSTEIN:
            return res.to_bernstein(max(res.degree, deg))
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial(MONOMIAL, [1]) if self.backend == "exact" else Polynomial(
            MONOMIAL, [mpmath.mpf(1)]
        )
        base = self.to_monomial()
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(x)), via Horner in polynomial arithmetic."""
        a, b = self.to_monomial()._coerce_pair(inner.to_monomial())
        acc = Polynomial(MONOMIAL, [a.coeffs[-1]])
        for c in reversed(a.coeffs[:-1]):
            acc = acc * b + Polynomial(MONOMIAL, [c])
        return acc

    # ------------------------------------------------------------------
    # calculus
    def differentiate(self, nu: int = 1) -> "Polynomial":
        if nu < 0:
            raise ValueError("nu must be >= 0")
        c = list(self.to_monomial().coeffs)
        for _ in range(nu):
            c = [k * c[k] for k in range(1, len(c))] or [_zero_of(self.backend)]
        return Polynomial(MONOMIAL, c)

    def antidifferentiate_from_zero(self) -> "Polynomial":
        c = self.to_monomial().coeffs
        if self.backend == "exact":
            out = [Fraction(0)] + [Fraction(ck, 1) / (k + 1) for k, ck in enumerate(c)]
        else:
            out = [mpmath.mpf(0)] + [ck / (k + 1) for k, ck in enumerate(c)]
        return Polynomial(MONOMIAL, out)

    def integrate_01(self):
        """Exact integral over [0,1] (in the coefficient arithmetic)."""
        if self.basis == BERNSTEIN:
            n = self.bernstein_n
            s = sum(self.coeffs, _zero_of(self.backend))
            if self.backend == "exact":
                return s / Fraction(n + 1)
            return s / (n + 1)
        total = _zero_of(self.backend)
        for k, ck in enumerate(self.coeffs):
            if self.backend == "exact":
                total += Fraction(ck) / (k + 1)
            else:
                total += ck / (k + 1)
        return total

    def definite_integral(self, a, b):
        anti = self.to_monomial().antidifferentiate_from_zero()
        return anti(b) - anti(a)

    # ------------------------------------------------------------------
    # basis conversion
    def to_monomial(self) -> "Polynomial":
        if self.basis == MONOMIAL:
            return self
        c = self.coeffs
        n = self.bernstein_n
        z = _zero_of(self.backend)
        out = [z] * (n + 1)
        # p = sum_k c_k C(n,k) x^k (1-x)^(n-k)
        for k, ck in enumerate(c):
            if ck == 0:
                continue
            base = comb(n, k)
            for l in range(k, n + 1):
                out[l] += ck * (base * comb(n - k, l - k) * (-1) ** (l - k))
        return Polynomial(MONOMIAL, out)

    def to_bernstein(self, n: int | None = None) -> "Polynomial":
        mono = self.to_monomial()
        deg = mono.degree
        if n is None:
            n = deg if self.basis == MONOMIAL else self.bernstein_n
        if n < deg:
            raise BasisError(f"target Bernstein degree {n} < polynomial degree {deg}")
        a = mono.coeffs
        out = []
        for k in range(n + 1):
            acc = _zero_of(self.backend)
            for j in range(0, min(k, deg) + 1):
                if self.backend == "exact":
                    acc += a[j] * Fraction(comb(k, j), comb(n, j))
                else:
                    acc += a[j] * comb(k, j) / comb(n, j)
            out.append(acc)
        return Polynomial(BERNSTEIN, out)

    # ------------------------------------------------------------------
    # serialization: {"basis": ..., "n": int, "coeffs": [strings]}
    def to_json(self) -> str:
        if self.backend == "exact":
            strs = [
                str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
                for c in self.coeffs
            ]
        else:
            strs = [mpmath.nstr(c, 50, strip_zeros=False) for c in self.coeffs]
        return json.dumps(
            {"basis": self.basis, "n": len(self.coeffs) - 1, "coeffs": strs}
        )

    @staticmethod
    def from_json(text: str) -> "Polynomial":
        obj = json.loads(text)
        coeffs = []
        exact = True
        for s in obj["coeffs"]:
            s = s.strip()
            if "/" in s:
                coeffs.append(Fraction(s))
            elif all(ch.isdigit() or ch in "+-" for ch in s):
                coeffs.append(Fraction(int(s)))
            else:
                coeffs.append(mpmath.mpf(s))
                exact = False
        if not exact:
            coeffs = [_to_mpf(c) for c in coeffs]
        return Polynomial(obj["basis"], coeffs)

    def __repr__(self):
        return f"Polynomial({self.basis}, deg<={len(self.coeffs)-1}, {self.backend})"
