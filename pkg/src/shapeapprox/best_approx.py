"""Discretized best uniform and best q-monotone polynomial approximation.

E_n(f)      = inf over degree-<=n polynomials of the uniform error;
E_n^(q)(f)  = the same infimum restricted to q-monotone polynomials.

Both are computed as linear programs on Chebyshev-distributed sample nodes:
minimize t subject to |f(x_i) - p(x_i)| <= t, with the shape constraint
imposed as p^(q)(y_l) >= 0 on a constraint grid (p >= 0 when q = 0) and the
winner post-validated densely.  The LP works in the shifted Chebyshev basis
for conditioning; the returned polynomial is reconstructed exactly from the
float solution so downstream basis conversions do not amplify cancellation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import numpy.polynomial.chebyshev as npcheb

from .errors import SolverError
from .moduli import default_x_grid, omega_dt
from .polynomial import Polynomial
from .shape import check_k_monotone_poly
from .simplex import solve_lp
from .special import chebyshev_T

DEFAULT_SAMPLE_POINTS = 257
DEFAULT_CONSTRAINT_POINTS = 257


@dataclass(frozen=True)
class ApproxResult:
    n: int
    q: int | None  # None for the unconstrained problem
    poly: Polynomial
    error: float  # uniform norm of f - p on the sample grid
    sample_size: int
    constraint_size: int
    iterations: int
    equioscillations: int
    constraint_validated: bool


@lru_cache(maxsize=256)
def _shifted_chebyshev(j: int) -> Polynomial:
    """T_j(2x-1) in the monomial basis with exact integer coefficients."""
    return chebyshev_T(j).compose(Polynomial.monomial([-1, 2]))


def _basis_values(xs: np.ndarray, n: int) -> np.ndarray:
    return npcheb.chebvander(2.0 * np.asarray(xs, dtype=float) - 1.0, n)


def _basis_derivative_values(xs: np.ndarray, n: int, q: int) -> np.ndarray:
    """Matrix D[i,j] = d^q/dx^q T_j(2x_i - 1)."""
    u = 2.0 * np.asarray(xs, dtype=float) - 1.0
    out = np.zeros((len(u), n + 1))
    for j in range(n + 1):
        cj = np.zeros(j + 1)
        cj[j] = 1.0
        dj = npcheb.chebder(cj, m=q) * 2.0**q
        out[:, j] = npcheb.chebval(u, dj) if len(dj) else 0.0
    return out


def _reconstruct(coeffs: np.ndarray) -> Polynomial:
    """Exact monomial polynomial from float Chebyshev-basis coefficients."""
    n = len(coeffs) - 1
    acc = [Fraction(0)] * (n + 1)
    for j, aj in enumerate(coeffs):
        if aj == 0.0:
            continue
        a = Fraction(float(aj))  # exact binary value of the float
        for l, cl in enumerate(_shifted_chebyshev(j).coeffs):
            acc[l] += a * cl
    return Polynomial.monomial(acc)


def _grid_values(p: Polynomial, xs: np.ndarray) -> np.ndarray:
    """float64 values of an exact polynomial, summed at extended precision
    (its monomial coefficients can be large while the values stay O(1))."""
    import mpmath

    with mpmath.workprec(53 + 2 * p.degree + 64):
        pf = p.to_float()
        return np.array([float(pf(mpmath.mpf(float(x)))) for x in xs])


def _solve_minimax(fvals, V, D, max_iter=20000, _refine=2):
    """min t s.t. |fvals - V a| <= t and D a >= 0, with free coefficients.

    Two reformulations keep the LP friendly to the simplex method: the free
    coefficient vector is written a = u - w*1 (u >= 0, w >= 0), which spans
    all of R^k with a single extra variable instead of a full u/v split, and
    t = max|f| - s (s >= 0) makes every right-hand side nonnegative so the
    slack basis is feasible and no phase-1 artificials are needed.
    """
    N, ncoef = V.shape
    M = D.shape[0] if D is not None else 0
    fmax = float(np.max(np.abs(fvals))) if N else 0.0
    # equilibrate: scale each coefficient column to unit max, then each shape
    # row to unit max.  Derivative entries span ~n^(2q) between low- and
    # high-order columns; without the column pass the small entries fall
    # below the pivot tolerance and the tableau degenerates.
    G = np.vstack([V, -D]) if M else V
    colscale = np.maximum(np.abs(G).max(axis=0), 1e-30)
    Vs = V / colscale
    if M:
        Dn = D / colscale
        rowscale = np.maximum(np.abs(Dn).max(axis=1), 1e-30)
        Dn = Dn / rowscale[:, None]
    # variables: [s, u_0..u_n, w], all >= 0; scaled coefficients are u - w*1
    nv = 2 + ncoef
    A = np.zeros((2 * N + M, nv))
    b = np.zeros(2 * N + M)
    v_row_sum = Vs @ np.ones(ncoef)
    A[:N, 0] = 1.0
    A[:N, 1 : 1 + ncoef] = Vs
    A[:N, -1] = -v_row_sum
    b[:N] = fvals + fmax
    A[N : 2 * N, 0] = 1.0
    A[N : 2 * N, 1 : 1 + ncoef] = -Vs
    A[N : 2 * N, -1] = v_row_sum
    b[N : 2 * N] = fmax - fvals
    if M:
        A[2 * N :, 1 : 1 + ncoef] = -Dn
        A[2 * N :, -1] = Dn @ np.ones(ncoef)
        b[2 * N :] = 0.0
    c = np.zeros(nv)
    c[0] = -1.0  # maximize s, i.e. minimize t = fmax - s

    # exchange strategy: solve on a small working set of rows, then add the
    # most violated constraints and re-solve.  The subproblems stay tiny and
    # numerically clean, unlike one monolithic degenerate tableau.
    total_rows = A.shape[0]
    stride_s = max(1, N // (2 * ncoef + 4))
    work = set(range(0, N, stride_s)) | {N - 1}
    work |= {N + i for i in work}
    if M:
        stride_c = max(1, M // (2 * ncoef + 4))
        work |= set(range(2 * N, 2 * N + M, stride_c)) | {2 * N + M - 1}
    work = sorted(work)
    scale = max(1.0, fmax)
    iterations = 0
    for _round in range(60):
        res = solve_lp(c, A[work], b[work], max_iter=max_iter)
        iterations += res.iterations
        violation = A @ res.x - b
        worst = float(violation.max())
        if worst <= 1e-12 * scale:
            break
        order = np.argsort(violation)[::-1]
        added = 0
        threshold = max(0.25 * worst, 1e-12 * scale)
        for idx in order:
            if violation[idx] < threshold or added >= 4 * ncoef:
                break
            if int(idx) not in work:
                work.append(int(idx))
                added += 1
        if added == 0 or len(work) >= total_rows:
            # violations persist on rows already in the working set (float
            # drift on the subproblem): solve the full program once
            res = solve_lp(c, A, b, max_iter=max_iter)
            iterations += res.iterations
            break
        work.sort()
    a = (res.x[1 : 1 + ncoef] - res.x[-1]) / colscale
    err = float(np.max(np.abs(fvals - V @ a))) if N else 0.0
    # iterative refinement (unconstrained case): the same minimax problem on
    # the residual is perfectly scaled, so one or two passes push the
    # absolute error down to the grid optimum at machine precision
    if D is None and _refine > 0 and N and err > 0:
        resid = fvals - V @ a
        delta, _, it2 = _solve_minimax(resid, V, None, max_iter, _refine - 1)
        iterations += it2
        a2 = a + delta
        err2 = float(np.max(np.abs(fvals - V @ a2)))
        if err2 < err:
            a, err = a2, err2
    return a, err, iterations


def equioscillation_count(residuals: np.ndarray, error: float, slack: float = 0.01) -> int:
    """Number of alternating near-extrema of the residual with magnitude
    within `slack` of the error."""
    if error <= 0:
        return 0
    level = (1.0 - slack) * error
    count, last_sign = 0, 0
    for r in residuals:
        if abs(r) >= level:
            s = 1 if r > 0 else -1
            if s != last_sign:
                count += 1
                last_sign = s
    return count


def best_uniform(f, n: int, N: int | None = None, max_iter: int = 20000) -> ApproxResult:
    """Best uniform approximation from degree-<=n polynomials, discretized on
    N Chebyshev-distributed nodes."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if N is None:
        N = max(DEFAULT_SAMPLE_POINTS, 4 * (n + 1))
    if N < 4 * (n + 1):
        raise ValueError("need N >= 4(n+1) sample nodes")
    xs = default_x_grid(N)
    fvals = np.asarray(f(xs), dtype=float)
    V = _basis_values(xs, n)
    a, err, iters = _solve_minimax(fvals, V, None, max_iter)
    p = _reconstruct(a)
    resid = fvals - V @ a
    return ApproxResult(
        n=n, q=None, poly=p, error=err, sample_size=N, constraint_size=0,
        iterations=iters, equioscillations=equioscillation_count(resid, err),
        constraint_validated=True,
    )


def best_qmonotone(
    f, q: int, n: int, N: int | None = None, M: int | None = None,
    max_iter: int = 20000,
) -> ApproxResult:
    """Best approximation from q-monotone degree-<=n polynomials: the shape
    is imposed as p^(q) >= 0 (p >= 0 for q=0) on M constraint nodes, and the
    solution is post-validated densely with one grid-refinement retry."""
    if q < 0 or n < 0:
        raise ValueError("need q >= 0 and n >= 0")
    if N is None:
        N = max(DEFAULT_SAMPLE_POINTS, 4 * (n + 1))
    if M is None:
        M = DEFAULT_CONSTRAINT_POINTS
    xs = default_x_grid(N)
    fvals = np.asarray(f(xs), dtype=float)
    V = _basis_values(xs, n)
    total_iters = 0
    # if the unconstrained optimum already satisfies the shape constraint it
    # is the constrained optimum too (constrained error can only be larger),
    # and it avoids the looser numerical floor of the constrained tableau
    a, err, iters = _solve_minimax(fvals, V, None, max_iter)
    total_iters += iters
    p = _reconstruct(a)
    if check_k_monotone_poly(p, q).passed:
        resid = fvals - V @ a
        return ApproxResult(
            n=n, q=q, poly=p, error=err, sample_size=N, constraint_size=0,
            iterations=total_iters,
            equioscillations=equioscillation_count(resid, err),
            constraint_validated=True,
        )
    attempt_M = M
    for attempt in range(2):
        ys = default_x_grid(attempt_M)
        if q <= n:
            D = _basis_derivative_values(ys, n, q) if q else _basis_values(ys, n)
            a, err, iters = _solve_minimax(fvals, V, D, max_iter)
        else:
            # p^(q) vanishes identically for deg p <= n < q: unconstrained
            a, err, iters = _solve_minimax(fvals, V, None, max_iter)
        total_iters += iters
        p = _reconstruct(a)
        report = check_k_monotone_poly(p, q)
        if report.passed:
            resid = fvals - V @ a
            return ApproxResult(
                n=n, q=q, poly=p, error=err, sample_size=N,
                constraint_size=attempt_M, iterations=total_iters,
                equioscillations=equioscillation_count(resid, err),
                constraint_validated=True,
            )
        if q > n or report.witness_x is None:
            break
        attempt_M = 4 * attempt_M + 1
    # the LP answer can undershoot the dense check by a small margin between
    # constraint nodes; lifting by a multiple of x^q raises p^(q) uniformly.
    # Accept the repair only when it is cheap relative to the error itself.
    p2, err2, validated = p, err, False
    if q <= n and report.witness_value is not None and report.witness_value < 0:
        from math import factorial

        lift = Fraction(float(-report.witness_value)) * Fraction(21, 20)
        cost = float(lift / factorial(q))
        if cost <= max(10.0 * err, 1e-9 * max(1.0, float(np.max(np.abs(fvals))))):
            p2 = p + Polynomial.e(q).scale(lift / factorial(q))
            validated = check_k_monotone_poly(p2, q).passed
            pvals = _grid_values(p2, xs)
            err2 = float(np.max(np.abs(fvals - pvals)))
    if not validated:
        p2, err2 = p, err
    resid = fvals - V @ a
    return ApproxResult(
        n=n, q=q, poly=p2, error=err2, sample_size=N, constraint_size=attempt_M,
        iterations=total_iters, equioscillations=equioscillation_count(resid, err),
        constraint_validated=validated,
    )


def jackson_ratio(f, q: int, n: int, N: int | None = None, M: int | None = None) -> float:
    """Empirical constant E_n^(q)(f) / omega_2^phi(f, 1/n)."""
    num = best_qmonotone(f, q, n, N=N, M=M).error
    den = omega_dt(f, 2, 1.0, 1.0 / n).value
    if den <= 1e-12:
        if num <= 1e-12:
            return 0.0
        raise SolverError("modulus vanished while the error did not")
    return num / den
