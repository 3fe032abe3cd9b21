"""Semi-infinite adaptive quadrature, convergence-controlled series summation,
and log-determinants of truncated scattering matrices.

The quadrature covers [0, inf) by geometric extension of the upper limit
(doubling until the outermost segment is negligible) combined with global
bisection refinement of the worst panel. Each panel is evaluated with an
embedded Gauss-Legendre pair (15 and 31 nodes); the difference supplies the
local error estimate. Integrands receive node arrays, so vectorized
evaluation is the norm.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import AccuracyError, DomainError, NumericalSingularityError

__all__ = [
    "QuadratureResult",
    "TruncationReport",
    "integrate_semi_infinite",
    "sum_until_converged",
    "log_det_truncated",
    "log_det_stack",
    "SCALAR_SERIES_CEILING",
    "BESSEL_SERIES_CEILING",
]

#: Term ceiling for scalar series (bispherical capacitance sums etc.).
SCALAR_SERIES_CEILING = 10**6
#: Mode ceiling for Bessel mode sums. Near-touching concentric shells at
#: rel_tol 1e-8 converge around ~1.2e3 modes, so 512 would be too low.
BESSEL_SERIES_CEILING = 4096

_ABS_FLOOR = 1e-300

_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)
_GL31_X, _GL31_W = np.polynomial.legendre.leggauss(31)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error: float
    evaluations: int
    upper_limit: float = math.inf  # where the semi-infinite range was cut

    def __post_init__(self):
        if not (self.abs_error >= 0):
            raise DomainError("abs_error must be nonnegative")
        if self.evaluations <= 0:
            raise DomainError("evaluations must be positive")


@dataclass(frozen=True)
class TruncationReport:
    order_used: int
    last_increment: float
    converged: bool


def _panel(f: Callable, a: float, b: float) -> tuple[float, float]:
    h = 0.5 * (b - a)
    m = 0.5 * (a + b)
    xs = np.concatenate([m + h * _GL15_X, m + h * _GL31_X])
    ys = np.asarray(f(xs), dtype=float)
    if ys.shape != xs.shape:
        raise DomainError("integrand must return one value per node")
    if np.any(~np.isfinite(ys)):
        raise DomainError(f"integrand returned a non-finite value on [{a}, {b}]")
    i15 = h * float(np.dot(_GL15_W, ys[:15]))
    i31 = h * float(np.dot(_GL31_W, ys[15:]))
    return i31, abs(i31 - i15)


def integrate_semi_infinite(f: Callable, rel_tol: float = 1e-8, *,
                            initial_scale: float = 1.0,
                            max_doublings: int = 60,
                            max_refinements: int = 4000) -> QuadratureResult:
    """Integrate f over [0, inf) for integrands with (at least) exponential decay.

    f is called with numpy arrays of nodes and must return the integrand
    values elementwise. The upper limit doubles from `initial_scale` until
    the outermost segment contributes less than rel_tol/10 of the running
    total while decreasing; the unintegrated tail is bounded by a geometric
    envelope fitted to the last two segments and charged to abs_error.
    """
    if not (rel_tol > 0):
        raise DomainError("rel_tol must be positive")
    if not (initial_scale > 0):
        raise DomainError("initial_scale must be positive")

    evals = 0

    def run_panel(a: float, b: float) -> tuple[float, float]:
        nonlocal evals
        evals += 46
        return _panel(f, a, b)

    c = initial_scale
    val, err = run_panel(0.0, c)
    heap: list[tuple[float, float, float, float]] = [(-err, 0.0, c, val)]
    total = val

    # geometric extension with tail envelope
    prev = abs(val)
    tail = 0.0
    a, b = c, 2.0 * c
    for _ in range(max_doublings):
        v, e = run_panel(a, b)
        heapq.heappush(heap, (-e, a, b, v))
        total += v
        if abs(v) <= prev and abs(v) < max(rel_tol / 10.0 * abs(total), _ABS_FLOOR):
            ratio = abs(v) / prev if prev > 0 else 0.0
            tail = abs(v) * ratio / (1.0 - ratio) if ratio < 1.0 else abs(v)
            break
        prev = abs(v)
        a, b = b, 2.0 * b
    else:
        raise AccuracyError(
            "semi-infinite extension did not converge; integrand may decay too slowly",
            best=QuadratureResult(total, abs(total), max(evals, 1), b),
        )
    upper = b

    # global refinement of the worst panel
    for _ in range(max_refinements):
        sum_err = -sum(item[0] for item in heap)
        if sum_err <= max(rel_tol * abs(total) / 2.0, _ABS_FLOOR):
            break
        _, pa, pb, pv = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        vl, el = run_panel(pa, mid)
        vr, er = run_panel(mid, pb)
        total += (vl + vr) - pv
        heapq.heappush(heap, (-el, pa, mid, vl))
        heapq.heappush(heap, (-er, mid, pb, vr))
    else:
        sum_err = -sum(item[0] for item in heap)
        raise AccuracyError(
            "quadrature did not reach the requested tolerance",
            best=QuadratureResult(total, sum_err + tail, evals, upper),
        )

    sum_err = -sum(item[0] for item in heap)
    return QuadratureResult(total, sum_err + tail, evals, upper)


def sum_until_converged(term: Callable[[int], float], rel_tol: float = 1e-8, *,
                        min_terms: int = 2, start: int = 1,
                        max_terms: int = SCALAR_SERIES_CEILING) -> tuple[float, TruncationReport]:
    """Sum term(start) + term(start+1) + ... until the tail is negligible.

    Terms must eventually decrease monotonically in magnitude. Convergence
    requires the last increment to satisfy |t_n| <= rel_tol * |sum| and the
    geometric tail bound |t_n| r/(1-r) (r from the last two terms) to fit in
    the same budget. Raises AccuracyError with the partial sum when the term
    ceiling is hit.
    """
    if not (rel_tol > 0):
        raise DomainError("rel_tol must be positive")
    if min_terms < 1:
        raise DomainError("min_terms must be >= 1")

    acc = 0.0
    prev_mag = math.inf
    n = start
    count = 0
    t = 0.0
    while count < max_terms:
        t = float(term(n))
        acc += t
        count += 1
        mag = abs(t)
        if count >= min_terms and mag <= rel_tol * abs(acc):
            if mag == 0.0:
                return acc, TruncationReport(n, t, True)
            ratio = mag / prev_mag if prev_mag > 0 else 0.0
            tail = mag * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
            if tail <= rel_tol * abs(acc):
                return acc, TruncationReport(n, t, True)
        prev_mag = mag if mag > 0 else prev_mag
        n += 1
    raise AccuracyError(
        f"series did not converge within {max_terms} terms",
        best=(acc, TruncationReport(n - 1, t, False)),
    )


def log_det_truncated(builder: Callable[[int, int], float], size: int) -> float:
    """ln det(I - A) for the dense matrix A[i, j] = builder(i, j).

    Uses LU with partial pivoting (LAPACK via slogdet). The physical kernels
    produce determinants in (0, 1]; a vanishing or negative determinant
    raises NumericalSingularityError.
    """
    if size < 1:
        raise DomainError("size must be >= 1")
    a = np.empty((size, size), dtype=float)
    for i in range(size):
        for j in range(size):
            a[i, j] = builder(i, j)
    if np.any(~np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return log_det_stack((np.eye(size) - a)[None, :, :])[0]


def log_det_stack(mats: np.ndarray) -> np.ndarray:
    """ln det for a stack of matrices (m, N, N), each with positive determinant."""
    sign, logdet = np.linalg.slogdet(mats)
    if np.any(sign == 0):
        raise NumericalSingularityError("singular matrix in log-determinant")
    if np.any(sign < 0):
        raise NumericalSingularityError("negative determinant; kernel is outside its contract")
    return logdet
