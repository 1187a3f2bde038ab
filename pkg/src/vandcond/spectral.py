"""Reference numerics: SVD spectra, norms, circle maximization, and GENP."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cauchyinv import _log_products
from .errors import ConvergenceFailure, RangeOverflow, ZeroPivot
from .knotgen import KnotVector
from .structmat import DenseMatrix, dft

#: Pivots at or below this magnitude signal a structurally singular block
#: rather than mere ill-conditioning.
ZERO_PIVOT_TOL = 1e-300

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class SpectrumSummary:
    """Full singular spectrum with condition number and a trust flag.

    `trustworthy` is False once kappa exceeds 1 / (max(rows, cols) * eps):
    beyond that the smallest computed singular value is dominated by
    backward-error noise of order eps * sigma_1, so kappa is reported as-is
    but carries no reproducible digits.
    """

    sigma: np.ndarray
    sigma1: float
    sigma_min: float
    kappa: float
    log10kappa: float
    trustworthy: bool


@dataclass(frozen=True)
class GenpStats:
    """Mean/std of relative residuals from the no-pivoting solve experiment."""

    n: int
    trials: int
    seed: int
    mean_rn: float
    std_rn: float


def singular_values(M: DenseMatrix) -> SpectrumSummary:
    """Full singular spectrum of a dense matrix in double precision."""
    try:
        sigma = np.linalg.svd(M.data, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    sigma1 = float(sigma[0])
    sigma_min = float(sigma[-1])
    if sigma_min > 0.0:
        kappa = sigma1 / sigma_min
        log10kappa = math.log10(sigma1) - math.log10(sigma_min)
    else:
        kappa = math.inf
        log10kappa = math.inf
    trust_cap = 1.0 / (max(M.rows, M.cols) * _EPS)
    return SpectrumSummary(sigma, sigma1, sigma_min, kappa, log10kappa,
                           trustworthy=(kappa <= trust_cap))


def norms(M: DenseMatrix):
    """(column-sum, row-sum, spectral) norms."""
    a = np.abs(M.data)
    norm1 = float(a.sum(axis=0).max())
    norm_inf = float(a.sum(axis=1).max())
    norm2 = float(np.linalg.svd(M.data, compute_uv=False)[0])
    return norm1, norm_inf, norm2


def poly_from_roots(knots: KnotVector) -> np.ndarray:
    """Monic coefficients of prod (x - s_i), ascending powers, length n+1."""
    pts = knots.as_array()
    n = len(pts)
    if n > 4096:
        raise ValueError("degree capped at 4096")
    coeff = np.zeros(n + 1, dtype=np.complex128)
    coeff[0] = 1.0
    deg = 0
    # Overflow surfaces as non-finite coefficients, detected below.
    with np.errstate(over="ignore", invalid="ignore"):
        for z in pts:
            shifted = np.zeros(n + 1, dtype=np.complex128)
            shifted[1:deg + 2] = coeff[:deg + 1]
            shifted[:deg + 1] -= z * coeff[:deg + 1]
            coeff = shifted
            deg += 1
    if not np.all(np.isfinite(coeff)):
        raise RangeOverflow(math.inf, where="polynomial coefficients")
    return coeff


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def max_abs_on_circle(knots: KnotVector, grid: int = 0):
    """Maximize |prod (f - s_i)| over f on the unit circle.

    A uniform angular grid scan picks the best cell, then golden-section
    refinement narrows the angle to 1e-12.  The result lower-bounds the true
    supremum by construction.  `grid=0` selects max(1024, 16 n): the product
    has at most n oscillations around the circle, so at least 16 samples
    per oscillation land in every cell before refinement.
    """
    pts = knots.as_array()
    n = len(pts)
    if grid <= 0:
        grid = max(1024, 16 * n)
    if grid < 8:
        raise ValueError("grid must be >= 8")
    thetas = 2.0 * np.pi * np.arange(grid) / grid
    mags, _ = _log_products(np.exp(1j * thetas), pts)
    best = int(np.argmax(mags))

    def g(theta: float) -> float:
        mag, _ = _log_products(np.array([np.exp(1j * theta)]), pts)
        return float(mag[0])

    span = 2.0 * np.pi / grid
    lo = thetas[best] - span
    hi = thetas[best] + span
    # Golden-section search for the maximum of g on [lo, hi].
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    g1, g2 = g(x1), g(x2)
    while b - a > 1e-12:
        if g1 < g2:
            a, x1, g1 = x1, x2, g2
            x2 = a + _GOLDEN * (b - a)
            g2 = g(x2)
        else:
            b, x2, g2 = x2, x1, g1
            x1 = b - _GOLDEN * (b - a)
            g1 = g(x1)
    theta_best = 0.5 * (a + b)
    candidates = [(g(theta_best), theta_best), (float(mags[best]), float(thetas[best]))]
    log10_max, theta_star = max(candidates)
    return complex(np.exp(1j * theta_star)), float(log10_max)


def _genp_factor(a: np.ndarray):
    """LU without any row or column interchange; returns (L, U, min |pivot|)."""
    n = a.shape[0]
    U = np.array(a, dtype=np.complex128)
    L = np.eye(n, dtype=np.complex128)
    min_pivot = math.inf
    for k in range(n - 1):
        piv = U[k, k]
        if abs(piv) <= ZERO_PIVOT_TOL:
            raise ZeroPivot(k, abs(piv))
        min_pivot = min(min_pivot, abs(piv))
        mult = U[k + 1:, k] / piv
        L[k + 1:, k] = mult
        U[k + 1:, k:] -= np.outer(mult, U[k, k:])
    last = abs(U[n - 1, n - 1])
    if last <= ZERO_PIVOT_TOL:
        raise ZeroPivot(n - 1, last)
    min_pivot = min(min_pivot, last)
    return L, U, min_pivot


def _lu_solve(L, U, b):
    y = scipy.linalg.solve_triangular(L, b, lower=True, unit_diagonal=True)
    return scipy.linalg.solve_triangular(U, y, lower=False)


def genp_solve(A: DenseMatrix, b):
    """Solve A x = b by Gaussian elimination with no pivoting.

    Returns the solution and the smallest pivot magnitude encountered, the
    standard diagnostic for singular or ill-conditioned leading blocks.
    """
    if A.rows != A.cols:
        raise ValueError("matrix must be square")
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != A.rows:
        raise ValueError("right-hand side length mismatch")
    L, U, min_pivot = _genp_factor(A.data)
    return _lu_solve(L, U, b), min_pivot


def genp_residual_experiment(n: int, trials: int, seed: int) -> GenpStats:
    """Relative residuals of no-pivot solves on the n-point Fourier matrix.

    Each trial draws a real standard normal right-hand side from a Philox
    stream spawned off (seed, trial index), solves with the shared LU
    factors, and records ||A x - b|| / ||b||.  Bit-reproducible for a fixed
    (n, trials, seed).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    A = dft(n)
    L, U, _ = _genp_factor(A.data)
    streams = np.random.SeedSequence(seed).spawn(trials)
    rns = np.empty(trials)
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(streams[t]))
        b = rng.standard_normal(n).astype(np.complex128)
        x = _lu_solve(L, U, b)
        rns[t] = np.linalg.norm(A.data @ x - b) / np.linalg.norm(b)
    mean = float(rns.mean())
    std = float(rns.std(ddof=1)) if trials > 1 else 0.0
    return GenpStats(n, trials, seed, mean, std)
