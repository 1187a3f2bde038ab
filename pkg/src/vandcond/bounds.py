"""Condition-number lower bounds, separation certificates, and arc search.

Every bound evaluator returns a :class:`BoundReport` whose value lives in
log10 so that estimates spanning hundreds of decades stay exact.  Bounds
derived from the compact closed-form inverse carry ``variant="paper"`` and
may exceed the measured condition number on exactly uniform knots (the
evaluation on the plain roots of unity is kept as a regression probe);
bounds carrying ``variant="corrected"`` or no variant are conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cauchyinv import InverseVariant, _log_products, cv_inverse_log_entries
from .errors import (ArcTooLong, BadShape, KnotCollision, NoPositiveBound,
                     NotEnoughSmallKnots, NotSeparated, OddSize, UnitRadius,
                     VacuousCertificate)
from .knotgen import DISTINCT_TOL, KnotVector
from .spectral import max_abs_on_circle, poly_from_roots, singular_values
from .structmat import cv_knots, vandermonde

#: Catalan's constant, hard-coded to 18 digits for the integral cross-check.
CATALAN = 0.915965594177219015

_LOG2 = math.log10(2.0)

#: Knots within this absolute distance of the inflated disc boundary count
#: as exterior, keeping the separation premise valid.
BOUNDARY_TOL = 1e-14

EASY = "easy"
CLUSTER = "cluster"
REFINED_NORM = "refined-norm"
CV_INVERSE = "cv-inverse"
CIRCLE_VALUE = "circle-value"
COEFF_NORM = "coeff-norm"
QC_BASE = "quasi-cyclic-base"
QC_COARSE = "quasi-cyclic-coarse"
QC_REFINED = "quasi-cyclic-refined"
QC_PRODUCT = "quasi-cyclic-product"
QC_INTEGRAL = "quasi-cyclic-integral"
DFT_BLOCK = "dft-block"
SEPARATION_SIGMA = "separation-sigma"
ARC_CV = "arc-cv"
ARC_VANDERMONDE = "arc-vandermonde"


@dataclass
class BoundReport:
    """One evaluated lower bound: identifier, log10 value, and context."""

    bound_id: str
    log10value: float
    variant: str | None
    params: dict
    applicable: bool = True
    reason: str = ""


@dataclass(frozen=True)
class SeparationCertificate:
    """Witness for an arc-based bound.

    An arc of `l` consecutive column-grid knots spans a chord with midpoint
    `c` and radius `r`.  `m_minus` row knots fall strictly inside the
    inflated disc of radius eta*r, `m_plus` outside or on its boundary, and
    `rho_bar = l - m_minus` is the exponent the bound grows with.
    """

    j_lo: int
    j_hi: int
    l: int
    c: complex
    r: float
    eta: float
    m_minus: int
    m_plus: int
    rho_bar: int


def _safe_log10(x: float) -> float:
    return -math.inf if x == 0.0 else math.log10(x)


def _log10_s_plus(s: KnotVector) -> float:
    return _safe_log10(s.max_modulus())


def bound_easy(s: KnotVector) -> BoundReport:
    """kappa >= max(1, s_+^(n-1) / sqrt(n)) with s_+ the largest knot modulus."""
    n = len(s)
    s_plus = s.max_modulus()
    raw = (n - 1) * _safe_log10(s_plus) - 0.5 * math.log10(n) if n > 1 else 0.0
    value = max(0.0, raw)
    return BoundReport(EASY, value, None, {"n": n, "s_plus": s_plus})


def bound_cluster(s: KnotVector, k: int, nu: float,
                  norm_mode: str = "literal") -> BoundReport:
    """Lower bound driven by k knots of modulus at most 1/nu.

    `literal` uses |V| = max(1, s_+^(n-1)) and the divisor
    sqrt(k) * max(k, nu/(nu-1)) exactly as the cluster estimate states.
    `computed-norm` substitutes the spectral norm for |V| and resolves the
    max clause to nu/(nu-1); that combination reproduces the reference
    experiment column for scaled clusters (verified to a fraction of a
    percent) and is reported side by side with the literal form.
    """
    if nu <= 1.0:
        raise ValueError("nu must exceed 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    if norm_mode not in ("literal", "computed-norm"):
        raise ValueError(f"unknown norm_mode {norm_mode!r}")
    moduli = np.abs(s.as_array())
    small = int(np.sum(moduli <= (1.0 / nu) * (1.0 + 1e-12)))
    if small < k:
        raise NotEnoughSmallKnots(
            f"need {k} knots with modulus <= {1.0 / nu:.6g}, found {small}")
    n = len(s)
    if norm_mode == "literal":
        log_norm = max(0.0, (n - 1) * _log10_s_plus(s))
        log_div = 0.5 * math.log10(k) + math.log10(max(k, nu / (nu - 1.0)))
        norm_tag = "max-entry"
        div_tag = "max(k, nu/(nu-1))"
    else:
        log_norm = math.log10(singular_values(vandermonde(s)).sigma1)
        log_div = 0.5 * math.log10(k) + math.log10(nu / (nu - 1.0))
        norm_tag = "spectral"
        div_tag = "nu/(nu-1)"
    value = log_norm + (k - 1) * math.log10(nu) - log_div
    return BoundReport(CLUSTER, value, None,
                       {"n": n, "k": k, "nu": nu, "norm": norm_tag,
                        "denominator": div_tag, "log10_norm": log_norm})


def bound_refined_norm(s: KnotVector) -> BoundReport:
    """Geometric-sum norm bound ||V|| >= (s_+^n - 1) / ((s_+ - 1) sqrt(n)).

    The report value is the norm bound itself; dividing by the sqrt(n) cap
    on the smallest singular value gives the kappa bound, recorded in
    params as `log10_kappa_bound`.
    """
    n = len(s)
    s_plus = s.max_modulus()
    if abs(s_plus - 1.0) < 1e-12:
        raise UnitRadius("largest knot modulus is 1; geometric sum degenerates")
    # log10(s_+^n - 1) without forming s_+^n when it overflows.
    top = n * _safe_log10(s_plus)
    if top > 300.0:
        log_num = top
    else:
        log_num = math.log10(abs(s_plus ** n - 1.0))
    value = log_num - math.log10(abs(s_plus - 1.0)) - 0.5 * math.log10(n)
    return BoundReport(REFINED_NORM, value, None,
                       {"n": n, "s_plus": s_plus,
                        "log10_kappa_bound": value - 0.5 * math.log10(n)})


def _nudge_f(f: complex, n: int) -> complex:
    return f * complex(math.cos(2.0 * math.pi * 2.0 ** -40 / n),
                       math.sin(2.0 * math.pi * 2.0 ** -40 / n))


def _log10_max_pow_diff(sp: np.ndarray, f: complex, n: int) -> float:
    from .cauchyinv import _pow_diff_logs

    mag, _ = _pow_diff_logs(sp, f, n)
    return float(np.max(mag))


def bound_cv(s: KnotVector, f: complex, variant: InverseVariant,
             tol: float = DISTINCT_TOL) -> BoundReport:
    """kappa >= sqrt(n) * ||Cinv|| / max_i |s_i^n - f^n| for the CV matrix.

    ||Cinv|| is lower-bounded by the largest inverse-entry magnitude under
    the chosen variant, evaluated in the log domain so any scale works;
    when n <= 512 the exact SVD norm of the inverse is recorded alongside.
    On a grid collision f is nudged by the angle 2^-40 * 2 pi / n once.
    """
    f = complex(f)
    if abs(abs(f) - 1.0) > 1e-12:
        raise ValueError("f must lie on the unit circle")
    sp = s.as_array()
    n = len(sp)
    nudged = False
    gap = np.min(np.abs(sp[:, None] - cv_knots(n, f)[None, :]))
    if gap <= tol:
        f = _nudge_f(f, n)
        nudged = True
        gap2 = np.abs(sp[:, None] - cv_knots(n, f)[None, :])
        if gap2.min() <= tol:
            i, j = np.unravel_index(int(gap2.argmin()), gap2.shape)
            raise KnotCollision(int(i), int(j), float(gap2.min()))
    logs, _ = cv_inverse_log_entries(s, f, variant, tol)
    log_inv_entry = float(np.max(logs))
    log_pow = _log10_max_pow_diff(sp, f, n)
    value = 0.5 * math.log10(n) + log_inv_entry - log_pow
    params = {"n": n, "f": f, "nudged": nudged,
              "log10_inv_norm_entry": log_inv_entry,
              "log10_max_pow_diff": log_pow}
    if n <= 512:
        sv = np.linalg.svd(1.0 / (sp[:, None] - cv_knots(n, f)[None, :]),
                           compute_uv=False)
        if sv[-1] > 0:
            log_inv_svd = -math.log10(float(sv[-1]))
            params["log10_inv_norm_svd"] = log_inv_svd
            params["log10value_svd"] = 0.5 * math.log10(n) + log_inv_svd - log_pow
    return BoundReport(CV_INVERSE, value, variant.value, params)


def _log10_l2_from_logs(logmags: np.ndarray) -> float:
    finite = logmags[np.isfinite(logmags)]
    if finite.size == 0:
        return -math.inf
    peak = float(np.max(finite))
    return peak + 0.5 * math.log10(float(np.sum(10.0 ** (2.0 * (finite - peak)))))


def bound_circle_value(s: KnotVector, grid: int = 0) -> BoundReport:
    """kappa >= sqrt(n) * max_{|f|=1} |s(f)| / 2, via grid + refinement.

    Applicable only when all knots lie in the closed unit disc (the
    divisor 2 caps |s_i - f| there); the gate is recorded, not enforced.
    Params carry the sampled-norm variant ||v|| / 2 on both the n-point and
    the (n+1)-point root grids since the sampling index is ambiguous.
    """
    pts = s.as_array()
    n = len(pts)
    f_star, log_max = max_abs_on_circle(s, grid)
    value = 0.5 * math.log10(n) + log_max - _LOG2
    grid_n = np.exp(2j * np.pi * np.arange(n + 1) / n)          # i = 0..n on omega_n
    grid_n1 = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))   # i = 0..n on omega_{n+1}
    mags_n, _ = _log_products(grid_n, pts)
    mags_n1, _ = _log_products(grid_n1, pts)
    s_plus = s.max_modulus()
    ok = s_plus <= 1.0 + 1e-12
    return BoundReport(
        CIRCLE_VALUE, value, InverseVariant.PAPER.value,
        {"n": n, "f_star": f_star, "log10_circle_max": log_max,
         "log10_halfnorm_grid_n": _log10_l2_from_logs(mags_n) - _LOG2,
         "log10_halfnorm_grid_n1": _log10_l2_from_logs(mags_n1) - _LOG2,
         "s_plus": s_plus},
        applicable=ok,
        reason="" if ok else f"knots leave the unit disc (s_+ = {s_plus:.6g})")


def bound_coeff_norm(s: KnotVector) -> BoundReport:
    """kappa >= 0.5 ||coeff|| sqrt(n+1) for the monic coefficient vector."""
    n = len(s)
    coeff = poly_from_roots(s)
    log_norm = math.log10(float(np.linalg.norm(coeff)))
    value = math.log10(0.5) + log_norm + 0.5 * math.log10(n + 1)
    s_plus = s.max_modulus()
    ok = s_plus <= 1.0 + 1e-12
    return BoundReport(
        COEFF_NORM, value, InverseVariant.PAPER.value,
        {"n": n, "log10_coeff_norm": log_norm, "s_plus": s_plus},
        applicable=ok,
        reason="" if ok else f"knots leave the unit disc (s_+ = {s_plus:.6g})")


QC_MODES = ("base", "coarse", "refined", "product", "integral")

_QC_IDS = {"base": QC_BASE, "coarse": QC_COARSE, "refined": QC_REFINED,
           "product": QC_PRODUCT, "integral": QC_INTEGRAL}


def _is_pow2(q: int) -> bool:
    return q >= 1 and (q & (q - 1)) == 0


def _staging_integral_log10(q: float, panels: int = 4096) -> float:
    """Simpson value of the circle-distance staging integral, in log10.

    Closed form: the natural-log integral equals q * 2 G / pi with G
    Catalan's constant; the quadrature is cross-checked against it.
    """
    x = np.linspace(0.0, q, 2 * panels + 1)
    y = np.log(2.0 * np.cos((0.5 - x / q) * np.pi / 2.0))
    w = np.ones_like(x)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integral = float(np.sum(w * y) * (x[1] - x[0]) / 3.0)
    return integral / math.log(10.0)


def bound_quasi_cyclic(q: int, mode: str) -> BoundReport:
    """Staged lower bounds for the quasi-cyclic knot family, n = 3q.

    base:     2^(q/2) sqrt(n)     (every factor staged at sqrt(2))
    coarse:   18^(q/6) sqrt(n)    (one interior staging point)
    refined:  (2 cos(pi/12) sqrt(6))^(q/3) sqrt(n)
    product:  full discrete staging prod max(sqrt(2), 2 cos((1/2 - i/q) pi/2))
    integral: exp(q * 2 G / pi), reported WITHOUT the sqrt(n) factor to
              match the kappa' reference column.
    """
    if mode not in QC_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if q < 1:
        raise ValueError("q must be >= 1")
    n = 3 * q
    half_log_n = 0.5 * math.log10(n)
    params = {"q": q, "n": n, "mode": mode}
    if mode in ("base", "product") and not _is_pow2(q):
        raise BadShape(f"mode {mode!r} requires q to be a power of two (q={q})")
    if mode == "base":
        value = (q / 2.0) * _LOG2 + half_log_n
    elif mode == "coarse":
        value = (q / 6.0) * math.log10(18.0) + half_log_n
        params["staging_exact"] = (q % 12 == 0)
    elif mode == "refined":
        factor = 2.0 * math.cos(math.pi / 12.0) * math.sqrt(6.0)
        value = (q / 3.0) * math.log10(factor) + half_log_n
        params["staging_exact"] = (q % 12 == 0)
    elif mode == "product":
        i = np.arange(q)
        stages = np.maximum(math.sqrt(2.0),
                            2.0 * np.cos((0.5 - i / q) * np.pi / 2.0))
        value = float(np.sum(np.log10(stages))) + half_log_n
    else:  # integral
        value = _staging_integral_log10(q)
        params["log10_closed_form"] = q * 2.0 * CATALAN / math.pi / math.log(10.0)
        params["panels"] = 4096
    return BoundReport(_QC_IDS[mode], value, InverseVariant.PAPER.value, params)


def bound_dft_block(n: int, mode: str) -> BoundReport:
    """Lower bounds for the half-size leading block of the n-point DFT matrix.

    base:     2^(n/4 - 1) sqrt(n) as stated; params also carry the
              2^(q/2) sqrt(q) form the reference column actually prints.
    integral: exp(q * 2 G / pi) with q = n/2, the kappa'-style analogue.
    """
    if mode not in ("base", "integral"):
        raise ValueError(f"unknown mode {mode!r}")
    if n % 2 != 0 or n < 2:
        raise OddSize(f"n must be even and >= 2, got {n}")
    q = n // 2
    params = {"n": n, "q": q, "mode": mode}
    if mode == "base":
        value = (n / 4.0 - 1.0) * _LOG2 + 0.5 * math.log10(n)
        params["log10_table_column"] = (q / 2.0) * _LOG2 + 0.5 * math.log10(q)
    else:
        value = _staging_integral_log10(q)
        params["log10_closed_form"] = q * 2.0 * CATALAN / math.pi / math.log(10.0)
        params["panels"] = 4096
    return BoundReport(DFT_BLOCK, value, InverseVariant.PAPER.value, params)


def is_separated(S: KnotVector, T: KnotVector, eta: float, c: complex) -> bool:
    """True iff |t - c| <= |s - c| / eta for every s in S, t in T."""
    if eta <= 1.0:
        raise ValueError("eta must exceed 1")
    ds = np.abs(S.as_array() - complex(c))
    dt = np.abs(T.as_array() - complex(c))
    return bool(np.max(dt) <= np.min(ds) / eta)


def sigma_bound_separated(S: KnotVector, T: KnotVector, eta: float,
                          c: complex, rho: int) -> BoundReport:
    """1 / sigma_rho(C) >= (eta - 1) eta^(rho - 1) delta for separated sets.

    C is the Cauchy matrix on (S, T) and delta = min_i |s_i - c|.  The
    growth factor is implemented as (eta - 1), the sign that makes the
    bound positive for eta > 1.
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if not is_separated(S, T, eta, c):
        raise NotSeparated(f"sets are not ({eta}, {c})-separated")
    delta = float(np.min(np.abs(S.as_array() - complex(c))))
    if delta == 0.0:
        value = -math.inf
    else:
        value = (math.log10(eta - 1.0) + (rho - 1) * math.log10(eta)
                 + math.log10(delta))
    ok = math.isfinite(value)
    return BoundReport(SEPARATION_SIGMA, value, None,
                       {"m": len(S), "l": len(T), "eta": eta, "rho": rho,
                        "delta": delta, "c": complex(c)},
                       applicable=ok,
                       reason="" if ok else "a row knot coincides with the center")


def arc_certificate(s: KnotVector, f: complex, j_lo: int, j_hi: int,
                    eta: float) -> SeparationCertificate:
    """Build the separation witness for the arc t_{j_lo} .. t_{j_hi}.

    The center is the chord midpoint, the radius the half-chord length;
    row knots strictly inside the disc of radius eta*r count toward
    m_minus, knots on the boundary (within 1e-14) count as exterior.
    """
    if eta <= 1.0:
        raise ValueError("eta must exceed 1")
    n = len(s)
    if not (0 <= j_lo <= j_hi < n):
        raise ValueError("need 0 <= j_lo <= j_hi < n")
    l = j_hi - j_lo + 1
    if l > n / 2.0:
        raise ArcTooLong(f"arc of {l} knots exceeds n/2 = {n / 2:g}")
    t = complex(f) * np.exp(2j * np.pi * np.arange(n) / n)
    c = 0.5 * (t[j_lo] + t[j_hi])
    r = float(abs(c - t[j_lo]))
    d = np.abs(s.as_array() - c)
    m_minus = int(np.sum(d < eta * r - BOUNDARY_TOL))
    return SeparationCertificate(j_lo, j_hi, l, complex(c), r, float(eta),
                                 m_minus, n - m_minus, l - m_minus)


def bound_arc(s: KnotVector, cert: SeparationCertificate,
              form: str = "vandermonde") -> BoundReport:
    """Arc bound: log10 ||Cinv|| >= rho_bar log10(eta) + log10((eta-1) r).

    The `vandermonde` form adds 0.5 log10(n) - log10(2), turning the CV
    inverse-norm bound into a condition-number bound for unit-disc knots.
    """
    if form not in ("cv", "vandermonde"):
        raise ValueError(f"unknown form {form!r}")
    if cert.rho_bar <= 0:
        raise VacuousCertificate(f"rho_bar = {cert.rho_bar} is not positive")
    n = len(s)
    if cert.r > 0.0:
        value = (cert.rho_bar * math.log10(cert.eta)
                 + math.log10((cert.eta - 1.0) * cert.r))
    else:
        value = -math.inf
    params = {"n": n, "j_lo": cert.j_lo, "j_hi": cert.j_hi, "l": cert.l,
              "eta": cert.eta, "r": cert.r, "c": cert.c,
              "m_minus": cert.m_minus, "m_plus": cert.m_plus,
              "rho_bar": cert.rho_bar}
    if form == "cv":
        ok = math.isfinite(value)
        return BoundReport(ARC_CV, value, None, params, applicable=ok,
                           reason="" if ok else "degenerate arc (r = 0)")
    value = value + 0.5 * math.log10(n) - _LOG2
    s_plus = s.max_modulus()
    params["s_plus"] = s_plus
    ok = math.isfinite(value) and s_plus <= 1.0 + 1e-12
    reason = ""
    if not math.isfinite(value):
        reason = "degenerate arc (r = 0)"
    elif s_plus > 1.0 + 1e-12:
        reason = f"knots leave the unit disc (s_+ = {s_plus:.6g})"
    return BoundReport(ARC_VANDERMONDE, value, None, params,
                       applicable=ok, reason=reason)


def best_arc_search(s: KnotVector, f: complex,
                    eta_grid=(1.1, 1.2, 1.5), exhaustive: bool = False):
    """Scan arcs and inflation factors for the best arc-based kappa bound.

    Arcs (j_lo, j_hi) with 2 <= l <= n/2 are scanned at stride
    max(1, n // 64) (stride 1 with `exhaustive`, allowed for n <= 128),
    jointly with every eta in `eta_grid`.  Returns the certificate and
    report maximizing the unit-disc arc bound, ties broken toward smaller
    l, then j_lo, then eta.  Raises NoPositiveBound when no certificate
    produces a bound above 1 (log10 value > 0), which is the expected
    outcome for evenly spaced knots.
    """
    n = len(s)
    eta_grid = tuple(float(e) for e in eta_grid)
    if not eta_grid or any(e <= 1.0 for e in eta_grid):
        raise ValueError("eta_grid values must all exceed 1")
    if exhaustive and n > 128:
        raise ValueError("exhaustive scan supported only for n <= 128")
    stride = 1 if exhaustive else max(1, n // 64)
    pts = s.as_array()
    t = complex(f) * np.exp(2j * np.pi * np.arange(n) / n)
    half_log_n = 0.5 * math.log10(n)
    best = None  # (value, l, j_lo, eta, cert)
    for j_lo in range(0, n, stride):
        max_l = int(n / 2.0)
        for l in range(2, max_l + 1, stride):
            j_hi = j_lo + l - 1
            if j_hi >= n:
                break
            c = 0.5 * (t[j_lo] + t[j_hi])
            r = float(abs(c - t[j_lo]))
            if r <= 0.0:
                continue
            d = np.abs(pts - c)
            for eta in eta_grid:
                m_minus = int(np.sum(d < eta * r - BOUNDARY_TOL))
                rho_bar = l - m_minus
                if rho_bar <= 0:
                    continue
                value = (rho_bar * math.log10(eta)
                         + math.log10((eta - 1.0) * r) + half_log_n - _LOG2)
                key = (value, -l, -j_lo, -eta)
                if best is None or key > (best[0], -best[1], -best[2], -best[3]):
                    cert = SeparationCertificate(j_lo, j_hi, l, complex(c), r,
                                                 eta, m_minus, n - m_minus,
                                                 rho_bar)
                    best = (value, l, j_lo, eta, cert)
    if best is None or best[0] <= 0.0:
        raise NoPositiveBound(
            "no arc certificate yields a bound above 1; "
            "knots are evenly spaced or n is too small")
    cert = best[4]
    return cert, bound_arc(s, cert, form="vandermonde")
