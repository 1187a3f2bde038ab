import cmath
import math

import numpy as np
import pytest

from vandcond import bounds, knotgen, spectral, structmat
from vandcond.bounds import SeparationCertificate
from vandcond.cauchyinv import InverseVariant
from vandcond.errors import (ArcTooLong, BadShape, NoPositiveBound,
                             NotEnoughSmallKnots, NotSeparated, OddSize,
                             UnitRadius, VacuousCertificate)

PAPER = InverseVariant.PAPER
CORRECTED = InverseVariant.CORRECTED


def kv(points):
    return knotgen.make_knot_vector(points)


def measured_log10_kappa(knots):
    return spectral.singular_values(structmat.vandermonde(knots)).log10kappa


class TestBoundEasy:
    def test_outlier_64(self):
        rep = bounds.bound_easy(knotgen.single_outlier(64, 1.140625))
        assert abs(10 ** rep.log10value - 497.636) < 0.01

    def test_outlier_256_huge(self):
        rep = bounds.bound_easy(knotgen.single_outlier(256, 10.0))
        # 10^255 / 16 = 6.25e253, exactly representable in the log domain.
        assert abs(rep.log10value - (255.0 - math.log10(16.0))) < 1e-12

    def test_unit_disc_clamps_to_one(self):
        rep = bounds.bound_easy(knotgen.roots_of_unity(8))
        assert rep.log10value == 0.0

    def test_single_zero_knot(self):
        rep = bounds.bound_easy(kv([0.0]))
        assert rep.log10value == 0.0


class TestBoundCluster:
    def test_literal_direct_formula(self):
        knots = knotgen.scaled_cluster(64, 8, 0.5)
        rep = bounds.bound_cluster(knots, 8, 2.0, "literal")
        expect = 2 ** 7 / (math.sqrt(8) * 8)
        assert abs(10 ** rep.log10value - expect) < 1e-9
        assert abs(10 ** rep.log10value - 5.66) < 0.01

    def test_computed_norm_reproduces_reference(self):
        knots = knotgen.scaled_cluster(64, 8, 0.5)
        rep = bounds.bound_cluster(knots, 8, 2.0, "computed-norm")
        # Independent oracle: spectral norm from SVD plugged into the formula.
        norm = np.linalg.svd(structmat.vandermonde(knots).data,
                             compute_uv=False)[0]
        expect = norm * 2 ** 7 / (math.sqrt(8) * 2.0)
        assert abs(10 ** rep.log10value - expect) < 1e-6 * expect
        assert abs(10 ** rep.log10value - 2.44e2) / 2.44e2 < 0.15

    def test_degenerate_k1(self):
        knots = knotgen.scaled_cluster(4, 1, 0.5)
        rep = bounds.bound_cluster(knots, 1, 2.0, "literal")
        assert abs(10 ** rep.log10value - 0.5) < 1e-12  # 1 / max{1, 2}

    def test_not_enough_small_knots(self):
        with pytest.raises(NotEnoughSmallKnots):
            bounds.bound_cluster(knotgen.roots_of_unity(8), 2, 2.0)


class TestBoundRefinedNorm:
    def test_exact_geometric_sum(self):
        rep = bounds.bound_refined_norm(knotgen.single_outlier(8, 2.0))
        assert abs(10 ** rep.log10value - 255.0 / math.sqrt(8)) < 1e-9

    def test_small_case_arithmetic(self):
        rep = bounds.bound_refined_norm(kv([10.0, 0.1, 0.2, 0.3]))
        assert abs(10 ** rep.log10value - (10 ** 4 - 1) / (9 * 2)) < 1e-9

    def test_refines_easy_bound(self):
        knots = knotgen.single_outlier(64, 1.140625)
        refined = bounds.bound_refined_norm(knots)
        easy = bounds.bound_easy(knots)
        assert refined.params["log10_kappa_bound"] >= easy.log10value

    def test_unit_radius(self):
        with pytest.raises(UnitRadius):
            bounds.bound_refined_norm(knotgen.roots_of_unity(8))


class TestBoundCv:
    def test_corrected_consistent_with_unit_kappa(self):
        rep = bounds.bound_cv(knotgen.roots_of_unity(8), cmath.exp(0.1j),
                              CORRECTED)
        assert rep.log10value <= 1e-9
        # SVD oracle of the CV inverse agrees about the sign.
        assert rep.params["log10value_svd"] <= 1e-9

    def test_paper_variant_exceeds_unit_kappa(self):
        # Discrepancy probe: on uniform knots the compact-form bound exceeds
        # the measured condition number 1.
        rep = bounds.bound_cv(knotgen.roots_of_unity(8), cmath.exp(0.1j), PAPER)
        kappa = measured_log10_kappa(knotgen.roots_of_unity(8))
        assert rep.log10value > kappa + 0.5

    def test_quasi_cyclic_witness_value(self):
        q = 16
        s = knotgen.quasi_cyclic(3 * q)
        f = -1j * cmath.exp(2j * cmath.pi / (4 * q))
        rep = bounds.bound_cv(s, f, PAPER)
        assert rep.log10value >= math.log10(1773.6)

    def test_collision_nudges(self):
        rep = bounds.bound_cv(knotgen.roots_of_unity(8), 1.0, CORRECTED)
        assert rep.params["nudged"]
        assert math.isfinite(rep.log10value)

    def test_entry_bound_below_svd_norm(self):
        s = knotgen.quasi_cyclic(24)
        rep = bounds.bound_cv(s, cmath.exp(0.3j), CORRECTED)
        assert rep.params["log10_inv_norm_entry"] <= (
            rep.params["log10_inv_norm_svd"] + 1e-9)

    def test_requires_unit_modulus_f(self):
        with pytest.raises(ValueError):
            bounds.bound_cv(knotgen.roots_of_unity(8), 2.0, PAPER)


class TestBoundCircleValue:
    def test_quasi_cyclic_48(self):
        rep = bounds.bound_circle_value(knotgen.quasi_cyclic(48))
        assert rep.log10value >= math.log10(1773.6)
        assert rep.applicable

    def test_uniform_knot_probe(self):
        # log10 2 from the circle maximum cancels the divisor 2, leaving
        # 0.5 log10 8 > 0 even though kappa = 1: inherited overshoot, flagged
        # through the variant tag.
        rep = bounds.bound_circle_value(knotgen.roots_of_unity(8))
        assert abs(rep.log10value - 0.5 * math.log10(8)) < 1e-9
        assert rep.variant == "paper"

    def test_single_zero_knot(self):
        rep = bounds.bound_circle_value(kv([0.0]))
        assert abs(rep.log10value - (0.0 + 0.0 - math.log10(2))) < 1e-9

    def test_gate_recorded(self):
        rep = bounds.bound_circle_value(knotgen.single_outlier(8, 2.0))
        assert not rep.applicable
        assert "unit disc" in rep.reason


class TestBoundCoeffNorm:
    def test_roots_of_unity(self):
        rep = bounds.bound_coeff_norm(knotgen.roots_of_unity(8))
        assert abs(10 ** rep.log10value - 0.5 * math.sqrt(2) * 3.0) < 1e-9

    def test_two_knots(self):
        rep = bounds.bound_coeff_norm(kv([0, 1]))
        assert abs(10 ** rep.log10value
                   - 0.5 * math.sqrt(2) * math.sqrt(3)) < 1e-9

    def test_parseval_relation(self):
        # Sampling the polynomial on the (n+1)-point root grid is a scaled
        # unitary map of the coefficients, so the two half-norms coincide,
        # and the coefficient bound never exceeds the circle bound by more
        # than the sqrt((n+1)/n) grid factor.
        knots = knotgen.quasi_cyclic(24)
        coeff = bounds.bound_coeff_norm(knots)
        circ = bounds.bound_circle_value(knots)
        assert abs(coeff.log10value
                   - circ.params["log10_halfnorm_grid_n1"]) < 1e-9
        slack = 0.5 * (math.log10(25) - math.log10(24))
        assert coeff.log10value <= circ.log10value + slack + 1e-12


class TestBoundQuasiCyclic:
    def test_base_value(self):
        rep = bounds.bound_quasi_cyclic(16, "base")
        assert abs(10 ** rep.log10value - 1024 * math.sqrt(3)) < 0.1

    def test_coarse_value(self):
        rep = bounds.bound_quasi_cyclic(16, "coarse")
        assert abs(10 ** rep.log10value - 15417) <= 1.0

    def test_refined_value(self):
        rep = bounds.bound_quasi_cyclic(16, "refined")
        assert abs(10 ** rep.log10value - 27598) <= 1.0

    @pytest.mark.parametrize("q,ref", [(4, 1.03e1), (8, 1.06e2),
                                       (16, 1.13e4), (32, 1.27e8)])
    def test_integral_reference_column(self, q, ref):
        rep = bounds.bound_quasi_cyclic(q, "integral")
        assert abs(10 ** rep.log10value - ref) / ref < 0.01

    def test_integral_matches_closed_form(self):
        for q in (4, 16, 32):
            rep = bounds.bound_quasi_cyclic(q, "integral")
            closed = rep.params["log10_closed_form"]
            assert abs(rep.log10value - closed) <= 1e-9 * abs(closed)

    @pytest.mark.parametrize("q", [16, 32])
    def test_monotone_staging(self, q):
        vals = [bounds.bound_quasi_cyclic(q, m).log10value
                for m in ("base", "coarse", "refined", "product")]
        assert vals == sorted(vals)

    def test_bad_shape(self):
        with pytest.raises(BadShape):
            bounds.bound_quasi_cyclic(12, "base")

    def test_coarse_flagged_off_staging(self):
        rep = bounds.bound_quasi_cyclic(16, "coarse")
        assert rep.params["staging_exact"] is False
        rep = bounds.bound_quasi_cyclic(24, "coarse")
        assert rep.params["staging_exact"] is True


class TestBoundDftBlock:
    def test_base_as_stated(self):
        rep = bounds.bound_dft_block(8, "base")
        assert abs(10 ** rep.log10value - 2 * math.sqrt(8)) < 1e-9
        # The reference column variant 2^(q/2) sqrt(q) prints 8.00 here.
        assert abs(10 ** rep.params["log10_table_column"] - 8.0) < 1e-9

    def test_integral_value(self):
        rep = bounds.bound_dft_block(32, "integral")
        assert abs(10 ** rep.log10value - 1.13e4) / 1.13e4 < 0.01

    def test_degenerate_two(self):
        rep = bounds.bound_dft_block(2, "base")
        assert abs(rep.log10value) < 1e-12  # 2^(-1/2) sqrt(2) = 1

    def test_odd_size(self):
        with pytest.raises(OddSize):
            bounds.bound_dft_block(7, "base")


class TestSeparation:
    def test_simple_true(self):
        assert bounds.is_separated(kv([2]), kv([0]), 2.0, 0.0)

    def test_simple_false(self):
        assert not bounds.is_separated(kv([2]), kv([1.5]), 2.0, 0.0)

    def test_arc_partition_is_separated(self):
        s = knotgen.quasi_cyclic(48)
        f = cmath.exp(0.3j)
        cert = bounds.arc_certificate(s, f, 30, 41, 1.2)
        t = f * np.exp(2j * np.pi * np.arange(48) / 48)
        arc = kv(list(t[cert.j_lo:cert.j_hi + 1]))
        outside = [z for z in s if abs(z - cert.c) >= cert.eta * cert.r
                   - bounds.BOUNDARY_TOL]
        if outside:
            assert bounds.is_separated(kv(outside), arc, cert.eta, cert.c)

    def test_sigma_bound_equality_one_by_one(self):
        rep = bounds.sigma_bound_separated(kv([2]), kv([0]), 2.0, 0.0, 1)
        assert abs(10 ** rep.log10value - 2.0) < 1e-12
        C = structmat.cauchy(kv([2]), kv([0]))
        sigma = np.linalg.svd(C.data, compute_uv=False)
        assert abs(1.0 / sigma[0] - 2.0) < 1e-12

    def test_not_separated(self):
        with pytest.raises(NotSeparated):
            bounds.sigma_bound_separated(kv([2]), kv([1.5]), 2.0, 0.0, 1)

    def test_eta_near_one_vacuous(self):
        rep = bounds.sigma_bound_separated(kv([2]), kv([0]), 1.0 + 1e-9,
                                           0.0, 1)
        assert rep.log10value < -8.0

    def test_random_suite_against_svd(self):
        rng = np.random.Generator(np.random.Philox(31))
        for _ in range(100):
            m = int(rng.integers(1, 9))
            l = int(rng.integers(1, 9))
            eta = float(rng.uniform(1.01, 1.05))
            c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            r = float(rng.uniform(0.2, 2.0))
            t = c + rng.uniform(0, 0.2 * r, l) * np.exp(
                2j * np.pi * rng.uniform(0, 1, l))
            srad = rng.uniform(1.05 * eta * r, 4 * eta * r, m)
            s = c + srad * np.exp(2j * np.pi * rng.uniform(0, 1, m))
            S, T = kv(list(s)), kv(list(t))
            sv = np.linalg.svd(structmat.cauchy(S, T).data, compute_uv=False)
            for rho in (1, 2, 3):
                if rho <= min(m, l):
                    rep = bounds.sigma_bound_separated(S, T, eta, c, rho)
                    assert rep.log10value <= -math.log10(sv[rho - 1]) + 1e-9


class TestArcCertificate:
    def test_uniform_knots_cap_rho_bar(self):
        s = knotgen.roots_of_unity(16)
        f = cmath.exp(0.3j)
        for j_lo in range(16):
            for l in range(2, 9):
                j_hi = j_lo + l - 1
                if j_hi >= 16:
                    continue
                cert = bounds.arc_certificate(s, f, j_lo, j_hi, 1.1)
                assert cert.rho_bar <= 2
                assert cert.m_minus + cert.m_plus == 16
                assert cert.rho_bar == cert.l - cert.m_minus

    def test_quasi_cyclic_lower_semicircle(self):
        # The lower semicircle carries only the base grid, so a quarter arc
        # there (t angles near -pi/2) outnumbers the knots inside its
        # inflated disc.
        s = knotgen.quasi_cyclic(48)
        f = cmath.exp(0.3j)
        cert = bounds.arc_certificate(s, f, 29, 39, 1.2)
        t = f * np.exp(2j * np.pi * np.arange(48) / 48)
        assert all(np.angle(t[29:40]) < -0.5)  # arc sits in the lower half
        assert cert.rho_bar > 0

    def test_single_point_arc_degenerate(self):
        s = knotgen.roots_of_unity(8)
        cert = bounds.arc_certificate(s, cmath.exp(0.3j), 2, 2, 1.5)
        assert cert.r == 0.0
        rep = bounds.bound_arc(s, cert)
        assert not rep.applicable
        assert rep.log10value == -math.inf

    def test_arc_too_long(self):
        with pytest.raises(ArcTooLong):
            bounds.arc_certificate(knotgen.roots_of_unity(8), 1.0, 0, 4, 1.2)

    def test_geometry_fields(self):
        s = knotgen.roots_of_unity(8)
        f = cmath.exp(0.3j)
        cert = bounds.arc_certificate(s, f, 1, 3, 1.3)
        t = f * np.exp(2j * np.pi * np.arange(8) / 8)
        assert abs(cert.c - 0.5 * (t[1] + t[3])) < 1e-15
        assert abs(cert.r - abs(cert.c - t[1])) < 1e-15


class TestBoundArc:
    def test_vacuous_certificate(self):
        cert = SeparationCertificate(0, 3, 4, 0j, 0.5, 1.2, 4, 4, 0)
        with pytest.raises(VacuousCertificate):
            bounds.bound_arc(knotgen.roots_of_unity(8), cert)

    def test_cv_form_below_inverse_norm(self):
        # Knots on the upper semicircle, arc on the lower: the inflated disc
        # is empty, the certificate is sharp, and the bound stays below the
        # SVD-computed inverse norm.
        rng = np.random.Generator(np.random.Philox(32))
        angles = np.sort(rng.uniform(0.2, math.pi - 0.2, 8))
        s = kv(list(np.exp(1j * angles)))
        f = 1.0
        cert = bounds.arc_certificate(s, f, 5, 6, 1.2)
        assert cert.rho_bar == 2
        rep = bounds.bound_arc(s, cert, form="cv")
        C = structmat.cv_matrix(s, f)
        sigma = np.linalg.svd(C.data, compute_uv=False)
        assert rep.log10value <= -math.log10(sigma[-1]) + 1e-9

    def test_vandermonde_form_adds_scale(self):
        s = knotgen.quasi_cyclic(48)
        cert = bounds.arc_certificate(s, cmath.exp(0.3j), 30, 41, 1.2)
        cv = bounds.bound_arc(s, cert, form="cv")
        vm = bounds.bound_arc(s, cert, form="vandermonde")
        assert abs(vm.log10value - (cv.log10value + 0.5 * math.log10(48)
                                    - math.log10(2))) < 1e-12

    def test_unit_disc_gate(self):
        s = knotgen.single_outlier(16, 2.0)
        cert = bounds.arc_certificate(s, cmath.exp(0.3j), 0, 5, 1.2)
        if cert.rho_bar > 0:
            rep = bounds.bound_arc(s, cert, form="vandermonde")
            assert not rep.applicable


class TestBestArcSearch:
    def test_uniform_knots_no_positive_bound(self):
        with pytest.raises(NoPositiveBound):
            bounds.best_arc_search(knotgen.roots_of_unity(64), cmath.exp(0.3j))

    def test_tiny_n(self):
        with pytest.raises(NoPositiveBound):
            bounds.best_arc_search(knotgen.roots_of_unity(2), cmath.exp(0.3j))

    def test_quasi_cyclic_positive_and_dominated(self):
        s = knotgen.quasi_cyclic(96)
        cert, rep = bounds.best_arc_search(s, cmath.exp(0.3j))
        assert rep.log10value > 0.0
        assert rep.log10value <= measured_log10_kappa(s)
        assert cert.rho_bar > 0

    def test_deterministic(self):
        s = knotgen.quasi_cyclic(96)
        a = bounds.best_arc_search(s, cmath.exp(0.3j))
        b = bounds.best_arc_search(s, cmath.exp(0.3j))
        assert a[0] == b[0]
        assert a[1].log10value == b[1].log10value

    def test_rotation_invariance(self):
        s = knotgen.quasi_cyclic(96)
        f = cmath.exp(0.3j)
        phase = cmath.exp(0.7j)
        rotated = kv([phase * z for z in s])
        cert_a, rep_a = bounds.best_arc_search(s, f)
        cert_b, rep_b = bounds.best_arc_search(rotated, phase * f)
        assert (cert_a.j_lo, cert_a.j_hi, cert_a.eta,
                cert_a.rho_bar) == (cert_b.j_lo, cert_b.j_hi, cert_b.eta,
                                    cert_b.rho_bar)
        assert abs(rep_a.log10value - rep_b.log10value) < 1e-9

    def test_exhaustive_flag_gate(self):
        with pytest.raises(ValueError):
            bounds.best_arc_search(knotgen.roots_of_unity(256),
                                   cmath.exp(0.3j), exhaustive=True)

    def test_exhaustive_at_least_as_good(self):
        s = knotgen.quasi_cyclic(96)
        f = cmath.exp(0.3j)
        _, coarse = bounds.best_arc_search(s, f)
        _, fine = bounds.best_arc_search(s, f, exhaustive=True)
        assert fine.log10value >= coarse.log10value - 1e-12


class TestEmpiricalDominance:
    """Measured condition numbers dominate all conservative bounds."""

    def test_outlier_configs(self):
        for s_val in (1.140625, 1.5625, 3.25, 10.0):
            knots = knotgen.single_outlier(64, s_val)
            kappa = measured_log10_kappa(knots)
            assert kappa >= bounds.bound_easy(knots).log10value - 1e-9
            cv = bounds.bound_cv(knots, cmath.exp(0.17j), CORRECTED)
            assert kappa >= cv.log10value - 1e-9

    def test_cluster_configs(self):
        for k in (8, 16, 32):
            for rho in (0.75, 0.5):
                knots = knotgen.scaled_cluster(64, k, rho)
                kappa = measured_log10_kappa(knots)
                for mode in ("literal", "computed-norm"):
                    rep = bounds.bound_cluster(knots, k, 1.0 / rho, mode)
                    assert kappa >= rep.log10value - 1e-9

    def test_quasi_cyclic_corrected_cv(self):
        for q in (4, 8, 16):
            knots = knotgen.quasi_cyclic(3 * q)
            kappa = measured_log10_kappa(knots)
            rep = bounds.bound_cv(knots, cmath.exp(0.17j), CORRECTED)
            assert kappa >= rep.log10value - 1e-9

    def test_arc_bound_dominated(self):
        s = knotgen.quasi_cyclic(96)
        _, rep = bounds.best_arc_search(s, cmath.exp(0.3j))
        assert measured_log10_kappa(s) >= rep.log10value
