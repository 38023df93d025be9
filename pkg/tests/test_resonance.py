import math

import pytest

from multicav import (CavityFamily, CavityStack, InvalidInputError,
                      OpticalElement, OverlapFlag, OverlappingResonanceError,
                      analytic_overlap_criterion, classify_overlap,
                      design_common_resonance, find_resonances,
                      linewidth_curvature, linewidth_halfmax, scan_spectrum,
                      two_mirror)
from multicav.resonance import resonant_phases


def short_cavity_k(zeta, zeta_prime, length, mode):
    phi0 = resonant_phases(CavityFamily.THREE_MIRROR, zeta, zeta_prime)[1]
    return (phi0 + mode * math.pi) / length


class TestScan:
    def test_empty_cavity_fully_transparent(self):
        st = CavityStack((OpticalElement(0.0, 0.0), OpticalElement(0.0, 2.0)))
        for s in scan_spectrum(st, 1.0, 3.0):
            assert s.transmission == pytest.approx(1.0, abs=1e-12)

    def test_sample_identity(self):
        st = CavityStack.two_mirror(5.0, 9.0, 1.7)
        for s in scan_spectrum(st, 2.0, 4.0):
            assert s.transmission * s.denominator == pytest.approx(1.0, abs=1e-10)

    def test_density_contract(self):
        st = CavityStack.two_mirror(5.0, 9.0, 4.0)
        samples = scan_spectrum(st, 2.0, 3.0, samples_per_fsr=32)
        spacing = samples[1].k - samples[0].k
        assert spacing <= (math.pi / 4.0) / 32 + 1e-15

    def test_min_density_enforced(self):
        st = CavityStack.two_mirror(5.0, 9.0, 4.0)
        with pytest.raises(InvalidInputError):
            scan_spectrum(st, 2.0, 3.0, samples_per_fsr=8)

    def test_degenerate_range_rejected(self):
        st = CavityStack.two_mirror(5.0, 9.0, 4.0)
        with pytest.raises(InvalidInputError):
            scan_spectrum(st, 3.0, 2.0)

    def test_one_peak_per_free_spectral_range(self):
        # closed-form oracle: minima at (theta0 + n*pi)/L, one per pi/L in k
        zeta = 20.0
        st = CavityStack.two_mirror(zeta, zeta, math.pi)
        theta0 = two_mirror(zeta, zeta, math.pi).theta0
        lo, hi = 10.25, 15.25
        expected = [n + theta0 / math.pi for n in range(10, 16)
                    if lo < n + theta0 / math.pi < hi]
        found = find_resonances(st, lo, hi)
        assert len(found) == len(expected) == 5
        for k0, want in zip([r.k0 for r in found], expected):
            assert k0 == pytest.approx(want, rel=1e-12)


class TestFindResonances:
    def test_two_mirror_phase_condition(self):
        for zeta, zp in ((2.0, 5.0), (10.0, 20.0)):
            st = CavityStack.two_mirror(zeta, zp, math.pi)
            r = find_resonances(st, 30.0, 31.5)[0]
            assert math.tan(2 * r.k0 * math.pi) == pytest.approx(
                -(zeta + zp) / (1 - zeta * zp), abs=1e-9)

    def test_transparent_middle_matches_plain_cavity(self):
        st3 = CavityStack.three_mirror(15.0, 0.0, 2.0, 1.0)
        st2 = CavityStack.two_mirror(15.0, 15.0, 3.0)
        got = [r.k0 for r in find_resonances(st3, 5.0, 8.0)]
        want = [r.k0 for r in find_resonances(st2, 5.0, 8.0)]
        assert got == pytest.approx(want, rel=1e-11)

    def test_empty_window_is_not_an_error(self):
        st = CavityStack((OpticalElement(0.0, 0.0), OpticalElement(0.0, 1.0)))
        assert find_resonances(st, 1.0, 2.0) == []

    def test_compound_cavity_resonance_count(self):
        st = CavityStack.three_mirror(20.0, 5.0, 100 * math.pi, math.pi)
        k_l = short_cavity_k(20.0, 5.0, math.pi, 590)
        rs = find_resonances(st, k_l - 0.5, k_l + 0.5)
        assert len(rs) == 101
        # no minima appear or vanish when the scan is refined
        rs2 = find_resonances(st, k_l - 0.5, k_l + 0.5, samples_per_fsr=128)
        assert len(rs2) == 101

    def test_reduced_transmission_near_short_cavity_resonance(self):
        st = CavityStack.three_mirror(20.0, 5.0, 100 * math.pi, math.pi)
        k_l = short_cavity_k(20.0, 5.0, math.pi, 590)
        rs = sorted(find_resonances(st, k_l - 0.1, k_l + 0.1),
                    key=lambda r: abs(r.k0 - k_l))
        assert rs[0].transmission_peak < rs[2].transmission_peak
        assert rs[0].kappa_curvature > rs[2].kappa_curvature

    def test_scaling_law(self):
        st = CavityStack.three_mirror(20.0, 5.0, 4.0, 1.5)
        base = find_resonances(st, 8.0, 10.0)[0]
        s = 1.7
        scaled = find_resonances(st.scaled(s), 8.0 / s, 10.0 / s)[0]
        assert scaled.k0 == pytest.approx(base.k0 / s, rel=1e-9)
        assert scaled.kappa_curvature == pytest.approx(base.kappa_curvature / s,
                                                       rel=1e-9)

    def test_minimum_is_local(self):
        # probed just above the evaluation noise floor of D
        st = CavityStack.two_mirror(20.0, 5.0, math.pi)
        r = find_resonances(st, 30.0, 31.5)[0]
        from multicav import denominator
        d0 = denominator(st, r.k0)
        delta = 1e-7 * r.k0
        assert denominator(st, r.k0 + delta) > d0
        assert denominator(st, r.k0 - delta) > d0


class TestLinewidths:
    def test_curvature_matches_two_mirror_closed_form(self):
        ana = two_mirror(20.0, 20.0, math.pi)
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        assert linewidth_curvature(st, r) == pytest.approx(ana.kappa_exact,
                                                           rel=1e-6)

    def test_curvature_matches_high_reflectivity_form(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        approx = (1 / (4 * math.pi)) * (2 / 400.0)
        assert r.kappa_curvature == pytest.approx(approx, rel=5e-3)

    def test_estimators_agree_on_isolated_line(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        assert linewidth_halfmax(st, r) == pytest.approx(r.kappa_curvature,
                                                         rel=1e-2)

    def test_halfmax_sides_symmetric(self):
        st = CavityStack.two_mirror(10.0, 10.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        from multicav.tmm import denominator
        d0 = denominator(st, r.k0)
        from scipy.optimize import brentq
        w = r.kappa_curvature * 3
        right = brentq(lambda x: denominator(st, x) - 2 * d0, r.k0, r.k0 + w)
        left = brentq(lambda x: denominator(st, x) - 2 * d0, r.k0 - w, r.k0)
        assert (right - r.k0) == pytest.approx(r.k0 - left, rel=5e-2)

    def test_speed_of_light_scale(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        assert linewidth_curvature(st, r, c=2.0) == pytest.approx(
            2 * r.kappa_curvature, rel=1e-14)

    def test_tunneling_regime_halfmax_fails(self):
        st = CavityStack.three_mirror(10.0, 10.0, 1000 * math.pi, math.pi)
        k_l = short_cavity_k(10.0, 10.0, math.pi, 590)
        rs = find_resonances(st, k_l - 0.004, k_l + 0.004)
        nearest = min(rs, key=lambda r: abs(r.k0 - k_l))
        with pytest.raises(OverlappingResonanceError):
            linewidth_halfmax(st, nearest)


class TestClassifyOverlap:
    def test_isolated_line_is_well_resolved(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        rs = find_resonances(st, 30.0, 32.5)
        assert all(r.overlap_flag is OverlapFlag.WELL_RESOLVED for r in rs)

    def test_flags_recomputed_idempotently(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        rs = find_resonances(st, 30.0, 32.5)
        assert [r.overlap_flag for r in classify_overlap(rs)] == \
            [r.overlap_flag for r in rs]

    def test_three_mirror_analytic_criterion(self):
        st = CavityStack.three_mirror(10.0, 10.0, 1000 * math.pi, math.pi)
        crit = analytic_overlap_criterion(st)
        assert crit.family is CavityFamily.THREE_MIRROR
        assert crit.lhs == pytest.approx(math.sqrt(2 / 1000), rel=1e-12)
        assert crit.rhs == pytest.approx(0.1, rel=1e-12)
        assert not crit.satisfied

    def test_four_mirror_analytic_criterion(self):
        st = CavityStack.four_mirror(20.0, 5.0, math.pi, 100 * math.pi, math.pi)
        crit = analytic_overlap_criterion(st)
        assert crit.family is CavityFamily.FOUR_MIRROR_SYMMETRIC
        assert crit.lhs == pytest.approx(0.01 + 0.02, rel=1e-12)
        assert crit.rhs == pytest.approx(1 / 400, rel=1e-12)
        assert crit.satisfied

    def test_unrecognized_shape_has_no_criterion(self):
        st = CavityStack.two_mirror(5.0, 5.0, 1.0)
        assert analytic_overlap_criterion(st) is None


class TestDesignCommonResonance:
    def test_transparent_middle_reduces_to_plain_cavity(self):
        theta0, phi0 = resonant_phases(CavityFamily.THREE_MIRROR, 8.0, 0.0)
        assert theta0 == pytest.approx(-0.5 * math.atan(8.0) + math.pi / 2)
        des = design_common_resonance(CavityFamily.THREE_MIRROR, 8.0, 0.0,
                                      100.0, (300, 100))
        rs = find_resonances(des.stack, 99.9, 100.1)
        assert min(abs(r.k0 - 100.0) for r in rs) < 1e-6 * 100.0

    def test_three_mirror_common_resonance_lands_on_target(self):
        des = design_common_resonance(CavityFamily.THREE_MIRROR, 20.0, 5.0,
                                      590.0, (59000, 590))
        assert des.gap_long == pytest.approx(100 * math.pi, rel=1e-4)
        assert des.gap_short == pytest.approx(math.pi, rel=1e-4)
        fsr = math.pi / des.stack.total_length
        rs = find_resonances(des.stack, 590 - 2 * fsr, 590 + 2 * fsr)
        nearest = min(rs, key=lambda r: abs(r.k0 - 590.0))
        assert nearest.k0 == pytest.approx(590.0, rel=1e-9)

    def test_four_mirror_construction(self):
        des = design_common_resonance(CavityFamily.FOUR_MIRROR_SYMMETRIC,
                                      20.0, 5.0, 590.0, (59000, 590))
        assert des.stack.gaps[0] == pytest.approx(des.gap_short, rel=1e-12)
        assert des.stack.gaps[2] == pytest.approx(des.gap_short, rel=1e-12)
        assert des.stack.gaps[1] == pytest.approx(des.gap_long, rel=1e-12)

    def test_bad_indices_rejected(self):
        with pytest.raises(InvalidInputError):
            design_common_resonance(CavityFamily.THREE_MIRROR, 20.0, 5.0,
                                    590.0, (0, -5))
