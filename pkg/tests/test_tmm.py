import cmath
import math

import pytest

from multicav import (CavityStack, Incidence, InvalidInputError, OpticalElement,
                      compose, field_segments, find_resonances, mirror_matrix,
                      propagation_matrix, reflection, transmission, two_mirror)
from multicav.tmm import gap_intensities


class TestMirrorMatrix:
    def test_zero_is_identity(self):
        m = mirror_matrix(0.0)
        assert (m.m11, m.m12, m.m21, m.m22) == (1, 0, 0, 1)

    def test_unit_polarizability(self):
        m = mirror_matrix(1.0)
        assert m.m11 == 1 + 1j
        assert m.m22 == 1 - 1j
        assert m.det == pytest.approx(1.0, abs=0)

    def test_strong_mirror_m22(self):
        m = mirror_matrix(20.0)
        # |1 - i*zeta|^2 = 1 + zeta^2
        assert abs(m.m22) ** 2 == pytest.approx(401.0, rel=1e-15)

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidInputError):
            mirror_matrix(float("nan"))

    def test_coincident_mirrors_add(self):
        lhs = mirror_matrix(2.5) @ mirror_matrix(4.0)
        rhs = mirror_matrix(6.5)
        assert lhs.m11 == pytest.approx(rhs.m11, rel=1e-14)
        assert lhs.m22 == pytest.approx(rhs.m22, rel=1e-14)


class TestPropagationMatrix:
    def test_zero_phase_identity(self):
        m = propagation_matrix(0.0)
        assert (m.m11, m.m12, m.m21, m.m22) == (1, 0, 0, 1)

    def test_half_wave(self):
        m = propagation_matrix(math.pi)
        assert m.m11 == pytest.approx(-1.0, abs=1e-15)
        assert m.m22 == pytest.approx(-1.0, abs=1e-15)

    def test_quarter_wave(self):
        m = propagation_matrix(math.pi / 2)
        assert m.m11 == pytest.approx(1j, abs=1e-15)
        assert m.m22 == pytest.approx(-1j, abs=1e-15)

    def test_unitary_and_unimodular(self):
        m = propagation_matrix(1.234)
        assert abs(m.det - 1) < 1e-15
        assert abs(abs(m.m11) - 1) < 1e-15

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidInputError):
            propagation_matrix(float("inf"))


class TestStackValidation:
    def test_needs_elements(self):
        with pytest.raises(InvalidInputError):
            CavityStack(())

    def test_positions_strictly_increasing(self):
        with pytest.raises(InvalidInputError):
            CavityStack((OpticalElement(1.0, 1.0), OpticalElement(1.0, 1.0)))

    def test_negative_position_rejected(self):
        with pytest.raises(InvalidInputError):
            OpticalElement(1.0, -0.5)

    def test_gap_accessors(self):
        st = CavityStack.three_mirror(20.0, 5.0, 2.0, 0.5)
        assert st.gaps == (2.0, 0.5)
        assert st.total_length == 2.5

    def test_displaced_translates_back_to_origin(self):
        st = CavityStack.two_mirror(1.0, 1.0, 2.0)
        moved = st.displaced(0, -0.5)
        assert moved.positions[0] == 0.0
        assert moved.gaps == (2.5,)

    def test_scaled_requires_positive(self):
        st = CavityStack.two_mirror(1.0, 1.0, 2.0)
        with pytest.raises(InvalidInputError):
            st.scaled(0.0)


class TestCompose:
    def test_single_transparent_element_is_identity(self):
        st = CavityStack((OpticalElement(0.0, 0.0),))
        m = compose(st, 3.7)
        assert (m.m11, m.m12, m.m21, m.m22) == (1, 0, 0, 1)

    def test_symmetric_resonance_minimizes_m22(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        k0 = find_resonances(st, 30.0, 31.0)[0].k0
        d0 = abs(compose(st, k0).m22)
        for dk in (1e-3, -1e-3, 5e-3):
            assert abs(compose(st, k0 + dk).m22) > d0

    def test_transparent_middle_collapses_gaps(self):
        st3 = CavityStack.three_mirror(7.0, 0.0, 1.3, 0.9)
        st2 = CavityStack.two_mirror(7.0, 7.0, 2.2)
        for k in (0.7, 1.9, 13.4):
            a, b = compose(st3, k), compose(st2, k)
            assert a.m22 == pytest.approx(b.m22, rel=1e-12)
            assert a.m11 == pytest.approx(b.m11, rel=1e-12)

    def test_rejects_nonpositive_k(self):
        st = CavityStack.two_mirror(1.0, 1.0, 1.0)
        with pytest.raises(InvalidInputError):
            compose(st, 0.0)
        with pytest.raises(InvalidInputError):
            transmission(st, -2.0)


class TestTransmission:
    def test_single_mirror_half(self):
        st = CavityStack((OpticalElement(1.0, 0.0),))
        assert transmission(st, 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_symmetric_cavity_unity_on_resonance(self):
        st = CavityStack.two_mirror(20.0, 20.0, math.pi)
        r = find_resonances(st, 30.0, 31.0)[0]
        assert r.transmission_peak == pytest.approx(1.0, abs=1e-9)

    def test_energy_conservation(self):
        st = CavityStack.three_mirror(20.0, 5.0, 4.0, 1.5)
        for k in (0.9, 3.1, 17.7):
            assert transmission(st, k) + reflection(st, k) == pytest.approx(1.0, abs=1e-10)

    def test_far_resonance_dimmer_than_common_region(self):
        # strongly asymmetric cavity: transmission collapses away from the
        # short-subcavity resonance and recovers close to it
        st = CavityStack.three_mirror(20.0, 5.0, 100 * math.pi, math.pi)
        k_l = (two_mirror(20.0, 5.0, math.pi).theta0 + 590 * math.pi) / math.pi
        rs = find_resonances(st, k_l - 0.45, k_l + 0.45)
        far = min(rs, key=lambda r: abs(r.k0 - (k_l - 0.4)))
        near_max = max(r.transmission_peak for r in rs
                       if abs(r.k0 - k_l) < 6 * math.pi / st.total_length)
        assert far.transmission_peak < 0.2 * near_max


class TestFieldSegments:
    def test_empty_cavity_everywhere_unity(self):
        st = CavityStack((OpticalElement(0.0, 0.0), OpticalElement(0.0, 1.0),
                          OpticalElement(0.0, 2.5)))
        for seg in field_segments(st, 2.2):
            assert seg.mean_intensity == pytest.approx(1.0, rel=1e-12)

    def test_unit_incident_amplitude(self):
        st = CavityStack.three_mirror(20.0, 5.0, 3.0, 1.0)
        segs = field_segments(st, 4.1)
        assert abs(segs[0].c_plus - 1.0) < 1e-10

    def test_far_side_has_no_returning_wave(self):
        st = CavityStack.two_mirror(20.0, 5.0, math.pi)
        segs = field_segments(st, 7.3)
        assert segs[-1].c_minus == 0
        assert segs[-1].mean_intensity == pytest.approx(transmission(st, 7.3), rel=1e-12)

    def test_right_incidence_mirrors_the_walk(self):
        st = CavityStack.two_mirror(20.0, 5.0, math.pi,
                                    incidence=Incidence.FROM_RIGHT)
        segs = field_segments(st, 7.3)
        assert abs(segs[-1].c_minus - 1.0) < 1e-12      # incoming unit wave
        assert abs(segs[0].c_plus) < 1e-10              # nothing returns
        assert abs(segs[0].c_minus) ** 2 == pytest.approx(
            transmission(st, 7.3), rel=1e-10)

    def test_mean_intensity_definition(self):
        st = CavityStack.two_mirror(3.0, 8.0, 1.7)
        for seg in field_segments(st, 5.9):
            assert seg.mean_intensity == abs(seg.c_plus) ** 2 + abs(seg.c_minus) ** 2

    def test_amplitudes_satisfy_transfer_relations(self):
        st = CavityStack.three_mirror(12.0, 4.0, 2.0, 0.7)
        k = 9.3
        segs = field_segments(st, k)
        for i, elem in enumerate(st.elements):
            left, right = segs[i], segs[i + 1]
            # propagate the left-segment amplitudes to the element position
            gap = (elem.position - st.elements[i - 1].position) if i > 0 else 0.0
            cm = left.c_minus * cmath.exp(-1j * k * gap)
            cp = left.c_plus * cmath.exp(1j * k * gap)
            m = mirror_matrix(elem.zeta)
            assert cm == pytest.approx(m.m11 * right.c_minus + m.m12 * right.c_plus,
                                       rel=1e-9, abs=1e-9)
            assert cp == pytest.approx(m.m21 * right.c_minus + m.m22 * right.c_plus,
                                       rel=1e-9, abs=1e-9)

    def test_two_mirror_resonant_intensity_closed_form(self):
        zeta, zp = 20.0, 5.0
        st = CavityStack.two_mirror(zeta, zp, math.pi)
        r = find_resonances(st, 30.0, 32.0)[0]
        inside = field_segments(st, r.k0)[1].mean_intensity
        assert inside == pytest.approx(two_mirror(zeta, zp, math.pi).intensity,
                                       rel=1e-9)

    def test_transparent_insert_leaves_fields_alone(self):
        st = CavityStack.three_mirror(9.0, 3.0, 2.0, 1.0)
        k = 6.55
        base = gap_intensities(st, k)
        elems = list(st.elements)
        elems.insert(1, OpticalElement(0.0, 0.8))  # split the first gap
        split = gap_intensities(CavityStack(tuple(elems)), k)
        assert split[0] == pytest.approx(base[0], rel=1e-12)
        assert split[1] == pytest.approx(base[0], rel=1e-12)
        assert split[2] == pytest.approx(base[1], rel=1e-12)
