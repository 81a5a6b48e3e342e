import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarsnap.errors import InfeasibleGeometryError, UnsupportedConfigurationError
from polarsnap.geometry import (
    ConstellationSpec,
    GroundStation,
    SatId,
    SatState,
    build_ls_state,
    elevation_angle_deg,
    geocentric_angle_deg,
    ground_position_km,
    horizontal_survival_latitude_deg,
    make_visibility_model,
    max_link_angle_deg,
    orbit_period,
    position_km,
    propagation_delay_s,
    satellite_state,
    MU_EARTH_KM3_S2,
    SPEED_OF_LIGHT_KM_S,
)


class TestConstellationSpec:
    def test_rejects_odd_plane_count(self):
        with pytest.raises(UnsupportedConfigurationError):
            ConstellationSpec(5, 11, 86.4, 780.0)

    def test_rejects_tiny_plane(self):
        with pytest.raises(UnsupportedConfigurationError):
            ConstellationSpec(6, 2, 86.4, 780.0)

    def test_phase_offset_is_half_slot(self, iridium):
        assert iridium.phase_offset_deg == pytest.approx(180.0 / 11, abs=0)
        assert iridium.intra_plane_spacing_deg == pytest.approx(2 * iridium.phase_offset_deg)

    def test_default_plane_spacing(self):
        spec = ConstellationSpec(6, 11, 86.4, 780.0)
        assert spec.plane_spacing_deg == pytest.approx(30.0)


class TestOrbitPeriod:
    def test_configured_period_iridium(self, iridium):
        assert orbit_period(iridium) == 6027.0

    def test_configured_period_teledesic(self, teledesic):
        assert orbit_period(teledesic) == pytest.approx(6793.8)

    def test_kepler_fallback(self):
        spec = ConstellationSpec(6, 11, 86.4, 780.0)
        a = spec.earth_radius_km + 780.0
        expected = 2.0 * math.pi * math.sqrt(a ** 3 / MU_EARTH_KM3_S2)
        assert orbit_period(spec) == pytest.approx(expected, rel=1e-12)
        assert orbit_period(spec) == pytest.approx(6027.6, abs=1.0)


class TestSatelliteState:
    def test_equator_crossing(self, iridium):
        # satellite (1,1) starts at argument of latitude 0
        st0 = satellite_state(iridium, SatId(1, 1), 0.0)
        assert st0.latitude_deg == pytest.approx(0.0, abs=1e-12)
        assert st0.ascending

    def test_ideal_polar_apex(self):
        spec = ConstellationSpec(6, 12, 90.0, 780.0)
        # (1,4) starts at u = 3 * 30 = 90 degrees
        st0 = satellite_state(spec, SatId(1, 4), 0.0)
        assert st0.latitude_deg == pytest.approx(90.0, abs=1e-9)

    def test_inclined_apex_latitude(self, iridium):
        # oracle: asin(sin(i) * sin(90)) = i
        period = orbit_period(iridium)
        t_apex = period / 4.0  # (1,1) reaches u=90 a quarter period in
        st0 = satellite_state(iridium, SatId(1, 1), t_apex)
        assert st0.latitude_deg == pytest.approx(86.4, abs=1e-9)

    def test_invalid_sat_rejected(self, iridium):
        with pytest.raises(ValueError):
            satellite_state(iridium, SatId(7, 1), 0.0)
        with pytest.raises(ValueError):
            satellite_state(iridium, SatId(1, 12), 0.0)

    @settings(max_examples=60, deadline=None)
    @given(t=st.floats(-20000.0, 20000.0), plane=st.integers(1, 6),
           idx=st.integers(1, 11))
    def test_circular_radius_invariant(self, iridium, t, plane, idx):
        pos = position_km(iridium, SatId(plane, idx), t)
        r = math.sqrt(sum(c * c for c in pos))
        assert r == pytest.approx(iridium.orbit_radius_km, rel=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(t=st.floats(0.0, 12000.0), plane=st.integers(1, 6), idx=st.integers(1, 11))
    def test_period_consistency(self, iridium, t, plane, idx):
        sat = SatId(plane, idx)
        p0 = np.array(position_km(iridium, sat, t))
        p1 = np.array(position_km(iridium, sat, t + orbit_period(iridium)))
        assert np.linalg.norm(p0 - p1) <= 1e-9 * iridium.orbit_radius_km + 1e-6


class TestLsState:
    @pytest.mark.parametrize("border,n_npa,n_pa", [(60.0, 7, 4), (70.0, 8, 3)])
    def test_iridium_row_counts(self, iridium, border, n_npa, n_pa):
        # Eq-style arithmetic: floor(2 * border / (180/11))
        vis = make_visibility_model(iridium, border)
        for t in (0.0, 137.5, 2718.0, 6000.0):
            ls = build_ls_state(iridium, vis, t)
            assert ls.n_rows == 22
            assert ls.n_rows_nonpolar == n_npa
            assert ls.n_rows_polar == n_pa

    def test_teledesic_row_counts(self, teledesic):
        vis = make_visibility_model(teledesic, 75.0)
        ls = build_ls_state(teledesic, vis, 1234.0)
        assert ls.n_rows == 48
        assert ls.n_rows_nonpolar == 20

    @settings(max_examples=25, deadline=None)
    @given(t=st.floats(0.0, 6027.0))
    def test_rows_partition_constellation(self, iridium, t):
        vis = make_visibility_model(iridium, 60.0)
        ls = build_ls_state(iridium, vis, t)
        seen = set()
        for row in ls.rows:
            assert len(row.members) == iridium.plane_count // 2
            seen.update(row.members)
        assert len(seen) == iridium.total_satellites

    @settings(max_examples=25, deadline=None)
    @given(t=st.floats(0.0, 6027.0))
    def test_row_members_share_latitude_and_direction(self, iridium, t):
        vis = make_visibility_model(iridium, 60.0)
        ls = build_ls_state(iridium, vis, t)
        for row in ls.rows:
            for sat in row.members:
                stt = satellite_state(iridium, sat, t)
                assert stt.latitude_deg == pytest.approx(row.latitude_deg, abs=1e-6)
                assert stt.ascending == row.ascending

    @settings(max_examples=40, deadline=None)
    @given(border=st.floats(1.0, 89.0))
    def test_row_count_identity(self, iridium, border):
        # 2 * (nonpolar + polar) must equal 2 * M for every border setting
        vis = make_visibility_model(iridium, border)
        ls = build_ls_state(iridium, vis, 0.0)
        assert 2 * (ls.n_rows_nonpolar + ls.n_rows_polar) == 2 * iridium.sats_per_plane

    def test_anchor_is_most_recently_exited(self, iridium):
        vis = make_visibility_model(iridium, 60.0)
        period = orbit_period(iridium)
        # just after the first exit event the anchor sits at the south exit border
        t_exit = min(((300.0 - c * iridium.phase_offset_deg) % 360.0) / 360.0 * period
                     for c in range(22))
        ls = build_ls_state(iridium, vis, t_exit + 1e-3)
        anchor = ls.rows[ls.anchor_index]
        assert anchor.ascending
        assert not anchor.in_polar
        assert anchor.latitude_deg == pytest.approx(-59.9, abs=0.5)


class TestGeocentricAngle:
    def test_identical_positions(self):
        assert geocentric_angle_deg((7000, 0, 0), (7000, 0, 0)) == 0.0

    def test_antipodal(self):
        assert geocentric_angle_deg((7000, 0, 0), (-7000, 0, 0)) == pytest.approx(180.0)

    def test_adjacent_same_plane(self, iridium):
        # oracle: the intra-plane slot angle 360/11
        a = position_km(iridium, SatId(1, 1), 0.0)
        b = position_km(iridium, SatId(1, 2), 0.0)
        assert geocentric_angle_deg(a, b) == pytest.approx(360.0 / 11, abs=1e-9)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            geocentric_angle_deg((0, 0, 0), (7000, 0, 0))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e4, 1e4), min_size=6, max_size=6))
    def test_symmetry(self, coords):
        a, b = coords[:3], coords[3:]
        if all(abs(c) < 1e-3 for c in a) or all(abs(c) < 1e-3 for c in b):
            return
        assert geocentric_angle_deg(a, b) == pytest.approx(
            geocentric_angle_deg(b, a), abs=1e-12)


class TestHorizontalSurvivalLatitude:
    def test_iridium_value(self, iridium):
        assert horizontal_survival_latitude_deg(iridium) == pytest.approx(32.81, abs=0.3)

    def test_zero_at_grazing_equality(self, iridium):
        # max angle exactly twice the plane spacing puts the sqrt argument at 0
        assert horizontal_survival_latitude_deg(
            iridium, max_angle_deg=2 * 31.6) == pytest.approx(0.0, abs=1e-12)

    def test_teledesic_always_visible(self, teledesic):
        # direct evaluation: cos(68.0 deg) < cos(30.72 deg), argument negative
        with pytest.raises(InfeasibleGeometryError):
            horizontal_survival_latitude_deg(teledesic)
        vis = make_visibility_model(teledesic, 60.0)
        assert vis.horizontal_min_latitude_deg == 0.0

    def test_monotonicity_sweep(self, iridium):
        # larger visibility angle -> lower survival latitude;
        # larger plane spacing -> higher survival latitude
        import dataclasses
        thetas = np.linspace(40.0, 62.0, 50)
        values = [horizontal_survival_latitude_deg(iridium, th) for th in thetas]
        assert all(b < a for a, b in zip(values, values[1:]))

        spacings = np.linspace(27.0, 40.0, 50)
        vals = []
        for s in spacings:
            spec = dataclasses.replace(iridium, inter_plane_spacing_deg=float(s))
            vals.append(horizontal_survival_latitude_deg(spec, 52.0))
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestPropagationDelay:
    def test_coincident(self):
        assert propagation_delay_s((1, 2, 3), (1, 2, 3)) == 0.0

    def test_light_second_scaling(self):
        assert propagation_delay_s((0, 0, 0), (2997.92458, 0, 0)) == pytest.approx(0.01)

    def test_adjacent_intra_plane_chord(self, iridium):
        # oracle: chord = 2 (R+h) sin(slot/2)
        a = position_km(iridium, SatId(1, 1), 0.0)
        b = position_km(iridium, SatId(1, 2), 0.0)
        chord = 2.0 * iridium.orbit_radius_km * math.sin(math.radians(180.0 / 11))
        assert propagation_delay_s(a, b) == pytest.approx(
            chord / SPEED_OF_LIGHT_KM_S, rel=1e-12)
        assert propagation_delay_s(a, b) == pytest.approx(0.01346, abs=2e-5)


class TestElevation:
    def test_zenith(self, iridium):
        gs = GroundStation("gs", 30.0, 40.0)
        gpos = np.array(ground_position_km(gs, 0.0))
        zenith = tuple(gpos / np.linalg.norm(gpos) * iridium.orbit_radius_km)
        state = SatState(SatId(1, 1), 0.0, 30.0, 40.0, zenith, True)
        assert elevation_angle_deg(gs, state, 0.0) == pytest.approx(90.0)

    def test_antipode(self, iridium):
        gs = GroundStation("gs", 10.0, -60.0)
        gpos = np.array(ground_position_km(gs, 0.0))
        anti = tuple(-gpos / np.linalg.norm(gpos) * iridium.orbit_radius_km)
        state = SatState(SatId(1, 1), 0.0, -10.0, 120.0, anti, True)
        assert elevation_angle_deg(gs, state, 0.0) == pytest.approx(-90.0)

    def test_grazing_horizon(self, iridium):
        # oracle: satellite at geocentric angle acos(R / (R+h)) sits on the horizon
        gs = GroundStation("gs", 0.0, 0.0)
        r = iridium.orbit_radius_km
        psi = math.acos(iridium.earth_radius_km / r)
        sat_pos = (r * math.cos(psi), r * math.sin(psi), 0.0)
        state = SatState(SatId(1, 1), 0.0, 0.0, 0.0, sat_pos, True)
        assert elevation_angle_deg(gs, state, 0.0) == pytest.approx(0.0, abs=1e-6)

    def test_station_rotates_with_earth(self):
        gs = GroundStation("gs", 0.0, 0.0)
        p0 = ground_position_km(gs, 0.0)
        p_quarter = ground_position_km(gs, 86164.0905 / 4.0)
        assert p0[0] == pytest.approx(6378.137)
        assert p_quarter[1] == pytest.approx(6378.137, rel=1e-9)


class TestVisibilityModelConstruction:
    def test_max_link_angle_from_grazing(self, iridium):
        expected = 2.0 * math.degrees(math.acos(
            (6378.137 + 49.0) / (6378.137 + 780.0)))
        assert max_link_angle_deg(iridium) == pytest.approx(expected, rel=1e-12)

    def test_border_bounds_enforced(self, iridium):
        with pytest.raises(ValueError):
            make_visibility_model(iridium, 95.0)
        with pytest.raises(ValueError):
            make_visibility_model(iridium, 0.0)
