"""Orbital geometry of an idealized circular polar-orbit constellation.

Satellites are propagated on circular orbits around a spherical Earth.
Plane p (1-based) has its ascending node at longitude (p-1) * plane
spacing, and satellite (p, j) starts at argument of latitude
(p-1) * phase_offset + (j-1) * intra-plane spacing, so adjacent planes
are staggered by half an intra-plane slot.

All satellites sharing one argument-of-latitude value (mod 360) form a
"row": they sit at the same latitude and move in the same direction,
occupying every other plane. There are 2*M such rows and each holds N/2
satellites. Row bookkeeping (polar-cap membership, crossing events) is
done on the ideal-polar reference where the argument of latitude maps
directly to latitude; true latitudes from the configured inclination are
used for positions, elevations, and link lengths.

Epoch convention: at t=0 the ascending node of plane 1 and the Greenwich
meridian are both at longitude 0; ground stations rotate at the sidereal
rate.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleGeometryError, UnsupportedConfigurationError

EARTH_RADIUS_KM = 6378.137
MU_EARTH_KM3_S2 = 398600.4418
SPEED_OF_LIGHT_KM_S = 299792.458
SIDEREAL_DAY_S = 86164.0905

# Grazing altitude (km) below which an inter-satellite ray is considered
# blocked by Earth and atmosphere.
DEFAULT_GRAZING_ALTITUDE_KM = 49.0

# Tolerance for deciding that 2*L_pa is an exact multiple of the row
# spacing (the uniform-distribution case).
_SLOT_EPS = 1e-9


@dataclass(frozen=True)
class ConstellationSpec:
    """Static parameters of a polar-orbit Walker-star constellation.

    Args:
        plane_count: Number of orbital planes N (must be even, >= 2).
        sats_per_plane: Satellites per plane M (>= 3).
        inclination_deg: Orbital inclination in degrees, in (0, 180).
        altitude_km: Circular-orbit altitude above the surface.
        period_s: Orbit period in seconds; derived from Kepler's third
            law when omitted.
        inter_plane_spacing_deg: Ascending-node spacing between adjacent
            planes; defaults to 180/N (planes spread over a half circle).
        earth_radius_km: Spherical Earth radius.
        grazing_altitude_km: Minimum ray altitude for inter-satellite
            visibility.
        name: Label used in reports and exports.
    """
    plane_count: int
    sats_per_plane: int
    inclination_deg: float
    altitude_km: float
    period_s: float | None = None
    inter_plane_spacing_deg: float | None = None
    earth_radius_km: float = EARTH_RADIUS_KM
    grazing_altitude_km: float = DEFAULT_GRAZING_ALTITUDE_KM
    name: str = "constellation"

    def __post_init__(self):
        if self.plane_count < 2:
            raise UnsupportedConfigurationError(
                f"plane_count must be >= 2, got {self.plane_count}")
        if self.plane_count % 2 != 0:
            raise UnsupportedConfigurationError(
                "plane_count must be even: rows alternate plane parity, which "
                f"has no consistent pairing for {self.plane_count} planes")
        if self.sats_per_plane < 3:
            raise UnsupportedConfigurationError(
                f"sats_per_plane must be >= 3, got {self.sats_per_plane}")
        if not 0.0 < self.inclination_deg < 180.0:
            raise ValueError(
                f"inclination_deg must be in (0, 180), got {self.inclination_deg}")
        if self.altitude_km <= 0.0:
            raise ValueError(f"altitude_km must be positive, got {self.altitude_km}")
        if self.period_s is not None and self.period_s <= 0.0:
            raise ValueError(f"period_s must be positive, got {self.period_s}")
        if self.inter_plane_spacing_deg is not None and not (
                0.0 < self.inter_plane_spacing_deg <= 180.0):
            raise ValueError(
                "inter_plane_spacing_deg must be in (0, 180], got "
                f"{self.inter_plane_spacing_deg}")
        if self.grazing_altitude_km >= self.altitude_km:
            raise ValueError("grazing_altitude_km must be below altitude_km")

    @property
    def intra_plane_spacing_deg(self) -> float:
        return 360.0 / self.sats_per_plane

    @property
    def phase_offset_deg(self) -> float:
        """Phase stagger between adjacent planes (half an intra-plane slot)."""
        return 180.0 / self.sats_per_plane

    @property
    def plane_spacing_deg(self) -> float:
        if self.inter_plane_spacing_deg is not None:
            return self.inter_plane_spacing_deg
        return 180.0 / self.plane_count

    @property
    def orbit_radius_km(self) -> float:
        return self.earth_radius_km + self.altitude_km

    @property
    def total_satellites(self) -> int:
        return self.plane_count * self.sats_per_plane

    @property
    def row_count(self) -> int:
        """Number of distinct same-latitude, same-direction satellite rows."""
        return 2 * self.sats_per_plane


@dataclass(frozen=True, order=True)
class SatId:
    """Identifies satellite j in plane p, both 1-based."""
    plane: int
    index_in_plane: int


@dataclass(frozen=True)
class SatState:
    """Instantaneous satellite state.

    Position is Earth-centered inertial (km); longitude is the
    Earth-fixed sub-satellite longitude.
    """
    sat: SatId
    time_s: float
    latitude_deg: float
    longitude_deg: float
    position_km: tuple[float, float, float]
    ascending: bool


@dataclass(frozen=True)
class LsRow:
    """One same-latitude, same-direction row of satellites."""
    phase_class: int
    u_deg: float
    latitude_deg: float
    ascending: bool
    in_polar: bool
    members: tuple[SatId, ...]


@dataclass(frozen=True)
class LsState:
    """All 2*M rows at one instant, ordered from the south apex in the
    direction of ascending motion.

    ``n_rows_nonpolar``/``n_rows_polar`` are the nominal per-arc counts
    floor(2*L_pa / phase_offset) and M minus that; the instantaneous
    membership (which briefly holds one extra non-polar row after an exit
    in non-uniform configurations) is carried per row by ``in_polar``.
    """
    time_s: float
    rows: tuple[LsRow, ...]
    n_rows: int
    n_rows_polar: int
    n_rows_nonpolar: int
    anchor_index: int


@dataclass(frozen=True)
class VisibilityModel:
    """Link-visibility parameters for one polar-border setting.

    ``horizontal_min_latitude_deg`` is 0 when two-planes-apart links are
    never Earth-blocked (high-altitude constellations). A border at or
    below the survival latitude leaves no window in which horizontal
    links are usable; the state is representable and the topology
    validator rejects any horizontal edge placed there.
    """
    max_link_angle_deg: float
    horizontal_min_latitude_deg: float
    polar_border_deg: float

    def __post_init__(self):
        if not 0.0 < self.polar_border_deg < 90.0:
            raise ValueError(
                f"polar_border_deg must be in (0, 90), got {self.polar_border_deg}")
        if not 0.0 <= self.horizontal_min_latitude_deg < 90.0:
            raise ValueError(
                "horizontal_min_latitude_deg must be in [0, 90), got "
                f"{self.horizontal_min_latitude_deg}")


@dataclass(frozen=True)
class GroundStation:
    name: str
    latitude_deg: float
    longitude_deg: float
    min_elevation_deg: float = 10.0

    def __post_init__(self):
        if abs(self.latitude_deg) > 90.0:
            raise ValueError(f"latitude_deg out of range: {self.latitude_deg}")
        if self.min_elevation_deg < 0.0:
            raise ValueError(
                f"min_elevation_deg must be >= 0, got {self.min_elevation_deg}")


def orbit_period(spec: ConstellationSpec) -> float:
    """Configured orbit period, or the Keplerian period for the altitude."""
    if spec.period_s is not None:
        return spec.period_s
    a = spec.orbit_radius_km
    return 2.0 * math.pi * math.sqrt(a ** 3 / MU_EARTH_KM3_S2)


def validate_sat_id(spec: ConstellationSpec, sat: SatId) -> None:
    if not (1 <= sat.plane <= spec.plane_count
            and 1 <= sat.index_in_plane <= spec.sats_per_plane):
        raise ValueError(f"satellite {sat} outside {spec.plane_count}x"
                         f"{spec.sats_per_plane} constellation")


def sat_to_index(spec: ConstellationSpec, sat: SatId) -> int:
    """Dense 0-based index, plane-major."""
    return (sat.plane - 1) * spec.sats_per_plane + (sat.index_in_plane - 1)


def index_to_sat(spec: ConstellationSpec, index: int) -> SatId:
    plane, j = divmod(index, spec.sats_per_plane)
    return SatId(plane + 1, j + 1)


def initial_phase_deg(spec: ConstellationSpec, sat: SatId) -> float:
    """Argument of latitude of a satellite at t=0."""
    return ((sat.plane - 1) * spec.phase_offset_deg
            + (sat.index_in_plane - 1) * spec.intra_plane_spacing_deg)


def argument_of_latitude_deg(spec: ConstellationSpec, sat: SatId, t: float) -> float:
    period = orbit_period(spec)
    return (initial_phase_deg(spec, sat) + 360.0 * t / period) % 360.0


def phase_latitude_deg(u_deg: float) -> float:
    """Latitude an argument-of-latitude value maps to on an ideal polar orbit.

    Folds u into [-90, 90]: the reference used for row ordering and
    polar-border logic.
    """
    u = u_deg % 360.0
    if u < 90.0:
        return u
    if u < 270.0:
        return 180.0 - u
    return u - 360.0


def is_ascending(u_deg: float) -> bool:
    """True on the half-orbit running from -90 toward +90 of latitude."""
    u = u_deg % 360.0
    return u < 90.0 or u >= 270.0


def in_polar_band(u_deg: float, polar_border_deg: float) -> bool:
    """Polar-cap membership of a phase position, on the ideal reference.

    The caps are half-open along the direction of motion: a row exactly on
    the entry border is inside, a row exactly on the exit border is
    outside, so states evaluated at crossing instants are unambiguous.
    """
    u = u_deg % 360.0
    north_entry = polar_border_deg
    north_exit = 180.0 - polar_border_deg
    south_entry = 180.0 + polar_border_deg
    south_exit = 360.0 - polar_border_deg
    return (north_entry <= u < north_exit) or (south_entry <= u < south_exit)


def true_latitude_deg(spec: ConstellationSpec, u_deg: float) -> float:
    """Latitude for the configured inclination: asin(sin i * sin u)."""
    s = math.sin(math.radians(spec.inclination_deg)) * math.sin(math.radians(u_deg))
    return math.degrees(math.asin(max(-1.0, min(1.0, s))))


def _plane_basis(spec: ConstellationSpec, plane: int) -> tuple[float, float]:
    raan = math.radians((plane - 1) * spec.plane_spacing_deg)
    return math.cos(raan), math.sin(raan)


def position_km(spec: ConstellationSpec, sat: SatId, t: float) -> tuple[float, float, float]:
    """ECI position on the circular orbit at time t."""
    u = math.radians(argument_of_latitude_deg(spec, sat, t))
    inc = math.radians(spec.inclination_deg)
    cos_raan, sin_raan = _plane_basis(spec, sat.plane)
    r = spec.orbit_radius_km
    cu, su = math.cos(u), math.sin(u)
    x = r * (cos_raan * cu - sin_raan * su * math.cos(inc))
    y = r * (sin_raan * cu + cos_raan * su * math.cos(inc))
    z = r * su * math.sin(inc)
    return (x, y, z)


def satellite_state(spec: ConstellationSpec, sat: SatId, t: float) -> SatState:
    """Propagate one satellite to time t.

    Args:
        spec: Constellation parameters.
        sat: Satellite identifier (validated).
        t: Time in seconds from epoch (any real value).

    Returns:
        SatState with ECI position, true latitude, Earth-fixed longitude,
        and the ascending/descending flag.

    Raises:
        ValueError: If the satellite id is outside the constellation.
    """
    validate_sat_id(spec, sat)
    u = argument_of_latitude_deg(spec, sat, t)
    pos = position_km(spec, sat, t)
    lat = true_latitude_deg(spec, u)
    lon_inertial = math.degrees(math.atan2(pos[1], pos[0]))
    lon = (lon_inertial - 360.0 * t / SIDEREAL_DAY_S + 180.0) % 360.0 - 180.0
    return SatState(
        sat=sat,
        time_s=t,
        latitude_deg=lat,
        longitude_deg=lon,
        position_km=pos,
        ascending=is_ascending(u),
    )


def all_positions_km(spec: ConstellationSpec, t: float) -> np.ndarray:
    """ECI positions of every satellite at time t, plane-major order.

    Returns an (N*M, 3) array indexed by ``sat_to_index``.
    """
    period = orbit_period(spec)
    planes = np.arange(spec.plane_count)
    slots = np.arange(spec.sats_per_plane)
    u0 = (planes[:, None] * spec.phase_offset_deg
          + slots[None, :] * spec.intra_plane_spacing_deg)
    u = np.radians(u0 + 360.0 * t / period)
    raan = np.radians(planes * spec.plane_spacing_deg)[:, None]
    inc = math.radians(spec.inclination_deg)
    r = spec.orbit_radius_km
    cu, su = np.cos(u), np.sin(u)
    x = r * (np.cos(raan) * cu - np.sin(raan) * su * math.cos(inc))
    y = r * (np.sin(raan) * cu + np.cos(raan) * su * math.cos(inc))
    z = r * su * math.sin(inc)
    return np.stack([x, y, z], axis=-1).reshape(-1, 3)


def geocentric_angle_deg(a, b) -> float:
    """Angle at Earth center between two position vectors, in [0, 180].

    Raises:
        ValueError: If either vector is zero.
    """
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    na = float(np.linalg.norm(av))
    nb = float(np.linalg.norm(bv))
    if na == 0.0 or nb == 0.0:
        raise ValueError("geocentric angle undefined for a zero position vector")
    cosang = float(np.dot(av, bv)) / (na * nb)
    return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))


def propagation_delay_s(a, b) -> float:
    """Straight-line propagation delay between two points, in seconds."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    return float(np.linalg.norm(av - bv)) / SPEED_OF_LIGHT_KM_S


def max_link_angle_deg(spec: ConstellationSpec) -> float:
    """Largest geocentric angle at which two satellites still see each other.

    Derived from the grazing geometry: the ray between two satellites at
    orbit radius touches the grazing shell when the angle reaches
    2*acos((R + h_graze) / (R + h)).
    """
    ratio = (spec.earth_radius_km + spec.grazing_altitude_km) / spec.orbit_radius_km
    return 2.0 * math.degrees(math.acos(max(-1.0, min(1.0, ratio))))


def horizontal_survival_latitude_deg(
    spec: ConstellationSpec, max_angle_deg: float | None = None,
) -> float:
    """Lowest latitude at which two-planes-apart links clear the Earth.

    Solves sin^2(L) = (cos(theta_max) - cos(2*dOmega)) / (1 - cos(2*dOmega))
    for the configured plane spacing.

    Raises:
        InfeasibleGeometryError: If the expression has no solution in
            [0, 1]; below zero means such links are visible at every
            latitude, at/above one means they are never visible.
    """
    theta = max_angle_deg if max_angle_deg is not None else max_link_angle_deg(spec)
    two_domega = 2.0 * spec.plane_spacing_deg
    denom = 1.0 - math.cos(math.radians(two_domega))
    if denom <= 0.0:
        raise InfeasibleGeometryError("plane spacing too small for a survival latitude")
    arg = (math.cos(math.radians(theta)) - math.cos(math.radians(two_domega))) / denom
    if arg < 0.0:
        raise InfeasibleGeometryError(
            f"links two planes apart are visible at all latitudes "
            f"(max link angle {theta:.2f} deg exceeds {two_domega:.2f} deg)")
    if arg > 1.0:
        raise InfeasibleGeometryError(
            "links two planes apart are never visible at this geometry")
    return math.degrees(math.asin(math.sqrt(arg)))


def make_visibility_model(
    spec: ConstellationSpec, polar_border_deg: float,
) -> VisibilityModel:
    """Build the visibility model for one polar-border setting.

    An always-visible horizontal geometry maps to a survival latitude of
    zero rather than an error.
    """
    theta = max_link_angle_deg(spec)
    try:
        l_horizontal = horizontal_survival_latitude_deg(spec, theta)
    except InfeasibleGeometryError:
        if math.cos(math.radians(theta)) < math.cos(math.radians(2.0 * spec.plane_spacing_deg)):
            l_horizontal = 0.0
        else:
            raise
    return VisibilityModel(
        max_link_angle_deg=theta,
        horizontal_min_latitude_deg=l_horizontal,
        polar_border_deg=polar_border_deg,
    )


def nonpolar_row_count(spec: ConstellationSpec, polar_border_deg: float) -> int:
    """Nominal rows per non-polar arc: floor(2*L_pa / phase_offset)."""
    return int(math.floor(2.0 * polar_border_deg / spec.phase_offset_deg + _SLOT_EPS))


def is_uniform_row_distribution(spec: ConstellationSpec, polar_border_deg: float) -> bool:
    """True when 2*L_pa is an exact multiple of the row spacing.

    In that case every row entering a polar cap coincides with another row
    exiting one.
    """
    slots = 2.0 * polar_border_deg / spec.phase_offset_deg
    return abs(slots - round(slots)) < _SLOT_EPS


def class_planes(spec: ConstellationSpec, phase_class: int) -> list[int]:
    """Planes populated by a phase class: every other plane, parity-matched."""
    start = 1 if phase_class % 2 == 0 else 2
    return list(range(start, spec.plane_count + 1, 2))


def class_member(spec: ConstellationSpec, phase_class: int, plane: int) -> SatId:
    """The satellite of a phase class sitting in a given plane."""
    if (plane - 1) % 2 != phase_class % 2:
        raise ValueError(f"plane {plane} holds no member of class {phase_class}")
    j = ((phase_class - (plane - 1)) // 2) % spec.sats_per_plane
    return SatId(plane, j + 1)


def class_phase_deg(spec: ConstellationSpec, phase_class: int, t: float) -> float:
    """Argument of latitude shared by all members of a phase class."""
    period = orbit_period(spec)
    return (phase_class * spec.phase_offset_deg + 360.0 * t / period) % 360.0


def build_ls_state(
    spec: ConstellationSpec, vis: VisibilityModel, t: float,
) -> LsState:
    """Group every satellite into its row and classify the rows at time t.

    Rows are ordered starting from the south apex in the direction of
    ascending motion. The anchor row is the non-polar row that most
    recently exited a polar cap; the simultaneous north/south exit tie is
    broken toward the lower-ordered (ascending-arc) row.
    """
    border = vis.polar_border_deg
    rows = []
    for c in range(spec.row_count):
        u = class_phase_deg(spec, c, t)
        members = tuple(
            class_member(spec, c, p) for p in class_planes(spec, c)
        )
        rows.append(LsRow(
            phase_class=c,
            u_deg=u,
            latitude_deg=true_latitude_deg(spec, u),
            ascending=is_ascending(u),
            in_polar=in_polar_band(u, border),
            members=members,
        ))
    rows.sort(key=lambda r: (r.u_deg + 90.0) % 360.0)

    anchor_index = -1
    best_since_exit = math.inf
    for i, row in enumerate(rows):
        if row.in_polar:
            continue
        if row.ascending:
            since_exit = (row.u_deg - (360.0 - border)) % 360.0
        else:
            since_exit = (row.u_deg - (180.0 - border)) % 360.0
        if since_exit < best_since_exit - 1e-12:
            best_since_exit = since_exit
            anchor_index = i

    n_npa = nonpolar_row_count(spec, border)
    return LsState(
        time_s=t,
        rows=tuple(rows),
        n_rows=spec.row_count,
        n_rows_polar=spec.sats_per_plane - n_npa,
        n_rows_nonpolar=n_npa,
        anchor_index=anchor_index,
    )


def ground_position_km(
    gs: GroundStation, t: float, earth_radius_km: float = EARTH_RADIUS_KM,
) -> tuple[float, float, float]:
    """ECI position of a ground station, rotating at the sidereal rate."""
    lat = math.radians(gs.latitude_deg)
    lon = math.radians(gs.longitude_deg) + 2.0 * math.pi * t / SIDEREAL_DAY_S
    return (
        earth_radius_km * math.cos(lat) * math.cos(lon),
        earth_radius_km * math.cos(lat) * math.sin(lon),
        earth_radius_km * math.sin(lat),
    )


def elevation_angle_deg(
    gs: GroundStation,
    sat_state: SatState,
    t: float,
    earth_radius_km: float = EARTH_RADIUS_KM,
) -> float:
    """Elevation of a satellite above the station's local horizon.

    Negative below the horizon; t drives the station's rotation and should
    match the satellite state's time.
    """
    gpos = np.asarray(ground_position_km(gs, t, earth_radius_km))
    spos = np.asarray(sat_state.position_km)
    los = spos - gpos
    rng = float(np.linalg.norm(los))
    if rng == 0.0:
        return 90.0
    sin_el = float(np.dot(los, gpos)) / (rng * earth_radius_km)
    return math.degrees(math.asin(max(-1.0, min(1.0, sin_el))))
