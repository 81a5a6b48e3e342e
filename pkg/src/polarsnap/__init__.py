"""Deterministic snapshot-partition and routing analysis for polar-orbit
LEO constellations."""

from .errors import (
    InfeasibleGeometryError,
    ScenarioError,
    UnsupportedConfigurationError,
)
from .geometry import (
    ConstellationSpec,
    GroundStation,
    LsRow,
    LsState,
    SatId,
    SatState,
    VisibilityModel,
    build_ls_state,
    elevation_angle_deg,
    geocentric_angle_deg,
    horizontal_survival_latitude_deg,
    make_visibility_model,
    max_link_angle_deg,
    orbit_period,
    propagation_delay_s,
    satellite_state,
)
from .links import (
    HORIZONTAL,
    INTRA_PLANE,
    OBLIQUE,
    IslEdge,
    TopologyEdgeSet,
    TopologyViolation,
    fixed_topology,
    intra_plane_edges,
    reassign_topology,
    validate_topology,
)
from .routing import (
    DelaySample,
    DelaySeries,
    PathResult,
    UtilizationReport,
    attach_ground,
    delay_experiment,
    shortest_delay,
    utilization,
)
from .scenario import ScenarioConfig, load_scenario
from .report import (
    ComparisonReport,
    ComparisonRow,
    export_topology,
    load_topology,
    run_compare,
)
from .snapshots import (
    METHOD_EQUAL_TIME,
    METHOD_FIXED,
    METHOD_REASSIGNMENT,
    AnalyticSummary,
    PolarCrossing,
    SnapshotSequence,
    TopologySnapshot,
    analytic_summary,
    enumerate_events,
    partition,
    partition_equal_time,
    partition_fixed,
    partition_reassignment,
)

__version__ = "0.1.0"
