"""Snapshot sequences over one orbit period.

Three partition methods produce a sequence of time intervals, each with a
frozen edge set:

* ``partition_reassignment``: one snapshot per polar-cap crossing event of
  the chosen kind; edges re-paired at every boundary. All durations equal
  T / (2*M) and the inter-plane link count is the same in every snapshot.
* ``partition_fixed``: boundaries wherever the static baseline's active
  edge set changes.
* ``partition_equal_time``: fixed-width intervals anchored at t=0,
  keeping only baseline links that stay active through the whole interval.

``analytic_summary`` computes the reassignment numbers in closed form; the
event-driven sequences are built independently (sampled root-solving of
the border-crossing times) so the two act as cross-checking oracles.
"""
import math
from dataclasses import dataclass

from .geometry import (
    ConstellationSpec,
    VisibilityModel,
    build_ls_state,
    class_phase_deg,
    is_uniform_row_distribution,
    make_visibility_model,
    nonpolar_row_count,
    orbit_period,
    phase_latitude_deg,
)
from .links import (
    TRIGGER_ENTER,
    TRIGGER_EXIT,
    TopologyEdgeSet,
    fixed_topology,
    intra_plane_edges,
    reassign_topology,
)

METHOD_REASSIGNMENT = "reassignment"
METHOD_FIXED = "fixed"
METHOD_EQUAL_TIME = "equal_time"

EVENT_KIND_ENTER = "enter"
EVENT_KIND_EXIT = "exit"

# Offset used to evaluate topology state strictly after a boundary; far
# smaller than any event separation, far larger than root-solver error.
_EVENT_EPS_S = 1e-3

_ROOT_TOL_S = 1e-6


@dataclass(frozen=True)
class PolarCrossing:
    """A merged north/south border-crossing event.

    ``rows`` lists (phase_class, hemisphere) for the two rows crossing
    simultaneously.
    """
    time_s: float
    kind: str
    rows: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class TopologySnapshot:
    start_s: float
    end_s: float
    edges: TopologyEdgeSet
    n_inter_plane: int

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s

    def covers(self, t: float) -> bool:
        return self.start_s <= t < self.end_s


@dataclass(frozen=True)
class SnapshotSequence:
    method: str
    snapshots: tuple[TopologySnapshot, ...]
    period_s: float
    polar_border_deg: float
    trigger: str | None = None
    truncated_final: bool = False

    @property
    def count(self) -> int:
        return len(self.snapshots)

    @property
    def start_s(self) -> float:
        return self.snapshots[0].start_s

    def snapshot_at(self, t: float) -> TopologySnapshot:
        """Governing snapshot for any time, repeating the period cyclically."""
        tau = self.start_s + (t - self.start_s) % self.period_s
        for snap in self.snapshots:
            if snap.covers(tau):
                return snap
        return self.snapshots[-1]


@dataclass(frozen=True)
class AnalyticSummary:
    """Closed-form reassignment-method summary for one polar border."""
    snapshot_duration_s: float
    snapshot_count: int
    n_inter_plane: int
    n_oblique: int
    n_horizontal: int
    n_rows_nonpolar: int


def analytic_summary(spec: ConstellationSpec, polar_border_deg: float) -> AnalyticSummary:
    """Closed-form snapshot duration, count, and link numbers.

    duration = T / (2*M); count = 2*M; oblique links
    2 * floor(rows/2) * (N-1); horizontal links N-2 only when the
    per-arc row count is odd.
    """
    period = orbit_period(spec)
    n_rows = nonpolar_row_count(spec, polar_border_deg)
    n_oblique = 2 * (n_rows // 2) * (spec.plane_count - 1)
    n_horizontal = spec.plane_count - 2 if n_rows % 2 == 1 else 0
    return AnalyticSummary(
        snapshot_duration_s=period / spec.row_count,
        snapshot_count=spec.row_count,
        n_inter_plane=n_oblique + n_horizontal,
        n_oblique=n_oblique,
        n_horizontal=n_horizontal,
        n_rows_nonpolar=n_rows,
    )


def _row_crossings(
    spec: ConstellationSpec,
    phase_class: int,
    polar_border_deg: float,
    horizon_s: float,
) -> list[tuple[float, str, str]]:
    """Crossing times of one row against the +-border reference latitudes.

    Samples the border-distance function |lat_ref(u(t))| - L_pa on a grid
    of T / (200*M) and bisects each sign change to 1e-6 s.
    """
    period = orbit_period(spec)

    def dist(t: float) -> float:
        u = class_phase_deg(spec, phase_class, t)
        return abs(phase_latitude_deg(u)) - polar_border_deg

    step = period / (200.0 * spec.sats_per_plane)
    n_steps = int(math.ceil(horizon_s / step))
    crossings = []
    prev_t, prev_d = 0.0, dist(0.0)
    if abs(prev_d) < 1e-12:
        crossings.append(0.0)
    for k in range(1, n_steps + 1):
        t = min(k * step, horizon_s)
        d = dist(t)
        if abs(d) < 1e-12:
            crossings.append(t)
        elif prev_d * d < 0.0:
            lo, hi = prev_t, t
            dlo = prev_d
            while hi - lo > _ROOT_TOL_S:
                mid = 0.5 * (lo + hi)
                dm = dist(mid)
                if dm == 0.0:
                    lo = hi = mid
                    break
                if dlo * dm < 0.0:
                    hi = mid
                else:
                    lo, dlo = mid, dm
            crossings.append(0.5 * (lo + hi))
        prev_t, prev_d = t, d

    out = []
    for tc in crossings:
        if not 0.0 <= tc < horizon_s:
            continue
        after = dist(tc + 10.0 * _ROOT_TOL_S)
        kind = EVENT_KIND_ENTER if after > 0.0 else EVENT_KIND_EXIT
        u = class_phase_deg(spec, phase_class, tc + 10.0 * _ROOT_TOL_S)
        hemisphere = "north" if phase_latitude_deg(u) > 0.0 else "south"
        out.append((tc, kind, hemisphere))
    return out


def enumerate_events(
    spec: ConstellationSpec,
    polar_border_deg: float,
    horizon_s: float,
    kinds: tuple[str, ...] = (EVENT_KIND_ENTER, EVENT_KIND_EXIT),
) -> list[PolarCrossing]:
    """Chronological polar-border crossings over [0, horizon).

    Simultaneous north/south crossings (rows half a period apart) merge
    into one event. In uniform configurations an enter and an exit event
    share the same instant but stay separate records.
    """
    if horizon_s <= 0.0:
        return []
    raw: list[tuple[float, str, int, str]] = []
    for c in range(spec.row_count):
        for tc, kind, hemisphere in _row_crossings(spec, c, polar_border_deg, horizon_s):
            if kind in kinds:
                raw.append((tc, kind, c, hemisphere))
    raw.sort(key=lambda r: (r[0], r[1], r[2]))

    merged: list[PolarCrossing] = []
    merge_tol = 1e-4
    for tc, kind, c, hemisphere in raw:
        if merged and kind == merged[-1].kind and abs(tc - merged[-1].time_s) < merge_tol:
            merged[-1] = PolarCrossing(
                time_s=merged[-1].time_s,
                kind=kind,
                rows=merged[-1].rows + ((c, hemisphere),),
            )
        else:
            merged.append(PolarCrossing(time_s=tc, kind=kind, rows=((c, hemisphere),)))
    merged.sort(key=lambda e: (e.time_s, e.kind))
    return merged


def _resolve_vis(
    spec: ConstellationSpec, vis: VisibilityModel | None, polar_border_deg: float,
) -> VisibilityModel:
    if vis is None:
        return make_visibility_model(spec, polar_border_deg)
    if abs(vis.polar_border_deg - polar_border_deg) > 1e-12:
        raise ValueError(
            f"visibility model built for border {vis.polar_border_deg}, "
            f"requested {polar_border_deg}")
    return vis


def partition_reassignment(
    spec: ConstellationSpec,
    vis: VisibilityModel | None,
    polar_border_deg: float,
    trigger: str = TRIGGER_ENTER,
) -> SnapshotSequence:
    """One snapshot per trigger event over one period, re-paired edges.

    The sequence starts at the first trigger event at or after t=0 and
    tiles exactly one period.
    """
    vis = _resolve_vis(spec, vis, polar_border_deg)
    period = orbit_period(spec)
    kind = EVENT_KIND_ENTER if trigger == TRIGGER_ENTER else EVENT_KIND_EXIT
    events = enumerate_events(spec, polar_border_deg, 1.5 * period, kinds=(kind,))
    if not events:
        raise ValueError("no trigger events found; polar border may be unreachable")
    t0 = events[0].time_s
    window = [e for e in events if t0 <= e.time_s < t0 + period - 1e-6]

    snapshots = []
    for i, event in enumerate(window):
        start = event.time_s
        end = window[i + 1].time_s if i + 1 < len(window) else t0 + period
        ls = build_ls_state(spec, vis, start + _EVENT_EPS_S)
        topo = reassign_topology(spec, vis, ls, trigger)
        topo = TopologyEdgeSet(topo.edges, start, METHOD_REASSIGNMENT)
        snapshots.append(TopologySnapshot(start, end, topo, topo.n_inter_plane))
    return SnapshotSequence(
        method=METHOD_REASSIGNMENT,
        snapshots=tuple(snapshots),
        period_s=period,
        polar_border_deg=polar_border_deg,
        trigger=trigger,
    )


def partition_fixed(
    spec: ConstellationSpec,
    vis: VisibilityModel | None,
    polar_border_deg: float,
) -> SnapshotSequence:
    """Snapshot boundaries wherever the static baseline's edge set changes."""
    vis = _resolve_vis(spec, vis, polar_border_deg)
    period = orbit_period(spec)
    events = enumerate_events(spec, polar_border_deg, 1.5 * period)

    boundaries = []
    for event in events:
        before = fixed_topology(spec, vis, event.time_s - _EVENT_EPS_S).edges
        after = fixed_topology(spec, vis, event.time_s + _EVENT_EPS_S).edges
        if before != after:
            if boundaries and abs(event.time_s - boundaries[-1]) < 1e-4:
                continue
            boundaries.append(event.time_s)

    if not boundaries:
        topo = fixed_topology(spec, vis, 0.0)
        snap = TopologySnapshot(0.0, period, topo, topo.n_inter_plane)
        return SnapshotSequence(METHOD_FIXED, (snap,), period, polar_border_deg)

    t0 = boundaries[0]
    window = [b for b in boundaries if t0 <= b < t0 + period - 1e-6]
    snapshots = []
    for i, start in enumerate(window):
        end = window[i + 1] if i + 1 < len(window) else t0 + period
        topo = fixed_topology(spec, vis, start + _EVENT_EPS_S)
        topo = TopologyEdgeSet(topo.edges, start, METHOD_FIXED)
        snapshots.append(TopologySnapshot(start, end, topo, topo.n_inter_plane))
    return SnapshotSequence(
        method=METHOD_FIXED,
        snapshots=tuple(snapshots),
        period_s=period,
        polar_border_deg=polar_border_deg,
    )


def partition_equal_time(
    spec: ConstellationSpec,
    vis: VisibilityModel | None,
    polar_border_deg: float,
    delta_s: float,
) -> SnapshotSequence:
    """Fixed-width snapshots keeping only links active through each interval.

    Intervals are anchored at t=0. When delta does not divide the period
    to within one part in 1e6 the final snapshot is truncated and the
    sequence flagged.
    """
    if delta_s <= 0.0:
        raise ValueError(f"delta_s must be positive, got {delta_s}")
    vis = _resolve_vis(spec, vis, polar_border_deg)
    period = orbit_period(spec)

    n_exact = period / delta_s
    truncated = abs(n_exact - round(n_exact)) > 1e-6 * n_exact
    n_full = int(round(n_exact)) if not truncated else int(math.floor(n_exact))

    events = enumerate_events(spec, polar_border_deg, period + delta_s)
    event_times = [e.time_s for e in events]
    intra = intra_plane_edges(spec).edges

    snapshots = []
    bounds = [(k * delta_s, (k + 1) * delta_s) for k in range(n_full)]
    if truncated:
        bounds.append((n_full * delta_s, period))
    for start, end in bounds:
        probes = [start + _EVENT_EPS_S] + [
            te + _EVENT_EPS_S for te in event_times if start < te < end]
        active = None
        for tp in probes:
            inter = fixed_topology(spec, vis, tp).inter_plane_edges
            active = inter if active is None else (active & inter)
        edges = frozenset(intra | (active or frozenset()))
        topo = TopologyEdgeSet(edges, start, METHOD_EQUAL_TIME)
        snapshots.append(TopologySnapshot(start, end, topo, topo.n_inter_plane))
    return SnapshotSequence(
        method=METHOD_EQUAL_TIME,
        snapshots=tuple(snapshots),
        period_s=period,
        polar_border_deg=polar_border_deg,
        truncated_final=truncated,
    )


def partition(
    spec: ConstellationSpec,
    method: str,
    polar_border_deg: float,
    trigger: str = TRIGGER_ENTER,
    equal_time_delta_s: float | None = None,
    vis: VisibilityModel | None = None,
) -> SnapshotSequence:
    """Dispatch to the partition method by name."""
    if method == METHOD_REASSIGNMENT:
        return partition_reassignment(spec, vis, polar_border_deg, trigger)
    if method == METHOD_FIXED:
        return partition_fixed(spec, vis, polar_border_deg)
    if method == METHOD_EQUAL_TIME:
        delta = equal_time_delta_s
        if delta is None:
            delta = orbit_period(spec) / spec.row_count
        return partition_equal_time(spec, vis, polar_border_deg, delta)
    raise ValueError(f"unknown partition method {method!r}")
