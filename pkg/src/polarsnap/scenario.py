"""Scenario files: flat key-value text with section headers.

Example::

    [constellation]
    name = iridium
    planes = 6
    sats_per_plane = 11
    inclination_deg = 86.4
    altitude_km = 780
    period_s = 6027

    [partition]
    polar_border_deg = 60, 65, 70, 75
    methods = reassignment, fixed, equal_time
    trigger = enter
    equal_time_delta = match_reassignment

    [experiment]
    source = Beijing, 39.904, 116.407
    destination = London, 51.507, -0.128
    min_elevation_deg = 10
    duration_s = 86400
    interval_s = 60

    [output]
    directory = out

Unknown sections or keys are rejected with their line number. Comments
start with '#'.
"""
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ScenarioError
from .geometry import ConstellationSpec, GroundStation
from .snapshots import METHOD_EQUAL_TIME, METHOD_FIXED, METHOD_REASSIGNMENT

MATCH_REASSIGNMENT = "match_reassignment"

_VALID_METHODS = (METHOD_REASSIGNMENT, METHOD_FIXED, METHOD_EQUAL_TIME)

_KNOWN_KEYS = {
    "constellation": {
        "name", "planes", "sats_per_plane", "inclination_deg", "altitude_km",
        "period_s", "inter_plane_spacing_deg", "earth_radius_km",
        "grazing_altitude_km",
    },
    "partition": {
        "polar_border_deg", "methods", "trigger", "equal_time_delta",
    },
    "experiment": {
        "source", "destination", "min_elevation_deg", "duration_s",
        "interval_s",
    },
    "output": {"directory", "random_seed"},
}


@dataclass
class ScenarioConfig:
    """Validated scenario: constellation plus run parameters."""
    constellation: ConstellationSpec
    polar_borders_deg: list[float]
    methods: list[str]
    trigger: str = "enter"
    equal_time_delta: str | float = MATCH_REASSIGNMENT
    source: GroundStation | None = None
    destination: GroundStation | None = None
    duration_s: float = 86400.0
    interval_s: float = 60.0
    output_dir: Path = field(default_factory=lambda: Path("out"))
    random_seed: int | None = None


def _parse_sections(path: Path) -> dict[str, dict[str, tuple[str, int]]]:
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in _KNOWN_KEYS:
                raise ScenarioError(f"unknown section [{current}]", lineno)
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        if current is None:
            raise ScenarioError("key outside any [section]", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS[current]:
            raise ScenarioError(f"unknown key {key!r} in section [{current}]", lineno)
        if key in sections[current]:
            raise ScenarioError(f"duplicate key {key!r}", lineno)
        sections[current][key] = (value, lineno)
    return sections


def _need(section: dict, key: str, section_name: str) -> tuple[str, int]:
    if key not in section:
        raise ScenarioError(f"missing required key {key!r} in [{section_name}]")
    return section[key]


def _number(value: str, lineno: int, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ScenarioError(f"{key} must be a number, got {value!r}", lineno) from None


def _station(value: str, lineno: int, key: str, min_elevation: float) -> GroundStation:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 3:
        raise ScenarioError(
            f"{key} must be 'name, latitude, longitude', got {value!r}", lineno)
    try:
        return GroundStation(parts[0], float(parts[1]), float(parts[2]), min_elevation)
    except ValueError as exc:
        raise ScenarioError(f"{key}: {exc}", lineno) from None


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Parse and validate a scenario file.

    Raises:
        ScenarioError: Missing file, malformed line, unknown key, or a
            field value outside its valid range (reported with the line
            number where available).
    """
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    sections = _parse_sections(path)

    if "constellation" not in sections:
        raise ScenarioError("missing [constellation] section")
    con = sections["constellation"]

    def con_num(key: str, required: bool = False, default: float | None = None):
        if key not in con:
            if required:
                _need(con, key, "constellation")
            return default
        value, lineno = con[key]
        return _number(value, lineno, key)

    kwargs = dict(
        plane_count=int(con_num("planes", required=True)),
        sats_per_plane=int(con_num("sats_per_plane", required=True)),
        inclination_deg=con_num("inclination_deg", required=True),
        altitude_km=con_num("altitude_km", required=True),
        period_s=con_num("period_s"),
        inter_plane_spacing_deg=con_num("inter_plane_spacing_deg"),
        name=con.get("name", ("constellation", 0))[0],
    )
    if "earth_radius_km" in con:
        kwargs["earth_radius_km"] = con_num("earth_radius_km")
    if "grazing_altitude_km" in con:
        kwargs["grazing_altitude_km"] = con_num("grazing_altitude_km")
    try:
        spec = ConstellationSpec(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"[constellation]: {exc}") from None

    part = sections.get("partition", {})
    if "polar_border_deg" in part:
        value, lineno = part["polar_border_deg"]
        borders = [_number(v.strip(), lineno, "polar_border_deg")
                   for v in value.split(",") if v.strip()]
    else:
        borders, lineno = [60.0, 65.0, 70.0, 75.0], 0
    for border in borders:
        if not 0.0 < border < 90.0:
            raise ScenarioError(
                f"polar_border_deg must be in (0, 90), got {border}", lineno)
    if not borders:
        raise ScenarioError("polar_border_deg lists no values", lineno)

    if "methods" in part:
        value, lineno = part["methods"]
        methods = [m.strip() for m in value.split(",") if m.strip()]
        for m in methods:
            if m not in _VALID_METHODS:
                raise ScenarioError(
                    f"methods must be among {_VALID_METHODS}, got {m!r}", lineno)
        if not methods:
            raise ScenarioError("methods lists no values", lineno)
    else:
        methods = list(_VALID_METHODS)

    trigger = "enter"
    if "trigger" in part:
        value, lineno = part["trigger"]
        if value not in ("enter", "exit"):
            raise ScenarioError(f"trigger must be enter or exit, got {value!r}", lineno)
        trigger = value

    equal_delta: str | float = MATCH_REASSIGNMENT
    if "equal_time_delta" in part:
        value, lineno = part["equal_time_delta"]
        if value != MATCH_REASSIGNMENT:
            equal_delta = _number(value, lineno, "equal_time_delta")
            if equal_delta <= 0.0:
                raise ScenarioError(
                    f"equal_time_delta must be positive, got {equal_delta}", lineno)

    exp = sections.get("experiment", {})
    min_el = 10.0
    if "min_elevation_deg" in exp:
        value, lineno = exp["min_elevation_deg"]
        min_el = _number(value, lineno, "min_elevation_deg")
    source = destination = None
    if "source" in exp:
        source = _station(*exp["source"], key="source", min_elevation=min_el)
    if "destination" in exp:
        destination = _station(*exp["destination"], key="destination",
                               min_elevation=min_el)
    duration_s, interval_s = 86400.0, 60.0
    if "duration_s" in exp:
        value, lineno = exp["duration_s"]
        duration_s = _number(value, lineno, "duration_s")
        if duration_s <= 0:
            raise ScenarioError(f"duration_s must be positive, got {duration_s}", lineno)
    if "interval_s" in exp:
        value, lineno = exp["interval_s"]
        interval_s = _number(value, lineno, "interval_s")
        if interval_s <= 0:
            raise ScenarioError(f"interval_s must be positive, got {interval_s}", lineno)

    out = sections.get("output", {})
    output_dir = Path(out["directory"][0]) if "directory" in out else Path("out")
    random_seed = None
    if "random_seed" in out:
        value, lineno = out["random_seed"]
        random_seed = int(_number(value, lineno, "random_seed"))

    return ScenarioConfig(
        constellation=spec,
        polar_borders_deg=borders,
        methods=methods,
        trigger=trigger,
        equal_time_delta=equal_delta,
        source=source,
        destination=destination,
        duration_s=duration_s,
        interval_s=interval_s,
        output_dir=output_dir,
        random_seed=random_seed,
    )
