"""Durable trace files: one header record plus one record per state.

Two formats carry identical values: jsonl (default, one JSON object per
line) and csv (same header as a ``#``-prefixed JSON line, then one row
per state).  Floats are written with 17 significant digits so files are
byte-stable across runs and round-trip exactly.  Format version "1".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .config import SceneConfig, config_from_dict
from .programs import Trace
from .errors import ConfigFormatError, TraceFormatError
from .kinematics import Body, WorldState, refresh_contacts
from .lexicon import FLOOR_ID, Shape
from .scene import Scene

FORMAT_VERSION = "1"
COORD_CONVENTION = "y-up right-handed, goal along +x"
FORMATS = ("jsonl", "csv")


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_json_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_json_value(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _header_dict(sentence: str, trace: Trace, scene: Scene, cfg: SceneConfig) -> dict:
    bodies = {}
    for body in trace.states[0].bodies.values():
        bodies[body.id] = {
            "shape": body.shape.value,
            "dimensions": list(body.dimensions),
            "mobile": body.mobile,
        }
    return {
        "format_version": FORMAT_VERSION,
        "sentence": sentence,
        "seed": cfg.seed,
        "dt": cfg.dt,
        "frames": len(trace.states),
        "cfg": cfg.to_dict(),
        "bindings": {"theme": scene.theme_id, "ground": scene.ground_id},
        "goal": scene.goal_id,
        "direction": list(scene.direction),
        "bodies": bodies,
        "coords": COORD_CONVENTION,
    }


def _state_record(
    index: int, state: WorldState, label: str | None, theme_id: str, ground_id: str | None
) -> dict:
    theme = state.body(theme_id)
    record: dict = {"index": index, "time": state.time}
    record["bodies"] = {
        body.id: {"pos": list(body.position), "rot": body.rotation}
        for body in state.bodies.values()
    }
    if label is not None:
        record["action"] = label
    record["floor_contact"] = theme.contacts[FLOOR_ID].value
    if ground_id is not None and ground_id != FLOOR_ID:
        record["goal_contact"] = theme.contacts[ground_id].value
    return record


def _records(trace: Trace, scene: Scene):
    for i, state in enumerate(trace.states):
        label = trace.labels[i - 1] if i > 0 else None
        yield _state_record(i, state, label, scene.theme_id, scene.ground_id)


def write_trace(
    path: str | Path,
    fmt: str,
    sentence: str,
    trace: Trace,
    scene: Scene,
    cfg: SceneConfig,
) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    header = _header_dict(sentence, trace, scene, cfg)
    lines = []
    if fmt == "jsonl":
        lines.append(_json_value(header))
        for record in _records(trace, scene):
            lines.append(_json_value(record))
    else:
        body_ids = list(trace.states[0].bodies)
        columns = ["index", "time"]
        for bid in body_ids:
            columns += [f"{bid}_x", f"{bid}_y", f"{bid}_z", f"{bid}_rot"]
        columns += ["action", "floor_contact", "goal_contact"]
        lines.append("# " + _json_value(header))
        lines.append(",".join(columns))
        for record in _records(trace, scene):
            row = [str(record["index"]), fmt_float(record["time"])]
            for bid in body_ids:
                entry = record["bodies"][bid]
                row += [fmt_float(v) for v in entry["pos"]]
                row.append(fmt_float(entry["rot"]))
            row.append(record.get("action", ""))
            row.append(record["floor_contact"])
            row.append(record.get("goal_contact", ""))
            lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


# -- reading --------------------------------------------------------------------


@dataclass(frozen=True)
class TraceDocument:
    header: dict
    trace: Trace
    scene: Scene
    cfg: SceneConfig

    @property
    def sentence(self) -> str:
        return self.header["sentence"]


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise TraceFormatError(f"missing {key!r} in {where}")
    return obj[key]


def _vec(value, where: str) -> tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise TraceFormatError(f"{where} must be a 3-element list")
    try:
        return (float(value[0]), float(value[1]), float(value[2]))
    except (TypeError, ValueError):
        raise TraceFormatError(f"{where} must contain numbers") from None


def _parse_header(obj: dict) -> tuple[dict, SceneConfig]:
    version = _need(obj, "format_version", "header")
    if version != FORMAT_VERSION:
        raise TraceFormatError(
            f"unsupported trace format version {version!r} (expected {FORMAT_VERSION!r})"
        )
    try:
        cfg = config_from_dict(_need(obj, "cfg", "header"))
    except ConfigFormatError as exc:
        raise TraceFormatError(f"bad cfg snapshot: {exc}") from exc
    for key in ("sentence", "frames", "bindings", "bodies", "direction"):
        _need(obj, key, "header")
    return obj, cfg


def _bodies_from_header(header: dict) -> dict[str, dict]:
    catalog = {}
    for bid, entry in header["bodies"].items():
        try:
            shape = Shape(_need(entry, "shape", f"body {bid}"))
        except ValueError:
            raise TraceFormatError(f"unknown shape for body {bid!r}") from None
        dims = _need(entry, "dimensions", f"body {bid}")
        if not isinstance(dims, list):
            raise TraceFormatError(f"dimensions of {bid!r} must be a list")
        catalog[bid] = {
            "shape": shape,
            "dimensions": tuple(float(d) for d in dims),
            "mobile": bool(_need(entry, "mobile", f"body {bid}")),
        }
    return catalog


def _rebuild(header: dict, cfg: SceneConfig, records: list[dict]) -> TraceDocument:
    if len(records) != header["frames"]:
        raise TraceFormatError(
            f"record count {len(records)} does not match header frames {header['frames']}"
        )
    if not records:
        raise TraceFormatError("trace has no state records")
    catalog = _bodies_from_header(header)
    bindings = header["bindings"]
    theme_id = _need(bindings, "theme", "bindings")
    ground_id = bindings.get("ground")
    direction = _vec(header["direction"], "direction")

    states = []
    labels = []
    for i, record in enumerate(records):
        if _need(record, "index", f"record {i}") != i:
            raise TraceFormatError(f"record {i} has index {record['index']}")
        body_entries = _need(record, "bodies", f"record {i}")
        bodies = {}
        for bid, proto in catalog.items():
            entry = _need(body_entries, bid, f"record {i}")
            bodies[bid] = Body(
                id=bid,
                shape=proto["shape"],
                dimensions=proto["dimensions"],
                mobile=proto["mobile"],
                position=_vec(_need(entry, "pos", f"record {i} body {bid}"), "pos"),
                heading=direction if bid == theme_id else (1.0, 0.0, 0.0),
                rotation=float(_need(entry, "rot", f"record {i} body {bid}")),
            )
        state = WorldState(
            time=float(_need(record, "time", f"record {i}")),
            tick_index=i,
            bodies=bodies,
            cfg=cfg,
        )
        states.append(refresh_contacts(state))
        if i > 0:
            action = record.get("action")
            if not action:
                raise TraceFormatError(f"record {i} is missing its action label")
            labels.append(action)

    trace = Trace(tuple(states), tuple(labels))
    scene = Scene(
        initial=states[0],
        theme_id=theme_id,
        ground_id=ground_id,
        goal_id=header.get("goal"),
        direction=direction,
    )
    return TraceDocument(header=header, trace=trace, scene=scene, cfg=cfg)


def _read_jsonl(text: str) -> TraceDocument:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise TraceFormatError("empty trace file")
    try:
        header_obj = json.loads(lines[0])
        records = [json.loads(line) for line in lines[1:]]
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON in trace file: {exc.msg} (line {exc.lineno})") from exc
    header, cfg = _parse_header(header_obj)
    return _rebuild(header, cfg, records)


def _read_csv(text: str) -> TraceDocument:
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) < 2 or not lines[0].startswith("# "):
        raise TraceFormatError("csv trace must start with a '# ' header line")
    try:
        header_obj = json.loads(lines[0][2:])
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON header: {exc.msg}") from exc
    header, cfg = _parse_header(header_obj)
    columns = lines[1].split(",")
    records = []
    for line in lines[2:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise TraceFormatError(f"row has {len(cells)} cells, expected {len(columns)}")
        row = dict(zip(columns, cells))
        try:
            record: dict = {"index": int(row["index"]), "time": float(row["time"])}
            bodies = {}
            for bid in header["bodies"]:
                bodies[bid] = {
                    "pos": [float(row[f"{bid}_x"]), float(row[f"{bid}_y"]), float(row[f"{bid}_z"])],
                    "rot": float(row[f"{bid}_rot"]),
                }
        except (KeyError, ValueError) as exc:
            raise TraceFormatError(f"bad csv row: {exc}") from exc
        record["bodies"] = bodies
        if row.get("action"):
            record["action"] = row["action"]
        records.append(record)
    return _rebuild(header, cfg, records)


def read_trace(path: str | Path) -> TraceDocument:
    """Load a trace file in either format, rebuilding full world states."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace file: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _read_jsonl(text)
    return _read_csv(text)
