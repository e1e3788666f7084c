"""Report serialization: stable field order, fixed float precision.

Floats are rounded to 12 significant digits before serialization and keys are
sorted, so identical runs produce byte-identical report files.  Timing is
never part of a report; the CLI prints it to stderr.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import WorkbenchError

ARTIFACT_VERSION = "cayleybench 0.1.0"


def round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def report_json_bytes(report: dict) -> bytes:
    return (json.dumps(round_floats(report), sort_keys=True, indent=2) + "\n").encode()


_CSV_SCHEMAS = {
    "rd-profile": (["r1", "r2", "p", "lower", "upper", "restarts"],
                   lambda payload: [[r["r1"], r["r2"], r["p"], r["lower"], r["upper"],
                                     r["restarts"]] for r in payload["rows"]]),
    "tmap-verify": (["g", "r", "count", "Q2(r)"],
                    lambda payload: [[r["g"], r["r"], r["count"],
                                      "" if r.get("claim") is None else r["claim"]]
                                     for r in payload["count_rows"]]),
    "opnorm": (["R", "value"],
               lambda payload: [[r["R"], r["value"]] for r in payload["rows"]]),
}


def report_csv_bytes(report: dict) -> bytes:
    kind = report.get("kind")
    schema = _CSV_SCHEMAS.get(kind)
    if schema is None:
        raise WorkbenchError(f"kind {kind!r} has no CSV schema")
    header, extract = schema
    rows = extract(round_floats(report["payload"]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue().encode()


def emit_report(report: dict, path, fmt: str | None = None) -> str:
    """Write a report as .json or .csv (format from the extension by default)."""
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower() or "json"
    if fmt == "json":
        data = report_json_bytes(report)
    elif fmt == "csv":
        data = report_csv_bytes(report)
    else:
        raise WorkbenchError(f"unknown report format {fmt!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return str(path)


_REQUIRED_PAYLOAD_KEYS = {
    "ball": {"radius", "sphere_sizes", "total"},
    "star-verify": {"pass", "sigma", "delta", "ball_radius", "triangles_checked"},
    "calibrate": {"result", "table"},
    "decomp-count": {"c1", "c2", "max_table"},
    "rd-profile": {"rows", "profile"},
    "opnorm": {"rows", "x"},
    "tmap-verify": {"condition_i", "condition_ii", "condition_iii", "count_rows"},
    "trace": {"samples", "all_pass"},
}


def validate_payload(kind: str, payload: dict) -> None:
    """Check a payload against its published schema (required keys)."""
    required = _REQUIRED_PAYLOAD_KEYS.get(kind)
    if required is None:
        raise WorkbenchError(f"no schema for kind {kind!r}")
    missing = required - payload.keys()
    if missing:
        raise WorkbenchError(f"payload for {kind!r} missing keys: {sorted(missing)}")
