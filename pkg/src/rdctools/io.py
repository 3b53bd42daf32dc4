"""CSV and JSON emission of sweep results."""

import csv
import io
import json
import math
from importlib import resources

SCHEMA_ID = "rdctools/rdc-points/1"
CSV_HEADER = ["theta_d", "theta_p", "theta_c", "rate_bits", "branch"]
CSV_ORACLE = ["oracle_rate_bits", "oracle_gap_bits"]


def _num(v):
    """Shortest round-trip text for a float; '' for None, 'inf' for infinities."""
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_num(v):
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def points_to_csv(points, with_oracle=False):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (CSV_ORACLE if with_oracle else []))
    for p in points:
        row = [_num(p.theta_d), _num(p.theta_p), _num(p.theta_c), _num(p.rate), p.branch]
        if with_oracle:
            row += [_num(p.oracle_rate), _num(p.oracle_gap)]
        w.writerow(row)
    return buf.getvalue()


def points_to_json(points, config, with_oracle=False):
    fixed = {"gamma": config.gamma} if config.source == "gaussian" else {"q_sx": config.q_sx}
    swept = {a.name for a in config.axes}
    for b in ("theta_d", "theta_p", "theta_c"):
        if b not in swept and getattr(config, b) is not None:
            fixed[b] = _json_num(getattr(config, b))
    recs = []
    for p in points:
        r = {"theta_d": _json_num(p.theta_d), "theta_p": _json_num(p.theta_p),
             "theta_c": _json_num(p.theta_c), "rate": _json_num(p.rate), "branch": p.branch}
        if with_oracle:
            r["oracle_rate"] = _json_num(p.oracle_rate)
            r["oracle_gap"] = _json_num(p.oracle_gap)
        recs.append(r)
    doc = {
        "schema": SCHEMA_ID,
        "source": config.source,
        "constraint_mode": config.constraint_mode if config.source == "binary" else None,
        "fixed": fixed,
        "axes": [a.describe() for a in config.axes],
        "order": "row-major, first axis slowest",
        "points": recs,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render(points, config, with_oracle=False):
    if config.format == "json":
        return points_to_json(points, config, with_oracle)
    return points_to_csv(points, with_oracle)


def load_schema():
    """The JSON schema document that sweep output validates against."""
    text = resources.files("rdctools").joinpath("schema/rdc_points.schema.json").read_text(
        encoding="utf-8")
    return json.loads(text)
