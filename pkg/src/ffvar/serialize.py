"""Canonical serialization for results.

Exact rationals travel as {"num": str, "den": str, "float": ...} so
pipelines keep full precision while plots get a convenience value. The
payload JSON form is canonical (sorted keys, fixed separators), which is
what makes byte-identical reproducibility a testable property.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .config import RunConfig, cfg
from .polys import Poly, poly_to_text

SCHEMA_VERSION = 1


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator),
                "float": float(obj)}
    if isinstance(obj, Poly):
        return poly_to_text(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    return obj


def payload_json(payload) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True,
                      separators=(",", ":"))


def envelope(payload, config: RunConfig | None, started: float) -> dict:
    return {
        "tool_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": to_jsonable(cfg(config).as_dict()),
        "timing_seconds": round(time.monotonic() - started, 6),
        "payload": to_jsonable(payload),
    }


def envelope_json(payload, config: RunConfig | None, started: float) -> str:
    env = envelope(payload, config, started)
    # the payload subtree is canonical; the envelope adds volatile timing
    return json.dumps(env, sort_keys=True, indent=2)


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(to_jsonable(v), sort_keys=True,
                          separators=(",", ":"))
    return v


def rows_to_csv(rows: list[dict]) -> str:
    """UTF-8 CSV with a header row and LF line endings."""
    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([_csv_cell(row.get(k)) for k in keys])
    return buf.getvalue()
