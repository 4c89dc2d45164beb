"""Disk cache for unit-group tables.

One JSON file per (field, Q), keyed by a digest of the construction
inputs. Files are written atomically and carry a schema version; a corrupt
or stale file is reported and ignored, never fatal, since consumers can
always recompute.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .config import RunConfig, resolve_cache_dir
from .errors import ValidationError

SCHEMA_VERSION = 1


def _key(Q) -> str:
    F = Q.field
    h = hashlib.sha256()
    h.update(repr((SCHEMA_VERSION, F.p, F.k, F.modulus, Q.coeffs)).encode())
    return h.hexdigest()[:24]


def _path(Q, config: RunConfig | None) -> str:
    return os.path.join(resolve_cache_dir(config), f"ug-{_key(Q)}.json")


def serialize_group(group) -> str:
    return json.dumps(group.serializable(), sort_keys=True,
                      separators=(",", ":"))


def store_unit_group(group, config: RunConfig | None = None) -> str:
    path = _path(group.Q, config)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(serialize_group(group))
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load_unit_group(Q, config: RunConfig | None = None):
    """Return the cached UnitGroup or None (missing/corrupt files skipped)."""
    import numpy as np

    from .characters import UnitGroup

    path = _path(Q, config)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
        if data.get("schema") != SCHEMA_VERSION:
            return None
        F = Q.field
        if (data["field"] != {"p": F.p, "k": F.k,
                              "modulus": list(F.modulus) if F.modulus else None}
                or data["Q"] != list(Q.coeffs)):
            return None
        from .polys import Poly
        phi = int(data["phi"])
        rank = len(data["orders"])
        group = UnitGroup(
            Q=Q,
            phi=phi,
            generators=tuple(Poly.make(F, g) for g in data["generators"]),
            orders=tuple(int(d) for d in data["orders"]),
            unit_indices=np.array(data["unit_indices"], dtype=np.int64),
            dlog_rows=np.array(data["dlog"], dtype=np.int64).reshape(phi, rank),
        )
        if len(group.unit_indices) != phi:
            raise ValidationError("cache row count mismatch")
        return group
    except (ValueError, KeyError, TypeError, ValidationError):
        return None


def cache_stat(config: RunConfig | None = None) -> dict:
    root = resolve_cache_dir(config)
    if not os.path.isdir(root):
        return {"dir": root, "files": 0, "bytes": 0}
    names = [n for n in sorted(os.listdir(root)) if n.endswith(".json")]
    total = sum(os.path.getsize(os.path.join(root, n)) for n in names)
    return {"dir": root, "files": len(names), "bytes": total}


def cache_clear(config: RunConfig | None = None) -> dict:
    root = resolve_cache_dir(config)
    removed = 0
    if os.path.isdir(root):
        for n in sorted(os.listdir(root)):
            if n.endswith(".json") or n.endswith(".tmp"):
                os.unlink(os.path.join(root, n))
                removed += 1
    return {"dir": root, "removed": removed}


def cache_verify(config: RunConfig | None = None) -> dict:
    """Re-derive every cached table and compare byte for byte."""
    import numpy as np  # noqa: F401  (UnitGroup construction below)

    from .characters import _construct_unit_group
    from .fields import make_field
    from .polys import Poly, phi_of

    root = resolve_cache_dir(config)
    report = {"dir": root, "checked": 0, "ok": 0, "corrupt": [], "stale": []}
    if not os.path.isdir(root):
        return report
    for name in sorted(os.listdir(root)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(root, name)
        report["checked"] += 1
        try:
            with open(path) as fh:
                data = json.load(fh)
            fld = data["field"]
            F = make_field(fld["p"], fld["k"], fld["modulus"], config)
            Q = Poly.make(F, data["Q"])
            fresh = _construct_unit_group(Q, phi_of(Q), config)
            if serialize_group(fresh) == json.dumps(
                    data, sort_keys=True, separators=(",", ":")):
                report["ok"] += 1
            else:
                report["stale"].append(name)
        except Exception:
            report["corrupt"].append(name)
    return report
