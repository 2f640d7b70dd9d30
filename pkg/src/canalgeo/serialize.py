"""JSON encodings of bodies and results; JSON-lines and CSV emitters.

Body records carry a ``type`` key:

``polygon``      ``{"vertices": [[x, y], ...]}`` (any order; hulled)
``disc``         ``{"radius": r, "center": [x, y]}``
``rounded``      ``{"core": <body>, "radius": r}``
``degenerate2d`` ``{"vertices": [[x, y]] or [[x, y], [x, y]]}``
``polytope3``    ``{"vertices": [[x, y, z], ...]}`` (hulled)
``points3``      ``{"points": [[x, y, z], ...]}`` (lower-dimensional summand)
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import geom2d, geom3d
from .geom2d import ConvexPolygon, Degenerate2D, RoundedPolygon


class BodyFormatError(ValueError):
    """A body record or file could not be parsed."""


def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def body_to_dict(B) -> dict:
    if isinstance(B, ConvexPolygon):
        return {"type": "polygon", "vertices": _floats(B.vertices)}
    if isinstance(B, Degenerate2D):
        return {"type": "degenerate2d", "vertices": _floats(B.vertices)}
    if isinstance(B, RoundedPolygon):
        return {"type": "rounded", "core": body_to_dict(B.core), "radius": float(B.radius)}
    if isinstance(B, geom3d.ConvexPolytope3):
        return {"type": "polytope3", "vertices": _floats(B.vertices)}
    if isinstance(B, np.ndarray) and B.ndim == 2 and B.shape[1] == 3:
        return {"type": "points3", "points": _floats(B)}
    raise TypeError(f"cannot serialise {type(B).__name__}")


def _array(rec: dict, key: str, dim: int) -> np.ndarray:
    try:
        arr = np.asarray(rec[key], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise BodyFormatError(f"field {key!r} missing or not numeric") from exc
    if arr.ndim != 2 or arr.shape[1] != dim or not np.all(np.isfinite(arr)):
        raise BodyFormatError(f"field {key!r} must be a finite list of {dim}-vectors")
    return arr


def body_from_dict(rec) -> object:
    """Inverse of :func:`body_to_dict`; geometric degeneracy propagates as ``DegenerateInput``."""
    if not isinstance(rec, dict) or "type" not in rec:
        raise BodyFormatError("body record must be an object with a 'type' key")
    kind = rec["type"]
    if kind == "polygon":
        return geom2d.hull2d(_array(rec, "vertices", 2))
    if kind == "degenerate2d":
        return Degenerate2D(_array(rec, "vertices", 2))
    if kind in ("disc", "rounded"):
        try:
            r = float(rec["radius"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BodyFormatError("field 'radius' missing or not numeric") from exc
        if not math.isfinite(r) or r < 0:
            raise BodyFormatError("radius must be finite and nonnegative")
        if kind == "disc":
            center = _array({"c": [rec.get("center", [0.0, 0.0])]}, "c", 2)
            return RoundedPolygon(Degenerate2D(center), r)
        return RoundedPolygon(body_from_dict(rec.get("core")), r)
    if kind == "polytope3":
        return geom3d.hull3d(_array(rec, "vertices", 3))
    if kind == "points3":
        return _array(rec, "points", 3)
    raise BodyFormatError(f"unknown body type {kind!r}")


def load_body(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BodyFormatError(f"cannot read {path}: {exc}") from exc
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodyFormatError(f"{path}: invalid JSON ({exc.msg})") from exc
    return body_from_dict(rec)


def save_body(B, path) -> None:
    Path(path).write_text(json.dumps(body_to_dict(B)) + "\n", encoding="utf-8")


def cheeger_to_dict(res) -> dict:
    return {
        "t_star": res.t_star,
        "ratio": res.ratio,
        "residual": res.residual,
        "set": body_to_dict(res.cheeger_set),
        "core": body_to_dict(res.core),
    }


def report_to_dict(report) -> dict:
    d = report.as_dict()
    d["projection"] = body_to_dict(report.projection)
    return d


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj) -> str:
    """Compact, key-sorted JSON so equal inputs give byte-identical output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def jsonl(records) -> str:
    return "".join(dumps(r) + "\n" for r in records)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()
