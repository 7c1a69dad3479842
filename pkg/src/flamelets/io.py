"""JSON/CSV serialization of every artifact, and point-cloud CSV ingestion.

Every JSON document carries ``schema_version`` and ``kind``. Floats are written
with Python's shortest round-trip representation, so loading a document gives
back an equal object.
"""

from __future__ import annotations

import csv
import io as _io
import json
from collections import OrderedDict
from pathlib import Path
from typing import Any

import numpy as np

from .diagram_metrics import Vineyard
from .errors import ParseError
from .filtration import GridFunction
from .flamelet import Flamelet, SigmaGrid, projection_matrix
from .geometry import DynamicPointCloud, PointCloud
from .landscape import Landscape, YGrid
from .persistence import PersistenceDiagram, PersistencePair

__all__ = [
    "SCHEMA_VERSION",
    "to_dict",
    "from_dict",
    "dumps",
    "loads",
    "save",
    "load",
    "ingest_csv",
    "parse_csv",
    "projection_csv",
]

SCHEMA_VERSION = 1
# documents without a dedicated type; they load as plain dictionaries
PLAIN_KINDS = ("silhouette", "bandwidth_selection")


def _ygrid_dict(g: YGrid) -> dict:
    return {"min": g.min, "max": g.max, "steps": g.steps}


def to_dict(obj) -> dict[str, Any]:
    """JSON-ready dictionary for a diagram, landscape, flamelet or grid function.

    Lists and dicts of those become ``diagrams`` / ``flamelets`` bundles.
    """
    if isinstance(obj, PersistenceDiagram):
        body = {
            "kind": "diagram",
            "dim": obj.dim,
            "convention": obj.convention,
            "pairs": [{"birth": p.birth, "death": p.death, "essential": p.essential} for p in obj.pairs],
        }
    elif isinstance(obj, Landscape):
        body = {"kind": "landscape", "grid": _ygrid_dict(obj.grid), "K": obj.K, "levels": obj.levels.tolist()}
    elif isinstance(obj, Flamelet):
        body = {
            "kind": "flamelet",
            "sigma": obj.sigma.native.tolist(),
            "sigma_unit": obj.sigma.unit.tolist(),
            "ygrid": _ygrid_dict(obj.ygrid),
            "K": obj.K,
            "dim": obj.dim,
            "convention": obj.convention,
            "surface": obj.surface.tolist(),
        }
    elif isinstance(obj, GridFunction):
        body = {
            "kind": "grid_function",
            "shape": list(obj.shape),
            "spacing": list(obj.spacing),
            "origin": list(obj.origin),
            "values": obj.values.ravel().tolist(),
        }
    elif isinstance(obj, Vineyard):
        body = {
            "kind": "vineyard",
            "dim": obj.dim,
            "convention": obj.convention,
            "sigma": obj.sigma.tolist(),
            "native": obj.native.tolist(),
            "diagrams": [to_dict(d) for d in obj.diagrams],
        }
    elif isinstance(obj, dict):
        items = [obj[k] for k in sorted(obj)]
        return to_dict(items)
    elif isinstance(obj, (list, tuple)) and obj and all(isinstance(o, PersistenceDiagram) for o in obj):
        body = {"kind": "diagrams", "diagrams": [to_dict(o) for o in obj]}
    elif isinstance(obj, (list, tuple)) and obj and all(isinstance(o, Flamelet) for o in obj):
        body = {"kind": "flamelets", "flamelets": [to_dict(o) for o in obj]}
    elif isinstance(obj, (list, tuple)) and obj and all(isinstance(o, Vineyard) for o in obj):
        body = {"kind": "vineyards", "vineyards": [to_dict(o) for o in obj]}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"schema_version": SCHEMA_VERSION, **body}


def _ygrid(d: dict) -> YGrid:
    return YGrid(float(d["min"]), float(d["max"]), int(d["steps"]))


def from_dict(data: dict[str, Any]):
    """Inverse of :func:`to_dict`. Bundles come back as lists."""
    try:
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema_version {version!r}")
        kind = data["kind"]
        if kind == "diagram":
            dim = int(data["dim"])
            pairs = [
                PersistencePair(float(p["birth"]), float(p["death"]), dim, bool(p.get("essential", False)))
                for p in data["pairs"]
            ]
            return PersistenceDiagram(pairs, dim, data["convention"])
        if kind == "landscape":
            return Landscape(_ygrid(data["grid"]), np.array(data["levels"], dtype=float))
        if kind == "flamelet":
            sigma = SigmaGrid(data["sigma"], data.get("sigma_unit"))
            return Flamelet(sigma, _ygrid(data["ygrid"]), data["surface"], int(data["dim"]), data["convention"])
        if kind == "grid_function":
            values = np.array(data["values"], dtype=float).reshape(data["shape"])
            return GridFunction(values, data["spacing"], data["origin"])
        if kind == "vineyard":
            return Vineyard(data["sigma"], [from_dict(d) for d in data["diagrams"]], native=data["native"])
        if kind in PLAIN_KINDS:
            return {k: v for k, v in data.items() if k != "schema_version"}
        if kind == "vineyards":
            return [from_dict(d) for d in data["vineyards"]]
        if kind == "diagrams":
            return [from_dict(d) for d in data["diagrams"]]
        if kind == "flamelets":
            return [from_dict(d) for d in data["flamelets"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed {data.get('kind', 'artifact')} document: {exc}") from exc
    raise ParseError(f"unknown artifact kind {kind!r}")


def dumps(obj) -> str:
    if isinstance(obj, dict) and obj.get("kind") in PLAIN_KINDS:
        obj = {"schema_version": SCHEMA_VERSION, **obj}
    data = obj if isinstance(obj, dict) and "schema_version" in obj else to_dict(obj)
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object")
    return from_dict(data)


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def parse_csv(text: str, mode: str = "static"):
    """Parse CSV text into a :class:`PointCloud` (static) or :class:`DynamicPointCloud`.

    A first row that is not entirely numeric is taken as a header. In dynamic
    mode the first column is the frame time and rows sharing a time form a frame.
    """
    if mode not in ("static", "dynamic"):
        raise ValueError(f"unknown CSV mode {mode!r}")
    rows: list[tuple[int, list[float]]] = []
    width = None
    for lineno, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not row or all(not f.strip() for f in row):
            continue
        fields = [f.strip() for f in row]
        if not rows and width is None and not all(_is_number(f) for f in fields):
            width = len(fields)
            continue
        if width is not None and len(fields) != width:
            raise ParseError(f"expected {width} fields, found {len(fields)}", lineno)
        width = len(fields)
        try:
            values = [float(f) for f in fields]
        except ValueError:
            bad = next(f for f in fields if not _is_number(f))
            raise ParseError(f"non-numeric field {bad!r}", lineno) from None
        if not all(np.isfinite(values)):
            raise ParseError("non-finite coordinate", lineno)
        rows.append((lineno, values))
    if not rows:
        raise ParseError("no data rows")
    if mode == "static":
        return PointCloud(np.array([v for _, v in rows]))
    if width < 2:
        raise ParseError("dynamic CSV needs a time column and at least one coordinate", rows[0][0])
    frames: OrderedDict[float, list] = OrderedDict()
    for _, v in rows:
        frames.setdefault(v[0], []).append(v[1:])
    try:
        return DynamicPointCloud([(t, PointCloud(np.array(frames[t]))) for t in sorted(frames)])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def ingest_csv(path, mode: str = "static"):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_csv(text, mode)


def projection_csv(f: Flamelet, k: int) -> str:
    """The k-th flamelet as CSV: header row of y nodes, one row per sigma (native units)."""
    matrix = projection_matrix(f, k)
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sigma"] + [repr(float(y)) for y in f.ygrid.nodes])
    for s, row in zip(f.sigma.native, matrix):
        writer.writerow([repr(float(s))] + [repr(float(v)) for v in row])
    return out.getvalue()
