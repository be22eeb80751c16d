"""JSON documents for spaces, measures, currents, transports and grids.

Every loader validates against the schema in ``schemas/`` before building
objects; problems are reported as :class:`DocumentError` with a JSON path.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from functools import lru_cache
from importlib.resources import files

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match
from referencing import Registry, Resource

from .currents import GridCurrent, PolyhedralCurrent
from .errors import PolyCurrentsError
from .measures import AtomicMeasure
from .paths import Path, Transport
from .spaces import EmbeddedSpace, FiniteMetricSpace

KINDS = ("space", "measure", "current", "transport", "grid", "curves")


class DocumentError(PolyCurrentsError):
    """An input document is malformed, fails its schema, or holds invalid values."""

    def __init__(self, source: str, where: str, message: str):
        self.source = source
        self.where = where
        super().__init__(f"{source}: {where}: {message}")


@lru_cache(maxsize=None)
def _schemas() -> tuple[Registry, dict]:
    root = files("polycurrents") / "schemas"
    loaded = {}
    for kind in KINDS:
        name = f"{kind}.schema.json"
        loaded[name] = json.loads((root / name).read_text(encoding="utf-8"))
    registry = Registry().with_resources((n, Resource.from_contents(s)) for n, s in loaded.items())
    return registry, loaded


def schema(kind: str) -> dict:
    return _schemas()[1][f"{kind}.schema.json"]


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _check_finite(obj, source, where="$"):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise DocumentError(source, where, f"non-finite number {obj!r}")
    if isinstance(obj, list):
        for i, x in enumerate(obj):
            _check_finite(x, source, f"{where}[{i}]")
    elif isinstance(obj, dict):
        for k, x in obj.items():
            _check_finite(x, source, f"{where}.{k}")


def parse(text: str, kind: str, source: str = "<input>") -> dict:
    """Decode and validate a document of the given kind."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(source, f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    _check_finite(doc, source)
    registry, _ = _schemas()
    validator = Draft202012Validator(schema(kind), registry=registry)
    err = best_match(validator.iter_errors(doc))
    if err is not None:
        raise DocumentError(source, _json_path(err.absolute_path), err.message)
    return doc


def load(path: str, kind: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(str(path), "$", exc.strerror or str(exc)) from None
    return parse(text, kind, str(path))


def _wrap(source, where, build):
    try:
        return build()
    except (PolyCurrentsError, IndexError) as exc:
        raise DocumentError(source, where, str(exc)) from None


def space_from_doc(doc: dict, source: str = "<input>", where: str = "$"):
    if doc["kind"] == "embedded":
        return _wrap(source, where, lambda: EmbeddedSpace(doc["points"], doc.get("p", 2)))
    return _wrap(source, where, lambda: FiniteMetricSpace(doc["d"]))


def _indices_in_range(indices, n, source, where):
    for k, v in indices:
        if v >= n:
            raise DocumentError(source, f"{where}[{k}]", f"point index {v} out of range for space with {n} points")


def measure_from_doc(doc: dict, space=None, source: str = "<input>") -> AtomicMeasure:
    if space is not None:
        _indices_in_range(((k, a[0]) for k, a in enumerate(doc["atoms"])), len(space), source, "$.atoms")
    return AtomicMeasure((int(i), float(w)) for i, w in doc["atoms"])


def current_from_doc(doc: dict, source: str = "<input>") -> PolyhedralCurrent:
    space = space_from_doc(doc["space"], source, "$.space")
    edges = doc["edges"]
    for k, (t, h, _) in enumerate(edges):
        if t == h:
            raise DocumentError(source, f"$.edges[{k}]", f"edge {t}->{h} has coinciding endpoints")
    _indices_in_range(((k, max(e[0], e[1])) for k, e in enumerate(edges)), len(space), source, "$.edges")
    return _wrap(source, "$.edges", lambda: PolyhedralCurrent(space, edges))


def transport_from_doc(doc: dict, source: str = "<input>") -> Transport:
    for k, (_, verts) in enumerate(doc["atoms"]):
        if any(a == b for a, b in zip(verts, verts[1:])):
            raise DocumentError(source, f"$.atoms[{k}]", "consecutive path vertices must differ")
    return Transport((float(w), Path(v)) for w, v in doc["atoms"])


def grid_from_doc(doc: dict, source: str = "<input>") -> GridCurrent:
    return _wrap(source, "$", lambda: GridCurrent(doc["rect"], doc["shape"], doc["field"], doc.get("p", 2)))


def _p_doc(p: float):
    return "inf" if math.isinf(p) else int(p)


def space_to_doc(space) -> dict:
    if isinstance(space, EmbeddedSpace):
        return {"kind": "embedded", "p": _p_doc(space.p), "points": space.points.tolist()}
    return {"kind": "metric", "d": space.d.tolist()}


def measure_to_doc(mu: AtomicMeasure) -> dict:
    return {"atoms": [[i, w] for i, w in mu.atoms]}


def current_to_doc(T: PolyhedralCurrent, with_space: bool = True) -> dict:
    doc = {"edges": [[t, h, w] for t, h, w in T.edges]}
    if with_space:
        doc = {"space": space_to_doc(T.space), **doc}
    return doc


def transport_to_doc(eta: Transport) -> dict:
    return {"atoms": [[w, list(p.vertices)] for w, p in eta.atoms]}


def grid_to_doc(G: GridCurrent) -> dict:
    return {"rect": list(G.rect), "shape": list(G.shape), "field": G.field.tolist(), "p": _p_doc(G.p)}


def _render(obj, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        items = [pad + _render(x, depth + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    if isinstance(obj, list) and any(isinstance(x, list) for x in obj):
        # one line per row keeps edge and atom tables readable and diff-able
        items = [pad + json.dumps(x, allow_nan=False) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    return json.dumps(obj, allow_nan=False)


def dumps(doc) -> str:
    """Deterministic JSON: objects indented, innermost arrays on one line."""
    return _render(doc, 0) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename, so no partial file is left."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
