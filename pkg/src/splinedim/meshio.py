"""JSON mesh files with exact rational coordinates."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .complex import CellComplex, build_complex, to_fraction
from .errors import MeshFormatError


def _coord_to_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_json_dict(cx: CellComplex) -> dict:
    out = {
        "dimension": cx.dim,
        "kind": cx.kind,
        "vertices": [[_coord_to_json(x) for x in v] for v in cx.vertices],
        "cells": [list(c) for c in cx.cells],
    }
    if cx.kind == "polytopal":
        out["faces"] = [
            {"dim": f.dim, "vertices": list(f.vertex_ids)}
            for f in cx.faces
            if 0 < f.dim < cx.dim
        ]
    return out


def dumps(cx: CellComplex) -> str:
    return json.dumps(to_json_dict(cx), indent=1) + "\n"


def write_mesh(cx: CellComplex, path) -> None:
    Path(path).write_text(dumps(cx))


def from_json_dict(data) -> CellComplex:
    if not isinstance(data, dict):
        raise MeshFormatError("mesh must be a JSON object")
    missing = {"dimension", "kind", "vertices", "cells"} - set(data)
    if missing:
        raise MeshFormatError(f"missing keys: {', '.join(sorted(missing))}")
    if data["dimension"] != 3:
        raise MeshFormatError("only dimension 3 is supported")
    kind = data["kind"]
    if kind not in ("simplicial", "polytopal"):
        raise MeshFormatError(f"unknown kind {kind!r}")
    try:
        verts = [[to_fraction(x) for x in v] for v in data["vertices"]]
    except TypeError as exc:
        raise MeshFormatError(str(exc)) from exc
    if any(len(v) != 3 for v in verts):
        raise MeshFormatError("vertices must have 3 coordinates")
    cells = data["cells"]
    if not all(isinstance(c, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in c) for c in cells):
        raise MeshFormatError("cells must be lists of integer vertex ids")
    faces = None
    if kind == "polytopal":
        raw = data.get("faces")
        if raw is None:
            raise MeshFormatError("polytopal meshes need an explicit 'faces' lattice")
        faces = []
        for f in raw:
            if not isinstance(f, dict) or "dim" not in f or "vertices" not in f:
                raise MeshFormatError("faces entries need 'dim' and 'vertices'")
            faces.append({"dim": int(f["dim"]), "vertices": list(f["vertices"])})
    elif "faces" in data:
        raise MeshFormatError("'faces' is only allowed for polytopal meshes")
    return build_complex(verts, cells, faces)


def loads(text: str) -> CellComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"invalid JSON: {exc}") from exc
    return from_json_dict(data)


def read_mesh(path) -> CellComplex:
    return loads(Path(path).read_text())
