import json

import pytest

from splinedim import generate_example
from splinedim.errors import MeshFormatError
from splinedim.meshio import dumps, loads, read_mesh, write_mesh


@pytest.mark.parametrize("name", ["ms3d", "square_torus", "cube_octahedron"])
def test_round_trip(name, tmp_path):
    cx = generate_example(name, 2)
    path = tmp_path / "mesh.json"
    write_mesh(cx, path)
    back = read_mesh(path)
    assert back.vertices == cx.vertices
    assert back.cells == cx.cells
    assert back.interior_f_vector == cx.interior_f_vector


def test_coordinates_are_strings_or_ints(ms3d):
    data = json.loads(dumps(ms3d))
    for v in data["vertices"]:
        for x in v:
            assert isinstance(x, (int, str))


def _tet(**extra):
    data = {
        "dimension": 3,
        "kind": "simplicial",
        "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "cells": [[0, 1, 2, 3]],
    }
    data.update(extra)
    return data


def test_minimal_mesh_loads():
    assert loads(json.dumps(_tet())).f(3) == 1


@pytest.mark.parametrize(
    "data",
    [
        _tet(vertices=[[0.5, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        _tet(dimension=2),
        _tet(kind="cubical"),
        _tet(cells=[[0, 1, 2, "3"]]),
        _tet(faces=[]),
        _tet(kind="polytopal"),
        {"dimension": 3},
        [1, 2, 3],
    ],
)
def test_bad_meshes(data):
    with pytest.raises(MeshFormatError):
        loads(json.dumps(data))


def test_invalid_json():
    with pytest.raises(MeshFormatError):
        loads("{not json")
