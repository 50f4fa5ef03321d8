"""Simplicial and polytopal partitions with exact coordinates.

A complex is a list of rational vertices plus top-dimensional cells. The
face lattice is derived (all subsets of simplices) or supplied explicitly
(polytopal cells), and every face is classified as interior or boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DegenerateCell, DuplicateCell, InvalidLattice, UnknownVertex

Coordinate = tuple[Fraction, ...]


def to_fraction(x) -> Fraction:
    """Exact conversion; floats and bools are refused."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"inexact coordinate {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        num, slash, den = s.partition("/")
        if not _is_int(num) or (slash and not _is_int(den)):
            raise TypeError(f"not a rational literal: {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"unsupported coordinate type {type(x).__name__}")


def _is_int(s: str) -> bool:
    s = s.strip()
    if s[:1] in "+-":
        s = s[1:]
    return s.isdigit()


def affine_rank(points: Sequence[Coordinate]) -> int:
    """Dimension of the affine hull of `points`."""
    if not points:
        return -1
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return matrix_rank(rows)


def matrix_rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_ids: tuple[int, ...]
    interior: bool
    cofaces: tuple[int, ...] = ()
    facets: tuple[int, ...] = ()


@dataclass(frozen=True)
class CellComplex:
    """Pure partition of dimension `dim` embedded in `ambient`-space.

    Faces are sorted by (dim, vertex_ids). `cofaces` point one dimension up,
    `facets` one dimension down.
    """

    vertices: tuple[Coordinate, ...]
    cells: tuple[tuple[int, ...], ...]
    faces: tuple[Face, ...]
    kind: str = "simplicial"
    dim: int = 3

    @property
    def ambient(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {f.vertex_ids: i for i, f in enumerate(self.faces)}

    @cached_property
    def _by_dim(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, f in enumerate(self.faces):
            out.setdefault(f.dim, []).append(i)
        return {k: tuple(v) for k, v in out.items()}

    def face_id(self, vertex_ids: Iterable[int]) -> int:
        return self._index[tuple(sorted(vertex_ids))]

    def face_ids(self, k: int, interior: bool | None = None) -> tuple[int, ...]:
        ids = self._by_dim.get(k, ())
        if interior is None:
            return ids
        return tuple(i for i in ids if self.faces[i].interior == interior)

    def faces_of_dim(self, k: int, interior: bool | None = None) -> list[Face]:
        return [self.faces[i] for i in self.face_ids(k, interior)]

    def f(self, k: int) -> int:
        return len(self.face_ids(k))

    def f_interior(self, k: int) -> int:
        if k == self.dim:
            return self.f(k)
        return len(self.face_ids(k, True))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.f(k) for k in range(self.dim + 1))

    @property
    def interior_f_vector(self) -> tuple[int, ...]:
        return tuple(self.f_interior(k) for k in range(self.dim + 1))

    def vertex_face(self, v: int) -> Face:
        if not 0 <= v < len(self.vertices):
            raise UnknownVertex(v)
        return self.faces[self.face_id((v,))]

    def is_interior_vertex(self, v: int) -> bool:
        return self.vertex_face(v).interior

    def cells_containing(self, face_id: int) -> list[int]:
        """Indices into `cells` of the cells containing the face."""
        verts = set(self.faces[face_id].vertex_ids)
        return [i for i, c in enumerate(self.cells) if verts.issubset(c)]

    @cached_property
    def cell_face_ids(self) -> tuple[int, ...]:
        return tuple(self.face_id(c) for c in self.cells)

    def faces_containing(self, face_id: int, k: int) -> list[int]:
        """Faces of dimension k >= dim(face) containing the face."""
        frontier = {face_id}
        for _ in range(self.faces[face_id].dim, k):
            frontier = {c for f in frontier for c in self.faces[f].cofaces}
        return sorted(frontier)


def _check_cell(coords, cell, dim):
    pts = [coords[v] for v in cell]
    if affine_rank(pts) != dim:
        raise DegenerateCell(f"cell {cell} does not span dimension {dim}")


def build_complex(
    vertices: Sequence[Sequence],
    cells: Iterable[Iterable[int]],
    polytopal_faces: Iterable[Iterable[int]] | None = None,
    dim: int | None = None,
    flat_cells: bool = True,
) -> CellComplex:
    """Derive the face lattice of a partition and classify its faces.

    Simplicial cells have dim+1 vertices. For polytopal complexes pass the
    proper faces of positive dimension (edges, polygons, ...) explicitly,
    either as vertex lists (dimension read off the coordinates) or as
    {"dim": k, "vertices": [...]}. A face with declared dimension may be
    non-flat only if it lies on the boundary, where no smoothness
    condition involves it. Vertices and cells are added automatically.
    """
    coords = tuple(tuple(to_fraction(x) for x in v) for v in vertices)
    if not coords:
        raise ValueError("complex has no vertices")
    amb = len(coords[0])
    if any(len(c) != amb for c in coords):
        raise ValueError("vertices have mixed dimensions")
    nv = len(coords)
    raw_cells = [tuple(c) for c in cells]
    if not raw_cells:
        raise ValueError("complex has no cells")
    cell_list = []
    for c in raw_cells:
        for v in c:
            if not isinstance(v, int) or not 0 <= v < nv:
                raise UnknownVertex(f"vertex id {v!r} out of range in cell {c}")
        if len(set(c)) != len(c):
            raise DegenerateCell(f"cell {c} repeats a vertex")
        cell_list.append(tuple(sorted(c)))
    if len(set(cell_list)) != len(cell_list):
        raise DuplicateCell("a cell appears twice")
    kind = "simplicial" if polytopal_faces is None else "polytopal"
    if dim is None:
        dim = len(cell_list[0]) - 1 if kind == "simplicial" else amb
    if dim > amb:
        raise ValueError("cell dimension exceeds ambient dimension")

    lattice: dict[tuple[int, ...], int] = {}
    warped: set[tuple[int, ...]] = set()
    if kind == "simplicial":
        for c in cell_list:
            if len(c) != dim + 1:
                raise DegenerateCell(f"cell {c} is not a {dim}-simplex")
            if flat_cells:
                _check_cell(coords, c, dim)
            for k in range(1, dim + 2):
                for s in combinations(c, k):
                    lattice[s] = k - 1
    else:
        for c in cell_list:
            if len(c) < dim + 1:
                raise DegenerateCell(f"cell {c} has too few vertices")
            if flat_cells:
                _check_cell(coords, c, dim)
            lattice[c] = dim
        for c in cell_list:
            for v in c:
                lattice[(v,)] = 0
        for entry in polytopal_faces:
            declared = None
            if isinstance(entry, dict):
                declared, entry = int(entry["dim"]), entry["vertices"]
            fv = tuple(sorted(set(entry)))
            if not fv or any(not 0 <= v < nv for v in fv):
                raise InvalidLattice(f"face {fv} references unknown vertices")
            k = affine_rank([coords[v] for v in fv])
            if declared is not None:
                if k < declared:
                    raise InvalidLattice(f"face {fv} does not span dimension {declared}")
                if k > declared:
                    warped.add(fv)
                k = declared
            if k >= dim or len(fv) < k + 1:
                raise InvalidLattice(f"face {fv} has invalid dimension")
            if fv in lattice and lattice[fv] != k:
                raise InvalidLattice(f"face {fv} listed with conflicting dimension")
            if not any(set(fv).issubset(c) for c in cell_list):
                raise InvalidLattice(f"face {fv} lies in no cell")
            lattice[fv] = k
        _check_lattice(lattice)

    keys = sorted(lattice, key=lambda s: (lattice[s], s))
    index = {s: i for i, s in enumerate(keys)}
    by_vertex: dict[int, list[tuple[int, ...]]] = {}
    for s in keys:
        by_vertex.setdefault(s[0], []).append(s)
    up: dict[tuple[int, ...], list[int]] = {s: [] for s in keys}
    down: dict[tuple[int, ...], list[int]] = {s: [] for s in keys}
    sets = {s: set(s) for s in keys}
    for s in keys:
        k = lattice[s]
        if k == 0:
            continue
        for v in s:
            for t in by_vertex.get(v, ()):
                if lattice[t] == k - 1 and t[0] == v and sets[t] <= sets[s]:
                    up[t].append(index[s])
                    down[s].append(index[t])

    # a codimension-one face is interior iff it lies in exactly two cells
    boundary_facets = [s for s in keys if lattice[s] == dim - 1 and len(up[s]) == 1]
    on_boundary = set()
    for s in boundary_facets:
        for k in range(1, len(s) + 1):
            for t in combinations(s, k):
                if t in lattice:
                    on_boundary.add(t)
    faces = []
    for s in keys:
        k = lattice[s]
        if k == dim:
            interior = True
        elif k == dim - 1:
            interior = len(up[s]) == 2
        else:
            interior = s not in on_boundary
        if interior and s in warped:
            raise InvalidLattice(f"interior face {s} is not flat")
        faces.append(Face(k, s, interior, tuple(sorted(up[s])), tuple(sorted(down[s]))))
    return CellComplex(coords, tuple(cell_list), tuple(faces), kind, dim)


def _check_lattice(lattice: dict[tuple[int, ...], int]) -> None:
    keys = list(lattice)
    for i, a in enumerate(keys):
        sa = set(a)
        for b in keys[i + 1 :]:
            inter = sa.intersection(b)
            if inter and tuple(sorted(inter)) not in lattice:
                raise InvalidLattice(f"faces {a} and {b} meet in {sorted(inter)}, which is not a face")
    for s, k in lattice.items():
        if k >= 1:
            covered = set()
            for t, j in lattice.items():
                if j == k - 1 and set(t) <= set(s):
                    covered.update(t)
            if covered != set(s):
                raise InvalidLattice(f"face {s} is not the union of its facets")


# ------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    interior_vertices: list[int] = field(default_factory=list)
    boundary_vertices: list[int] = field(default_factory=list)
    note: str = (
        "vertex links certified by connectivity, Euler characteristic and the "
        "pseudo-manifold condition, not by a homeomorphism test"
    )

    @property
    def accepted(self) -> bool:
        return not self.violations


def _components(nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> int:
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in parent})


def validate_manifold(cx: CellComplex) -> ValidationReport:
    rep = ValidationReport()
    n = cx.dim
    cells = set(cx.face_ids(n))
    # purity
    for i, f in enumerate(cx.faces):
        if f.dim < n and not f.cofaces:
            rep.violations.append(f"face {f.vertex_ids} is maximal but has dimension {f.dim}")
    for i in cx.face_ids(n - 1):
        f = cx.faces[i]
        if len(f.cofaces) > 2:
            rep.violations.append(f"face {f.vertex_ids} lies in {len(f.cofaces)} cells")
    # the cells around every codimension-two face must be connected through facets
    if n >= 2:
        for i in cx.face_ids(n - 2):
            around = cx.faces_containing(i, n)
            walls = cx.faces[i].cofaces
            links = []
            for w in walls:
                cs = cx.faces[w].cofaces
                if len(cs) == 2:
                    links.append((cs[0], cs[1]))
            if _components(around, links) > 1:
                verts = cx.faces[i].vertex_ids
                rep.violations.append(f"cells around face {verts} are disconnected")
                if n == 3:
                    u, w = verts
                    rep.violations.append(f"vertex {u}: link disconnected at link vertex {w}")
                    rep.violations.append(f"vertex {w}: link disconnected at link vertex {u}")
    sphere_chi = 1 + (-1) ** (n - 1)
    for v in range(len(cx.vertices)):
        try:
            vid = cx.face_id((v,))
        except KeyError:
            rep.violations.append(f"vertex {v} lies in no cell")
            continue
        interior = cx.faces[vid].interior
        (rep.interior_vertices if interior else rep.boundary_vertices).append(v)
        edges = cx.faces[vid].cofaces
        chi = 0
        frontier = set(edges)
        k = 1
        while frontier:
            chi += (-1) ** (k - 1) * len(frontier)
            frontier = {c for f in frontier for c in cx.faces[f].cofaces}
            k += 1
        if n >= 2:
            # link vertices are edges at v, joined through 2-faces at v
            joins = []
            for e in edges:
                for tri in cx.faces[e].cofaces:
                    joins.append((e, tri))
            nodes = set(edges) | {t for _, t in joins}
            if nodes and _components(nodes, joins) > 1:
                rep.violations.append(f"vertex {v}: link is disconnected")
        want = sphere_chi if interior else 1
        if chi != want:
            rep.violations.append(f"vertex {v}: link Euler characteristic {chi}, expected {want}")
    assert cells <= set(range(len(cx.faces)))
    return rep


# ------------------------------------------------------- stars, links, cones


@dataclass(frozen=True)
class StarComplex:
    base: CellComplex
    apex: int
    apex_is_interior: bool
    source_vertices: tuple[int, ...] = ()


def _sub_complex(cx: CellComplex, cell_sets: list[tuple[int, ...]], extra_faces, dim: int, flat=True):
    verts = sorted({v for c in cell_sets for v in c})
    remap = {v: i for i, v in enumerate(verts)}
    cells = [tuple(remap[v] for v in c) for c in cell_sets]
    faces = None
    if cx.kind == "polytopal":
        faces = [{"dim": f["dim"], "vertices": [remap[v] for v in f["vertices"]]} for f in extra_faces]
    sub = build_complex([cx.vertices[v] for v in verts], cells, faces, dim=dim, flat_cells=flat)
    return sub, remap, tuple(verts)


def star(cx: CellComplex, v: int) -> StarComplex:
    """Cells containing `v` with faces reclassified relative to the star."""
    if not 0 <= v < len(cx.vertices):
        raise UnknownVertex(v)
    cells = [c for c in cx.cells if v in c]
    if not cells:
        raise UnknownVertex(f"vertex {v} lies in no cell")
    faces = []
    if cx.kind == "polytopal":
        csets = [set(c) for c in cells]
        faces = [
            {"dim": f.dim, "vertices": f.vertex_ids}
            for f in cx.faces
            if 0 < f.dim < cx.dim and any(set(f.vertex_ids) <= s for s in csets)
        ]
    sub, remap, verts = _sub_complex(cx, cells, faces, cx.dim)
    return StarComplex(sub, remap[v], cx.is_interior_vertex(v), verts)


def as_star(cx: CellComplex, apex: int) -> StarComplex:
    """View a complex all of whose cells contain `apex` as a vertex star."""
    if not 0 <= apex < len(cx.vertices):
        raise UnknownVertex(apex)
    if any(apex not in c for c in cx.cells):
        raise ValueError("every cell must contain the apex")
    return StarComplex(cx, apex, cx.is_interior_vertex(apex), tuple(range(len(cx.vertices))))


def link(cx: CellComplex, v: int) -> CellComplex:
    """The complex of faces of cells at `v` that avoid `v`."""
    if not 0 <= v < len(cx.vertices):
        raise UnknownVertex(v)
    vid = cx.face_id((v,))
    cell_ids = cx.faces_containing(vid, cx.dim)
    if cx.kind == "simplicial":
        lcells = [tuple(u for u in cx.faces[c].vertex_ids if u != v) for c in cell_ids]
        sub, _, _ = _sub_complex(cx, lcells, [], cx.dim - 1)
        return sub
    top = set()
    for c in cell_ids:
        for fct in cx.faces[c].facets:
            if v not in cx.faces[fct].vertex_ids:
                top.add(fct)
    lcells = [cx.faces[f].vertex_ids for f in sorted(top)]
    lsets = [set(c) for c in lcells]
    faces = [
        {"dim": f.dim, "vertices": f.vertex_ids}
        for f in cx.faces
        if 0 < f.dim < cx.dim - 1 and any(set(f.vertex_ids) <= s for s in lsets)
    ]
    # link cells may be warped boundary polygons; only combinatorics matter here
    sub, _, _ = _sub_complex(cx, lcells, faces, cx.dim - 1, flat=False)
    return sub


def cone(cx: CellComplex) -> CellComplex:
    """Lift to height one in one more dimension and cone to the origin.

    Vertex v becomes (1, v); the cone vertex is appended last at the origin.
    """
    coords = [(Fraction(1),) + tuple(p) for p in cx.vertices]
    apex = len(coords)
    coords.append(tuple(Fraction(0) for _ in range(cx.ambient + 1)))
    cells = [c + (apex,) for c in cx.cells]
    faces = None
    if cx.kind == "polytopal":
        faces = []
        for f in cx.faces:
            if f.dim > 0:
                faces.append({"dim": f.dim, "vertices": f.vertex_ids})
            if f.dim < cx.dim:
                faces.append({"dim": f.dim + 1, "vertices": f.vertex_ids + (apex,)})
    return build_complex(coords, cells, faces, dim=cx.dim + 1)


def cone_star(cx: CellComplex) -> StarComplex:
    c = cone(cx)
    return as_star(c, len(c.vertices) - 1)
