"""Bundled example partitions with seeded rational perturbations."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations, permutations

from .complex import CellComplex, StarComplex, build_complex, star

EXAMPLES = (
    "ms3d",
    "ms3d_cavity",
    "square_torus",
    "octahedron_star",
    "ms_cone_star",
    "cube_octahedron",
)
# flat-boundary cube variant, kept for comparison with the generic one
VARIANTS = ("cube_octahedron_flat",)

_SCALE = 10**6


def _rng(name: str, seed: int) -> random.Random:
    return random.Random(f"{name}:{seed}")


def _offset(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-_SCALE, _SCALE), _SCALE)


def _step(points, cells) -> Fraction:
    """About 1/1000 of the shortest cell edge, as a rational."""
    best = None
    for c in cells:
        for u, v in combinations(c, 2):
            sq = sum((a - b) ** 2 for a, b in zip(points[u], points[v]))
            best = sq if best is None else min(best, sq)
    return Fraction(math.sqrt(best)).limit_denominator(1000) / 1000


def _perturb(points, cells, rng) -> list[tuple[Fraction, ...]]:
    h = _step(points, cells)
    return [tuple(x + h * _offset(rng) for x in p) for p in points]


# ------------------------------------------------------------ Morgan-Scott


def _ms_points():
    outer = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    pts = [tuple(Fraction(x) for x in p) for p in outer]
    pts += [tuple(Fraction(-x, 6) for x in p) for p in outer]
    return pts


def _ms_cells(central: bool = True):
    A = [0, 1, 2, 3]
    B = [4, 5, 6, 7]
    cells = []
    if central:
        cells.append(tuple(B))
    for i in range(4):
        others = [j for j in range(4) if j != i]
        cells.append((A[i],) + tuple(B[j] for j in others))
        cells.append(tuple(A[j] for j in others) + (B[i],))
    for i, j in combinations(range(4), 2):
        k, l = [x for x in range(4) if x not in (i, j)]
        cells.append((A[k], A[l], B[i], B[j]))
    return cells


def _ms3d(seed: int, central: bool = True) -> CellComplex:
    cells = _ms_cells(True)
    pts = _perturb(_ms_points(), cells, _rng("ms3d", seed))
    return build_complex(pts, _ms_cells(central))


# ------------------------------------------------------------ square torus


def _square_torus(seed: int) -> CellComplex:
    inner = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    pts = []
    for z in (0, 1):
        for x, y in inner:
            pts.append((x, y, z))
        for x, y in inner:
            pts.append((2 * x, 2 * y, z))
    pts = [tuple(Fraction(c) for c in p) for p in pts]

    def vid(a, corner, c):
        return 8 * c + 4 * a + corner % 4

    cells = []
    for side in range(4):
        def local(a, b, c):
            return vid(a, side + b, c)

        for perm in permutations(range(3)):
            x = [0, 0, 0]
            path = [local(*x)]
            for axis in perm:
                x[axis] = 1
                path.append(local(*x))
            cells.append(tuple(path))
    pts = _perturb(pts, cells, _rng("square_torus", seed))
    return build_complex(pts, cells)


# ------------------------------------------------------- cube/octahedron


def _solve3(rows, rhs):
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(3):
        piv = next(i for i in range(c, 3) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        for i in range(3):
            if i != c and m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return tuple(m[i][3] / m[i][i] for i in range(3))


def _polytope_faces(points, cell):
    """Facets and edges of a small convex polytope (brute force)."""
    facets = set()
    for tri in combinations(cell, 3):
        p0, p1, p2 = (points[v] for v in tri)
        u = [a - b for a, b in zip(p1, p0)]
        w = [a - b for a, b in zip(p2, p0)]
        n = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
        if not any(n):
            continue
        side = [sum(ni * (a - b) for ni, a, b in zip(n, points[v], p0)) for v in cell]
        if all(s >= 0 for s in side) or all(s <= 0 for s in side):
            facets.add(tuple(v for v, s in zip(cell, side) if s == 0))
    edges = set()
    for f, g in combinations(sorted(facets), 2):
        e = tuple(sorted(set(f) & set(g)))
        if len(e) == 2:
            edges.add(e)
    return facets, edges


def _cube_octahedron(seed: int, planar_boundary: bool = False) -> CellComplex:
    """Cube around its dual octahedron, cells are hulls of dual face pairs.

    By default every vertex moves independently, so the six boundary
    squares are slightly warped. They carry no smoothness condition, and
    keeping them flat is a special position with larger spline spaces in
    low degree.
    """
    rng = _rng("cube_octahedron", seed)
    half = Fraction(1, 2)
    signs = [(sx, sy, sz) for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    base_cube = [tuple(Fraction(s) for s in sg) for sg in signs]
    octa = []
    for i in range(3):
        for s in (-1, 1):
            p = [Fraction(0)] * 3
            p[i] = s * half
            octa.append(tuple(p))
    # octahedron vertex ids 8..13: index 8 + 2*i + (s > 0)
    def ov(i, s):
        return 8 + 2 * i + (1 if s > 0 else 0)

    cells = [tuple(range(8, 14))]
    for i in range(3):
        for s in (-1, 1):
            face = [k for k, sg in enumerate(signs) if sg[i] == s]
            cells.append(tuple(face) + (ov(i, s),))
    for k, sg in enumerate(signs):
        cells.append((k,) + tuple(ov(i, sg[i]) for i in range(3)))
    for i, j in combinations(range(3), 2):
        for si in (-1, 1):
            for sj in (-1, 1):
                edge = [k for k, sg in enumerate(signs) if sg[i] == si and sg[j] == sj]
                cells.append(tuple(edge) + (ov(i, si), ov(j, sj)))

    unperturbed = base_cube + octa
    lattice = set()
    for c in cells:
        facets, edges = _polytope_faces(unperturbed, c)
        lattice |= facets | edges
    faces = [{"dim": 1 if len(f) == 2 else 2, "vertices": f} for f in sorted(lattice, key=lambda f: (len(f), f))]

    h = _step(unperturbed, cells)
    if not planar_boundary:
        pts = [tuple(x + h * _offset(rng) for x in p) for p in unperturbed]
        return build_complex(pts, cells, faces)
    # keep the cube faces flat: move the six face planes, then intersect them
    planes = {}
    for i in range(3):
        for s in (-1, 1):
            normal = [Fraction(0)] * 3
            normal[i] = Fraction(s)
            normal = [c + h * _offset(rng) for c in normal]
            planes[(i, s)] = (normal, 1 + h * _offset(rng))
    cube = []
    for sg in signs:
        rows = [planes[(i, sg[i])][0] for i in range(3)]
        rhs = [planes[(i, sg[i])][1] for i in range(3)]
        cube.append(_solve3(rows, rhs))
    octa = [tuple(x + h * _offset(rng) for x in p) for p in octa]
    pts = cube + octa
    return build_complex(pts, cells, faces)


# ----------------------------------------------------------------- public


def generate_example(name: str, seed: int = 1) -> CellComplex:
    """Build a bundled partition; equal seeds give identical coordinates."""
    if name == "ms3d":
        return _ms3d(seed)
    if name == "ms3d_cavity":
        return _ms3d(seed, central=False)
    if name == "square_torus":
        return _square_torus(seed)
    if name == "cube_octahedron":
        return _cube_octahedron(seed)
    if name == "cube_octahedron_flat":
        return _cube_octahedron(seed, planar_boundary=True)
    if name in ("octahedron_star", "ms_cone_star"):
        return example_star(name, seed).base
    raise ValueError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")


def example_star(name: str, seed: int = 1) -> StarComplex:
    """Stars of the Morgan-Scott partition: an inner vertex or an outer one."""
    ms = _ms3d(seed)
    if name == "octahedron_star":
        return star(ms, 4)
    if name == "ms_cone_star":
        return star(ms, 0)
    raise ValueError(f"{name!r} is not a star example")
