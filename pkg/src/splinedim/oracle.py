"""Exact spline-space dimensions from the smoothness conditions.

A spline is a polynomial F_c per cell such that across every interior
codimension-one face s between cells i < j, F_i - F_j = l_s^(r+1) g_s.

Two equivalent linear systems are assembled:

* "full": unknowns are all F_c and g_s, one equation block per face.
* "cycles": the F_c are eliminated along a spanning tree of the dual
  graph (cells joined through interior faces). What remains is one block
  per dual cycle, sum(+-l_s^(r+1) g_s) = 0, and the dimension is
  (#components) * dim(polynomials) + kernel. Cycles around interior
  codimension-two faces are used first since they are short and local;
  spanning-tree cycles fill up the rest (needed e.g. on a solid torus).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .bounds import CubicPolynomial
from .complex import CellComplex, StarComplex, matrix_rank
from .errors import NoStabilization, NotFound
from .idealdims import LinearForm, face_forms
from .linalg import FieldSpec, SparseMatrix, kernel_dim
from .monomials import affine_power, basis_size, form_power, shift_table

FORMULATIONS = ("cycles", "full")


@dataclass
class ConstraintSystem:
    complex: CellComplex
    d: int
    r: int
    homogeneous: bool
    formulation: str
    matrix: SparseMatrix
    offset: int = 0
    column_blocks: list[tuple[str, int]] = field(default_factory=list)

    def dimension(self, field: FieldSpec | None = None, seed: int = 0) -> int:
        return self.offset + kernel_dim(self.matrix, field, seed)


def _dual_graph(cx: CellComplex):
    cell_index = {fid: i for i, fid in enumerate(cx.cell_face_ids)}
    walls = {}
    for fid in cx.face_ids(cx.dim - 1, True):
        a, b = sorted(cell_index[c] for c in cx.faces[fid].cofaces)
        walls[fid] = (a, b)
    return walls


def _components(n: int, walls) -> tuple[int, list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for fid, (a, b) in walls.items():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append(fid)
    return len({find(x) for x in range(n)}), tree


def _ring(cx: CellComplex, walls, tau: int) -> list[tuple[int, int]]:
    """Signed walls met when walking once around the face `tau`."""
    around = [w for w in cx.faces[tau].cofaces if w in walls]
    adj: dict[int, list[int]] = {}
    for w in around:
        for c in walls[w]:
            adj.setdefault(c, []).append(w)
    start = walls[around[0]][0]
    cycle = []
    cell, prev = start, None
    while True:
        nxt = [w for w in adj[cell] if w != prev]
        w = nxt[0]
        a, b = walls[w]
        sign = 1 if cell == a else -1
        cycle.append((w, sign))
        cell = b if cell == a else a
        prev = w
        if cell == start:
            return cycle


def _tree_cycle(walls, tree, extra):
    """Fundamental cycle of the non-tree wall `extra`."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for w in tree:
        a, b = walls[w]
        adj.setdefault(a, []).append((b, w))
        adj.setdefault(b, []).append((a, w))
    a, b = walls[extra]
    # path from b back to a in the tree
    parent = {b: None}
    stack = [b]
    while stack:
        x = stack.pop()
        for y, w in adj.get(x, ()):
            if y not in parent:
                parent[y] = (x, w)
                stack.append(y)
    cycle = [(extra, 1)]
    x = a
    # walk a -> b along the tree, then cross `extra` from a to b... reversed
    path = []
    while x != b:
        px, w = parent[x]
        path.append((x, px, w))
        x = px
    # cycle: cross extra a->b, then walk b -> a (reverse of path)
    for x, px, w in reversed(path):
        lo, _ = walls[w]
        cycle.append((w, 1 if px == lo else -1))
    return cycle


def dual_cycles(cx: CellComplex) -> tuple[list[list[tuple[int, int]]], int]:
    """A basis of the dual-graph cycle space and the number of components."""
    walls = _dual_graph(cx)
    ncomp, tree = _components(len(cx.cells), walls)
    target = len(walls) - len(cx.cells) + ncomp
    order = {w: i for i, w in enumerate(walls)}
    basis_rows: list[list[Fraction]] = []
    cycles = []

    def try_add(cyc):
        vec = [Fraction(0)] * len(order)
        for w, s in cyc:
            vec[order[w]] += s
        if matrix_rank(basis_rows + [vec]) > len(basis_rows):
            basis_rows.append(vec)
            cycles.append(cyc)

    for tau in cx.face_ids(cx.dim - 2, True):
        if len(basis_rows) == target:
            break
        try_add(_ring(cx, walls, tau))
    if len(basis_rows) < target:
        tree_set = set(tree)
        for w in walls:
            if w not in tree_set:
                try_add(_tree_cycle(walls, tree, w))
                if len(basis_rows) == target:
                    break
    assert len(basis_rows) == target
    return cycles, ncomp


def _power_terms(form: LinearForm, k: int, homogeneous: bool):
    if homogeneous:
        return form_power(form.coefficients, k)
    return affine_power(form.coefficients, k)


def _nvars(cx: CellComplex) -> int:
    return cx.ambient


def _forms(cx: CellComplex, homogeneous: bool, origin):
    return face_forms(cx, homogeneous, origin)


def build_system(
    cx: CellComplex,
    d: int,
    r: int,
    homogeneous: bool = False,
    formulation: str = "cycles",
    origin=None,
) -> ConstraintSystem:
    if formulation not in FORMULATIONS:
        raise ValueError(f"unknown formulation {formulation!r}")
    if d < 0 or r < 0:
        raise ValueError("d and r must be non-negative")
    if cx.ambient != cx.dim:
        raise ValueError("the partition must be full-dimensional")
    nvars = _nvars(cx)
    npoly = basis_size(nvars, d, homogeneous)
    src = d - r - 1
    nsrc = basis_size(nvars, src, homogeneous) if src >= 0 else 0
    forms = _forms(cx, homogeneous, origin)
    tables = None
    if nsrc:
        tindex, table = shift_table(nvars, src, r + 1, homogeneous)
        tables = (tindex, table)
        terms = {w: _power_terms(f, r + 1, homogeneous) for w, f in forms.items()}

    rows, cols, vals, rgroups, cgroups = [], [], [], [], []
    blocks: list[tuple[str, int]] = []

    def emit_g(row_off, col_off, w, sign):
        tindex, table = tables
        for exp, c in terms[w].items():
            rows.append(table[tindex[exp]] + row_off)
            cols.append(np.arange(nsrc) + col_off)
            vals.append(np.full(nsrc, sign * c, dtype=object))

    if formulation == "cycles":
        cycles, ncomp = dual_cycles(cx)
        col_of = {}
        for k, w in enumerate(forms):
            col_of[w] = k * nsrc
            blocks.append(("face", w))
            cgroups.append(np.full(nsrc, k))
        ncols = len(forms) * nsrc
        nrows = len(cycles) * npoly
        for i, cyc in enumerate(cycles):
            rgroups.append(np.full(npoly, i))
            if nsrc:
                for w, s in cyc:
                    emit_g(i * npoly, col_of[w], w, s)
        offset = ncomp * npoly
    else:
        walls = _dual_graph(cx)
        ncells = len(cx.cells)
        for c in range(ncells):
            blocks.append(("cell", c))
            cgroups.append(np.full(npoly, c))
        for k, w in enumerate(walls):
            blocks.append(("face", w))
            cgroups.append(np.full(nsrc, ncells + k))
        ncols = ncells * npoly + len(walls) * nsrc
        nrows = len(walls) * npoly
        eye = np.arange(npoly)
        for k, (w, (a, b)) in enumerate(walls.items()):
            row_off = k * npoly
            rgroups.append(np.full(npoly, k))
            rows += [eye + row_off, eye + row_off]
            cols += [eye + a * npoly, eye + b * npoly]
            vals += [np.full(npoly, 1, dtype=object), np.full(npoly, -1, dtype=object)]
            if nsrc:
                emit_g(row_off, ncells * npoly + k * nsrc, w, -1)
        offset = 0
    if rows:
        m = SparseMatrix(
            nrows,
            ncols,
            np.concatenate(rows),
            np.concatenate(cols),
            np.concatenate(vals),
            np.concatenate(rgroups) if rgroups else None,
            np.concatenate(cgroups) if cgroups else None,
        )
    else:
        m = SparseMatrix(
            nrows,
            ncols,
            [],
            [],
            [],
            np.concatenate(rgroups) if rgroups else np.zeros(0),
            np.concatenate(cgroups) if cgroups else np.zeros(0),
        )
    return ConstraintSystem(cx, d, r, homogeneous, formulation, m, offset, blocks)


def spline_dim(
    cx: CellComplex,
    d: int,
    r: int,
    field: FieldSpec | None = None,
    seed: int = 0,
    formulation: str = "cycles",
) -> int:
    """dim of C^r splines of degree <= d on `cx`."""
    if d < 0:
        return 0
    return build_system(cx, d, r, False, formulation).dimension(field, seed)


def homog_spline_dim(
    st: StarComplex,
    d: int,
    r: int,
    field: FieldSpec | None = None,
    seed: int = 0,
    formulation: str = "cycles",
) -> int:
    """dim of C^r splines on a vertex star, homogeneous of degree d about the apex."""
    if d < 0:
        return 0
    cx = st.base
    apex = cx.vertices[st.apex]
    return build_system(cx, d, r, True, formulation, origin=apex).dimension(field, seed)


# ------------------------------------------------------- Hilbert polynomial


@dataclass
class HilbertFit:
    poly: CubicPolynomial
    stabilized_at: int
    samples: dict[int, int]


def fit_cubic(points: list[tuple[int, int]]) -> tuple[Fraction, ...]:
    """Coefficients (c0..c3) of the cubic through four points."""
    assert len(points) == 4
    coeffs = [Fraction(0)] * 4
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] -= c * xj
                nxt[k + 1] += c
            basis = nxt
            denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += yi * c / denom
    return tuple(coeffs)


def hilbert_polynomial(
    cx: CellComplex,
    r: int,
    field: FieldSpec | None = None,
    seed: int = 0,
    d_start: int | None = None,
    dim_fn=None,
) -> HilbertFit:
    """First cubic through 4 consecutive samples that predicts the next 2."""
    dim_fn = dim_fn or (lambda d: spline_dim(cx, d, r, field, seed))
    start = 3 * r + 2 if d_start is None else d_start
    cap = 10 * (r + 1)
    samples: dict[int, int] = {}

    def sample(d):
        if d > cap:
            raise NoStabilization(f"no stable cubic found up to degree {cap}")
        if d not in samples:
            samples[d] = dim_fn(d)
        return samples[d]

    lo = start
    while True:
        pts = [(d, sample(d)) for d in range(lo, lo + 4)]
        coeffs = fit_cubic(pts)
        poly = CubicPolynomial(coeffs, lo)
        if all(poly(d) == sample(d) for d in (lo + 4, lo + 5)):
            return HilbertFit(poly, lo, dict(sorted(samples.items())))
        lo += 1


def initial_degree(cx: CellComplex, r: int, field: FieldSpec | None = None, seed: int = 0, dim_fn=None) -> int:
    """Smallest degree carrying a spline that is not a global polynomial."""
    if not cx.face_ids(cx.dim - 1, True):
        raise NotFound("no interior faces")
    dim_fn = dim_fn or (lambda d: spline_dim(cx, d, r, field, seed))
    for d in range(r + 1, 10 * (r + 1) + 1):
        if dim_fn(d) > comb(d + 3, 3):
            return d
    raise NotFound(f"only global polynomials up to degree {10 * (r + 1)}")
